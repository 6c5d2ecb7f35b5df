"""The r-intersection communication matrix and its largest all-1 submatrix.

Works on raw row bitmasks only, so it serves as an oracle independent of the
family machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ResourceLimitError, as_size_vector, check_r, domain_size, iter_points

MAX_MATRIX_DOMAIN = 512


@dataclass(frozen=True)
class CommMatrix:
    p: tuple[int, ...]
    r: int
    # rows[x] has bit y set iff points of rank x and y are r-intersecting
    rows: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, x: int, y: int) -> int:
        return self.rows[x] >> y & 1

    def ones(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def to_text(self) -> str:
        """One line of 0/1 characters per row, rows and columns in rank order."""
        return "".join(
            "".join("1" if row >> y & 1 else "0" for y in range(self.size)) + "\n"
            for row in self.rows
        )


def build_matrix(p, r: int, *, max_domain: int = MAX_MATRIX_DOMAIN) -> CommMatrix:
    p = as_size_vector(p)
    check_r(p.n, r)
    size = domain_size(p)
    if size > max_domain:
        raise ResourceLimitError(f"|S_p|={size} exceeds the matrix cap {max_domain}")
    pts = list(iter_points(p))
    rows = []
    for x in pts:
        m = 0
        for j, y in enumerate(pts):
            if sum(a == b for a, b in zip(x, y)) >= r:
                m |= 1 << j
        rows.append(m)
    return CommMatrix(p.entries, r, tuple(rows))


@dataclass(frozen=True)
class Rectangle:
    rows: frozenset[int]
    cols: frozenset[int]
    area: int


def _closed_column_sets(rows: tuple[int, ...]) -> list[int]:
    """All intersections of nonempty sets of row supports."""
    closed: set[int] = set()
    frontier = set(rows)
    while frontier:
        closed |= frontier
        frontier = {c & row for c in frontier for row in rows} - closed
    return sorted(closed)


def max_all_ones_rectangle(m: CommMatrix) -> Rectangle:
    """Largest rows x cols block of ones; ties go to the smallest column bitmask."""
    best = Rectangle(frozenset(), frozenset(), 0)
    for cols in _closed_column_sets(m.rows):
        if not cols:
            continue
        covering = [x for x, row in enumerate(m.rows) if row & cols == cols]
        area = len(covering) * cols.bit_count()
        if area > best.area:
            best = Rectangle(
                frozenset(covering),
                frozenset(y for y in range(m.size) if cols >> y & 1),
                area,
            )
    return best
