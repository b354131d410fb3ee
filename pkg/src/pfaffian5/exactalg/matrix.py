"""Small dense exact matrices.

Entries are ring elements (int, Fraction, FFElement) or MultiPoly.  The
determinant is division free (expansion by minors with memoisation) so it
works over polynomial rings as well; rank and inverse need a field.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations

from .poly import MultiPoly, common_ring
from .rings import QQ, ZZ, Ring


class ExactMatrix:
    __slots__ = ("ring", "rows", "cols", "_data")

    def __init__(self, ring: Ring, data):
        data = [list(r) for r in data]
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and column")
        ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        self.ring = ring
        self.rows = len(data)
        self.cols = ncols
        self._data = [
            [x if isinstance(x, MultiPoly) else ring(x) for x in r] for r in data
        ]

    # -- constructors --------------------------------------------------------
    @classmethod
    def identity(cls, n: int, ring: Ring = ZZ) -> "ExactMatrix":
        return cls(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries, ring: Ring | None = None) -> "ExactMatrix":
        entries = list(entries)
        if ring is None:
            ring = QQ if any(isinstance(x, Fraction) for x in entries) else ZZ
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: Ring = ZZ) -> "ExactMatrix":
        return cls(ring, [[0] * cols for _ in range(rows)])

    # -- access ----------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> list:
        return list(self._data[i])

    def col(self, j: int) -> list:
        return [r[j] for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self._data, other._data) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self._data))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._data)
        return f"ExactMatrix({self.ring}, [{body}])"

    # -- arithmetic -------------------------------------------------------------
    def change_ring(self, ring: Ring) -> "ExactMatrix":
        return ExactMatrix(ring, self._data)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, [list(c) for c in zip(*self._data)])

    T = property(transpose)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ring = common_ring(self.ring, other.ring)
        cols = list(zip(*other._data))
        out = [
            [reduce(lambda s, t: s + t, (a * b for a, b in zip(r, c))) for c in cols]
            for r in self._data
        ]
        return ExactMatrix(ring, out)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        ring = common_ring(self.ring, other.ring)
        return ExactMatrix(ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "ExactMatrix":
        ring = QQ if (isinstance(c, Fraction) and self.ring is ZZ and c.denominator != 1) else self.ring
        return ExactMatrix(ring, [[x * c for x in r] for r in self._data])

    # -- determinant and friends ------------------------------------------
    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return _det_minors(self._data, self.ring)

    def adjugate(self) -> "ExactMatrix":
        n = self.rows
        if not self.is_square():
            raise ValueError("adjugate of a non-square matrix")
        if n == 1:
            return ExactMatrix(self.ring, [[1]])
        data = self._data
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[data[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
                cof = _det_minors(minor, self.ring)
                # adj[j][i] = (-1)^(i+j) det(minor_ij)
                out[j][i] = cof if (i + j) % 2 == 0 else -cof
        return ExactMatrix(self.ring, out)

    def inverse(self) -> "ExactMatrix":
        d = self.det()
        if not d:
            raise ZeroDivisionError("matrix is singular")
        adj = self.adjugate()
        ring = QQ if self.ring is ZZ else self.ring
        if ring is QQ:
            inv_d = Fraction(1) / Fraction(d)
        else:
            inv_d = ring.one / d
        return ExactMatrix(ring, [[x * inv_d for x in r] for r in adj._data])

    def rank(self) -> int:
        """Rank over the fraction field (QQ for ZZ entries)."""
        ring = QQ if self.ring is ZZ else self.ring
        if not ring.is_field:
            raise ValueError("rank needs a field")
        m = [[ring(x) for x in r] for r in self._data]
        return _rank_in_place(m)


def _det_minors(data, ring):
    """Division-free determinant: Laplace expansion along rows, memoised on
    column subsets (O(n 2^n) products)."""
    n = len(data)
    if n == 0:
        return ring.one
    zero = _zero_like(data, ring)
    layer = {(c,): data[n - 1][c] for c in range(n)}
    for r in range(n - 2, -1, -1):
        new_layer = {}
        for subset in combinations(range(n), n - r):
            total = zero
            for pos, c in enumerate(subset):
                a = data[r][c]
                if not a:
                    continue
                minor = layer[subset[:pos] + subset[pos + 1:]]
                if not minor:
                    continue
                term = a * minor
                total = total - term if pos % 2 else total + term
            new_layer[subset] = total
        layer = new_layer
    return layer[tuple(range(n))]


def _zero_like(data, ring):
    for r in data:
        for x in r:
            if isinstance(x, MultiPoly):
                return MultiPoly.zero(x.ring)
    return ring.zero


def _rank_in_place(m) -> int:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c] if not hasattr(m[rank][c], "inverse") else m[rank][c].inverse()
        for r in range(rows):
            if r != rank and m[r][c]:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def rank_over(field: Ring, rows) -> int:
    """Rank of a list of row vectors over a field."""
    if not rows:
        return 0
    m = [[field(x) for x in r] for r in rows]
    return _rank_in_place(m)


def det_adj(M: ExactMatrix):
    """(det M, adj M) with M @ adj M = det M * I."""
    return M.det(), M.adjugate()
