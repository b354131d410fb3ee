"""Brute-force geometry of a model over a finite field.

Points of P^4(F_q) are enumerated in blocks as numpy arrays of field codes
(first nonzero coordinate 1, lexicographic order) and the quadrics are
evaluated on whole blocks at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterator

import numpy as np

from .exactalg import GF, QQ, ZZ, ExactMatrix, FFElement, FiniteField, MultiPoly, rank_over
from .exactalg.poly import unpack
from .invariants import WeierstrassCurve
from .pfmodel import PAIRS, N, PfaffianModel, reduce_mod, submax_pfaffians

MAX_ENUMERATION_Q = 101
_BLOCK = 1 << 18


class FieldTooLargeError(ValueError):
    pass


class BadReductionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ProjPoint:
    """A point of P^4(F_q); coordinates are field codes, first nonzero is 1."""

    coords: tuple[int, ...]
    q: int = field(compare=False)

    @classmethod
    def normalized(cls, F: FiniteField, coords) -> "ProjPoint":
        """Point through ``coords`` (field elements or integer codes), scaled so
        the first nonzero coordinate is 1."""
        vals = [c if isinstance(c, FFElement) else F.from_code(int(c)) for c in coords]
        lead = next((v for v in vals if v), None)
        if lead is None:
            raise ValueError("the zero vector is not a projective point")
        inv = lead.inverse()
        return cls(tuple((v * inv).n for v in vals), F.q)

    def elements(self):
        F = GF(self.q)
        return [F.from_code(c) for c in self.coords]

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"


# -- vectorised evaluation ---------------------------------------------------

def _field_of(model: PfaffianModel) -> FiniteField:
    if not isinstance(model.ring, FiniteField):
        raise ValueError("model must be over a finite field; use reduce_mod first")
    return model.ring


def eval_codes(f: MultiPoly, pts: np.ndarray, F: FiniteField) -> np.ndarray:
    """Evaluate f at each row of pts (an (n, 5) array of codes)."""
    out = np.zeros(len(pts), dtype=np.int64)
    powers: dict[tuple[int, int], np.ndarray] = {}
    for key, c in f.packed_terms().items():
        term = np.full(len(pts), F(c).n, dtype=np.int64)
        for v, e in enumerate(unpack(key)):
            if e:
                pw = powers.get((v, e))
                if pw is None:
                    pw = pts[:, v]
                    for _ in range(e - 1):
                        pw = F.vmul(pw, pts[:, v])
                    powers[(v, e)] = pw
                term = F.vmul(term, pw)
        out = F.vadd(out, term)
    return out


def _projective_blocks(q: int) -> Iterator[np.ndarray]:
    """All points of P^4(F_q) in lexicographic order, in blocks."""
    for lead in range(N - 1, -1, -1):
        free = N - 1 - lead
        if free == 0:
            pts = np.zeros((1, N), dtype=np.int64)
            pts[0, lead] = 1
            yield pts
            continue
        # split off leading free coordinates until the block is small enough
        split = 0
        while q ** (free - split) > _BLOCK and split < free - 1:
            split += 1
        tail = free - split
        grid = np.indices((q,) * tail).reshape(tail, -1).T
        for prefix in itertools.product(range(q), repeat=split):
            pts = np.zeros((len(grid), N), dtype=np.int64)
            pts[:, lead] = 1
            if split:
                pts[:, lead + 1:lead + 1 + split] = prefix
            pts[:, lead + 1 + split:] = grid
            yield pts


def _check_q(q: int) -> None:
    if q > MAX_ENUMERATION_Q:
        raise FieldTooLargeError(f"q = {q} exceeds enumeration limit {MAX_ENUMERATION_Q}")


def curve_point_array(model: PfaffianModel) -> np.ndarray:
    """(n, 5) array of codes of the points of C_phi(F_q), lexicographic."""
    F = _field_of(model)
    _check_q(F.q)
    P = submax_pfaffians(model)
    found = []
    for pts in _projective_blocks(F.q):
        mask = np.ones(len(pts), dtype=bool)
        for p in P:
            if not mask.any():
                break
            mask &= eval_codes(p, pts, F) == 0
        if mask.any():
            found.append(pts[mask])
    if not found:
        return np.zeros((0, N), dtype=np.int64)
    return np.concatenate(found)


def enumerate_points(model: PfaffianModel) -> list[ProjPoint]:
    """All F_q-points of the subscheme cut out by the 4x4 Pfaffians."""
    q = _field_of(model).q
    return [ProjPoint(tuple(int(c) for c in row), q) for row in curve_point_array(model)]


def count_points(model: PfaffianModel) -> int:
    return len(curve_point_array(model))


def all_projective_points(q: int) -> np.ndarray:
    _check_q(q)
    return np.concatenate(list(_projective_blocks(q)))


# -- tangent spaces ----------------------------------------------------------

def _jacobian_at(P: list[MultiPoly], point) -> list[list]:
    return [[p.derivative(v).evaluate(point) for v in range(1, N + 1)] for p in P]


def on_curve(model: PfaffianModel, point: ProjPoint) -> bool:
    pt = point.elements()
    return all(not p.evaluate(pt) for p in submax_pfaffians(model))


def tangent_dimension(model: PfaffianModel, point: ProjPoint) -> int:
    """Dimension of the projective tangent space of C_phi at a point."""
    F = _field_of(model)
    P = submax_pfaffians(model)
    pt = point.elements()
    if any(p.evaluate(pt) for p in P):
        raise ValueError(f"{point} is not on the curve")
    return (N - 1) - rank_over(F, _jacobian_at(P, pt))


def singular_points(model: PfaffianModel) -> list[tuple[ProjPoint, int]]:
    """Points with tangent dimension at least 2."""
    F = _field_of(model)
    P = submax_pfaffians(model)
    dP = [[p.derivative(v) for v in range(1, N + 1)] for p in P]
    pts = curve_point_array(model)
    if not len(pts):
        return []
    vals = [[eval_codes(d, pts, F) for d in row] for row in dP]
    out = []
    for n in range(len(pts)):
        J = [[F.from_code(int(vals[a][v][n])) for v in range(N)] for a in range(N)]
        dim = (N - 1) - rank_over(F, J)
        if dim >= 2:
            out.append((ProjPoint(tuple(int(c) for c in pts[n]), F.q), dim))
    return out


# -- linear subspaces ------------------------------------------------------------

def rref_subspaces(q: int, dim: int) -> Iterator[np.ndarray]:
    """Bases (dim x 5 code arrays in reduced row echelon form) of all
    (dim-1)-planes of P^4(F_q)."""
    F = GF(q)
    for pivots in itertools.combinations(range(N), dim):
        free_slots = [(r, c) for r in range(dim) for c in range(pivots[r] + 1, N) if c not in pivots]
        for values in itertools.product(range(q), repeat=len(free_slots)):
            basis = np.zeros((dim, N), dtype=np.int64)
            for r, c in enumerate(pivots):
                basis[r, c] = 1
            for (r, c), v in zip(free_slots, values):
                basis[r, c] = v
            yield basis
    del F


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _contained(quadrics, bases: np.ndarray, F: FiniteField) -> np.ndarray:
    """Mask of the subspaces (stacked bases, shape (m, dim, 5)) on which every
    quadric vanishes identically.

    A quadric restricted to span(u_1..u_d) is zero iff Q(u_a) = 0 and the polar
    values Q(u_a + u_b) - Q(u_a) - Q(u_b) = 0; these are exactly its
    coefficients in the parameters.
    """
    m, dim, _ = bases.shape
    mask = np.ones(m, dtype=bool)
    for Q in quadrics:
        diag = [eval_codes(Q, bases[:, a, :], F) for a in range(dim)]
        for a in range(dim):
            mask &= diag[a] == 0
        for a, b in itertools.combinations(range(dim), 2):
            s = eval_codes(Q, F.vadd(bases[:, a, :], bases[:, b, :]), F)
            polar = F.vadd(s, F.vmul(F.vadd(diag[a], diag[b]), np.full(m, F.neg_code(1))))
            mask &= polar == 0
    return mask


def _subspaces_in_curve(model: PfaffianModel, dim: int) -> list[tuple[tuple[int, ...], ...]]:
    F = _field_of(model)
    bases = np.array(list(rref_subspaces(F.q, dim)))
    mask = _contained(submax_pfaffians(model), bases, F)
    return [tuple(tuple(int(c) for c in row) for row in b) for b in bases[mask]]


def find_lines(model: PfaffianModel) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Lines of P^4(F_q), q in {2, 3}, contained in C_phi, each given by a
    reduced echelon basis of two points."""
    q = _field_of(model).q
    if q not in (2, 3):
        raise ValueError("line search is only offered for q = 2 or 3")
    return _subspaces_in_curve(model, 2)


def find_planes(model: PfaffianModel) -> list:
    q = _field_of(model).q
    if q not in (2, 3):
        raise ValueError("plane search is only offered for q = 2 or 3")
    return _subspaces_in_curve(model, 3)


# -- conditions for minimal models -------------------------------------------------

NOT_CHECKED = "not checked"


@dataclass
class FiberReport:
    span_ok: bool
    pfaffians_independent: bool
    plane_free: bool | str
    lines_found: list | str = NOT_CHECKED
    point_count: int | None = None
    singular_points: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "span_ok": self.span_ok,
            "pfaffians_independent": self.pfaffians_independent,
            "plane_free": self.plane_free,
            "lines_found": self.lines_found if isinstance(self.lines_found, str)
            else [[list(r) for r in line] for line in self.lines_found],
            "point_count": self.point_count,
            "singular_points": [[str(p), d] for p, d in self.singular_points],
        }


def span_rank(model: PfaffianModel) -> int:
    """Dimension of the span of the 10 entries as linear forms."""
    ring = QQ if model.ring is ZZ else model.ring
    return rank_over(ring, model.rows())


def quadric_rank(model: PfaffianModel) -> int:
    """Dimension of the span of the five 4x4 Pfaffians in the space of quadrics."""
    ring = QQ if model.ring is ZZ else model.ring
    monos = [e for e in itertools.combinations_with_replacement(range(N), 2)]
    keys = []
    for a, b in monos:
        exps = [0] * N
        exps[a] += 1
        exps[b] += 1
        keys.append(tuple(exps))
    rows = [[p.coefficient(k) for k in keys] for p in submax_pfaffians(model)]
    return rank_over(ring, rows)


def iii_conditions(model: PfaffianModel, with_points: bool = True) -> FiberReport:
    span_ok = span_rank(model) == N
    independent = quadric_rank(model) == N
    if isinstance(model.ring, FiniteField) and model.ring.q <= 3:
        plane_free = not find_planes(model)
        lines = find_lines(model)
    else:
        plane_free = NOT_CHECKED
        lines = NOT_CHECKED
    report = FiberReport(span_ok, independent, plane_free, lines)
    if with_points and isinstance(model.ring, FiniteField) and model.ring.q <= MAX_ENUMERATION_Q:
        report.point_count = count_points(model)
        report.singular_points = singular_points(model)
    return report


# -- identities modulo the Pfaffian ideal ----------------------------------------

@dataclass
class IdentityReport:
    which: str
    q: int
    points_checked: int
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches


def det_identity_sides(model: PfaffianModel) -> tuple[MultiPoly, MultiPoly]:
    """Both sides of d(p1,p2,p3)/d(x1,x2,x3) == phi45 * sum dp_i/dx1 dphi_ij/dx2 dp_j/dx3."""
    P = submax_pfaffians(model)
    jac = ExactMatrix(model.ring, [[P[i].derivative(j) for j in (1, 2, 3)] for i in range(3)])
    lhs = jac.det()
    d2 = model.coefficient_matrix(2)
    zero = MultiPoly.zero(model.ring)
    acc = zero
    for i in range(N):
        a = P[i].derivative(1)
        if not a:
            continue
        for j in range(N):
            if d2[i][j]:
                acc = acc + a * P[j].derivative(3).scale(d2[i][j])
    return lhs, model.entry(4, 5) * acc


def char2_sum(model: PfaffianModel) -> MultiPoly:
    """sum_{i,j} dp_i/dx4 dphi_ij/dx4 dp_j/dx5."""
    P = submax_pfaffians(model)
    d4 = model.coefficient_matrix(4)
    acc = MultiPoly.zero(model.ring)
    for i in range(N):
        a = P[i].derivative(4)
        for j in range(N):
            if d4[i][j] and a:
                acc = acc + a * P[j].derivative(5).scale(d4[i][j])
    return acc


def identity_at_points(model: PfaffianModel, which: str, q: int | None = None) -> IdentityReport:
    """Check a mod-I identity at every F_q-point of C_phi.

    ``model`` may be over GF(q) already or integral together with q.
    """
    if not isinstance(model.ring, FiniteField):
        if q is None:
            raise ValueError("q is required for a model over ZZ or QQ")
        model = reduce_mod(model, q)
    F = model.ring
    pts = curve_point_array(model)
    if which == "det_identity":
        lhs, rhs = det_identity_sides(model)
        diff = lhs - rhs
    elif which == "char2_identity":
        if F.p != 2:
            raise ValueError("char2_identity needs q a power of 2")
        diff = char2_sum(model)
    else:
        raise ValueError(f"unknown identity {which!r}")
    vals = eval_codes(diff, pts, F) if len(pts) else np.zeros(0, dtype=np.int64)
    bad = [ProjPoint(tuple(int(c) for c in pts[n]), F.q) for n in np.nonzero(vals)[0]]
    return IdentityReport(which, F.q, len(pts), bad)


# -- Weierstrass point counts ---------------------------------------------------

def count_weierstrass_points(E: WeierstrassCurve, p: int) -> int:
    """#E(F_p) for y^2 = x^3 + A x + B, including the point at infinity."""
    if p < 5:
        raise ValueError("p must be at least 5")
    A, B = Fraction(E.A), Fraction(E.B)
    if A.denominator % p == 0 or B.denominator % p == 0:
        raise BadReductionError(f"coefficients are not {p}-integral")
    a = A.numerator * pow(A.denominator, -1, p) % p
    b = B.numerator * pow(B.denominator, -1, p) % p
    if (4 * a**3 + 27 * b**2) % p == 0:
        raise BadReductionError(f"curve has bad reduction at {p}")
    sq = np.zeros(p, dtype=np.int64)
    y = np.arange(p)
    np.add.at(sq, (y * y) % p, 1)
    x = np.arange(p, dtype=object)
    rhs = np.array([(int(t) ** 3 + a * int(t) + b) % p for t in x], dtype=np.int64)
    count = 1 + int(sq[rhs].sum())
    assert abs(count - (p + 1)) <= 2 * isqrt(p) + 1
    return count


def hasse_ok(count: int, q: int) -> bool:
    return (count - (q + 1)) ** 2 <= 4 * q
