"""The covariant Omega, the forms M and N, and the invariants c4, c6, Delta.

Everything is evaluated for one concrete model at a time: Omega, M and N
are built as explicit quadrics/cubics and the invariants are contractions
of their (constant) second and third derivative tensors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm

from .exactalg import QQ, ZZ, ExactMatrix, MultiPoly, Ring
from .exactalg.poly import unpack
from .pfmodel import N, PfaffianModel, Transformation, submax_pfaffians

C4_DENOMINATOR = 13440
C6_DENOMINATOR = 1036800


class InexactDivisionError(ArithmeticError):
    """A division that must be exact was not.  Indicates a bug, not bad input."""


class SingularModelError(ValueError):
    pass


def permutation_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def even_completion(i: int, j: int) -> tuple[int, int, int]:
    """(k, l, m) with (i, j, k, l, m) an even permutation of 1..5."""
    k, l, m = (x for x in range(1, N + 1) if x not in (i, j))
    if permutation_sign((i, j, k, l, m)) < 0:
        k, l = l, k
    return k, l, m


# -- Omega ---------------------------------------------------------------------

def _pfaffian_derivatives(model: PfaffianModel):
    P = submax_pfaffians(model)
    return [[p.derivative(k) for p in P] for k in range(1, N + 1)]


def _triple(dP, mats, k, l, m, zero):
    """dP/dx_k . dPhi/dx_l . dP^T/dx_m as a quadric."""
    left, right, F = dP[k - 1], dP[m - 1], mats[l - 1]
    acc = zero
    for a in range(N):
        if not left[a]:
            continue
        row = zero
        for b in range(N):
            if F[a][b] and right[b]:
                row = row + right[b].scale(F[a][b])
        if row:
            acc = acc + left[a] * row
    return acc


def q_form(model: PfaffianModel, perm) -> MultiPoly:
    """Q = dP/dx_k . dPhi/dx_l . dP^T/dx_m for an even permutation (i,j,k,l,m)."""
    perm = tuple(perm)
    if sorted(perm) != list(range(1, N + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..5")
    if permutation_sign(perm) < 0:
        raise ValueError(f"{perm} is an odd permutation")
    _, _, k, l, m = perm
    return _triple(_pfaffian_derivatives(model), model.coefficient_matrices(), k, l, m,
                   MultiPoly.zero(model.ring))


def omega_entry(model: PfaffianModel, i: int, j: int, _cache=None) -> MultiPoly:
    """Omega_ij from the three cyclic shifts of (k, l, m); any i != j."""
    if i == j:
        return MultiPoly.zero(model.ring)
    dP, mats = _cache or (_pfaffian_derivatives(model), model.coefficient_matrices())
    zero = MultiPoly.zero(model.ring)
    k, l, m = even_completion(i, j)
    return (_triple(dP, mats, k, l, m, zero)
            + _triple(dP, mats, m, k, l, zero)
            + _triple(dP, mats, l, m, k, zero))


def omega(model: PfaffianModel) -> list[list[MultiPoly]]:
    """The alternating 5x5 matrix of quadrics Omega (upper half computed,
    lower half mirrored)."""
    cache = (_pfaffian_derivatives(model), model.coefficient_matrices())
    zero = MultiPoly.zero(model.ring)
    W = [[zero] * N for _ in range(N)]
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            w = omega_entry(model, i, j, cache)
            W[i - 1][j - 1] = w
            W[j - 1][i - 1] = -w
    return W


def act_on_omega(g: Transformation, W) -> list[list[MultiPoly]]:
    """[A, B] : Omega -> B^{-T} Omega(x') B^{-1}; A acts trivially."""
    Binv = g.B.inverse().to_lists()
    sub = [[f.substitute_linear(g.B) for f in row] for row in W]
    ring = sub[0][1].ring if sub[0][1] else g.ring
    zero = MultiPoly.zero(ring)
    out = [[zero] * N for _ in range(N)]
    for r in range(N):
        for c in range(N):
            acc = zero
            for s in range(N):
                if not Binv[s][r]:
                    continue
                for t in range(N):
                    if Binv[t][c] and sub[s][t]:
                        acc = acc + sub[s][t].scale(Binv[s][r] * Binv[t][c])
            out[r][c] = acc
    return out


# -- M and N ---------------------------------------------------------------------

def m_matrix(W) -> list[list[MultiPoly]]:
    """M_ij = sum_{r,s} dOmega_ir/dx_s * dOmega_js/dx_r."""
    dW = [[[W[i][r].derivative(s + 1) for s in range(N)] for r in range(N)] for i in range(N)]
    zero = MultiPoly.zero(W[0][0].ring)
    M = [[zero] * N for _ in range(N)]
    for i in range(N):
        for j in range(i, N):
            acc = zero
            for r in range(N):
                for s in range(N):
                    a, b = dW[i][r][s], dW[j][s][r]
                    if a and b:
                        acc = acc + a * b
            M[i][j] = acc
            M[j][i] = acc
    return M


def m_matrix_full(W) -> list[list[MultiPoly]]:
    """M computed for every (i, j) without using symmetry."""
    dW = [[[W[i][r].derivative(s + 1) for s in range(N)] for r in range(N)] for i in range(N)]
    zero = MultiPoly.zero(W[0][0].ring)
    out = []
    for i in range(N):
        row = []
        for j in range(N):
            acc = zero
            for r in range(N):
                for s in range(N):
                    a, b = dW[i][r][s], dW[j][s][r]
                    if a and b:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def n_tensor(M, W) -> list[list[list[MultiPoly]]]:
    """N_ijk = sum_r dM_ij/dx_r * Omega_rk."""
    zero = MultiPoly.zero(W[0][0].ring)
    dM = [[[M[i][j].derivative(r + 1) for r in range(N)] for j in range(N)] for i in range(N)]
    out = [[[zero] * N for _ in range(N)] for _ in range(N)]
    for i in range(N):
        for j in range(N):
            for k in range(N):
                acc = zero
                for r in range(N):
                    a, b = dM[i][j][r], W[r][k]
                    if a and b:
                        acc = acc + a * b
                out[i][j][k] = acc
    return out


# -- derivative tensors and contractions ---------------------------------------

def hessian(f: MultiPoly) -> list[list]:
    """Constant matrix of second derivatives of a quadric."""
    H = [[0] * N for _ in range(N)]
    for exps, c in f.terms().items():
        support = [v for v in range(N) for _ in range(exps[v])]
        if len(support) != 2:
            raise ValueError("hessian expects a homogeneous quadric")
        a, b = support
        if a == b:
            H[a][a] += 2 * c
        else:
            H[a][b] += c
            H[b][a] += c
    return H


def third_derivatives(f: MultiPoly) -> dict[tuple[int, int, int], object]:
    """d^3 f / dx_r dx_s dx_t for a homogeneous cubic, keyed by ordered (r,s,t)."""
    out = {}
    for exps, c in f.terms().items():
        support = tuple(v for v in range(N) for _ in range(exps[v]))
        if len(support) != 3:
            raise ValueError("third_derivatives expects a homogeneous cubic")
        weight = c
        for e in exps:
            weight *= factorial(e)
        for perm in set(itertools.permutations(support)):
            out[perm] = out.get(perm, 0) + weight
    return out


def c4_contraction(M) -> object:
    """sum_{i,j,r,s} d2M_ij/dx_r dx_s * d2M_rs/dx_i dx_j  (before dividing)."""
    H = [[hessian(M[i][j]) for j in range(N)] for i in range(N)]
    total = 0
    for i, j, r, s in itertools.product(range(N), repeat=4):
        a = H[i][j][r][s]
        if a:
            total += a * H[r][s][i][j]
    return total


def c6_contraction(Nt) -> object:
    """sum d3N_ijk/dx_r dx_s dx_t * d3N_rst/dx_i dx_j dx_k  (before dividing)."""
    T = {}
    for i, j, k in itertools.product(range(N), repeat=3):
        T[(i, j, k)] = third_derivatives(Nt[i][j][k])
    total = 0
    for ijk, derivs in T.items():
        for rst, a in derivs.items():
            b = T[rst].get(ijk)
            if b:
                total += a * b
    return total


@dataclass(frozen=True)
class InvariantTuple:
    c4: object
    c6: object
    delta: object

    def check(self) -> bool:
        return self.c4**3 - self.c6**2 == 1728 * self.delta

    def as_dict(self) -> dict:
        return {"c4": _jsonable(self.c4), "c6": _jsonable(self.c6), "delta": _jsonable(self.delta)}


def _jsonable(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _integral_rescaling(model: PfaffianModel) -> tuple[PfaffianModel, int]:
    if model.ring is ZZ:
        return model, 1
    if model.ring is not QQ:
        raise ValueError(
            "c4/c6 are defined over ZZ; compute them for an integral lift and reduce "
            "(see invariants_mod)"
        )
    d = lcm(*(Fraction(c).denominator for c in model.coefficients()))
    return model.scale(d), d


def raw_contractions(model: PfaffianModel) -> tuple[int, int]:
    """The two contractions (before dividing by 13440 and -1036800) for an
    integral model."""
    if model.ring is not ZZ:
        raise ValueError("raw contractions are only taken for models over ZZ")
    W = omega(model)
    M = m_matrix(W)
    Nt = n_tensor(M, W)
    return c4_contraction(M), c6_contraction(Nt)


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise InexactDivisionError(f"{a} is not divisible by {b}")
    return q


def invariants(model: PfaffianModel) -> InvariantTuple:
    """(c4, c6, Delta) of a model over ZZ or QQ."""
    integral, d = _integral_rescaling(model)
    s4, s6 = raw_contractions(integral)
    c4 = _exact_div(s4, C4_DENOMINATOR)
    c6 = -_exact_div(s6, C6_DENOMINATOR)
    delta = _exact_div(c4**3 - c6**2, 1728)
    if d != 1:
        # homogeneous of degrees 20, 30, 60 in the coefficients
        return InvariantTuple(Fraction(c4, d**20), Fraction(c6, d**30), Fraction(delta, d**60))
    return InvariantTuple(c4, c6, delta)


def c4(model: PfaffianModel):
    return invariants(model).c4


def c6(model: PfaffianModel):
    return invariants(model).c6


def discriminant(model: PfaffianModel):
    return invariants(model).delta


def invariants_mod(model: PfaffianModel, q: int) -> tuple:
    """Invariants of an integral model reduced into GF(q)."""
    from .exactalg import GF

    inv = invariants(model)
    F = GF(q)
    return F(inv.c4), F(inv.c6), F(inv.delta)


# -- Jacobian -----------------------------------------------------------------

@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + A x + B."""

    A: object
    B: object

    def discriminant(self):
        return -16 * (4 * self.A**3 + 27 * self.B**2)

    def c_invariants(self) -> tuple:
        # for y^2 = x^3 + A x + B: c4 = -48 A, c6 = -864 B
        return -48 * self.A, -864 * self.B

    def __str__(self):
        return f"y^2 = x^3 + ({self.A})*x + ({self.B})"


# the short model built from (c4, c6) has discriminant 6^12 * Delta
JACOBIAN_DISCRIMINANT_SCALE = 6**12


def short_weierstrass(c4_value, c6_value) -> WeierstrassCurve:
    return WeierstrassCurve(-27 * c4_value, -54 * c6_value)


def jacobian_curve(model: PfaffianModel) -> WeierstrassCurve:
    inv = invariants(model)
    if inv.delta == 0:
        raise SingularModelError("model is singular (Delta = 0)")
    return short_weierstrass(inv.c4, inv.c6)


def omega_as_matrix(W, ring: Ring = QQ) -> ExactMatrix:
    return ExactMatrix(ring, W)
