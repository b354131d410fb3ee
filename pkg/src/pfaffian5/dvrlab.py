"""Local analysis of integral models at a prime p.

Valuations and level, I0/In detection for p >= 5, the regularity test at
points of the reduction, the non-minimality witnesses for degenerate
special fibres, Smith normal form over Z_(p), and the exponent-vector
machinery for diagonal transformations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .curvecheck import ProjPoint, enumerate_points, on_curve, span_rank
from .exactalg import GF, QQ, ZZ, ExactMatrix, is_prime, rank_over, valuation
from .invariants import InvariantTuple, invariants
from .pfmodel import PAIRS, N, PfaffianModel, Transformation, act, reduce_mod

INF = float("inf")


class PreconditionError(ValueError):
    pass


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def coefficient_valuations(model: PfaffianModel, p: int) -> dict[tuple[int, int, int], float]:
    return {(i, j, k): valuation(model.coeff(i, j, k), p) for i, j in PAIRS for k in range(1, N + 1)}


def model_valuation(model: PfaffianModel, p: int):
    """Least valuation of a coefficient (infinity for the zero model)."""
    return min(valuation(c, p) for c in model.coefficients())


# -- valuation report -------------------------------------------------------------

@dataclass
class ValuationReport:
    p: int
    v_c4: float | int
    v_c6: float | int
    v_delta: int
    v_delta_min: int
    level: int
    kodaira: str
    regular_points_ok: bool | None = None
    nonregular: list = field(default_factory=list)
    invariants: InvariantTuple | None = None

    def as_dict(self) -> dict:
        def fmt(v):
            return "inf" if v == INF else v

        return {
            "p": self.p,
            "v_c4": fmt(self.v_c4),
            "v_c6": fmt(self.v_c6),
            "v_delta": self.v_delta,
            "v_delta_min": self.v_delta_min,
            "level": self.level,
            "kodaira": self.kodaira,
            "regular_points_ok": self.regular_points_ok,
            "nonregular": [[str(pt), list(w)] for pt, w in self.nonregular],
        }


def minimal_scaling(v_c4, v_c6, v_delta) -> int:
    """Largest t with v(c4) >= 4t, v(c6) >= 6t, v(Delta) >= 12t (p >= 5)."""
    bounds = [v_delta // 12]
    if v_c4 != INF:
        bounds.append(int(v_c4) // 4)
    if v_c6 != INF:
        bounds.append(int(v_c6) // 6)
    return int(min(bounds))


def kodaira_class(v_c4, v_delta_min: int, t: int) -> str:
    if v_delta_min == 0:
        return "I0"
    if v_c4 != INF and v_c4 - 4 * t == 0:
        return f"I{v_delta_min}"
    return "other"


def valuation_report(model: PfaffianModel, p: int, sweep: bool | None = None,
                     inv: InvariantTuple | None = None) -> ValuationReport:
    """Valuations, level and Kodaira class at p >= 5.

    ``sweep`` runs the regularity check at every F_p-point of the reduction;
    by default it runs when v_p(Delta) <= 1 and p is small enough to enumerate.
    """
    _require_prime(p)
    if p < 5:
        raise ValueError("valuation reports need p >= 5")
    if not model.is_integral(p):
        raise PreconditionError("model is not integral at p")
    inv = inv or invariants(model)
    if inv.delta == 0:
        raise PreconditionError("model is singular (Delta = 0)")
    vc4, vc6, vd = valuation(inv.c4, p), valuation(inv.c6, p), int(valuation(inv.delta, p))
    t = minimal_scaling(vc4, vc6, vd)
    vmin = vd - 12 * t
    report = ValuationReport(p, vc4, vc6, vd, vmin, t, kodaira_class(vc4, vmin, t), invariants=inv)
    if sweep is None:
        sweep = vd <= 1 and p <= 101
    if sweep:
        ok, bad = regularity_sweep(model, p)
        report.regular_points_ok = ok
        report.nonregular = bad
    return report


def level(model: PfaffianModel, p: int) -> int:
    return valuation_report(model, p, sweep=False).level


# -- regularity ------------------------------------------------------------------

@dataclass
class RegularityResult:
    passed: bool
    point: ProjPoint
    witness: tuple[int, int, int] | None
    normalized: PfaffianModel
    checked: list = field(default_factory=list)


def _lift(x, p: int) -> int:
    return int(x) % p


def _integral_model(model: PfaffianModel, p: int) -> PfaffianModel:
    """Clear denominators prime to p so the model lives over ZZ (same valuations at p)."""
    if model.ring is ZZ:
        return model
    if not model.is_integral(p):
        raise PreconditionError("model is not integral at p")
    d = math.lcm(*(Fraction(c).denominator for c in model.coefficients()))
    return model.scale(d)


def _complete_basis(vectors, p: int):
    """Extend vectors (independent mod p) to a basis of F_p^5 by unit vectors."""
    F = GF(p)
    basis = [list(v) for v in vectors]
    for e in range(N):
        unit = [1 if i == e else 0 for i in range(N)]
        if rank_over(F, basis + [unit]) > len(basis):
            basis.append(unit)
        if len(basis) == N:
            break
    return basis


def normalize_at_point(model: PfaffianModel, p: int, point: ProjPoint) -> PfaffianModel:
    """Integral equivalence moving the point to (1:0:0:0:0) and arranging
    phi_12 = x1 with every other entry free of x1 mod p."""
    Phi = _integral_model(model, p)
    P = [_lift(c, p) for c in point.coords]
    lead = next(i for i, c in enumerate(P) if c)
    # rows of B: the point first, then the other unit vectors; det = +-1
    rows = [P] + [[1 if c == e else 0 for c in range(N)] for e in range(N) if e != lead]
    g = Transformation(ExactMatrix.identity(N, QQ), ExactMatrix(QQ, rows))
    Phi = act(g, Phi).change_ring(ZZ)
    # the x1 coefficient matrix is alternating of rank 2 mod p; two of its
    # columns span its image, and A = adj(C) maps them to multiples of e1, e2
    M1 = [[Phi.coeff(i, j, 1) % p for j in range(1, N + 1)] for i in range(1, N + 1)]
    i0, j0 = next((i, j) for i in range(N) for j in range(i + 1, N) if M1[i][j])
    u = [M1[r][i0] for r in range(N)]
    v = [M1[r][j0] for r in range(N)]
    C = ExactMatrix(ZZ, [list(col) for col in zip(*_complete_basis([u, v], p))])
    A = C.adjugate()
    Phi = act(Transformation(A, ExactMatrix.identity(N, QQ)), Phi).change_ring(ZZ)
    # make the x1 coefficient of Phi_12 exactly 1 mod p by scaling row 1
    lead_coeff = Phi.coeff(1, 2, 1) % p
    if lead_coeff == 0:
        raise AssertionError("normalisation failed to isolate phi_12")
    s = pow(lead_coeff, -1, p)
    D = ExactMatrix.diag([s, 1, 1, 1, 1], QQ)
    Phi = act(Transformation(D, ExactMatrix.identity(N, QQ)), Phi).change_ring(ZZ)
    # substitution x1 <- x1 - sum c_k x_k clears the other terms of phi_12
    cs = [Phi.coeff(1, 2, k) % p for k in range(1, N + 1)]
    Bm = [[1 if r == c else 0 for c in range(N)] for r in range(N)]
    for k in range(1, N):
        Bm[k][0] = -cs[k]
    Phi = act(Transformation(ExactMatrix.identity(N, QQ), ExactMatrix(QQ, Bm)), Phi).change_ring(ZZ)
    return Phi


def _check_normal_form(Phi: PfaffianModel, p: int) -> None:
    for i, j in PAIRS:
        c = Phi.coeff(i, j, 1) % p
        if (i, j) == (1, 2):
            if c != 1 or any(Phi.coeff(1, 2, k) % p for k in range(2, N + 1)):
                raise AssertionError("phi_12 is not x1")
        elif c:
            raise AssertionError(f"phi_{i}{j} involves x1 mod p")


def regularity_check(model: PfaffianModel, p: int, point: ProjPoint) -> RegularityResult:
    """Test the point of the special fibre for regularity of the total space.

    After normalising, every (r:s:t) with r phi34 + s phi35 + t phi45 = 0
    mod p must give a combination of Phi34, Phi35, Phi45 whose x1 coefficient
    is not divisible by p^2.
    """
    _require_prime(p)
    Phi = _integral_model(model, p)
    phi = reduce_mod(Phi, p)
    if span_rank(phi) != N:
        raise PreconditionError("entries of the reduction do not span the linear forms")
    pt = point.elements() if point.q == p else None
    if pt is None:
        raise ValueError("point must be over GF(p)")
    if not on_curve(phi, point):
        raise PreconditionError(f"{point} is not on the reduction")
    norm = normalize_at_point(Phi, p, point)
    _check_normal_form(norm, p)
    forms = [[norm.coeff(a, b, k) for k in range(1, N + 1)] for a, b in ((3, 4), (3, 5), (4, 5))]
    checked = []
    for rst in _projective_plane(p):
        combo = [sum(c * f[k] for c, f in zip(rst, forms)) for k in range(N)]
        if any(x % p for x in combo):
            continue
        ok = combo[0] % (p * p) != 0
        checked.append((rst, ok))
        if not ok:
            return RegularityResult(False, point, rst, norm, checked)
    return RegularityResult(True, point, None, norm, checked)


def _projective_plane(p: int):
    for lead in range(2, -1, -1):
        for tail in itertools.product(range(p), repeat=2 - lead):
            yield tuple([0] * lead + [1] + list(tail))


def regularity_sweep(model: PfaffianModel, p: int):
    """Run the regularity check at every F_p-point of the reduction."""
    Phi = _integral_model(model, p)
    phi = reduce_mod(Phi, p)
    if span_rank(phi) != N:
        return False, []
    bad = []
    for pt in enumerate_points(phi):
        res = regularity_check(Phi, p, pt)
        if not res.passed:
            bad.append((pt, res.witness))
    return not bad, bad


# -- non-minimality witnesses ---------------------------------------------------

# exponents (a, b): [Diag(p^a), Diag(p^b)] with the scalar factor folded into b
WITNESS_EXPONENTS = {
    "i": ((1, 0, 0, 0, -1), (-1, -1, 0, 0, 1)),
    "ii": ((1, 0, 0, -1, -1), (-1, -1, 0, 1, 2)),
    "iii": ((0, 0, 0, -1, -1), (0, 0, 1, 1, 1)),
    "iv": ((1, 1, 0, 0, -1), (-1, -1, -1, 0, 0)),
}


def witness_transformation(case: str, p: int) -> Transformation:
    if case not in WITNESS_EXPONENTS:
        raise ValueError(f"unknown case {case!r}")
    a, b = WITNESS_EXPONENTS[case]
    return diagonal_transformation(a, b, p)


def diagonal_transformation(a, b, p: int) -> Transformation:
    """[Diag(p^a_1..p^a_5), Diag(p^b_1..p^b_5)]."""
    return Transformation.diagonal([Fraction(p) ** e for e in a], [Fraction(p) ** e for e in b])


def diagonal_requirements(a, b) -> dict[tuple[int, int, int], int]:
    """Minimal valuation of coefficient (i,j,k) for the diagonal transform to stay integral."""
    return {(i, j, k): -(a[i - 1] + a[j - 1] + b[k - 1]) for i, j in PAIRS for k in range(1, N + 1)}


@dataclass
class WitnessResult:
    case: str
    transformation: Transformation
    model: PfaffianModel
    det_valuation: int
    level_drop: int


def witness_pattern_ok(case: str, model: PfaffianModel, p: int) -> bool:
    a, b = WITNESS_EXPONENTS[case]
    vals = coefficient_valuations(model, p)
    return all(vals[key] >= need for key, need in diagonal_requirements(a, b).items())


def nonminimality_witness(case: str, model: PfaffianModel, p: int) -> WitnessResult:
    """Apply the case's transformation to a model in the matching degenerate
    form.  Refuses if the vanishing pattern does not hold."""
    _require_prime(p)
    if case not in WITNESS_EXPONENTS:
        raise ValueError(f"unknown case {case!r}")
    if not model.is_integral(p):
        raise PreconditionError("model is not integral at p")
    if not witness_pattern_ok(case, model, p):
        raise PreconditionError(f"model does not have the case ({case}) vanishing pattern")
    g = witness_transformation(case, p)
    out = act(g, model)
    dv = int(valuation(g.det(), p))
    return WitnessResult(case, g, out, dv, -dv)


def degenerate_model(case: str, base: PfaffianModel, p: int) -> PfaffianModel:
    """Multiply coefficients of an integral model by powers of p so that it
    acquires the case's vanishing pattern."""
    a, b = WITNESS_EXPONENTS[case]
    req = diagonal_requirements(a, b)
    coeffs = {}
    for (i, j, k), need in req.items():
        coeffs[(i, j, k)] = base.coeff(i, j, k) * p ** max(0, need)
    return PfaffianModel(base.ring, coeffs)


# -- Smith normal form over Z_(p) ------------------------------------------------

@dataclass
class SNFDecomposition:
    U: ExactMatrix
    exponents: tuple[int, ...]
    V: ExactMatrix
    p: int

    def diagonal(self) -> ExactMatrix:
        return ExactMatrix.diag([Fraction(self.p) ** e for e in self.exponents], QQ)

    def reconstruct(self) -> ExactMatrix:
        return self.U @ self.diagonal() @ self.V


def is_p_integral_unit_matrix(M: ExactMatrix, p: int) -> bool:
    entries_ok = all(valuation(x, p) >= 0 for r in M.to_lists() for x in r)
    return entries_ok and valuation(M.det(), p) == 0


def smith_at_p(A: ExactMatrix, p: int) -> SNFDecomposition:
    """A = U Diag(p^e) V with U, V in GL_n(Z_(p)) and e ascending."""
    _require_prime(p)
    n = A.rows
    if not A.is_square():
        raise ValueError("square matrix required")
    M = [[Fraction(x) for x in r] for r in A.to_lists()]
    if not A.change_ring(QQ).det():
        raise ValueError("matrix is singular")
    U = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    V = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    # invariant: A = U M V
    exps = []
    for t in range(n):
        # pivot of least valuation in the trailing block
        _, pr, pc = min(
            (valuation(M[r][c], p), r, c) for r in range(t, n) for c in range(t, n) if M[r][c]
        )
        # swap rows t, pr: M <- P M, U <- U P
        M[t], M[pr] = M[pr], M[t]
        for row in U:
            row[t], row[pr] = row[pr], row[t]
        for row in M:
            row[t], row[pc] = row[pc], row[t]
        V[t], V[pc] = V[pc], V[t]
        piv = M[t][t]
        e = int(valuation(piv, p))
        unit = piv / Fraction(p) ** e
        # scale row t by 1/unit: M <- D M, U <- U D^-1
        M[t] = [x / unit for x in M[t]]
        for row in U:
            row[t] *= unit
        pe = Fraction(p) ** e
        for r in range(t + 1, n):
            f = M[r][t] / pe  # valuation >= 0
            if f:
                M[r] = [x - f * y for x, y in zip(M[r], M[t])]
                for row in U:
                    row[t] += f * row[r]
        for c in range(t + 1, n):
            f = M[t][c] / pe
            if f:
                for row in M:
                    row[c] -= f * row[t]
                V[t] = [x + f * y for x, y in zip(V[t], V[c])]
        exps.append(e)
    # sort exponents ascending, permuting U columns and V rows together
    order = sorted(range(n), key=lambda i: exps[i])
    U = [[row[i] for i in order] for row in U]
    V = [V[i] for i in order]
    exps = [exps[i] for i in order]
    return SNFDecomposition(ExactMatrix(QQ, U), tuple(exps), ExactMatrix(QQ, V), p)


# -- exponent vectors ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ExponentVector:
    """[Diag(p^-r_1..p^-r_5), Diag(p^s_1..p^s_5)]."""

    r: tuple[int, ...]
    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        if len(self.r) != N or len(self.s) != N:
            raise ValueError("exponent vectors have 5 entries each")

    def is_sorted(self) -> bool:
        return list(self.r) == sorted(self.r) and list(self.s) == sorted(self.s)

    def sorted(self) -> "ExponentVector":
        return ExponentVector(tuple(sorted(self.r)), tuple(sorted(self.s)))

    def shifted(self, lam: int) -> "ExponentVector":
        return ExponentVector(tuple(x + lam for x in self.r), tuple(x + 2 * lam for x in self.s))

    def normalized(self) -> "ExponentVector":
        """Shift so that min r = 0 (the same transformation)."""
        return self.shifted(-min(self.r))

    def mirrored(self) -> "ExponentVector":
        """(r, s) -> (-r reversed, -s reversed): the inverse transformation."""
        return ExponentVector(tuple(-x for x in reversed(self.r)), tuple(-x for x in reversed(self.s)))

    def transformation(self, p: int) -> Transformation:
        return diagonal_transformation([-x for x in self.r], self.s, p)

    def det_valuation(self) -> int:
        return -2 * sum(self.r) + sum(self.s)

    def is_trivial(self) -> bool:
        return len(set(self.r)) == 1 and len(set(self.s)) == 1 and self.s[0] == 2 * self.r[0]


# the named inequalities: (label, (r indices), s index), 1-based
_NO_LINES = [("r1+r4<=s2", (1, 4), 2), ("r2+r3<=s2", (2, 3), 2), ("r2+r4<=s3", (2, 4), 3)]
_NO_CONICS = [("r1+r5<=s3", (1, 5), 3), ("r2+r5<=s4", (2, 5), 4),
              ("r3+r4<=s4", (3, 4), 4), ("r3+r5<=s5", (3, 5), 5)]


def inequality_filters(ev: ExponentVector, flag: str = "no_lines_or_conics") -> list[str]:
    """Violated inequalities for ev and for its mirror (prefixed "mirror:")."""
    if not ev.is_sorted():
        raise ValueError("exponent vector must be sorted")
    if flag == "no_lines":
        checks = _NO_LINES
    elif flag == "no_lines_or_conics":
        checks = _NO_LINES + _NO_CONICS
    else:
        raise ValueError(f"unknown flag {flag!r}")
    out = []
    for prefix, vec in (("", ev), ("mirror:", ev.mirrored())):
        for label, (a, b), c in checks:
            if vec.r[a - 1] + vec.r[b - 1] > vec.s[c - 1]:
                out.append(prefix + label)
    return out


def arithmetic_progression_solve(ev: ExponentVector) -> int | None:
    """alpha with r = (0, a, 2a, 3a, 4a), s2..s4 = (3a, 4a, 5a), s1 <= 2a <= ...,
    s5 >= 6a; None when no such alpha exists."""
    if not ev.is_sorted():
        raise PreconditionError("exponent vector must be sorted")
    if ev.r[0] != 0:
        raise PreconditionError("normalise so that r1 = 0")
    alpha = ev.r[1]
    r, s = ev.r, ev.s
    if r != tuple(n * alpha for n in range(N)):
        return None
    if s[1:4] != (3 * alpha, 4 * alpha, 5 * alpha):
        return None
    if s[0] > 2 * alpha or s[4] < 6 * alpha:
        return None
    return alpha


def nonregular_predict(ev: ExponentVector) -> list[tuple[str, str]]:
    """Which of the four non-regularity criteria fire, as (case, model) with
    model "Phi" (the source) or "Phi'" (the image)."""
    if not ev.is_sorted():
        raise ValueError("exponent vector must be sorted")
    r = (None,) + ev.r
    s = (None,) + ev.s
    out = []
    if r[1] + r[4] > s[1] and r[4] + r[5] > s[5] > s[1]:
        out.append(("i", "Phi"))
    if r[1] + r[3] > s[1] and r[3] + r[4] > s[3] > s[1]:
        out.append(("ii", "Phi"))
    if r[2] + r[5] < s[5] and r[1] + r[2] < s[1] < s[5]:
        out.append(("iii", "Phi'"))
    if r[3] + r[5] < s[5] and r[2] + r[3] < s[3] < s[5]:
        out.append(("iv", "Phi'"))
    return out


def exclusion_argument(ev: ExponentVector) -> str | None:
    """Why a sorted exponent vector cannot relate two models with
    v(Delta) <= 1, or None if nothing excludes it
    (the vector then has constant s)."""
    ev = ev.sorted().normalized()
    bad = inequality_filters(ev)
    if bad:
        return "violates " + ", ".join(bad)
    alpha = arithmetic_progression_solve(ev)
    if alpha is None:
        return "exponents are not of the arithmetic progression shape"
    r, s = ev.r, ev.s
    if alpha == 0:
        if len(set(s)) == 1:
            return None
        if ev.det_valuation() != 0:
            return f"det valuation {ev.det_valuation()} changes the level of a minimal model"
        # s1 < 0 < s5: the x1-coefficients of Phi vanish mod p, so the
        # entries of phi miss x1 and Phi is not minimal
        return f"s1={s[0]} < 0 forces the reduction to miss x1, so Phi is not minimal"
    # (i) cannot fire on Phi, so r4 + r5 <= s5; (iv) cannot fire on Phi', so s5 <= r3 + r5
    fired = ", ".join(f"({c}) on {m}" for c, m in nonregular_predict(ev))
    msg = (f"r4+r5={r[3] + r[4]} <= s5={s[4]} <= r3+r5={r[2] + r[4]} forces r3 = r4, "
           f"contradicting alpha = {alpha} >= 1")
    return msg + (f"; non-regular point predicted by {fired}" if fired else "")


# -- diagonal search -------------------------------------------------------------

def is_admissible(model: PfaffianModel, ev: ExponentVector, p: int) -> bool:
    """Image under the diagonal transformation is integral with v(Delta') <= 1,
    checked by actually applying it."""
    image = act(ev.transformation(p), model)
    if not image.is_integral(p):
        return False
    d = invariants(image).delta
    return d != 0 and valuation(d, p) <= 1


def _compositions(lo, hi, total):
    """Integer vectors x with lo_k <= x_k <= hi and sum x = total."""
    n = len(lo)
    if n == 0:
        if total == 0:
            yield ()
        return
    rest_min = sum(lo[1:])
    rest_max = hi * (n - 1)
    for x in range(max(lo[0], total - rest_max), min(hi, total - rest_min) + 1):
        for tail in _compositions(lo[1:], hi, total - x):
            yield (x,) + tail


def theorem1_search(model: PfaffianModel, p: int, bound: int = 3, verify: bool = True) -> list[ExponentVector]:
    """All exponent vectors (min r = 0, every |entry| <= bound) whose diagonal
    transformation maps the model to an integral model with v(Delta) <= 1.

    Integrality is the inequality s_k >= r_i + r_j - v(c_ijk); v(Delta') <= 1
    forces sum(s) = 2 sum(r).  Candidates passing both are confirmed by
    applying the transformation when ``verify`` is set.
    """
    _require_prime(p)
    if bound > 6:
        raise ValueError("exponent bound is capped at 6")
    if not model.is_integral(p):
        raise PreconditionError("model is not integral at p")
    inv = invariants(model)
    if inv.delta == 0 or valuation(inv.delta, p) > 1:
        raise PreconditionError("theorem1_search needs v_p(Delta) <= 1")
    vals = coefficient_valuations(model, p)
    out = []
    for r in itertools.product(range(0, bound + 1), repeat=N):
        if min(r) != 0:
            continue
        lo = []
        for k in range(1, N + 1):
            need = max(
                r[i - 1] + r[j - 1] - vals[(i, j, k)] for i, j in PAIRS
            )
            lo.append(max(-bound, math.ceil(need) if need != -INF else -bound))
        if any(x > bound for x in lo):
            continue
        for s in _compositions(lo, bound, 2 * sum(r)):
            ev = ExponentVector(r, s)
            if not verify or is_admissible(model, ev, p):
                out.append(ev)
    return sorted(out)


@dataclass
class Theorem1Verdict:
    passed: bool
    exponents_A: tuple[int, ...]
    exponents_B: tuple[int, ...]


def theorem1_check(model: PfaffianModel, image: PfaffianModel, A: ExactMatrix, B: ExactMatrix,
                   p: int) -> Theorem1Verdict:
    """Given image = [A, B] model with both sides integral and v(Delta) <= 1,
    PASS iff both Smith exponent vectors at p are constant."""
    g = Transformation(A, B)
    if act(g, model) != image:
        raise PreconditionError("image != [A, B] model")
    for m in (model, image):
        if not m.is_integral(p):
            raise PreconditionError("models must be integral at p")
        d = invariants(m).delta
        if d == 0 or valuation(d, p) > 1:
            raise PreconditionError("models must have v_p(Delta) <= 1")
    ea = smith_at_p(g.A, p).exponents
    eb = smith_at_p(g.B, p).exponents
    return Theorem1Verdict(len(set(ea)) == 1 and len(set(eb)) == 1, ea, eb)


# -- square-free check for a global discriminant ------------------------------------

def squarefree_status(n: int, trial_bound: int = 10**6) -> str:
    """"square-free", "not square-free", or "square-free up to bound" when a
    cofactor with no prime factor below the bound remains undecided."""
    n = abs(int(n))
    if n == 0:
        return "not square-free"
    d = 2
    while d <= trial_bound and d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return "not square-free"
        d += 1
    if n == 1 or d * d > n:
        return "square-free"
    r = math.isqrt(n)
    if r * r == n:
        return "not square-free"
    # no prime factor <= bound: below bound^3 the cofactor has at most two
    # prime factors, distinct because it is not a square
    if n < trial_bound**3:
        return "square-free"
    return "square-free up to bound"
