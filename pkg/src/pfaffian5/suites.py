"""Randomised verification suites driven by ``pfaffian5 verify``.

Each suite takes a seed and a trial count and returns a SuiteResult.  All
randomness flows from ``random.Random(seed)`` so runs are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .curvecheck import (
    count_points,
    count_weierstrass_points,
    find_lines,
    identity_at_points,
)
from .dvrlab import (
    WITNESS_EXPONENTS,
    ExponentVector,
    degenerate_model,
    diagonal_transformation,
    inequality_filters,
    level,
    nonminimality_witness,
    regularity_sweep,
    theorem1_check,
    theorem1_search,
)
from .exactalg import GF, QQ, ZZ, ExactMatrix, MultiPoly, valuation
from .invariants import (
    C4_DENOMINATOR,
    C6_DENOMINATOR,
    act_on_omega,
    invariants,
    jacobian_curve,
    omega,
    raw_contractions,
)
from .pfmodel import (
    N,
    PfaffianModel,
    Transformation,
    act,
    pfaffian_vector_of_matrix,
    random_model,
    reduce_mod,
    submax_pfaffians,
)

DEFAULT_SEED = 20240501


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {"suite": self.name, "trials": self.trials, "passed": self.passed,
                "failures": [str(f) for f in self.failures]}


# -- random objects ---------------------------------------------------------------

def random_matrix(rng: random.Random, bound: int = 3, ring=QQ) -> ExactMatrix:
    """Nonsingular 5x5 matrix with entries in [-bound, bound]."""
    while True:
        M = ExactMatrix(ring, [[rng.randint(-bound, bound) for _ in range(N)] for _ in range(N)])
        if M.det():
            return M


def random_rational_matrix(rng: random.Random, bound: int = 3) -> ExactMatrix:
    while True:
        rows = [[Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(N)]
                for _ in range(N)]
        M = ExactMatrix(QQ, rows)
        if M.det():
            return M


def random_transformation(rng: random.Random, bound: int = 2, rational: bool = False) -> Transformation:
    make = random_rational_matrix if rational else random_matrix
    return Transformation(make(rng, bound), make(rng, bound))


def random_unimodular_at(rng: random.Random, p: int, bound: int = 3) -> ExactMatrix:
    """Integer matrix whose determinant is prime to p."""
    while True:
        M = random_matrix(rng, bound, ZZ)
        if M.det() % p:
            return M


def nonsingular_seeds(count: int, bound: int = 2, start: int = 1, p: int | None = None,
                      max_v: int | None = None, good_primes=()) -> list[int]:
    """Seeds s >= start for which random_model(s, bound) has Delta != 0 and the
    requested local conditions."""
    out = []
    s = start
    while len(out) < count:
        if s > start + 5000:
            raise RuntimeError("fixture search exhausted")
        d = invariants(random_model(s, bound)).delta
        ok = d != 0
        if ok and p is not None and max_v is not None:
            ok = valuation(d, p) <= max_v
        if ok and good_primes:
            ok = all(d % q for q in good_primes)
        if ok:
            out.append(s)
        s += 1
    return out


# -- suites -------------------------------------------------------------------------

def _poly_matrix_mul(P, M):
    zero = MultiPoly.zero(P[0].ring)
    out = []
    for c in range(N):
        acc = zero
        for r in range(N):
            if M[r][c]:
                acc = acc + P[r] * M[r][c]
        out.append(acc)
    return out


def suite_pfaffian_identities(seed: int, trials: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("pfaffian-identities")
    for t in range(trials):
        model = random_model(rng.randrange(10**9), 3)
        if t % 2:
            model = reduce_mod(model, 5)
        P = submax_pfaffians(model)
        Phi = model.matrix()
        if any(_poly_matrix_mul(P, Phi)):
            res.failures.append(f"trial {t}: Pf*Phi != 0")
        adj = ExactMatrix(model.ring, Phi).adjugate()
        if any(adj[i, j] != P[i] * P[j] for i in range(N) for j in range(N)):
            res.failures.append(f"trial {t}: adj(Phi) != Pf^T Pf")
        A = random_matrix(rng, 2)
        congruent = ExactMatrix(QQ, [[rng.randint(-3, 3) for _ in range(N)] for _ in range(N)])
        congruent = congruent - congruent.T
        lhs = pfaffian_vector_of_matrix((A @ congruent @ A.T).to_lists())
        pf = pfaffian_vector_of_matrix(congruent.to_lists())
        adjA = A.adjugate()
        rhs = [sum(pf[r] * adjA[r, c] for r in range(N)) for c in range(N)]
        if lhs != rhs:
            res.failures.append(f"trial {t}: Pf(A a A^T) != Pf(a) adj(A)")
        res.trials += 1
    return res


def suite_omega_covariance(seed: int, trials: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("omega-covariance")
    for t in range(trials):
        model = random_model(rng.randrange(10**9), 2)
        g = random_transformation(rng, 1, rational=bool(t % 2))
        lhs = omega(act(g, model))
        W = act_on_omega(g, omega(model))
        d = g.det()
        if any(lhs[i][j] != W[i][j].scale(d) for i in range(N) for j in range(N)):
            res.failures.append(f"trial {t}: omega(g Phi) != det(g) g omega(Phi)")
        res.trials += 1
    return res


def suite_weights(seed: int, trials: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("weights")
    for t in range(trials):
        model = random_model(rng.randrange(10**9), 2)
        g = random_transformation(rng, 1, rational=bool(t % 2))
        d = g.det()
        a, b = invariants(model), invariants(act(g, model))
        if b.c4 != d**4 * a.c4 or b.c6 != d**6 * a.c6 or b.delta != d**12 * a.delta:
            res.failures.append(f"trial {t}: weight law fails")
        res.trials += 1
    return res


def suite_constants(seed: int, trials: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("constants")
    for t in range(trials):
        model = random_model(rng.randrange(10**9), 3)
        s4, s6 = raw_contractions(model)
        if s4 % C4_DENOMINATOR or s6 % C6_DENOMINATOR:
            res.failures.append(f"trial {t}: contraction not divisible")
            continue
        c4, c6 = s4 // C4_DENOMINATOR, -(s6 // C6_DENOMINATOR)
        if (c4**3 - c6**2) % 1728:
            res.failures.append(f"trial {t}: c4^3 - c6^2 not divisible by 1728")
        res.trials += 1
    return res


def suite_point_count(seed: int, trials: int, primes=(7, 11, 13)) -> SuiteResult:
    """Compare #C(F_p) with #E(F_p) on the first ``trials`` nonsingular seeds from ``seed``."""
    res = SuiteResult("point-count")
    for s in nonsingular_seeds(trials, 2, start=seed):
        model = random_model(s, 2)
        inv = invariants(model)
        E = jacobian_curve(model)
        for p in primes:
            if inv.delta % p == 0:
                continue
            n_c = count_points(reduce_mod(model, p))
            n_e = count_weierstrass_points(E, p)
            if n_c != n_e:
                res.failures.append(f"seed {s}, p={p}: #C={n_c} #E={n_e}")
            res.trials += 1
    return res


def suite_identities(seed: int, trials: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("identities")
    for t in range(trials):
        model = random_model(rng.randrange(10**9), 3)
        for q in (5, 7):
            rep = identity_at_points(model, "det_identity", q)
            if not rep.ok:
                res.failures.append(f"trial {t}, q={q}: det identity fails at {rep.mismatches[0]}")
        for q in (2, 4):
            F = GF(q)
            phi = PfaffianModel(F, [F.from_code(rng.randrange(q)) for _ in range(50)])
            rep = identity_at_points(phi, "char2_identity")
            if not rep.ok:
                res.failures.append(f"trial {t}, q={q}: char 2 sum nonzero at {rep.mismatches[0]}")
        res.trials += 1
    return res


def suite_regularity(seed: int, trials: int, primes=(5, 7)) -> SuiteResult:
    res = SuiteResult("regularity")
    for p in primes:
        for s in nonsingular_seeds(trials, 2, start=seed, p=p, max_v=1):
            ok, bad = regularity_sweep(random_model(s, 2), p)
            if not ok:
                res.failures.append(f"seed {s}, p={p}: non-regular points {bad}")
            res.trials += 1
    for p in (2, 3):
        for s in nonsingular_seeds(trials, 2, start=seed, p=p, max_v=1):
            lines = find_lines(reduce_mod(random_model(s, 2), p))
            if lines:
                res.failures.append(f"seed {s}, p={p}: reduction contains {len(lines)} lines")
            res.trials += 1
    return res


def suite_theorem1(seed: int, trials: int, primes=(5, 7), bound: int = 3) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("theorem1")
    for p in primes:
        seeds = nonsingular_seeds(trials, 2, start=seed, p=p, max_v=1)
        for s in seeds:
            model = random_model(s, 2)
            for ev in theorem1_search(model, p, bound):
                if len(set(ev.s)) != 1:
                    res.failures.append(f"seed {s}, p={p}: non-constant survivor {ev}")
                if inequality_filters(ev.sorted().normalized()):
                    res.failures.append(f"seed {s}, p={p}: survivor {ev} violates the filters")
            res.trials += 1
        model = random_model(seeds[0], 2)
        for t in range(trials):
            lam = rng.randint(-2, 2)
            U, V = random_unimodular_at(rng, p), random_unimodular_at(rng, p)
            A = U.change_ring(QQ).scale(Fraction(p) ** lam)
            B = V.change_ring(QQ).scale(Fraction(p) ** (-2 * lam))
            verdict = theorem1_check(model, act(Transformation(A, B), model), A, B, p)
            if not verdict.passed:
                res.failures.append(f"p={p}, trial {t}: theorem1_check failed {verdict}")
            res.trials += 1
        A = ExactMatrix.diag([Fraction(1, p)] * N, QQ)
        B = ExactMatrix.diag([Fraction(p * p)] * N, QQ)
        if not theorem1_check(model, act(Transformation(A, B), model), A, B, p).passed:
            res.failures.append(f"p={p}: stabiliser element rejected")
        res.trials += 1
    return res


def suite_witness(seed: int, trials: int, primes=(5, 7)) -> SuiteResult:
    res = SuiteResult("witness")
    for p in primes:
        for s in nonsingular_seeds(trials, 2, start=seed, p=p, max_v=0):
            base = random_model(s, 2)
            for case in WITNESS_EXPONENTS:
                deg = degenerate_model(case, base, p)
                d0 = invariants(deg).delta
                if d0 == 0:
                    res.failures.append(f"seed {s}, case {case}: degenerate model is singular")
                    continue
                w = nonminimality_witness(case, deg, p)
                d1 = invariants(w.model).delta
                if not w.model.is_integral(p):
                    res.failures.append(f"seed {s}, case {case}: image not integral")
                if valuation(d0, p) - valuation(d1, p) != 12:
                    res.failures.append(f"seed {s}, case {case}: v(Delta) drop "
                                        f"{valuation(d0, p) - valuation(d1, p)} != 12")
                res.trials += 1
    return res


def suite_level(seed: int, trials: int, primes=(5, 7)) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("level")
    for t in range(trials):
        p = primes[t % len(primes)]
        s = nonsingular_seeds(1, 2, start=rng.randint(1, 40))[0]
        model = random_model(s, 2)
        a = [0] * N
        b = [rng.randint(0, 2) for _ in range(N)]
        for i in range(N):
            a[i] = rng.randint(0, 1)
        g = diagonal_transformation(a, b, p)
        image = act(g, model)
        dv = int(valuation(g.det(), p))
        if level(image, p) != level(model, p) + dv:
            res.failures.append(f"trial {t}: level law fails for {(a, b)} at p={p}")
        res.trials += 1
    return res


SUITES = {
    "pfaffian-identities": (suite_pfaffian_identities, 100),
    "omega-covariance": (suite_omega_covariance, 25),
    "weights": (suite_weights, 25),
    "constants": (suite_constants, 100),
    "point-count": (suite_point_count, 10),
    "identities": (suite_identities, 20),
    "regularity": (suite_regularity, 5),
    "theorem1": (suite_theorem1, 5),
    "witness": (suite_witness, 2),
    "level": (suite_level, 20),
}


def run_suite(name: str, seed: int = DEFAULT_SEED, trials: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    fn, default = SUITES[name]
    return fn(seed, default if trials is None else trials)


__all__ = ["SUITES", "SuiteResult", "run_suite", "nonsingular_seeds", "random_matrix",
           "random_rational_matrix", "random_transformation", "random_unimodular_at",
           "DEFAULT_SEED", "ExponentVector"]
