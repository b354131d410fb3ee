import random
from fractions import Fraction

import pytest

from pfaffian5.curvecheck import ProjPoint, enumerate_points, find_lines
from pfaffian5.dvrlab import (
    WITNESS_EXPONENTS,
    ExponentVector,
    PreconditionError,
    arithmetic_progression_solve,
    degenerate_model,
    diagonal_transformation,
    exclusion_argument,
    inequality_filters,
    is_p_integral_unit_matrix,
    kodaira_class,
    level,
    minimal_scaling,
    nonminimality_witness,
    nonregular_predict,
    normalize_at_point,
    regularity_check,
    regularity_sweep,
    smith_at_p,
    squarefree_status,
    theorem1_check,
    theorem1_search,
    valuation_report,
    witness_pattern_ok,
    witness_transformation,
)
from pfaffian5.exactalg import GF, QQ, ZZ, ExactMatrix, MultiPoly, valuation
from pfaffian5.invariants import invariants
from pfaffian5.pfmodel import PfaffianModel, Transformation, act, random_model, reduce_mod
from pfaffian5.suites import random_unimodular_at

from conftest import V_LE1_SEEDS

I5 = ExactMatrix.identity(5, QQ)


def nonregular_model(p, tail_x5):
    """phi_12 = x1 at (1:0:0:0:0), phi34 = x4, phi35 = x5,
    Phi45 = p^2 x1 + tail_x5 * x5."""
    x = [None] + [MultiPoly.variable(ZZ, i) for i in range(1, 6)]
    return PfaffianModel.from_linear_forms(ZZ, {
        (1, 2): x[1], (1, 3): x[2], (1, 4): x[3], (1, 5): x[4] + x[5], (2, 3): x[3] + x[5],
        (2, 4): x[2] + x[5] * 2, (2, 5): x[3] - x[4], (3, 4): x[4], (3, 5): x[5],
        (4, 5): x[1] * (p * p) + x[5] * tail_x5})


# -- valuation reports -----------------------------------------------------------------

def test_report_good_reduction():
    rep = valuation_report(random_model(2, 2), 7)
    assert (rep.v_delta, rep.level, rep.kodaira) == (0, 0, "I0")
    assert rep.regular_points_ok is True


@pytest.mark.parametrize("p", [5, 7])
def test_report_multiplicative_reduction(p):
    for s in V_LE1_SEEDS[p]:
        rep = valuation_report(random_model(s, 2), p)
        assert rep.v_delta == 1
        assert (rep.level, rep.kodaira, rep.regular_points_ok) == (0, "I1", True)


def test_report_level_shift_by_scalar_substitution():
    for p in (5, 7):
        model = random_model(2, 2)
        image = act(Transformation(I5, I5.scale(p)), model)
        rep = valuation_report(image, p)
        assert rep.level == 5
        assert rep.v_delta == rep.v_delta_min + 12 * rep.level
        assert rep.regular_points_ok is None


def test_report_errors():
    with pytest.raises(ValueError):
        valuation_report(random_model(2, 2), 3)
    with pytest.raises(ValueError):
        valuation_report(random_model(2, 2), 9)
    with pytest.raises(PreconditionError):
        valuation_report(PfaffianModel.zero(), 5)
    with pytest.raises(PreconditionError):
        valuation_report(random_model(2, 2).scale(Fraction(1, 5)), 5)


def test_level_well_defined_on_fixtures():
    for s in range(1, 15):
        for p in (5, 7, 11):
            rep = valuation_report(random_model(s, 2), p, sweep=False)
            diff = rep.v_delta - rep.v_delta_min
            assert diff >= 0 and diff % 12 == 0 and rep.level >= 0


def test_minimal_scaling_and_kodaira():
    assert minimal_scaling(4, 6, 12) == 1
    assert minimal_scaling(float("inf"), 6, 13) == 1
    assert minimal_scaling(3, 6, 12) == 0
    assert kodaira_class(0, 0, 0) == "I0"
    assert kodaira_class(0, 3, 0) == "I3"
    assert kodaira_class(2, 3, 0) == "other"


def test_level_law_20_diagonal_transformations():
    rng = random.Random(71)
    for t in range(20):
        p = (5, 7)[t % 2]
        model = random_model(rng.randint(1, 7), 2)
        a = [rng.randint(0, 1) for _ in range(5)]
        b = [rng.randint(0, 2) for _ in range(5)]
        g = diagonal_transformation(a, b, p)
        image = act(g, model)
        assert image.is_integral(p)
        assert level(image, p) == level(model, p) + valuation(g.det(), p)


# -- regularity ---------------------------------------------------------------------------

@pytest.mark.parametrize("p", [5, 7])
def test_regularity_at_every_point_of_v_le_1_fixtures(p):
    for s in V_LE1_SEEDS[p]:
        model = random_model(s, 2)
        pts = enumerate_points(reduce_mod(model, p))
        assert pts
        for pt in pts:
            assert regularity_check(model, p, pt).passed


def test_smooth_reduction_passes_everywhere():
    ok, bad = regularity_sweep(random_model(2, 2), 7)
    assert ok and bad == []


@pytest.mark.parametrize("p", [5, 7])
def test_nonregular_point_detected(p):
    model = nonregular_model(p, p)
    res = regularity_check(model, p, ProjPoint((1, 0, 0, 0, 0), p))
    assert not res.passed and res.witness == (0, 0, 1)
    assert valuation(invariants(model).delta, p) >= 2


@pytest.mark.parametrize("p", [5, 7])
def test_nonregular_point_with_unit_x5_term(p):
    # with Phi45 = p^2 x1 + x5 the vanishing combination is phi35 - phi45
    model = nonregular_model(p, 1)
    res = regularity_check(model, p, ProjPoint((1, 0, 0, 0, 0), p))
    assert not res.passed and res.witness == (0, 1, p - 1)
    assert valuation(invariants(model).delta, p) >= 2


def test_normal_form_shape():
    p = 7
    model = random_model(1, 2)
    for pt in enumerate_points(reduce_mod(model, p)):
        norm = normalize_at_point(model, p, pt)
        assert norm.coeff(1, 2, 1) % p == 1
        for (i, j) in [(1, 3), (1, 4), (2, 3), (3, 4), (4, 5)]:
            assert norm.coeff(i, j, 1) % p == 0
        assert all(norm.coeff(1, 2, k) % p == 0 for k in range(2, 6))
        assert valuation(invariants(norm).delta, p) == valuation(invariants(model).delta, p)


@pytest.mark.parametrize("p", [5, 7])
def test_verdict_independent_of_normalisation(p):
    rng = random.Random(p)
    cases = [(nonregular_model(p, p), (1, 0, 0, 0, 0), False)]
    fixture = random_model(V_LE1_SEEDS[p][0], 2)
    cases += [(fixture, pt.coords, True) for pt in enumerate_points(reduce_mod(fixture, p))[:2]]
    F = GF(p)
    for model, coords, expected in cases:
        for _ in range(10):
            U, V = random_unimodular_at(rng, p), random_unimodular_at(rng, p)
            image = act(Transformation(U, V), model)
            # image(x) = U model(V^T x) U^T, so the point moves by (V^T)^{-1}
            VT = V.T.change_ring(F)
            moved = VT.inverse().to_lists()
            new = [sum(moved[r][c] * F(coords[c]) for c in range(5)) for r in range(5)]
            pt = ProjPoint.normalized(F, new)
            assert regularity_check(image, p, pt).passed is expected


def test_regularity_preconditions():
    p = 7
    model = random_model(2, 2)
    phi = reduce_mod(model, p)
    on_curve = set(enumerate_points(phi))
    off = next(pt for pt in (ProjPoint((1, a, b, 0, 0), p) for a in range(p) for b in range(p))
               if pt not in on_curve)
    with pytest.raises(PreconditionError):
        regularity_check(model, p, off)
    x = [MultiPoly.variable(ZZ, i) for i in (1, 2)]
    two_var = PfaffianModel.from_linear_forms(ZZ, {(1, 2): x[0], (3, 4): x[1]})
    with pytest.raises(PreconditionError):
        regularity_check(two_var, p, ProjPoint((0, 0, 1, 0, 0), p))


# -- witnesses ---------------------------------------------------------------------------

def test_witness_determinant_valuations():
    for case in WITNESS_EXPONENTS:
        g = witness_transformation(case, 5)
        assert valuation(g.det(), 5) == -1
    g = witness_transformation("iii", 7)
    expected = Transformation.diagonal([1, 1, 1, Fraction(1, 7), Fraction(1, 7)], [1, 1, 7, 7, 7])
    assert g == expected
    g = witness_transformation("i", 7)
    assert g == Transformation.diagonal([7, 1, 1, 1, Fraction(1, 7)],
                                        [Fraction(1, 7) * x for x in (1, 1, 7, 7, 49)])


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("case", sorted(WITNESS_EXPONENTS))
def test_witness_drops_delta_valuation_by_12(case, p):
    base = random_model(2, 2)
    assert valuation(invariants(base).delta, p) == 0
    deg = degenerate_model(case, base, p)
    assert witness_pattern_ok(case, deg, p)
    w = nonminimality_witness(case, deg, p)
    assert w.model.is_integral(p)
    assert w.level_drop == 1
    v0 = valuation(invariants(deg).delta, p)
    v1 = valuation(invariants(w.model).delta, p)
    assert v0 - v1 == 12
    assert level(deg, p) - level(w.model, p) == 1


def test_case_iii_pattern_by_hand():
    # alpha_1 = alpha_2 = 0: Phi45 has no x1, x2 terms mod p^2 and is 0 mod p
    p = 5
    base = random_model(3, 2)
    coeffs = {(i, j, k): base.coeff(i, j, k) for i in range(1, 6) for j in range(i + 1, 6) for k in range(1, 6)}
    for k in (1, 2):
        coeffs[(4, 5, k)] *= p * p
    for k in (3, 4, 5):
        coeffs[(4, 5, k)] *= p
    for i in range(1, 4):
        for j in (4, 5):
            for k in (1, 2):
                coeffs[(i, j, k)] *= p
    model = PfaffianModel(ZZ, coeffs)
    w = nonminimality_witness("iii", model, p)
    assert w.model.is_integral(p) and w.det_valuation == -1


def test_witness_refuses_wrong_pattern():
    with pytest.raises(PreconditionError):
        nonminimality_witness("i", random_model(2, 2), 5)
    with pytest.raises(ValueError):
        nonminimality_witness("v", random_model(2, 2), 5)


# -- Smith normal form -------------------------------------------------------------------

def test_smith_examples():
    assert smith_at_p(I5, 5).exponents == (0,) * 5
    A = ExactMatrix.diag([Fraction(25), 1, 1, 1, Fraction(1, 5)], QQ)
    snf = smith_at_p(A, 5)
    assert snf.exponents == (-1, 0, 0, 0, 2)
    assert snf.reconstruct() == A
    with pytest.raises(ValueError):
        smith_at_p(ExactMatrix(QQ, [[1] * 5] * 5), 5)


def test_smith_round_trip():
    rng = random.Random(83)
    for _ in range(20):
        p = rng.choice([2, 3, 5, 7])
        exps = sorted(rng.randint(-3, 3) for _ in range(5))
        U0, V0 = random_unimodular_at(rng, p), random_unimodular_at(rng, p)
        D = ExactMatrix.diag([Fraction(p) ** e for e in exps], QQ)
        A = U0.change_ring(QQ) @ D @ V0.change_ring(QQ)
        snf = smith_at_p(A, p)
        assert snf.exponents == tuple(exps)
        assert snf.reconstruct() == A
        assert is_p_integral_unit_matrix(snf.U, p) and is_p_integral_unit_matrix(snf.V, p)


# -- exponent vectors and the inequality machinery --------------------------------------

def test_exponent_vector_basics():
    ev = ExponentVector((1, 0, 2, 1, 1), (3, 2, 2, 2, 2))
    assert not ev.is_sorted() and ev.sorted().is_sorted()
    assert ev.shifted(1) == ExponentVector((2, 1, 3, 2, 2), (5, 4, 4, 4, 4))
    assert ExponentVector((2,) * 5, (4,) * 5).normalized() == ExponentVector((0,) * 5, (0,) * 5)
    assert ev.det_valuation() == -2 * 5 + 11
    assert ev.mirrored().mirrored() == ev
    g = ev.transformation(5)
    assert valuation(g.det(), 5) == ev.det_valuation()


def test_inequality_filter_examples():
    zero = ExponentVector((0,) * 5, (0,) * 5)
    assert inequality_filters(zero) == []
    ap = ExponentVector((0, 1, 2, 3, 4), (2, 3, 4, 5, 6))
    assert "r1+r4<=s2" not in inequality_filters(ap)
    assert "r3+r5<=s5" not in inequality_filters(ap)
    bad = ExponentVector((0, 0, 0, 0, 5), (0,) * 5)
    assert "r1+r5<=s3" in inequality_filters(bad)
    assert "r1+r5<=s3" not in inequality_filters(bad, "no_lines")
    with pytest.raises(ValueError):
        inequality_filters(ExponentVector((1, 0, 0, 0, 0), (0,) * 5))


def test_arithmetic_progression_examples():
    assert arithmetic_progression_solve(ExponentVector((0,) * 5, (0,) * 5)) == 0
    assert arithmetic_progression_solve(ExponentVector((0, 2, 4, 6, 8), (3, 6, 8, 10, 13))) == 2
    assert arithmetic_progression_solve(ExponentVector((0, 1, 2, 3, 5), (0, 3, 4, 5, 7))) is None
    with pytest.raises(PreconditionError):
        arithmetic_progression_solve(ExponentVector((1, 1, 1, 1, 1), (2,) * 5))


def test_nonregular_predict_examples():
    assert nonregular_predict(ExponentVector((0,) * 5, (0,) * 5)) == []
    assert ("i", "Phi") in nonregular_predict(ExponentVector((0, 1, 2, 3, 4), (1, 3, 4, 5, 6)))


def test_alpha_one_vector_is_excluded():
    ev = ExponentVector((0, 1, 2, 3, 4), (2, 3, 4, 5, 6))
    assert arithmetic_progression_solve(ev) == 1
    reason = exclusion_argument(ev)
    assert reason is not None and "r3 = r4" in reason
    assert exclusion_argument(ExponentVector((0,) * 5, (0,) * 5)) is None
    assert "not minimal" in exclusion_argument(ExponentVector((0,) * 5, (-1, 0, 0, 0, 1)))


def test_every_sorted_vector_is_constant_or_excluded():
    import itertools
    for r in itertools.combinations_with_replacement(range(3), 5):
        if r[0] != 0:
            continue
        for s in itertools.combinations_with_replacement(range(-1, 5), 5):
            if sum(s) != 2 * sum(r):
                continue
            ev = ExponentVector(r, s)
            if exclusion_argument(ev) is None:
                assert len(set(s)) == 1 and len(set(r)) == 1


# -- the Theorem-1 harness -----------------------------------------------------------------

@pytest.mark.parametrize("p", [5, 7])
def test_theorem1_search_on_fixtures(p):
    for s in V_LE1_SEEDS[p]:
        found = theorem1_search(random_model(s, 2), p, bound=3)
        assert ExponentVector((0,) * 5, (0,) * 5) in found
        for ev in found:
            assert len(set(ev.s)) == 1
            assert inequality_filters(ev.sorted().normalized()) == []


@pytest.mark.parametrize("p", [5, 7])
def test_theorem1_search_on_witness_images(p):
    # images of degenerate models have p-divisible coefficients and v(Delta) = 0
    base = random_model(2, 2)
    for case in ("i", "iii"):
        image = nonminimality_witness(case, degenerate_model(case, base, p), p).model
        assert valuation(invariants(image).delta, p) == 0
        assert any(c % p == 0 and c for c in image.coefficients())
        for ev in theorem1_search(image, p, bound=3):
            assert len(set(ev.s)) == 1


def test_trivial_shift_admissible():
    model = random_model(2, 2)
    for lam in (1, 2):
        ev = ExponentVector((lam,) * 5, (2 * lam,) * 5)
        assert act(ev.transformation(5), model) == model


def test_theorem1_search_preconditions():
    model = random_model(2, 2)
    raised = act(Transformation(I5, I5.scale(5)), model)
    assert valuation(invariants(raised).delta, 5) == 60
    with pytest.raises(PreconditionError):
        theorem1_search(raised, 5)
    with pytest.raises(ValueError):
        theorem1_search(model, 5, bound=7)


@pytest.mark.parametrize("p", [5, 7])
def test_theorem1_check_constructed(p):
    rng = random.Random(97 + p)
    model = random_model(V_LE1_SEEDS[p][0], 2)
    for _ in range(20):
        lam = rng.randint(-2, 2)
        U, V = random_unimodular_at(rng, p), random_unimodular_at(rng, p)
        A = U.change_ring(QQ).scale(Fraction(p) ** lam)
        B = V.change_ring(QQ).scale(Fraction(p) ** (-2 * lam))
        verdict = theorem1_check(model, act(Transformation(A, B), model), A, B, p)
        assert verdict.passed
        assert verdict.exponents_A == (lam,) * 5 and verdict.exponents_B == (-2 * lam,) * 5


def test_theorem1_check_examples():
    p = 5
    model = random_model(2, 2)
    v = theorem1_check(model, model, I5, I5, p)
    assert v.passed and v.exponents_A == (0,) * 5
    A, B = I5.scale(Fraction(1, p)), I5.scale(p * p)
    v = theorem1_check(model, act(Transformation(A, B), model), A, B, p)
    assert v.passed and (v.exponents_A, v.exponents_B) == ((-1,) * 5, (2,) * 5)
    with pytest.raises(PreconditionError):
        theorem1_check(model, random_model(3, 2), I5, I5, p)


def test_theorem1_check_rejects_nonconstant():
    # the case (i) witness maps a degenerate model to a v(Delta) <= 1 model but
    # the degenerate source violates the precondition
    p = 5
    base = random_model(2, 2)
    deg = degenerate_model("i", base, p)
    g = witness_transformation("i", p)
    with pytest.raises(PreconditionError):
        theorem1_check(deg, act(g, deg), g.A, g.B, p)


# -- square-freeness ------------------------------------------------------------------

def test_squarefree_status():
    assert squarefree_status(30) == "square-free"
    assert squarefree_status(12) == "not square-free"
    assert squarefree_status(0) == "not square-free"
    big = 1000003 * 1000033
    assert squarefree_status(big) == "square-free"
    assert squarefree_status(1000003**2) == "not square-free"
    assert squarefree_status(1000003 * 1000033 * 1000037, trial_bound=1000) == "square-free up to bound"
