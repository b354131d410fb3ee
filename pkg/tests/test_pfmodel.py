import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffian5.exactalg import GF, QQ, ZZ, ExactMatrix, MultiPoly, valuation
from pfaffian5.invariants import invariants
from pfaffian5.pfmodel import (
    PAIRS,
    ModelFormatError,
    PfaffianModel,
    Transformation,
    act,
    act_symbolic,
    det_transformation,
    load_model,
    model_from_dict,
    parse_model,
    pfaffian4,
    random_model,
    reduce_mod,
    save_model,
    serialize_model,
    submax_pfaffians,
)
from pfaffian5.suites import random_matrix, random_rational_matrix, random_transformation

seeds = st.integers(min_value=0, max_value=10**9)
I5 = ExactMatrix.identity(5, QQ)


def alternating(upper):
    """4x4 alternating matrix from (a12, a13, a14, a23, a24, a34)."""
    a12, a13, a14, a23, a24, a34 = upper
    return [[0, a12, a13, a14], [-a12, 0, a23, a24], [-a13, -a23, 0, a34], [-a14, -a24, -a34, 0]]


# -- pfaffian4 --------------------------------------------------------------------------

def test_pfaffian4_example():
    a = alternating((2, 1, 0, 5, 4, 3))
    assert pfaffian4(a) == 2 * 3 - 1 * 4 + 0 * 5


def test_pfaffian4_zero_and_non_alternating():
    assert pfaffian4(alternating((0,) * 6)) == 0
    bad = alternating((1, 2, 3, 4, 5, 6))
    bad[0][1] = 7
    with pytest.raises(ValueError):
        pfaffian4(bad)


@settings(max_examples=100)
@given(st.tuples(*[st.integers(-50, 50)] * 6))
def test_pfaffian4_squared_is_determinant(upper):
    sympy = pytest.importorskip("sympy")
    a = alternating(upper)
    assert pfaffian4(a) ** 2 == sympy.Matrix(a).det(method="bareiss")


# -- submaximal Pfaffians ----------------------------------------------------------------

def _pf_times_phi(model):
    P, Phi = submax_pfaffians(model), model.matrix()
    zero = MultiPoly.zero(model.ring)
    out = []
    for c in range(5):
        acc = zero
        for r in range(5):
            acc = acc + P[r] * Phi[r][c]
        out.append(acc)
    return out


def test_zero_model_pfaffians():
    assert all(not p for p in submax_pfaffians(PfaffianModel.zero()))


def test_pfaffians_are_quadrics():
    for p in submax_pfaffians(random_model(3, 3)):
        assert p.is_homogeneous(2)


@pytest.mark.parametrize("ring", ["ZZ", "F5"])
def test_pfaffian_identities_100_models(ring):
    rng = random.Random(17)
    for _ in range(100):
        model = random_model(rng.randrange(10**9), 3)
        if ring == "F5":
            model = reduce_mod(model, 5)
        P = submax_pfaffians(model)
        assert not any(_pf_times_phi(model))
        adj = ExactMatrix(model.ring, model.matrix()).adjugate()
        for i in range(5):
            for j in range(5):
                assert adj[i, j] == P[i] * P[j]


def test_adjugate_factorisation_against_sympy():
    sympy = pytest.importorskip("sympy")
    xs = sympy.symbols("x1:6")
    model = random_model(5, 2)
    Phi = sympy.Matrix(5, 5, lambda i, j: sum(
        model.coeff(i + 1, j + 1, k + 1) * xs[k] for k in range(5)) if i != j else 0)
    adj = Phi.adjugate()
    P = submax_pfaffians(model)
    for i in range(5):
        for j in range(5):
            ours = P[i] * P[j]
            theirs = sympy.Poly(sympy.expand(adj[i, j]), *xs)
            assert {m: c for m, c in theirs.terms()} == ours.terms()


def test_pfaffian_covariance_50_pairs():
    rng = random.Random(29)
    for _ in range(50):
        model = random_model(rng.randrange(10**9), 2).change_ring(QQ)
        A = random_rational_matrix(rng, 3)
        image = act(Transformation(A, I5), model)
        P, adjA = submax_pfaffians(model), A.adjugate()
        expected = [sum((P[r].scale(adjA[r, c]) for r in range(5)), MultiPoly.zero(QQ)) for c in range(5)]
        assert submax_pfaffians(image) == expected


# -- the group action -------------------------------------------------------------------

def test_identity_action():
    model = random_model(1, 3)
    assert act(Transformation.identity(), model) == model


@pytest.mark.parametrize("lam", [Fraction(2), Fraction(-3), Fraction(1, 5), Fraction(-7, 4),
                                 Fraction(9, 2), Fraction(11), Fraction(-1), Fraction(2, 3),
                                 Fraction(-5, 7), Fraction(13, 6)])
def test_scalar_pairs_act_trivially(lam):
    model = random_model(int(lam.numerator * 31 + lam.denominator), 3)
    g = Transformation(I5.scale(lam), I5.scale(lam ** -2))
    assert act(g, model) == model


def test_substitution_doubles_single_coefficient():
    model = PfaffianModel(ZZ, {(1, 2, 3): 1})
    image = act(Transformation(I5, I5.scale(2)), model)
    assert image == PfaffianModel(ZZ, {(1, 2, 3): 2})


def test_det_transformation_examples():
    assert det_transformation(Transformation.identity()) == 1
    lam = Fraction(3, 2)
    assert det_transformation(Transformation(I5.scale(lam), I5)) == lam ** 10
    p = 7
    g = Transformation.diagonal([p, 1, 1, 1, Fraction(1, p)],
                                [Fraction(1, p) * x for x in (1, 1, p, p, p * p)])
    assert det_transformation(g) == Fraction(1, p)
    assert valuation(det_transformation(g), p) == -1


def test_group_law_50_pairs():
    rng = random.Random(41)
    for _ in range(50):
        model = random_model(rng.randrange(10**9), 2)
        g1, g2 = random_transformation(rng, 2), random_transformation(rng, 2, rational=True)
        assert act(g1, act(g2, model)) == act(g1 @ g2, model)
        assert det_transformation(g1 @ g2) == det_transformation(g1) * det_transformation(g2)


def test_congruence_and_substitution_commute():
    rng = random.Random(43)
    for _ in range(10):
        model = random_model(rng.randrange(10**9), 2)
        A, B = random_matrix(rng, 2), random_matrix(rng, 2)
        gA, gB = Transformation(A, I5), Transformation(I5, B)
        assert act(gA, act(gB, model)) == act(gB, act(gA, model)) == act(Transformation(A, B), model)


def test_fast_action_matches_symbolic_route():
    rng = random.Random(47)
    for _ in range(10):
        model = random_model(rng.randrange(10**9), 3)
        g = random_transformation(rng, 2, rational=True)
        assert act(g, model) == act_symbolic(g, model)


def test_singular_transformation_rejected():
    S = ExactMatrix(QQ, [[1] * 5] * 5)
    with pytest.raises(ValueError):
        Transformation(S, I5)
    with pytest.raises(ValueError):
        Transformation(I5, S)


def test_action_over_finite_field():
    model = reduce_mod(random_model(2, 3), 7)
    g = Transformation(ExactMatrix.identity(5, GF(7)).scale(GF(7)(3)), ExactMatrix.identity(5, GF(7)))
    assert act(g, model) == model.scale(GF(7)(2))


# -- reduction --------------------------------------------------------------------------

def test_reduce_examples():
    assert reduce_mod(PfaffianModel(ZZ, {(1, 2, 1): 7}), 7) == PfaffianModel.zero(GF(7))
    assert reduce_mod(PfaffianModel(ZZ, {(1, 2, 1): -1}), 2).coeff(1, 2, 1) == GF(2)(1)
    rng = random.Random(3)
    ones = [rng.randint(0, 1) for _ in range(50)]
    phi = reduce_mod(PfaffianModel(ZZ, ones), 3)
    assert [int(c) for c in phi.coefficients()] == ones


def test_reduce_rejects_bad_denominator():
    with pytest.raises(ValueError):
        reduce_mod(PfaffianModel(QQ, {(1, 2, 1): Fraction(1, 5)}), 5)
    assert reduce_mod(PfaffianModel(QQ, {(1, 2, 1): Fraction(1, 2)}), 5).coeff(1, 2, 1) == GF(5)(3)


# -- fixtures ---------------------------------------------------------------------------

def test_random_model_determinism_and_bounds():
    assert random_model(11, 3) == random_model(11, 3)
    assert random_model(11, 3) != random_model(12, 3)
    assert all(-3 <= c <= 3 for c in random_model(11, 3).coefficients())
    assert random_model(5, 0) == PfaffianModel.zero()


@pytest.mark.slow
def test_genericity_of_random_models():
    nonsingular = sum(1 for s in range(1000) if invariants(random_model(s, 3)).delta != 0)
    assert nonsingular >= 990


def test_models_over_qq_with_integral_coefficients_stored_over_zz():
    m = PfaffianModel(QQ, [Fraction(2, 1)] * 50)
    assert m.ring is ZZ
    assert PfaffianModel(QQ, [Fraction(1, 2)] + [0] * 49).ring is QQ


def test_antisymmetric_access():
    m = random_model(4, 3)
    for i, j in PAIRS:
        for k in range(1, 6):
            assert m.coeff(j, i, k) == -m.coeff(i, j, k)
        assert m.entry(j, i) == -m.entry(i, j)


# -- serialisation ---------------------------------------------------------------------

def test_parse_zero_document():
    doc = {"ring": "ZZ", "coeffs": [[0] * 5 for _ in range(10)]}
    assert parse_model(json.dumps(doc)) == PfaffianModel.zero()


@settings(max_examples=50)
@given(seeds)
def test_round_trip(seed):
    m = random_model(seed, 5)
    assert parse_model(serialize_model(m)) == m
    text = serialize_model(m)
    assert serialize_model(parse_model(text)) == text


def test_round_trip_rational_and_finite_field(tmp_path):
    q = PfaffianModel(QQ, [Fraction(k - 25, 3) for k in range(50)])
    text = serialize_model(q)
    assert '"-25/3"' in text
    assert parse_model(text) == q
    f = reduce_mod(random_model(9, 4), 9)
    path = tmp_path / "m.json"
    save_model(f, path)
    assert load_model(path) == f


def test_canonicalisation_of_rational_strings():
    doc = {"ring": "QQ", "coeffs": [["2/4"] + [0] * 4] + [[0] * 5 for _ in range(9)]}
    m = parse_model(json.dumps(doc))
    assert json.loads(serialize_model(m))["coeffs"][0][0] == "1/2"


@pytest.mark.parametrize("doc", [
    {"ring": "ZZ", "coeffs": [[0] * 5 for _ in range(9)] + [[0] * 4]},   # 49 coefficients
    {"ring": "ZZ", "coeffs": [[0] * 5 for _ in range(9)]},
    {"ring": "ZZ", "coeffs": [[0.5] + [0] * 4] + [[0] * 5 for _ in range(9)]},
    {"ring": "ZZ", "coeffs": [["1/2"] + [0] * 4] + [[0] * 5 for _ in range(9)]},
    {"ring": "Fq:5", "coeffs": [[5] + [0] * 4] + [[0] * 5 for _ in range(9)]},
    {"ring": "RR", "coeffs": [[0] * 5 for _ in range(10)]},
    {"coeffs": [[0] * 5 for _ in range(10)]},
])
def test_malformed_documents(doc):
    with pytest.raises(ModelFormatError):
        model_from_dict(doc)


def test_non_json_text():
    with pytest.raises(ModelFormatError):
        parse_model("not json")


def test_extra_keys_ignored(seed1_doc):
    assert "delta" in seed1_doc
    assert model_from_dict(seed1_doc) == random_model(1, 2)
