"""Pfaffian models, submaximal Pfaffians, and the [A, B] action."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .exactalg import (
    GF,
    QQ,
    ZZ,
    ExactMatrix,
    FFElement,
    FiniteField,
    MultiPoly,
    Ring,
    common_ring,
    factor_prime_power,
    ring_from_name,
)

N = 5
PAIRS = [(i, j) for i in range(1, N + 1) for j in range(i + 1, N + 1)]
_PAIR_INDEX = {pair: n for n, pair in enumerate(PAIRS)}


class ModelFormatError(ValueError):
    pass


def _normalize_ring(ring: Ring, values: list) -> tuple[Ring, list]:
    # models over QQ with integral coefficients are stored over ZZ
    if ring is QQ and all(Fraction(v).denominator == 1 for v in values):
        return ZZ, [int(Fraction(v)) for v in values]
    return ring, [ring(v) for v in values]


class PfaffianModel:
    """5x5 alternating matrix of linear forms, Phi_ij = sum_k c[i,j,k] x_k.

    Coefficients are stored flat in the order (1,2),(1,3),...,(4,5), each
    pair contributing the coefficients of x1..x5.
    """

    __slots__ = ("ring", "_c")

    def __init__(self, ring: Ring, coeffs):
        if isinstance(coeffs, dict):
            flat = [0] * (len(PAIRS) * N)
            for (i, j, k), c in coeffs.items():
                if not (1 <= i < j <= N and 1 <= k <= N):
                    raise ValueError(f"bad coefficient index {(i, j, k)}")
                flat[_PAIR_INDEX[(i, j)] * N + k - 1] = c
        else:
            flat = list(coeffs)
            if flat and isinstance(flat[0], (list, tuple)):
                if len(flat) != len(PAIRS) or any(len(r) != N for r in flat):
                    raise ValueError("expected 10 rows of 5 coefficients")
                flat = [c for r in flat for c in r]
        if len(flat) != len(PAIRS) * N:
            raise ValueError(f"expected 50 coefficients, got {len(flat)}")
        self.ring, self._c = _normalize_ring(ring, flat)
        self._c = tuple(self._c)

    # -- construction helpers ------------------------------------------------
    @classmethod
    def zero(cls, ring: Ring = ZZ) -> "PfaffianModel":
        return cls(ring, [0] * 50)

    @classmethod
    def from_matrices(cls, ring: Ring, mats) -> "PfaffianModel":
        """From the five constant alternating matrices M_k with Phi = sum x_k M_k."""
        flat = []
        for i, j in PAIRS:
            flat.extend(mats[k][i - 1][j - 1] for k in range(N))
        return cls(ring, flat)

    @classmethod
    def from_linear_forms(cls, ring: Ring, entries) -> "PfaffianModel":
        """From a 5x5 alternating arrangement of linear MultiPoly (or dict (i,j)->form
        for i<j)."""
        if isinstance(entries, dict):
            get = lambda i, j: entries.get((i, j), MultiPoly.zero(ring))
        else:
            for i in range(N):
                for j in range(N):
                    if entries[i][j] != -entries[j][i]:
                        raise ValueError("matrix is not alternating")
            get = lambda i, j: entries[i - 1][j - 1]
        flat = []
        for i, j in PAIRS:
            f = get(i, j)
            if isinstance(f, MultiPoly):
                if not f.is_homogeneous(1):
                    raise ValueError(f"entry ({i},{j}) is not a linear form")
                flat.extend(f.linear_coefficients())
            else:
                flat.extend(f)
        return cls(ring, flat)

    # -- access -----------------------------------------------------------------
    def coefficients(self) -> list:
        return list(self._c)

    def rows(self) -> list[list]:
        return [list(self._c[n * N:(n + 1) * N]) for n in range(len(PAIRS))]

    def coeff(self, i: int, j: int, k: int):
        if i == j:
            return self.ring.zero
        if i > j:
            return -self.coeff(j, i, k)
        return self._c[_PAIR_INDEX[(i, j)] * N + k - 1]

    def entry(self, i: int, j: int) -> MultiPoly:
        """Phi_ij as a linear form (1-based indices)."""
        if i == j:
            return MultiPoly.zero(self.ring)
        return MultiPoly.linear_form(self.ring, [self.coeff(i, j, k) for k in range(1, N + 1)])

    def matrix(self) -> list[list[MultiPoly]]:
        return [[self.entry(i, j) for j in range(1, N + 1)] for i in range(1, N + 1)]

    def coefficient_matrix(self, k: int) -> list[list]:
        """The constant alternating matrix dPhi/dx_k."""
        return [[self.coeff(i, j, k) for j in range(1, N + 1)] for i in range(1, N + 1)]

    def coefficient_matrices(self) -> list[list[list]]:
        return [self.coefficient_matrix(k) for k in range(1, N + 1)]

    def is_integral(self, p: int | None = None) -> bool:
        """Integral at p (every denominator prime to p), or over ZZ if p is None."""
        if self.ring is ZZ:
            return True
        if self.ring is not QQ:
            return False
        if p is None:
            return all(c.denominator == 1 for c in self._c)
        return all(c.denominator % p for c in self._c)

    def scale(self, t) -> "PfaffianModel":
        return PfaffianModel(self.ring if not isinstance(t, Fraction) else common_ring(self.ring, QQ),
                             [c * t for c in self._c])

    def change_ring(self, ring: Ring) -> "PfaffianModel":
        return PfaffianModel(ring, self._c)

    def __eq__(self, other):
        if not isinstance(other, PfaffianModel):
            return NotImplemented
        return self._c == other._c and (
            self.ring is other.ring or {self.ring, other.ring} <= {ZZ, QQ}
        )

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"PfaffianModel({self.ring}, {self.rows()})"

    def pretty(self) -> str:
        lines = []
        for i, j in PAIRS:
            lines.append(f"Phi_{i}{j} = {self.entry(i, j)}")
        return "\n".join(lines)


# -- Pfaffians ---------------------------------------------------------------

def _is_alternating(a) -> bool:
    n = len(a)
    for i in range(n):
        if len(a[i]) != n or a[i][i]:
            return False
        for j in range(i + 1, n):
            if a[j][i] != -a[i][j]:
                return False
    return True


def pfaffian4(a):
    """a12 a34 - a13 a24 + a14 a23 for an alternating 4x4 matrix."""
    if len(a) != 4 or not _is_alternating(a):
        raise ValueError("pfaffian4 needs an alternating 4x4 matrix")
    return a[0][1] * a[2][3] - a[0][2] * a[1][3] + a[0][3] * a[1][2]


def _pf4_unchecked(a):
    return a[0][1] * a[2][3] - a[0][2] * a[1][3] + a[0][3] * a[1][2]


def submax_pfaffians(model: PfaffianModel) -> list[MultiPoly]:
    """(p1, ..., p5) with p_i = (-1)^i pf(Phi with row and column i removed)."""
    phi = model.matrix()
    out = []
    for i in range(N):
        keep = [r for r in range(N) if r != i]
        sub = [[phi[r][c] for c in keep] for r in keep]
        pf = _pf4_unchecked(sub)
        out.append(pf if (i + 1) % 2 == 0 else -pf)
    return out


def pfaffian_vector_of_matrix(a) -> list:
    """Submaximal Pfaffians of a constant 5x5 alternating matrix."""
    out = []
    for i in range(N):
        keep = [r for r in range(N) if r != i]
        pf = _pf4_unchecked([[a[r][c] for c in keep] for r in keep])
        out.append(pf if (i + 1) % 2 == 0 else -pf)
    return out


# -- the group action --------------------------------------------------------

def _as_field_matrix(M) -> ExactMatrix:
    if not isinstance(M, ExactMatrix):
        M = ExactMatrix(QQ, M)
    if M.shape != (N, N):
        raise ValueError("transformation matrices must be 5x5")
    if M.ring is ZZ:
        M = M.change_ring(QQ)
    return M


@dataclass(frozen=True)
class Transformation:
    """The pair [A, B] acting by Phi -> A Phi(x') A^T with x'_j = sum_i B_ij x_i."""

    A: ExactMatrix
    B: ExactMatrix

    def __post_init__(self):
        A = _as_field_matrix(self.A)
        B = _as_field_matrix(self.B)
        if A.ring is not B.ring:
            ring = common_ring(A.ring, B.ring)
            A, B = A.change_ring(ring), B.change_ring(ring)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if not A.det():
            raise ValueError("A is singular")
        if not B.det():
            raise ValueError("B is singular")

    @property
    def ring(self) -> Ring:
        return self.A.ring

    @classmethod
    def identity(cls, ring: Ring = QQ) -> "Transformation":
        return cls(ExactMatrix.identity(N, ring), ExactMatrix.identity(N, ring))

    @classmethod
    def diagonal(cls, a, b) -> "Transformation":
        return cls(ExactMatrix.diag([Fraction(x) for x in a], QQ),
                   ExactMatrix.diag([Fraction(x) for x in b], QQ))

    def compose(self, other: "Transformation") -> "Transformation":
        """self o other: act(self.compose(other), Phi) == act(self, act(other, Phi))."""
        return Transformation(self.A @ other.A, self.B @ other.B)

    __matmul__ = compose

    def inverse(self) -> "Transformation":
        return Transformation(self.A.inverse(), self.B.inverse())

    def det(self):
        return self.A.det() ** 2 * self.B.det()


def det_transformation(g: Transformation):
    """det [A, B] = (det A)^2 det B."""
    return g.det()


def act(g: Transformation, model: PfaffianModel) -> PfaffianModel:
    """Apply [A, B].  Works on the coefficient matrices: writing
    Phi = sum_k x_k M_k, the substitution gives new M'_i = sum_k B_ik M_k,
    then congruence by A."""
    ring = common_ring(model.ring, g.ring)
    A = g.A.to_lists()
    B = g.B.to_lists()
    mats = model.coefficient_matrices()
    new_mats = []
    for i in range(N):
        S = [[sum(B[i][k] * mats[k][r][c] for k in range(N)) for c in range(N)] for r in range(N)]
        AS = [[sum(A[r][t] * S[t][c] for t in range(N)) for c in range(N)] for r in range(N)]
        new_mats.append([[sum(AS[r][t] * A[c][t] for t in range(N)) for c in range(N)] for r in range(N)])
    return PfaffianModel.from_matrices(ring, new_mats)


def act_symbolic(g: Transformation, model: PfaffianModel) -> PfaffianModel:
    """Same action computed on the polynomial entries (substitution then
    congruence).  Kept as an independent route for testing."""
    phi = [[f.substitute_linear(g.B) for f in row] for row in model.matrix()]
    A = g.A.to_lists()
    ring = common_ring(model.ring, g.ring)
    zero = MultiPoly.zero(ring)
    out = [[zero] * N for _ in range(N)]
    for r in range(N):
        for c in range(N):
            acc = zero
            for s in range(N):
                if not A[r][s]:
                    continue
                for t in range(N):
                    if A[c][t] and phi[s][t]:
                        acc = acc + phi[s][t] * (A[r][s] * A[c][t])
            out[r][c] = acc
    return PfaffianModel.from_linear_forms(ring, out)


# -- reduction, fixtures, I/O ------------------------------------------------

def reduce_mod(model: PfaffianModel, q: int) -> PfaffianModel:
    """Coefficientwise reduction into GF(q)."""
    p, _ = factor_prime_power(q)
    if model.ring not in (ZZ, QQ):
        raise ValueError("reduction needs a model over ZZ or QQ")
    F = GF(q)
    out = []
    for c in model.coefficients():
        c = Fraction(c)
        if c.denominator % p == 0:
            raise ValueError(f"coefficient {c} has denominator divisible by {p}")
        out.append(F(c))
    return PfaffianModel(F, out)


def random_model(seed, bound: int) -> PfaffianModel:
    """Deterministic model over ZZ with coefficients in [-bound, bound]."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    rng = random.Random(seed)
    return PfaffianModel(ZZ, [rng.randint(-bound, bound) for _ in range(50)])


def _encode(c):
    if isinstance(c, FFElement):
        return c.n
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return int(c)


def model_to_dict(model: PfaffianModel) -> dict:
    return {"ring": model.ring.kind, "coeffs": [[_encode(c) for c in r] for r in model.rows()]}


def serialize_model(model: PfaffianModel, extra: dict | None = None) -> str:
    doc = model_to_dict(model)
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=None if not extra else 2) + "\n"


def _decode(ring: Ring, x):
    if isinstance(x, bool) or isinstance(x, float):
        raise ModelFormatError(f"coefficient {x!r} is not exact")
    if isinstance(ring, FiniteField):
        if not isinstance(x, int):
            raise ModelFormatError(f"field element {x!r} must be an integer code")
        if not 0 <= x < ring.q:
            raise ModelFormatError(f"field element {x} out of range for {ring}")
        return ring.from_code(x)
    if isinstance(x, str):
        try:
            v = Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ModelFormatError(f"bad rational {x!r}") from None
    elif isinstance(x, int):
        v = Fraction(x)
    else:
        raise ModelFormatError(f"bad coefficient {x!r}")
    if ring is ZZ:
        if v.denominator != 1:
            raise ModelFormatError(f"non-integer coefficient {x!r} in a ZZ model")
        return int(v)
    return v


def model_from_dict(doc) -> PfaffianModel:
    if not isinstance(doc, dict) or "ring" not in doc or "coeffs" not in doc:
        raise ModelFormatError("document needs 'ring' and 'coeffs'")
    try:
        ring = ring_from_name(str(doc["ring"]))
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
    rows = doc["coeffs"]
    if not isinstance(rows, list) or len(rows) != 10:
        raise ModelFormatError("'coeffs' must be a list of 10 lists")
    if any(not isinstance(r, list) or len(r) != 5 for r in rows):
        raise ModelFormatError("each coefficient row must have 5 entries")
    return PfaffianModel(ring, [_decode(ring, x) for r in rows for x in r])


def parse_model(text: str) -> PfaffianModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"malformed document: {exc}") from None
    return model_from_dict(doc)


def load_model(path) -> PfaffianModel:
    return parse_model(Path(path).read_text())


def save_model(model: PfaffianModel, path) -> None:
    Path(path).write_text(serialize_model(model))
