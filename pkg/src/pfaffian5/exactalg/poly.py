"""Sparse polynomials in x1..x5 over ZZ, QQ or GF(q).

Exponent vectors are packed into a single int (8 bits per variable) so that
multiplying monomials is one integer addition.  Degrees in this package
never exceed a few dozen, far below the 255 per-variable ceiling.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import QQ, ZZ, FiniteField, Ring, RingMismatchError

NVARS = 5
_BITS = 8
_MASK = (1 << _BITS) - 1
MAX_DEGREE = _MASK


def pack(exps) -> int:
    if len(exps) != NVARS:
        raise ValueError(f"exponent vector must have {NVARS} entries")
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_DEGREE:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (_BITS * i)
    return key


def unpack(key: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(NVARS))


def _key_degree(key: int) -> int:
    d = 0
    while key:
        d += key & _MASK
        key >>= _BITS
    return d


_UNIT = [1 << (_BITS * i) for i in range(NVARS)]


def common_ring(r1: Ring, r2: Ring) -> Ring:
    """Smallest of the two rings that contains both, or RingMismatchError."""
    if r1 is r2:
        return r1
    if {r1, r2} == {ZZ, QQ}:
        return QQ
    if r1 is ZZ and isinstance(r2, FiniteField):
        return r2
    if r2 is ZZ and isinstance(r1, FiniteField):
        return r1
    raise RingMismatchError(f"incompatible rings {r1} and {r2}")


class MultiPoly:
    """Immutable sparse polynomial.  ``terms`` maps packed exponents to
    nonzero coefficients of ``ring``."""

    __slots__ = ("ring", "_terms", "_degree")

    def __init__(self, ring: Ring, terms=None):
        self.ring = ring
        packed = {}
        if terms:
            for exps, c in terms.items():
                key = exps if isinstance(exps, int) else pack(tuple(exps))
                c = ring(c)
                if key in packed:
                    c = packed[key] + c
                if c:
                    packed[key] = c
                else:
                    packed.pop(key, None)
        self._terms = packed
        self._degree = None

    @classmethod
    def _raw(cls, ring, packed):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = packed
        obj._degree = None
        return obj

    @classmethod
    def zero(cls, ring: Ring) -> "MultiPoly":
        return cls._raw(ring, {})

    @classmethod
    def constant(cls, ring: Ring, c) -> "MultiPoly":
        c = ring(c)
        return cls._raw(ring, {0: c} if c else {})

    @classmethod
    def variable(cls, ring: Ring, i: int) -> "MultiPoly":
        """The variable x_i, 1-based."""
        if not 1 <= i <= NVARS:
            raise ValueError(f"variable index {i} out of range")
        return cls._raw(ring, {_UNIT[i - 1]: ring(1)})

    @classmethod
    def linear_form(cls, ring: Ring, coeffs) -> "MultiPoly":
        """sum coeffs[k] * x_{k+1}."""
        if len(coeffs) != NVARS:
            raise ValueError(f"need {NVARS} coefficients")
        terms = {}
        for k, c in enumerate(coeffs):
            c = ring(c)
            if c:
                terms[_UNIT[k]] = c
        return cls._raw(ring, terms)

    # -- inspection -----------------------------------------------------------
    def terms(self) -> dict[tuple[int, ...], object]:
        return {unpack(k): c for k, c in self._terms.items()}

    def packed_terms(self) -> dict[int, object]:
        return self._terms

    def coefficient(self, exps) -> object:
        return self._terms.get(pack(tuple(exps)), self.ring.zero)

    def linear_coefficients(self) -> list:
        """Coefficients of x1..x5 (the constant and higher terms are ignored)."""
        return [self._terms.get(u, self.ring.zero) for u in _UNIT]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self._degree is None:
            self._degree = max((_key_degree(k) for k in self._terms), default=-1)
        return self._degree

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {_key_degree(k) for k in self._terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return d is None or degs == {d}

    # -- arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        try:
            return MultiPoly.constant(self.ring, other)
        except (TypeError, ValueError):
            return None

    def _lift(self, ring):
        if ring is self.ring:
            return self
        return MultiPoly._raw(ring, {k: v for k, v in ((k, ring(c)) for k, c in self._terms.items()) if v})

    def _align(self, other):
        if other.ring is self.ring:
            return self, other, self.ring
        ring = common_ring(self.ring, other.ring)
        return self._lift(ring), other._lift(ring), ring

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, ring = self._align(other)
        out = dict(a._terms)
        for k, c in b._terms.items():
            if k in out:
                s = out[k] + c
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return MultiPoly._raw(ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.ring, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                c = self.ring(other)
            except (TypeError, ValueError):
                if isinstance(other, Fraction) and self.ring is ZZ:
                    return self._lift(QQ) * other
                return NotImplemented
            return self.scale(c)
        a, b, ring = self._align(other)
        if a.degree() + b.degree() > MAX_DEGREE:
            raise OverflowError("degree too large for packed exponents")
        out = {}
        get = out.get
        for ka, ca in a._terms.items():
            for kb, cb in b._terms.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return MultiPoly._raw(ring, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        if not c:
            return MultiPoly._raw(self.ring, {})
        out = {}
        for k, v in self._terms.items():
            w = v * c
            if w:
                out[k] = w
        return MultiPoly._raw(self.ring, out)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if self.ring is not other.ring:
                try:
                    a, b, _ = self._align(other)
                except RingMismatchError:
                    return False
                return a._terms == b._terms
            return self._terms == other._terms
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- calculus and substitution ------------------------------------------
    def derivative(self, i: int) -> "MultiPoly":
        """Formal partial derivative with respect to x_i (1-based)."""
        if not 1 <= i <= NVARS:
            raise ValueError(f"variable index {i} out of range")
        shift = _BITS * (i - 1)
        unit = _UNIT[i - 1]
        out = {}
        for k, c in self._terms.items():
            e = (k >> shift) & _MASK
            if e:
                d = c * e
                if d:
                    out[k - unit] = d
        return MultiPoly._raw(self.ring, out)

    def evaluate(self, point):
        """Value at a point with 5 coordinates in (or coercible to) the ring."""
        if len(point) != NVARS:
            raise ValueError(f"point must have {NVARS} coordinates")
        ring = self.ring
        pt = [ring(x) if not isinstance(x, Fraction) or ring is not ZZ else x for x in point]
        total = ring.zero
        cache: dict[tuple[int, int], object] = {}
        for k, c in self._terms.items():
            term = c
            for i in range(NVARS):
                e = (k >> (_BITS * i)) & _MASK
                if e:
                    pw = cache.get((i, e))
                    if pw is None:
                        pw = pt[i] ** e
                        cache[(i, e)] = pw
                    term = term * pw
            total = total + term
        return total

    def substitute_linear(self, B) -> "MultiPoly":
        """f(x1',...,x5') with x_j' = sum_i B[i][j] x_i.

        B is an ExactMatrix or a 5x5 nested sequence.  The result lives in the
        common ring of f and B.
        """
        rows = B.to_lists() if hasattr(B, "to_lists") else [list(r) for r in B]
        if len(rows) != NVARS or any(len(r) != NVARS for r in rows):
            raise ValueError("substitution matrix must be 5x5")
        bring = getattr(B, "ring", None) or _guess_ring(rows)
        ring = common_ring(self.ring, bring)
        images = [
            MultiPoly.linear_form(ring, [rows[i][j] for i in range(NVARS)]) for j in range(NVARS)
        ]
        powers: dict[tuple[int, int], MultiPoly] = {}
        result: dict[int, object] = {}
        for k, c in self._terms.items():
            term = MultiPoly.constant(ring, c)
            for j in range(NVARS):
                e = (k >> (_BITS * j)) & _MASK
                if e:
                    pw = powers.get((j, e))
                    if pw is None:
                        pw = images[j] ** e
                        powers[(j, e)] = pw
                    term = term * pw
            for kk, cc in term._terms.items():
                result[kk] = result.get(kk, 0) + cc
        return MultiPoly._raw(ring, {k: c for k, c in result.items() if c})

    def map_coefficients(self, fn, ring: Ring) -> "MultiPoly":
        out = {}
        for k, c in self._terms.items():
            d = ring(fn(c))
            if d:
                out[k] = d
        return MultiPoly._raw(ring, out)

    def change_ring(self, ring: Ring) -> "MultiPoly":
        return self.map_coefficients(lambda c: c, ring)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms, key=lambda k: unpack(k)[::-1], reverse=True):
            c = self._terms[k]
            exps = unpack(k)
            mono = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1 and not isinstance(self.ring, FiniteField):
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _guess_ring(rows) -> Ring:
    entries = [x for r in rows for x in r]
    for x in entries:
        if hasattr(x, "field"):
            return x.field
    if any(isinstance(x, Fraction) and x.denominator != 1 for x in entries):
        return QQ
    if any(isinstance(x, Fraction) for x in entries):
        return QQ
    return ZZ


# Functional surface mirroring the operation names used across the package.

def poly_arith(a: MultiPoly, b: MultiPoly, which: str) -> MultiPoly:
    if a.ring is not b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if which == "add":
        return a + b
    if which == "sub":
        return a - b
    if which == "mul":
        return a * b
    raise ValueError(f"unknown operation {which!r}")


def partial_derivative(f: MultiPoly, i: int) -> MultiPoly:
    return f.derivative(i)


def substitute_linear(f: MultiPoly, B) -> MultiPoly:
    return f.substitute_linear(B)


def evaluate(f: MultiPoly, point):
    return f.evaluate(point)


def variables(ring: Ring) -> list[MultiPoly]:
    return [MultiPoly.variable(ring, i) for i in range(1, NVARS + 1)]
