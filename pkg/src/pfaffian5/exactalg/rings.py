"""Exact coefficient rings: ZZ, QQ and finite fields GF(q).

Integers are plain ``int``, rationals are :class:`fractions.Fraction`, and
finite field elements are :class:`FFElement`.  Extension fields GF(p^e)
(e = 2, 3) are built on the Conway polynomial for (p, e), so the element
encoding is the same from run to run.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction

import numpy as np

MAX_FIELD_SIZE = 2**16


class RingMismatchError(ValueError):
    pass


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in itertools.count(2) if q % d == 0)
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    if q != 1:
        raise ValueError("not a prime power")
    return p, e


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Ring:
    """Base class; subclasses coerce values with ``ring(x)``."""

    kind: str = ""
    characteristic: int = 0
    is_field: bool = False

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def contains(self, x) -> bool:
        try:
            self(x)
        except (TypeError, ValueError):
            return False
        return True

    def __call__(self, x):  # pragma: no cover - abstract
        raise NotImplementedError


class IntegerRing(Ring):
    kind = "ZZ"

    def __call__(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        if isinstance(x, str):
            return self(Fraction(x))
        if isinstance(x, np.integer):
            return int(x)
        raise TypeError(f"cannot coerce {x!r} into ZZ")

    def __repr__(self):
        return "ZZ"


class RationalField(Ring):
    kind = "QQ"
    is_field = True

    def __call__(self, x):
        if isinstance(x, FFElement):
            raise TypeError("finite field element is not rational")
        if isinstance(x, np.integer):
            x = int(x)
        if isinstance(x, (int, Fraction, str)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def __repr__(self):
        return "QQ"


ZZ = IntegerRing()
QQ = RationalField()


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    """Multiply coefficient lists (low degree first) modulo monic f."""
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d]
        if c:
            for i in range(n + 1):
                prod[d - n + i] = (prod[d - n + i] - c * f[i]) % p
    out = prod[:n] + [0] * (n - len(prod[:n]))
    return out


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    order = p - 1
    factors = {d for d in range(2, order + 1) if order % d == 0 and is_prime(d)}
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    raise AssertionError("no primitive root")


def _x_power_order(f: list[int], p: int, e: int) -> int | None:
    """Multiplicative order of x modulo f if f is primitive, else None."""
    q = p**e
    order = q - 1
    # x has order q-1 iff x^(q-1) = 1 and x^((q-1)/r) != 1 for each prime r.
    one = [1] + [0] * (e - 1)

    def xpow(n):
        result = one[:]
        base = [0, 1] + [0] * (e - 2) if e >= 2 else [0]
        base = base[:e]
        while n:
            if n & 1:
                result = _poly_mulmod(result, base, f, p)
            base = _poly_mulmod(base, base, f, p)
            n >>= 1
        return result

    if f[0] == 0 or xpow(order) != one:
        return None
    for r in range(2, order + 1):
        if order % r == 0 and is_prime(r) and xpow(order // r) == one:
            return None
    return order


@functools.lru_cache(maxsize=None)
def conway_polynomial(p: int, e: int) -> tuple[int, ...]:
    """Conway polynomial of degree e (2 or 3) over GF(p), low degree first.

    Computed from the definition: the least primitive polynomial in the
    standard Conway ordering whose root has norm equal to the least
    primitive root mod p.  For prime e the only compatibility condition is
    the norm condition.
    """
    if e not in (2, 3):
        raise ValueError("only extension degrees 2 and 3 are supported")
    g = _primitive_root(p)
    # alphas are (alpha_{e-1}, ..., alpha_0); coefficient a_{e-i} = (-1)^i alpha_{e-i}
    for alphas in itertools.product(range(p), repeat=e):
        coeffs = [0] * (e + 1)
        coeffs[e] = 1
        for i, alpha in enumerate(alphas, start=1):
            coeffs[e - i] = ((-1) ** i * alpha) % p
        if ((-1) ** e * coeffs[0]) % p != g % p:
            continue
        if _x_power_order(coeffs, p, e) is not None:
            return tuple(coeffs)
    raise AssertionError(f"no Conway polynomial found for ({p}, {e})")


class FiniteField(Ring):
    """GF(q) with elements encoded as integers 0..q-1.

    For q = p^e the integer ``sum d_i p^i`` stands for ``sum d_i x^i`` modulo
    the Conway polynomial.
    """

    is_field = True

    def __init__(self, q: int):
        p, e = factor_prime_power(q)
        if q > MAX_FIELD_SIZE:
            raise ValueError(f"field size {q} exceeds {MAX_FIELD_SIZE}")
        if e > 3:
            raise ValueError("extension degree above 3 is not supported")
        self.q, self.p, self.degree = q, p, e
        self.characteristic = p
        self.kind = f"Fq:{q}"
        self.modulus = conway_polynomial(p, e) if e > 1 else (0, 1)
        if e > 1:
            self._exp, self._log = self._build_log_tables()

    def _build_log_tables(self):
        p, e, q = self.p, self.degree, self.q
        f = list(self.modulus)
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        cur = [1] + [0] * (e - 1)
        x = ([0, 1] + [0] * e)[:e]
        for k in range(q - 1):
            code = sum(d * p**i for i, d in enumerate(cur))
            exp[k] = code
            log[code] = k
            cur = _poly_mulmod(cur, x, f, p)
        return exp, log

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (GF, (self.q,))

    def __call__(self, x):
        if isinstance(x, FFElement):
            if x.field is not self:
                raise RingMismatchError(f"element of {x.field} is not in {self}")
            return x
        if isinstance(x, (bool, np.integer)):
            x = int(x)
        if isinstance(x, int):
            return FFElement(self, x % self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ValueError(f"denominator of {x} is divisible by {self.p}")
            n = x.numerator * pow(x.denominator, -1, self.p)
            return FFElement(self, n % self.p)
        if isinstance(x, str):
            return self(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def from_code(self, n: int) -> "FFElement":
        if not 0 <= n < self.q:
            raise ValueError(f"code {n} out of range for {self}")
        return FFElement(self, n)

    def elements(self) -> list["FFElement"]:
        return [FFElement(self, n) for n in range(self.q)]

    # -- scalar arithmetic on codes ---------------------------------------
    def _digits(self, n):
        out = []
        for _ in range(self.degree):
            n, d = divmod(n, self.p)
            out.append(d)
        return out

    def add_codes(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a + b) % self.p
        p = self.p
        out, scale = 0, 1
        for _ in range(self.degree):
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + db) % p) * scale
            scale *= p
        return out

    def neg_code(self, a: int) -> int:
        if self.degree == 1:
            return (-a) % self.p
        p = self.p
        out, scale = 0, 1
        for _ in range(self.degree):
            a, da = divmod(a, p)
            out += ((-da) % p) * scale
            scale *= p
        return out

    def mul_codes(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"division by zero in {self}")
        if self.degree == 1:
            return pow(a, -1, self.p)
        return int(self._exp[(-self._log[a]) % (self.q - 1)])

    def int_code(self, n: int) -> int:
        """Code of the image of the integer n."""
        return n % self.p

    # -- vectorised arithmetic on code arrays ----------------------------
    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.degree == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.degree):
            out += ((a % self.p + b % self.p) % self.p) * scale
            a = a // self.p
            b = b // self.p
            scale *= self.p
        return out

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.degree == 1:
            return (a * b) % self.p
        a, b = np.broadcast_arrays(a, b)
        nz = (a != 0) & (b != 0)
        out = np.zeros(a.shape, dtype=np.int64)
        out[nz] = self._exp[(self._log[a[nz]] + self._log[b[nz]]) % (self.q - 1)]
        return out


@functools.lru_cache(maxsize=None)
def GF(q: int) -> FiniteField:
    """The finite field with q elements (cached, so GF(q) is GF(q))."""
    return FiniteField(q)


@functools.total_ordering
class FFElement:
    __slots__ = ("field", "n")

    def __init__(self, field: FiniteField, n: int):
        self.field = field
        self.n = n

    def _coerce(self, other):
        if isinstance(other, FFElement):
            if other.field is not self.field:
                raise RingMismatchError(f"{self.field} vs {other.field}")
            return other.n
        if isinstance(other, (int, np.integer)):
            return self.field.int_code(int(other))
        if isinstance(other, Fraction):
            return self.field(other).n
        return None

    def __add__(self, other):
        m = self._coerce(other)
        if m is None:
            return NotImplemented
        return FFElement(self.field, self.field.add_codes(self.n, m))

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.field, self.field.neg_code(self.n))

    def __sub__(self, other):
        m = self._coerce(other)
        if m is None:
            return NotImplemented
        return FFElement(self.field, self.field.add_codes(self.n, self.field.neg_code(m)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        m = self._coerce(other)
        if m is None:
            return NotImplemented
        return FFElement(self.field, self.field.mul_codes(self.n, m))

    __rmul__ = __mul__

    def inverse(self):
        return FFElement(self.field, self.field.inv_code(self.n))

    def __truediv__(self, other):
        m = self._coerce(other)
        if m is None:
            return NotImplemented
        return FFElement(self.field, self.field.mul_codes(self.n, self.field.inv_code(m)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = FFElement(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        m = self._coerce(other)
        if m is None:
            return NotImplemented
        return self.n == m

    def __lt__(self, other):
        # ordering by code; only used for canonical sorting
        return self.n < other.n

    def __hash__(self):
        return hash((self.field.q, self.n))

    def __bool__(self):
        return self.n != 0

    def __int__(self):
        return self.n

    def __repr__(self):
        return str(self.n)


def ring_from_name(name: str) -> Ring:
    """Parse "ZZ", "QQ" or "Fq:<q>"."""
    name = name.strip()
    if name == "ZZ":
        return ZZ
    if name == "QQ":
        return QQ
    if name.startswith("Fq:"):
        try:
            q = int(name[3:])
        except ValueError:
            raise ValueError(f"bad field size in {name!r}") from None
        return GF(q)
    raise ValueError(f"unknown ring {name!r}")


def ring_name(ring: Ring) -> str:
    return ring.kind


def valuation(x, p: int) -> float | int:
    """p-adic valuation of an int or Fraction; infinity for zero."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v
