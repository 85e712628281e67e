"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(m)-1), reduced
modulo the m-th cyclotomic polynomial.  Because Z[zeta_m] is the full ring of
integers of Q(zeta_m) and has this power basis as an integral basis, an element
is an algebraic integer exactly when all of its coordinates are integers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import InputError, MixedWalkError


class NumericAngle(InputError):
    """A floating point angle has no exact cyclotomic representation."""


class CycloDivisionByZero(MixedWalkError, ZeroDivisionError):
    pass


def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError(f"euler_phi needs m >= 1, got {m}")
    result, rest, p = m, m, 2
    while p * p <= rest:
        if rest % p == 0:
            while rest % p == 0:
                rest //= p
            result -= result // p
        p += 1
    if rest > 1:
        result -= result // rest
    return result


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


# --- integer polynomials, coefficient tuples with the constant term first ---

def int_poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def int_poly_divmod(a: Sequence, b: Sequence[int]):
    """Divide by a monic polynomial ``b``.  Works for any coefficient ring."""
    if b[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (0,), tuple(rem)
    quo = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c:
            quo[i - db] = c
            for j in range(db + 1):
                rem[i - db + j] -= c * b[j]
    rem = rem[:db] or [0]
    return tuple(quo), tuple(rem)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> tuple[int, ...]:
    """Phi_d as an integer coefficient tuple, constant term first.

    Computed as (x^d - 1) / prod_{e | d, e < d} Phi_e.

    >>> cyclotomic_polynomial(6)
    (1, -1, 1)
    """
    if d < 1:
        raise ValueError(f"cyclotomic_polynomial needs d >= 1, got {d}")
    num: tuple[int, ...] = (-1,) + (0,) * (d - 1) + (1,)
    for e in divisors(d)[:-1]:
        num, rem = int_poly_divmod(num, cyclotomic_polynomial(e))
        assert not any(rem)
    return tuple(num)


@lru_cache(maxsize=None)
def power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row e holds the power-basis coordinates of zeta_m^e, for 0 <= e < m."""
    phi_m = cyclotomic_polynomial(m)
    deg = len(phi_m) - 1
    rows = []
    for e in range(m):
        mono = [0] * e + [1]
        _, rem = int_poly_divmod(mono, phi_m)
        rows.append(tuple(rem) + (0,) * (deg - len(rem)))
    return tuple(rows)


# --- angles ---------------------------------------------------------------

@dataclass(frozen=True)
class RationalAngle:
    """The angle 2*pi*num/den with 0 <= num/den < 1, stored reduced."""

    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise InputError(f"angle denominator must be positive, got {self.den}")
        frac = Fraction(self.num, self.den) % 1
        object.__setattr__(self, "num", frac.numerator)
        object.__setattr__(self, "den", frac.denominator)

    @property
    def conductor(self) -> int:
        return self.den

    @property
    def radians(self) -> float:
        return 2 * math.pi * self.num / self.den

    def __str__(self):
        return f"{self.num}/{self.den}"


@dataclass(frozen=True)
class FloatAngle:
    radians: float

    def __str__(self):
        return f"{self.radians!r}rad"


Angle = RationalAngle | FloatAngle


def parse_angle(text: str) -> RationalAngle:
    """Parse ``A/B`` (meaning eta = 2*pi*A/B) into a RationalAngle."""
    try:
        frac = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse angle fraction {text!r}") from exc
    return RationalAngle(frac.numerator, frac.denominator)


# --- field elements -------------------------------------------------------

def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


class CycloElem:
    """An element of Q(zeta_m) in the power basis modulo Phi_m."""

    __slots__ = ("m", "coeffs")
    __hash__ = None  # equality lifts across conductors, so no stable hash

    def __init__(self, m: int, coeffs: Iterable = ()):
        if m < 1:
            raise ValueError(f"conductor must be >= 1, got {m}")
        deg = euler_phi(m)
        cs = [_as_fraction(c) for c in coeffs]
        if len(cs) > deg:
            raise ValueError(f"{len(cs)} coefficients exceed phi({m}) = {deg}; use from_exponents")
        cs += [Fraction(0)] * (deg - len(cs))
        self.m = m
        self.coeffs = tuple(cs)

    @classmethod
    def from_exponents(cls, m: int, terms: Mapping[int, object]) -> "CycloElem":
        """Build sum c * zeta_m^e for arbitrary integer exponents e."""
        table = power_table(m)
        acc = [Fraction(0)] * euler_phi(m)
        for e, c in terms.items():
            c = _as_fraction(c)
            if c:
                for j, t in enumerate(table[e % m]):
                    if t:
                        acc[j] += c * t
        return cls(m, acc)

    @classmethod
    def rational(cls, x, m: int = 1) -> "CycloElem":
        return cls(m, [_as_fraction(x)])

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CycloElem":
        return cls.from_exponents(m, {k: 1})

    # structure

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def lift(self, m: int) -> "CycloElem":
        """Re-express in Q(zeta_m); requires self.m | m."""
        if m == self.m:
            return self
        if m % self.m:
            raise ValueError(f"cannot lift conductor {self.m} to {m}")
        step = m // self.m
        return CycloElem.from_exponents(m, {j * step: c for j, c in enumerate(self.coeffs)})

    def _coerce(self, other) -> tuple["CycloElem", "CycloElem"]:
        if not isinstance(other, CycloElem):
            other = CycloElem.rational(other, self.m)
        if other.m == self.m:
            return self, other
        m = math.lcm(self.m, other.m)
        return self.lift(m), other.lift(m)

    # arithmetic

    def __add__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CycloElem(a.m, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.m, [-x for x in self.coeffs])

    def __sub__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CycloElem(a.m, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloElem(self.m, [x * other for x in self.coeffs])
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        m = a.m
        folded = [Fraction(0)] * m
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        folded[(i + j) % m] += x * y
        return CycloElem.from_exponents(m, {e: c for e, c in enumerate(folded) if c})

    __rmul__ = __mul__

    def inv(self) -> "CycloElem":
        if self.is_zero():
            raise CycloDivisionByZero("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycloElem.rational(1 / self.coeffs[0], self.m)
        # columns of the multiplication-by-self matrix
        deg = self.degree
        cols = [(self * CycloElem.zeta(self.m, j)).coeffs for j in range(deg)]
        mat = [[cols[j][i] for j in range(deg)] for i in range(deg)]
        rhs = [Fraction(1)] + [Fraction(0)] * (deg - 1)
        return CycloElem(self.m, solve_rational(mat, rhs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise CycloDivisionByZero("division by zero")
            return CycloElem(self.m, [x / other for x in self.coeffs])
        if not isinstance(other, CycloElem):
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out, base = CycloElem.rational(1, self.m), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def galois(self, s: int) -> "CycloElem":
        """Apply the automorphism zeta_m -> zeta_m^s (gcd(s, m) = 1)."""
        if math.gcd(s, self.m) != 1:
            raise ValueError(f"{s} is not a unit mod {self.m}")
        return CycloElem.from_exponents(self.m, {j * s: c for j, c in enumerate(self.coeffs)})

    def conj(self) -> "CycloElem":
        return self.galois(-1)

    def norm(self) -> Fraction:
        """Field norm down to Q: product of all Galois conjugates."""
        out = CycloElem.rational(1, self.m)
        for s in range(1, self.m + 1):
            if math.gcd(s, self.m) == 1:
                out = out * self.galois(s)
        return out.to_fraction()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycloElem):
            return NotImplemented
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    def to_complex(self) -> complex:
        m = self.m
        return sum((float(c) * cmath.exp(2j * math.pi * j / m) for j, c in enumerate(self.coeffs) if c), 0j)

    def __complex__(self):
        return self.to_complex()

    def __repr__(self):
        return f"CycloElem({self.m}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else "-" if c == -1 else f"({c})"
                terms.append(f"{head}ζ{self.m}^{j}")
        return " + ".join(terms) if terms else "0"


def unit_from_angle(eta: Angle) -> CycloElem:
    """e^{i*eta} as the exact element zeta_b^a."""
    if isinstance(eta, FloatAngle):
        raise NumericAngle(f"angle {eta} has no exact representation")
    return CycloElem.zeta(eta.den, eta.num)


def is_algebraic_integer(e: CycloElem) -> bool:
    return all(c.denominator == 1 for c in e.coeffs)


def solve_rational(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over Q for a nonsingular square system."""
    n = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise CycloDivisionByZero("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[-1] for row in aug]
