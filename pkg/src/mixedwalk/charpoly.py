"""Characteristic polynomials f, g and the inherited factor Psi, with their coefficient identities.

Notation follows the walk literature:

    f(x)   = det(xI - H_eta)               = sum c_i x^i
    g(x)   = det(xI - D^-1/2 H_eta D^-1/2) = sum d_i x^i
    Psi(x) = (2x)^n g((x + 1/x) / 2)       = sum alpha_j x^j

and det(xI - U_theta) = (x^2 - 1)^(m - n) Psi(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cyclo import Angle, CycloElem, FloatAngle
from .errors import ImplementationMismatch, InputError
from .graph import MixedGraph, triangle_count
from .matrices import (EXACT, NUMERIC, FieldMatrix, _exact_matmul, hermitian_adjacency,
                       normalized_hermitian, random_walk_hermitian, time_evolution)

NUMERIC_TOL = 1e-8


class JOutOfRange(InputError):
    pass


class Poly:
    """Dense univariate polynomial, constant term first.

    Exact polynomials hold CycloElem coefficients sharing one conductor;
    numeric ones hold complex floats.
    """

    __slots__ = ("coeffs", "exact")
    __hash__ = None

    def __init__(self, coeffs: Sequence, exact: bool | None = None):
        cs = list(coeffs)
        if exact is None:
            exact = not any(isinstance(c, (complex, float, np.complexfloating, np.floating)) for c in cs)
        if exact:
            cs = [c if isinstance(c, CycloElem) else CycloElem.rational(c) for c in cs]
            m = math.lcm(1, *(c.m for c in cs))
            cs = [c.lift(m) for c in cs]
            while len(cs) > 1 and cs[-1].is_zero():
                cs.pop()
            if not cs:
                cs = [CycloElem.rational(0, m)]
        else:
            cs = [complex(c) for c in cs]
            while len(cs) > 1 and cs[-1] == 0:
                cs.pop()
            if not cs:
                cs = [0j]
        self.coeffs = tuple(cs)
        self.exact = exact

    @classmethod
    def monomial(cls, k: int, exact: bool = True) -> "Poly":
        one = CycloElem.rational(1) if exact else 1 + 0j
        zero = CycloElem.rational(0) if exact else 0j
        return cls([zero] * k + [one], exact)

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        """Numeric monic polynomial with the given roots."""
        return cls(np.poly(np.asarray(roots, dtype=complex))[::-1], exact=False)

    @property
    def conductor(self) -> int | None:
        return self.coeffs[0].m if self.exact else None

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and (self.coeffs[0] == 0):
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return CycloElem.rational(0, self.conductor) if self.exact else 0j

    def is_rational(self) -> bool:
        return self.exact and all(c.is_rational() for c in self.coeffs)

    def to_fractions(self) -> list[Fraction]:
        return [c.to_fraction() for c in self.coeffs]

    def to_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def to_numeric(self) -> "Poly":
        return Poly(self.to_complex(), exact=False)

    def _lift(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if self.exact != other.exact:
            raise TypeError("cannot mix exact and numeric polynomials")
        return self, other

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self._lift(other)
        n = max(len(a.coeffs), len(b.coeffs))
        return Poly([a.coeff(i) + b.coeff(i) for i in range(n)], a.exact)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], self.exact)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs], self.exact)
        a, b = self._lift(other)
        if not a.exact:
            return Poly(np.convolve(a.to_complex(), b.to_complex()), exact=False)
        if a.is_rational() and b.is_rational():
            fa, fb = a.to_fractions(), b.to_fractions()
            conv = [Fraction(0)] * (len(fa) + len(fb) - 1)
            for i, x in enumerate(fa):
                if x:
                    for j, y in enumerate(fb):
                        conv[i + j] += x * y
            m = a.conductor
            return Poly([CycloElem(m, [c]) for c in conv], True)
        out = [CycloElem.rational(0, a.conductor)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(b.coeffs):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return Poly(out, True)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.monomial(0, self.exact)
        for _ in range(k):
            out = out * self
        return out

    def divmod_monic(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        if not divisor.is_monic:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        if len(rem) - 1 < d:
            return Poly([0], self.exact), self
        quo = [None] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            quo[i - d] = c
            for j in range(d + 1):
                rem[i - d + j] = rem[i - d + j] - c * divisor.coeffs[j]
        return Poly(quo, self.exact), Poly(rem[:d] or [0], self.exact)

    def galois(self, s: int) -> "Poly":
        return Poly([c.galois(s) for c in self.coeffs], True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly) or self.exact != other.exact:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(i) == other.coeff(i) for i in range(n))

    def max_coeff_diff(self, other: "Poly") -> float:
        a, b = self.to_complex(), other.to_complex()
        n = max(len(a), len(b))
        a = np.pad(a, (0, n - len(a)))
        b = np.pad(b, (0, n - len(b)))
        return float(np.abs(a - b).max(initial=0.0))

    def close_to(self, other: "Poly", tol: float = NUMERIC_TOL) -> bool:
        return self.max_coeff_diff(other) <= tol

    def to_json(self) -> list[str]:
        if self.exact:
            return [str(c) for c in self.coeffs]
        return [f"{c.real!r},{c.imag!r}" for c in self.coeffs]

    def __repr__(self):
        return f"Poly({self.to_json()})"

    def __str__(self):
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            cs = str(c)
            if mono and cs == "1":
                terms.append(mono)
            elif mono and cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(f"({cs}){mono}" if mono else cs)
        return " + ".join(terms) or "0"


X2_MINUS_1 = Poly([-1, 0, 1])
X2_PLUS_1 = Poly([1, 0, 1])


# --- characteristic polynomial --------------------------------------------

def charpoly(mat: FieldMatrix) -> Poly:
    """det(xI - M).  Exact: Faddeev-LeVerrier on the integer numerators.  Numeric: from eigenvalues."""
    if not mat.is_square:
        raise ValueError("charpoly needs a square matrix")
    if not mat.is_exact:
        if mat.shape[0] == 0:
            return Poly([1], exact=False)
        return Poly.from_roots(np.linalg.eigvals(mat.data))
    m, den, n = mat.conductor, mat.den, mat.shape[0]
    b = _faddeev_leverrier(mat.num, m)
    # M = B / den, so the x^i coefficient of det(xI - M) is b_i / den^(n - i).
    coeffs = [CycloElem(m, [Fraction(int(x), den ** (n - i)) for x in bi]) for i, bi in enumerate(b)]
    return Poly(coeffs, True)


def _faddeev_leverrier(num: np.ndarray, m: int) -> list[list[int]]:
    """Integer coordinates of the charpoly coefficients of a matrix over Z[zeta_m].

    c_n = 1; M_1 = I; c_{n-k} = -tr(B M_k) / k; M_{k+1} = B M_k + c_{n-k} I.
    Every division by k is exact because the coefficients lie in Z[zeta_m].
    """
    phi, n, _ = num.shape
    coeffs: list[list[int]] = [None] * (n + 1)
    coeffs[n] = [1] + [0] * (phi - 1)
    eye = np.zeros_like(num)
    for i in range(n):
        eye[0, i, i] = 1
    mk = eye
    diag = np.arange(n)
    for k in range(1, n + 1):
        if k < n:
            prod = _exact_matmul(num, mk, m)
            tr = [int(prod[j, diag, diag].sum()) for j in range(phi)]
        else:
            # only the trace of B M_n is needed
            tr = _trace_of_product(num, mk, m)
        c = []
        for t in tr:
            q, r = divmod(-t, k)
            if r:
                raise ImplementationMismatch(f"Faddeev-LeVerrier division by {k} left remainder {r}")
            c.append(q)
        coeffs[n - k] = c
        if k < n:
            mk = prod
            for j in range(phi):
                if c[j]:
                    mk[j, diag, diag] += c[j]
    return coeffs


def _trace_of_product(a: np.ndarray, b: np.ndarray, m: int) -> list[int]:
    phi = a.shape[0]
    from .matrices import _remap_table

    conv = [0] * (2 * phi - 1)
    for i in range(phi):
        for j in range(phi):
            conv[i + j] += int((a[i] * b[j].T).sum())
    table = _remap_table(m, tuple(range(2 * phi - 1)), m)
    return [int(sum(int(table[k, e]) * conv[e] for e in range(2 * phi - 1))) for k in range(phi)]


# --- index sets and the inherited factor ----------------------------------

def index_set(n: int, j: int) -> set[tuple[int, int]]:
    """I_j = {(i, l) : 0 <= l <= i <= n, n + 2l - i = j}."""
    if not 0 <= j <= 2 * n:
        raise JOutOfRange(f"j must lie in 0..{2 * n}, got {j}")
    out = set()
    for i in range(n + 1):
        twice_l = j - n + i
        if twice_l % 2 == 0 and 0 <= twice_l // 2 <= i:
            out.add((i, twice_l // 2))
    return out


def _psi_by_substitution(g: Poly, n: int) -> Poly:
    # (2x)^n g((x + 1/x)/2) = sum_i d_i (2x)^(n-i) (x^2 + 1)^i; the basis polynomials
    # (2x)^(n-i) (x^2 + 1)^i are integer and built by repeated multiplication
    y_pow = [[1]]
    for _ in range(n):
        prev = y_pow[-1]
        y_pow.append([a + b for a, b in zip(prev + [0, 0], [0, 0] + prev)])
    zero = CycloElem.rational(0, g.conductor) if g.exact else 0j
    alphas = [zero] * (2 * n + 1)
    for i in range(n + 1):
        d = g.coeff(i)
        if d == 0:
            continue
        shift, scale = n - i, 2 ** (n - i)
        for j, b in enumerate(y_pow[i]):
            if b:
                alphas[j + shift] = alphas[j + shift] + d * (scale * b)
    return Poly(alphas, g.exact)


def _psi_by_index_sets(g: Poly, n: int) -> Poly:
    alphas = []
    for j in range(2 * n + 1):
        acc = CycloElem.rational(0, g.conductor) if g.exact else 0j
        for i, l in index_set(n, j):
            acc = acc + g.coeff(i) * (2 ** (n - i) * math.comb(i, l))
        alphas.append(acc)
    return Poly(alphas, g.exact)


def inherited_factor(g: Poly, n: int | None = None, tol: float = NUMERIC_TOL) -> Poly:
    """Psi computed by Laurent substitution and by the index-set sums; both must agree."""
    n = g.degree if n is None else n
    if g.degree != n:
        raise ValueError(f"g has degree {g.degree}, expected {n}")
    by_sub = _psi_by_substitution(g, n)
    by_sets = _psi_by_index_sets(g, n)
    same = by_sub == by_sets if g.exact else by_sub.close_to(by_sets, tol)
    if not same:
        raise ImplementationMismatch(f"Psi by substitution {by_sub} != Psi by index sets {by_sets}")
    return by_sets


def exact_possible(g: MixedGraph, eta: Angle) -> bool:
    return g.is_undirected or not isinstance(eta, FloatAngle)


def g_poly(g: MixedGraph, eta: Angle, mode: str = EXACT) -> Poly:
    """det(xI - D^-1/2 H D^-1/2); exact mode goes through the similar matrix D^-1 H."""
    if mode == NUMERIC:
        return charpoly(normalized_hermitian(g, eta, NUMERIC))
    return charpoly(random_walk_hermitian(g, eta, EXACT))


def f_poly(g: MixedGraph, eta: Angle, mode: str = EXACT) -> Poly:
    return charpoly(hermitian_adjacency(g, eta, mode))


def psi_poly(g: MixedGraph, eta: Angle, mode: str = EXACT) -> Poly:
    return inherited_factor(g_poly(g, eta, mode), g.n)


def birth_exponent(g: MixedGraph) -> int:
    return g.m - g.n


def evolution_charpoly_from_psi(psi: Poly, birth: int) -> Poly:
    """(x^2 - 1)^birth * Psi, dividing Psi exactly when birth < 0 (trees)."""
    x21 = X2_MINUS_1 if psi.exact else X2_MINUS_1.to_numeric()
    if birth >= 0:
        return psi * (x21 ** birth)
    quo, rem = psi.divmod_monic(x21 ** (-birth))
    if rem.exact and rem != Poly([0]):
        raise ImplementationMismatch(f"(x^2-1)^{-birth} does not divide Psi = {psi}")
    return quo


@dataclass
class SpectralMapResult:
    holds: bool
    mode: str
    birth: int
    lhs: Poly
    rhs: Poly
    max_diff: float


def spectral_map(g: MixedGraph, eta: Angle, mode: str = EXACT, tol: float = NUMERIC_TOL) -> SpectralMapResult:
    """Compare det(xI - U) with (x^2-1)^(m-n) Psi; for trees compare det(xI - U)(x^2-1) with Psi."""
    lhs = charpoly(time_evolution(g, eta, mode))
    psi = psi_poly(g, eta, mode)
    birth = birth_exponent(g)
    x21 = X2_MINUS_1 if mode == EXACT else X2_MINUS_1.to_numeric()
    if birth >= 0:
        rhs = psi * (x21 ** birth)
    else:
        lhs = lhs * (x21 ** (-birth))
        rhs = psi
    diff = lhs.max_coeff_diff(rhs)
    holds = (lhs == rhs) if mode == EXACT else diff <= tol
    return SpectralMapResult(holds, mode, birth, lhs, rhs, diff)


def spectral_map_check(g: MixedGraph, eta: Angle, mode: str = EXACT, tol: float = NUMERIC_TOL) -> bool:
    return spectral_map(g, eta, mode, tol).holds


# --- coefficient identities ------------------------------------------------

@dataclass
class IdentityCheck:
    name: str
    holds: bool
    lhs: object
    rhs: object

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "lhs": str(self.lhs), "rhs": str(self.rhs)}


@dataclass
class CoefficientReport:
    mode: str
    f: Poly
    g: Poly
    psi: Poly
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    def failed(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.holds]

    def to_dict(self) -> dict:
        return {"mode": self.mode, "all_hold": self.all_hold, "f": self.f.to_json(), "g": self.g.to_json(),
                "psi": self.psi.to_json(), "checks": [c.to_dict() for c in self.checks]}


def coefficient_identities(g: MixedGraph, eta: Angle, mode: str | None = None,
                           tol: float = NUMERIC_TOL) -> CoefficientReport:
    """Evaluate every coefficient identity that applies to ``g``.

    Regular-graph identities are checked only when ``g`` is regular and the
    triangle identity only when ``g`` is undirected.
    """
    if mode is None:
        mode = EXACT if exact_possible(g, eta) else NUMERIC
    f = f_poly(g, eta, mode)
    gp = g_poly(g, eta, mode)
    psi = inherited_factor(gp, g.n)
    n = g.n
    rep = CoefficientReport(mode, f, gp, psi)

    def eq(a, b) -> bool:
        if mode == EXACT:
            return a == b
        return abs(complex(a) - complex(b)) <= tol

    def check(name, lhs, rhs):
        rep.checks.append(IdentityCheck(name, eq(lhs, rhs), lhs, rhs))

    def d(i):
        return gp.coeff(i) if i >= 0 else 0

    check("c_{n-1} = 0", f.coeff(n - 1), 0)
    check("d_{n-1} = 0", gp.coeff(n - 1), 0)
    check("c_{n-2} = -|E|", f.coeff(n - 2), -g.m)
    if g.is_undirected and n >= 3:
        check("c_{n-3} = -2t", f.coeff(n - 3), -2 * triangle_count(g))
    check("alpha_{2n} = 1", psi.coeff(2 * n), 1)
    check("alpha_{2n-1} = 0", psi.coeff(2 * n - 1), 0)
    check("alpha_{2n-2} = n + 4 d_{n-2}", psi.coeff(2 * n - 2), d(n - 2) * 4 + n)
    check("alpha_{2n-3} = 8 d_{n-3}", psi.coeff(2 * n - 3), d(n - 3) * 8 if n >= 3 else 0)
    k = g.is_regular()
    if k is not None:
        for i in range(n + 1):
            rhs = f.coeff(i) * Fraction(1, k ** (n - i)) if mode == EXACT else f.coeff(i) / k ** (n - i)
            check(f"d_{i} = c_{i} / k^{n - i}", gp.coeff(i), rhs)
        check("alpha_{2n-2} = n - 2n/k", psi.coeff(2 * n - 2), Fraction(n) - Fraction(2 * n, k))
    return rep
