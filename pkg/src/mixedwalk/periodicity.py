"""Periodicity of the walk: necessary conditions, exact decision and a numeric fallback.

U_theta^tau = I exactly when every eigenvalue of U_theta is a tau-th root of
unity, so the period is the lcm of the eigenvalue orders.  The exact path reads
those orders off a cyclotomic factorization of det(xI - U_theta) (or of its
norm down to Q when the coefficients are not rational) and then confirms
U^tau = I and U^(tau/p) != I by exact matrix powers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .charpoly import Poly, birth_exponent, evolution_charpoly_from_psi, exact_possible, psi_poly
from .cyclo import (Angle, RationalAngle, cyclotomic_polynomial, euler_phi, int_poly_divmod,
                    is_algebraic_integer, prime_factors)
from .errors import ImplementationMismatch, InputError
from .graph import MixedGraph, triangle_count
from .matrices import EXACT, NUMERIC, time_evolution

PERIODIC = "Periodic"
NOT_PERIODIC = "NotPeriodic"
UNDECIDED = "UndecidedNumeric"

CYCLOTOMIC = "CyclotomicFactorization"
EXACT_POWER = "ExactPowerCheck"
NUMERIC_RATIONAL = "NumericRationalization"
NECESSARY = "NecessaryCondition"

PASS, FAIL, NA = "pass", "fail", "not-applicable"

TAU_MAX = 10**6
Q_MAX = 10**4
UNIT_TOL = 1e-9
RATIONAL_TOL = 1e-9
POWER_TOL = 1e-8


class NotRegular(InputError):
    pass


class NotUndirected(InputError):
    pass


class NotMonic(InputError):
    pass


class NotIntegerCoefficients(InputError):
    pass


# --- necessary conditions --------------------------------------------------

def check_2nk(g: MixedGraph) -> bool:
    """True iff k divides 2n for the k-regular graph g."""
    k = g.is_regular()
    if k is None:
        raise NotRegular("2n/k needs a regular graph")
    return (2 * g.n) % k == 0


def check_16t(g: MixedGraph) -> bool:
    """True iff k^3 divides 16t for the k-regular undirected graph g."""
    k = g.is_regular()
    if k is None:
        raise NotRegular("16t/k^3 needs a regular graph")
    if not g.is_undirected:
        raise NotUndirected("16t/k^3 applies to undirected graphs only")
    return (16 * triangle_count(g)) % k**3 == 0


def necessary_conditions(g: MixedGraph) -> dict[str, str]:
    k = g.is_regular()
    c2 = NA if k is None else (PASS if check_2nk(g) else FAIL)
    c16 = NA if k is None or not g.is_undirected else (PASS if check_16t(g) else FAIL)
    return {"2n/k": c2, "16t/k^3": c16}


# --- roots of unity ---------------------------------------------------------

def _convergents(x: float):
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    for _ in range(64):
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield h1, k1
        frac = x - a
        if frac < 1e-15:
            return
        x = 1 / frac


def rationalize_root(lam: complex, q_max: int = Q_MAX, tol: float = RATIONAL_TOL) -> Fraction | None:
    """p/q in [0, 1) with lam = e^{2 pi i p/q} within tol, using continued-fraction convergents."""
    if abs(abs(lam) - 1) > tol:
        return None
    x = (cmath.phase(lam) / (2 * math.pi)) % 1.0
    for p, q in _convergents(x):
        if q > q_max:
            return None
        if abs(lam - cmath.exp(2j * math.pi * p / q)) <= tol:
            return Fraction(p % q, q)
    return None


def _integer_coefficients(poly) -> list[int]:
    if isinstance(poly, Poly):
        if not poly.is_rational():
            raise NotIntegerCoefficients("polynomial has non-rational coefficients")
        coeffs = poly.to_fractions()
    else:
        coeffs = [Fraction(c) for c in poly]
    if any(c.denominator != 1 for c in coeffs):
        raise NotIntegerCoefficients("polynomial has non-integer coefficients")
    return [int(c) for c in coeffs]


def is_cyclotomic_product(poly: Poly | Sequence) -> list[tuple[int, int]] | None:
    """Factor a monic integer polynomial as prod Phi_d^e_d, or None if some other factor remains."""
    rest = _integer_coefficients(poly)
    while len(rest) > 1 and rest[-1] == 0:
        rest.pop()
    if rest[-1] != 1:
        raise NotMonic(f"leading coefficient {rest[-1]} != 1")
    out = []
    deg = len(rest) - 1
    d = 1
    # phi(d) >= sqrt(d / 2), so d <= 2 deg^2 bounds every candidate
    while deg > 0 and d <= 2 * deg * deg:
        if euler_phi(d) <= deg:
            phi_d = cyclotomic_polynomial(d)
            e = 0
            while len(rest) - 1 >= len(phi_d) - 1:
                quo, rem = int_poly_divmod(rest, phi_d)
                if any(rem):
                    break
                rest, e = list(quo), e + 1
            if e:
                out.append((d, e))
                deg = len(rest) - 1
        d += 1
    return out if len(rest) == 1 else None


def algebraic_integer_coefficients(psi: Poly) -> bool:
    return all(is_algebraic_integer(c) for c in psi.coeffs)


def norm_poly(p: Poly) -> Poly:
    """prod over Galois automorphisms of Q(zeta_m) of p; a polynomial over Q."""
    if p.is_rational():
        return p
    m = p.conductor
    out = p
    for s in range(2, m):
        if math.gcd(s, m) == 1:
            out = out * p.galois(s)
    if not out.is_rational():
        raise ImplementationMismatch("norm polynomial is not rational")
    return out


# --- the decision ------------------------------------------------------------

@dataclass
class PeriodicityReport:
    verdict: str
    tau: int | None
    method: str
    conditions: dict[str, str]
    eigen_orders: list = field(default_factory=list)
    witness: str | None = None
    psi: Poly | None = None
    alpha_2n_2: Fraction | complex | None = None

    @property
    def periodic(self) -> bool:
        return self.verdict == PERIODIC

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "tau": self.tau,
            "method": self.method,
            "conditions": dict(self.conditions),
            "eigen_orders": [list(e) for e in self.eigen_orders],
            "witness": self.witness,
            "psi": self.psi.to_json() if self.psi is not None else None,
            "alpha_2n_2": None if self.alpha_2n_2 is None else str(self.alpha_2n_2),
        }


def _alpha_closed_form(g: MixedGraph) -> Fraction | None:
    k = g.is_regular()
    return None if k is None else Fraction(g.n) - Fraction(2 * g.n, k)


def decide_periodicity(g: MixedGraph, eta: Angle, tau_max: int = TAU_MAX, *, exact: bool | None = None,
                       q_max: int = Q_MAX, tol: float = RATIONAL_TOL, power_tol: float = POWER_TOL
                       ) -> PeriodicityReport:
    """Run the necessary conditions, then the exact pipeline if the angle allows it, else numerics."""
    conds = necessary_conditions(g)
    failed = [name for name, state in conds.items() if state == FAIL]
    if failed:
        k = g.is_regular()
        if "2n/k" in failed:
            why = f"2n/k = {Fraction(2 * g.n, k)} is not an integer"
        else:
            why = f"16t/k^3 = {Fraction(16 * triangle_count(g), k**3)} is not an integer"
        return PeriodicityReport(NOT_PERIODIC, None, NECESSARY, conds, witness=why,
                                 alpha_2n_2=_alpha_closed_form(g))
    if exact is None:
        exact = exact_possible(g, eta)
    if exact:
        if not exact_possible(g, eta):
            raise InputError("exact decision needs a rational angle or an undirected graph")
        eta_e = eta if isinstance(eta, RationalAngle) else RationalAngle(0, 1)
        return _decide_exact(g, eta_e, tau_max, conds)
    return _decide_numeric(g, eta, tau_max, conds, q_max, tol, power_tol)


def _decide_exact(g: MixedGraph, eta: RationalAngle, tau_max: int, conds) -> PeriodicityReport:
    psi = psi_poly(g, eta, EXACT)
    rational = psi.is_rational()
    method = CYCLOTOMIC if rational else EXACT_POWER
    alpha = psi.coeff(2 * g.n - 2)
    alpha = alpha.to_fraction() if alpha.is_rational() else alpha

    def report(verdict, tau=None, orders=(), witness=None):
        return PeriodicityReport(verdict, tau, method, conds, list(orders), witness, psi, alpha)

    if not algebraic_integer_coefficients(psi):
        bad = next(c for c in psi.coeffs if not is_algebraic_integer(c))
        return report(NOT_PERIODIC, witness=f"Psi has coefficient {bad} outside Z[zeta_{psi.conductor}]")
    char_u = evolution_charpoly_from_psi(psi, birth_exponent(g))
    over_q = norm_poly(char_u)
    factors = is_cyclotomic_product(over_q)
    if factors is None:
        return report(NOT_PERIODIC, witness="det(xI - U) has a factor that is not cyclotomic")
    # each root order d appears in over_q with phi(d) * e_d roots, spread evenly over the conjugates
    spread = over_q.degree // char_u.degree
    orders = [(d, euler_phi(d) * e // spread) for d, e in factors]
    tau = math.lcm(*(d for d, _ in factors))
    if tau > tau_max:
        return report(UNDECIDED, orders=orders, witness=f"period {tau} exceeds tau_max {tau_max}")
    u = time_evolution(g, eta, EXACT)
    if not u.power(tau).is_identity():
        raise ImplementationMismatch(f"U^{tau} != I although every eigenvalue order divides {tau}")
    for p in prime_factors(tau):
        if u.power(tau // p).is_identity():
            raise ImplementationMismatch(f"U^{tau // p} = I contradicts the eigenvalue orders")
    return report(PERIODIC, tau, orders)


def _decide_numeric(g: MixedGraph, eta: Angle, tau_max: int, conds, q_max, tol, power_tol) -> PeriodicityReport:
    u = time_evolution(g, eta, NUMERIC)
    eig = np.linalg.eigvals(u.data)
    fracs = [rationalize_root(lam, q_max, tol) for lam in eig]
    counts: dict = {}
    for f in fracs:
        key = f.denominator if f is not None else "non-unity"
        counts[key] = counts.get(key, 0) + 1
    orders = sorted(counts.items(), key=lambda kv: (isinstance(kv[0], str), kv[0]))
    alpha = _alpha_closed_form(g)

    def report(verdict, tau=None, witness=None):
        return PeriodicityReport(verdict, tau, NUMERIC_RATIONAL, conds, orders, witness, None, alpha)

    if any(f is None for f in fracs):
        off_circle = [lam for lam in eig if abs(abs(lam) - 1) > tol]
        if off_circle:
            return report(NOT_PERIODIC, witness=f"eigenvalue {off_circle[0]:.6g} is off the unit circle")
        lam = next(lam for lam, f in zip(eig, fracs) if f is None)
        return report(UNDECIDED, witness=f"eigenvalue {lam:.12g} is not a root of unity of order <= {q_max}")
    tau = math.lcm(*(f.denominator for f in fracs))
    if tau > tau_max:
        return report(UNDECIDED, witness=f"period candidate {tau} exceeds tau_max {tau_max}")
    mat = u.data

    def dist(s):
        return float(np.abs(np.linalg.matrix_power(mat, s) - np.eye(len(mat))).max(initial=0.0))

    if dist(tau) > power_tol:
        return report(UNDECIDED, witness=f"||U^{tau} - I||_max = {dist(tau):.3g} exceeds {power_tol}")
    shrunk = True
    while shrunk and tau > 1:
        shrunk = False
        for p in prime_factors(tau):
            if dist(tau // p) <= power_tol:
                tau //= p
                shrunk = True
                break
    return report(PERIODIC, tau)


def verify_minimal_period(g: MixedGraph, eta: Angle, tau: int, mode: str = EXACT,
                          tol: float = POWER_TOL) -> bool:
    """U^tau = I and U^s != I for every proper divisor s of tau."""
    u = time_evolution(g, eta, mode)
    if not (u.power(tau).is_identity(tol)):
        return False
    return all(not u.power(tau // p).is_identity(tol) for p in prime_factors(tau))
