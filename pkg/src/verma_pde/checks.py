"""Randomized checks of the operator identities the construction relies on.

Each check draws one instance from a ``random.Random`` and returns a
:class:`CheckResult`.  Equalities are compared with
:meth:`Series.agrees_with`, i.e. on every term both sides know exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import Monomial, Series, TruncationPolicy, multiply, partial_derivative, variables
from .operators import (
    Weight,
    apply_d,
    apply_eta,
    apply_eta_power,
    apply_zeta,
    cartan_entry,
)
from .singular import build_eta_product, plan_from_map

DEPTH = 8


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def random_rational(rng: random.Random, max_den: int = 4, span: int = 6) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-span * den, span * den), den)


def random_weight(rng: random.Random, n: int, max_den: int = 3) -> Weight:
    return Weight(tuple(random_rational(rng, max_den, 3) for _ in range(n - 1)))


def random_monomial(rng: random.Random, n: int, max_den: int = 4) -> Monomial:
    exps = {}
    for v in variables(n):
        if v[0] - v[1] == 1:
            if rng.random() < 0.7:
                exps[v] = random_rational(rng, max_den, 3)
        elif rng.random() < 0.4:
            exps[v] = rng.randint(1, 2)
    return Monomial(exps)


def random_series(rng: random.Random, n: int, max_terms: int = 10, max_den: int = 4) -> Series:
    terms: dict[Monomial, Fraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        m = random_monomial(rng, n, max_den)
        terms[m] = terms.get(m, 0) + random_rational(rng, 3, 5)
    s = Series(terms)
    return s if not s.is_zero() else Series.one()


def _result(name: str, lhs: Series, rhs: Series, info: str) -> CheckResult:
    ok = lhs.agrees_with(rhs)
    detail = info if ok else f"{info}: lhs={lhs!s} rhs={rhs!s}"
    return CheckResult(name, ok, detail)


def check_d_eta_power(rng: random.Random, n: int, depth: int = DEPTH) -> CheckResult:
    """[d_l, eta_i^mu] = mu delta_{il} eta_i^{mu-1} (1 - mu + zeta_i)."""
    policy = TruncationPolicy(depth)
    lam = random_weight(rng, n)
    i, l = rng.randint(1, n - 1), rng.randint(1, n - 1)
    mu = random_rational(rng)
    s = random_series(rng, n)
    lhs = apply_d(l, lam, apply_eta_power(i, mu, s, policy)) \
        - apply_eta_power(i, mu, apply_d(l, lam, s), policy)
    if i == l:
        inner = s.scale(1 - mu) + apply_zeta(i, lam, s)
        rhs = apply_eta_power(i, mu - 1, inner, policy).scale(mu)
    else:
        rhs = Series.zero()
    return _result("d-eta-power", lhs, rhs, f"n={n} lam={lam} i={i} l={l} mu={mu}")


def check_zeta_eta_power(rng: random.Random, n: int, depth: int = DEPTH) -> CheckResult:
    """[zeta_l, eta_i^mu] = -mu a_{l,i} eta_i^mu."""
    policy = TruncationPolicy(depth)
    lam = random_weight(rng, n)
    i, l = rng.randint(1, n - 1), rng.randint(1, n - 1)
    mu = random_rational(rng)
    s = random_series(rng, n)
    e = apply_eta_power(i, mu, s, policy)
    lhs = apply_zeta(l, lam, e) - apply_eta_power(i, mu, apply_zeta(l, lam, s), policy)
    rhs = e.scale(-mu * cartan_entry(l, i))
    return _result("zeta-eta-power", lhs, rhs, f"n={n} lam={lam} i={i} l={l} mu={mu}")


def check_power_additivity(rng: random.Random, n: int, depth: int = DEPTH) -> CheckResult:
    policy = TruncationPolicy(depth)
    i = rng.randint(1, n - 1)
    mu1, mu2 = random_rational(rng), random_rational(rng)
    s = random_series(rng, n)
    lhs = apply_eta_power(i, mu1, apply_eta_power(i, mu2, s, policy), policy)
    rhs = apply_eta_power(i, mu1 + mu2, s, policy)
    return _result("power-additivity", lhs, rhs, f"n={n} i={i} mu1={mu1} mu2={mu2}")


def check_commuting_operators(rng: random.Random, n: int, depth: int = DEPTH) -> CheckResult:
    """d/dx_{r,s} and multiplication by x_{p,q} commute with eta_i^mu off the
    variables that eta_i touches."""
    policy = TruncationPolicy(depth)
    i = rng.randint(1, n - 1)
    mu = random_rational(rng)
    s = random_series(rng, n)
    blocked_d = {(i + 1, j) for j in range(1, i + 1)}
    blocked_x = {(i, j) for j in range(1, i)}
    rs = rng.choice([v for v in variables(n) if v not in blocked_d])
    pq = rng.choice([v for v in variables(n) if v not in blocked_x])
    x = Monomial.var(pq)
    lhs_d = partial_derivative(rs, apply_eta_power(i, mu, s, policy)) \
        - apply_eta_power(i, mu, partial_derivative(rs, s), policy)
    lhs_x = multiply(x, apply_eta_power(i, mu, s, policy)) \
        - apply_eta_power(i, mu, multiply(x, s), policy)
    ok = lhs_d.is_zero() and lhs_x.is_zero()
    info = f"n={n} i={i} mu={mu} d/d{rs} x{pq}"
    return CheckResult("commuting-operators", ok, info if ok else f"{info}: {lhs_d} | {lhs_x}")


def check_exchange(rng: random.Random, n: int, depth: int = DEPTH) -> CheckResult:
    """eta_i^a eta_{i+1}^{a+b} eta_i^b = eta_{i+1}^b eta_i^{a+b} eta_{i+1}^a."""
    policy = TruncationPolicy(depth)
    i = rng.randint(1, n - 2)
    a, b = random_rational(rng), random_rational(rng)
    s = random_series(rng, n, max_terms=4) if rng.random() < 0.5 else Series.one()

    def apply(steps, t):
        for r, e in reversed(steps):
            t = apply_eta_power(r, e, t, policy)
        return t

    lhs = apply([(i, a), (i + 1, a + b), (i, b)], s)
    rhs = apply([(i + 1, b), (i, a + b), (i + 1, a)], s)
    return _result("exchange", lhs, rhs, f"n={n} i={i} a={a} b={b}")


def random_root_map(rng: random.Random, n: int, max_len: int = 4) -> list[int]:
    roots: list[int] = []
    for _ in range(rng.randint(1, max_len)):
        choices = [r for r in range(1, n) if not roots or r != roots[-1]]
        roots.append(rng.choice(choices))
    return roots


def check_eta_product_solves(rng: random.Random, n: int, depth: int = DEPTH) -> CheckResult:
    """Every eta-product with the iota exponents is killed by all d_i."""
    lam = random_weight(rng, n)
    roots = random_root_map(rng, n)
    plan = plan_from_map(roots, lam)
    s = build_eta_product(plan, TruncationPolicy(depth), n)
    bad = [i for i in range(1, n) if not apply_d(i, lam, s).is_zero()]
    info = f"n={n} lam={lam} roots={roots} plan={plan}"
    return CheckResult("eta-product-solves", not bad, info if not bad else f"{info}: d{bad} nonzero")


def check_sl2_closure(rng: random.Random, n: int, depth: int = DEPTH) -> CheckResult:
    """[d_i, eta_j] = delta_ij zeta_i and [zeta_i, d_j] = a_ij d_j."""
    lam = random_weight(rng, n)
    i, j = rng.randint(1, n - 1), rng.randint(1, n - 1)
    s = random_series(rng, n)
    lhs1 = apply_d(i, lam, apply_eta(j, s)) - apply_eta(j, apply_d(i, lam, s))
    rhs1 = apply_zeta(i, lam, s) if i == j else Series.zero()
    lhs2 = apply_zeta(i, lam, apply_d(j, lam, s)) - apply_d(j, lam, apply_zeta(i, lam, s))
    rhs2 = apply_d(j, lam, s).scale(cartan_entry(i, j))
    ok = lhs1.agrees_with(rhs1) and lhs2.agrees_with(rhs2)
    return CheckResult("sl2-closure", ok, f"n={n} lam={lam} i={i} j={j}")


SUITES: dict[str, Callable[[random.Random, int, int], CheckResult]] = {
    "d-eta-power": check_d_eta_power,
    "zeta-eta-power": check_zeta_eta_power,
    "power-additivity": check_power_additivity,
    "commuting-operators": check_commuting_operators,
    "exchange": check_exchange,
    "eta-product-solves": check_eta_product_solves,
    "sl2-closure": check_sl2_closure,
}


def run_suite(name: str, count: int, seed: int, ns: tuple[int, ...] = (3, 4),
              depth: int = DEPTH) -> list[CheckResult]:
    """Run ``count`` instances, cycling through the sizes in ``ns``."""
    rng = random.Random(seed)
    check = SUITES[name]
    return [check(rng, ns[k % len(ns)], depth) for k in range(count)]
