"""Differential operators realizing the sl(n) action on the series ring.

``d_i``, ``eta_i`` and ``zeta_i`` are the images of E_{i,i+1}, E_{i+1,i} and
h_i.  ``eta_i`` raised to a rational power is the binomial-type expansion

    eta_i^mu = sum_p <mu>_p / p! * x_{i+1,i}^(mu - p) * (sum_{j<i} x_{i+1,j} d/dx_{i,j})^p

which is finite when mu is natural or when the derivative part runs out of
things to differentiate, and is cut by deep degree otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import (
    Monomial,
    Scalar,
    Series,
    TruncationPolicy,
    Var,
    apply_termwise,
    multiply,
    parse_rational,
    partial_derivative,
)

DEFAULT_POLICY = TruncationPolicy()


def cartan_entry(l: int, i: int) -> int:
    if l == i:
        return 2
    return -1 if abs(l - i) == 1 else 0


def cartan_matrix(n: int) -> list[list[int]]:
    return [[cartan_entry(l, i) for i in range(1, n)] for l in range(1, n)]


def inverse_cartan_entry(n: int, i: int, j: int) -> Fraction:
    return Fraction(min(i, j) * (n - max(i, j)), n)


@dataclass(frozen=True)
class Weight:
    """A weight of sl(n) given by its values lam[k-1] = lambda(h_k)."""

    lam: tuple[Fraction, ...]
    n: int = field(init=False)

    def __post_init__(self) -> None:
        lam = tuple(parse_rational(x) for x in self.lam)
        if len(lam) < 1:
            raise ValueError("a weight of sl(n) needs n - 1 >= 1 entries")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "n", len(lam) + 1)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Weight":
        w = cls(tuple(t for t in text.split(",")))
        if n is not None and w.n != n:
            raise ValueError(f"weight has {len(w.lam)} entries, sl({n}) needs {n - 1}")
        return w

    def __getitem__(self, i: int) -> Fraction:
        """1-based access: ``w[i]`` is lambda_i."""
        if not 1 <= i <= len(self.lam):
            raise IndexError(i)
        return self.lam[i - 1]

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.lam) + ")"

    @property
    def is_dominant_integral(self) -> bool:
        return all(x.denominator == 1 and x >= 0 for x in self.lam)


def _check_root(i: int, n: int | None) -> None:
    if i < 1 or (n is not None and i > n - 1):
        raise ValueError(f"simple root index {i} out of range for sl({n})")


@dataclass(frozen=True)
class LinearOperator:
    """A labelled linear map on series; supports +, -, scalar *, @ and brackets."""

    label: str
    fn: Callable[[Series], Series] = field(repr=False, compare=False)

    def __call__(self, s: Series) -> Series:
        return self.fn(s)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(f"{self.label}{other.label}", lambda s: self(other(s)))

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(f"({self.label} + {other.label})", lambda s: self(s) + other(s))

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(f"({self.label} - {other.label})", lambda s: self(s) - other(s))

    def __rmul__(self, a: Scalar) -> "LinearOperator":
        return LinearOperator(f"{a}*{self.label}", lambda s: self(s).scale(a))


def commutator(a: LinearOperator, b: LinearOperator) -> LinearOperator:
    return LinearOperator(f"[{a.label}, {b.label}]", lambda s: a(b(s)) - b(a(s)))


# --- primitive operators ---------------------------------------------------

def apply_d(i: int, lam: Weight, s: Series) -> Series:
    """Image of E_{i,i+1}."""
    n = lam.n
    _check_root(i, n)
    li = lam[i]
    one = Fraction(1)

    def term(m: Monomial):
        e = m.get((i + 1, i))
        if e != 0:
            m1 = m.shifted((i + 1, i), -one)
            euler = li - sum(m1.get((j, i)) for j in range(i + 1, n + 1)) \
                + sum(m1.get((j, i + 1)) for j in range(i + 2, n + 1))
            if euler != 0:
                yield m1, e * euler
        for j in range(1, i):
            e = m.get((i + 1, j))
            if e != 0:
                yield m.shifted((i + 1, j), -one).shifted((i, j), one), e
        for j in range(i + 2, n + 1):
            e = m.get((j, i))
            if e != 0:
                yield m.shifted((j, i), -one).shifted((j, i + 1), one), -e

    return apply_termwise(term, s, loss=1 if n >= 3 else 0)


def _eta_derivative_part(i: int, m: Monomial):
    """sum_{j<i} x_{i+1,j} d/dx_{i,j} on one monomial."""
    one = Fraction(1)
    for j in range(1, i):
        e = m.get((i, j))
        if e != 0:
            yield m.shifted((i, j), -one).shifted((i + 1, j), one), e


def apply_eta(i: int, s: Series, n: int | None = None) -> Series:
    """Image of E_{i+1,i}."""
    _check_root(i, n)

    def term(m: Monomial):
        yield m.shifted((i + 1, i), Fraction(1)), Fraction(1)
        yield from _eta_derivative_part(i, m)

    return apply_termwise(term, s)


def euler(v: Var, s: Series) -> Series:
    """x_v d/dx_v."""
    return multiply(Monomial.var(v), partial_derivative(v, s))


def apply_zeta(i: int, lam: Weight, s: Series) -> Series:
    """Image of h_i, assembled from Euler operators."""
    n = lam.n
    _check_root(i, n)
    out = s.scale(lam[i])
    for p in range(1, i):
        out = out + euler((i, p), s) - euler((i + 1, p), s)
    for j in range(i + 2, n + 1):
        out = out + euler((j, i + 1), s) - euler((j, i), s)
    return out - euler((i + 1, i), s).scale(2)


def zeta_eigenvalue(i: int, lam: Weight, m: Monomial) -> Fraction:
    """Closed-form h_i eigenvalue of a monomial."""
    n = lam.n
    value = lam[i] - 2 * m.get((i + 1, i))
    for p in range(1, i):
        value += m.get((i, p)) - m.get((i + 1, p))
    for j in range(i + 2, n + 1):
        value += m.get((j, i + 1)) - m.get((j, i))
    return value


def weight_eigenvalues(lam: Weight, s: Series) -> tuple[Fraction, ...] | None:
    """Common h-eigenvalues of all terms, or None if the series is not weighted."""
    if s.is_zero():
        raise ValueError("the zero series has no weight")
    found = None
    for m in s.terms:
        w = tuple(zeta_eigenvalue(i, lam, m) for i in range(1, lam.n))
        if found is None:
            found = w
        elif w != found:
            return None
    return found


def weight_drop(lam: Weight, mu: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Coefficients k with lam - mu = sum_j k_j alpha_j."""
    n = lam.n
    diff = [lam[j] - Fraction(mu[j - 1]) for j in range(1, n)]
    return tuple(sum(inverse_cartan_entry(n, i, j) * diff[j - 1] for j in range(1, n))
                 for i in range(1, n))


def apply_eta_power(i: int, mu: Scalar, s: Series,
                    policy: TruncationPolicy = DEFAULT_POLICY,
                    n: int | None = None) -> Series:
    """eta_i^mu applied termwise.

    For each input term the p-sum runs until the falling factorial vanishes,
    the derivative part annihilates the term, or every further term exceeds
    the deep-degree cap.  Only the last case marks the result truncated.
    """
    _check_root(i, n)
    mu = Fraction(mu)
    if mu == 0:
        return s
    cap = policy.depth if s.precision is None else min(s.precision, policy.depth)
    simple = (i + 1, i)
    acc: dict[Monomial, Fraction] = {}
    cut = False
    for m, c in s.terms.items():
        layer = {m: Fraction(1)}
        coef = Fraction(1)
        p = 0
        while layer:
            shift = mu - p
            for mono, a in layer.items():
                key = mono.shifted(simple, shift)
                acc[key] = acc.get(key, 0) + c * coef * a
            p += 1
            coef = coef * (mu - p + 1) / p
            if coef == 0:
                break
            nxt: dict[Monomial, Fraction] = {}
            for mono, a in layer.items():
                for m2, b in _eta_derivative_part(i, mono):
                    if m2.deep_degree > cap:
                        cut = True
                        continue
                    nxt[m2] = nxt.get(m2, 0) + a * b
            layer = {k: v for k, v in nxt.items() if v != 0}
    return Series(acc, cap if cut else s.precision)


def _d_long_tree(i: int, lam: Weight) -> LinearOperator:
    n = lam.n
    op = op_d(n - 1, lam)
    for k in range(n - 2, i - 1, -1):
        op = commutator(op_d(k, lam), op)
    return op


def apply_d_long(i: int, lam: Weight, s: Series) -> Series:
    """Image of E_{i,n} as the nested bracket [d_i, [d_{i+1}, ... [d_{n-2}, d_{n-1}]]]."""
    _check_long(i, lam.n)
    return _d_long_tree(i, lam)(s)


def lambda_bar(i: int, lam: Weight) -> Fraction:
    n = lam.n
    return n - i - 1 + sum(lam[p] for p in range(i, n))


def _d_long_recursive(i: int, lam: Weight, s: Series, corrected: bool) -> Series:
    n = lam.n
    if i == n - 1:
        return apply_d(n - 1, lam, s)
    dn_i = partial_derivative((n, i), s)
    out = dn_i.scale(lambda_bar(i, lam))
    for p in range(i, n):
        out = out - euler((n, p), dn_i)
    for q in range(1, i):
        out = out + multiply(Monomial.var((i, q)), partial_derivative((n, q), s))
    for j in range(i + 1, n):
        out = out - partial_derivative((j, i), _d_long_recursive(j, lam, s, corrected))
        if corrected:
            # d_{j,n} carries x_{j,q} d/dx_{n,q} for q < i; d/dx_{j,i} must not see them
            for q in range(1, i):
                dd = partial_derivative((j, i), partial_derivative((n, q), s))
                out = out + multiply(Monomial.var((j, q)), dd)
    return out


def _check_long(i: int, n: int) -> None:
    if not 2 <= i <= n - 1:
        raise ValueError(f"long-root index {i} out of range for sl({n})")


def apply_d_long_closed(i: int, lam: Weight, s: Series) -> Series:
    """Image of E_{i,n} by the recursive closed form in lambda_bar.

    Kept as an independent cross-check of :func:`apply_d_long`.
    """
    _check_long(i, lam.n)
    return _d_long_recursive(i, lam, s, corrected=True)


def apply_d_long_uncorrected(i: int, lam: Weight, s: Series) -> Series:
    """The same recursion without the x_{j,q} d/dx_{j,i} d/dx_{n,q} terms.

    It is not the action of E_{i,n} once n >= 4 and the input involves
    x_{n,q} and x_{j,i} together; the tests pin down that difference.
    """
    _check_long(i, lam.n)
    return _d_long_recursive(i, lam, s, corrected=False)


# --- operator values -------------------------------------------------------

def op_d(i: int, lam: Weight) -> LinearOperator:
    _check_root(i, lam.n)
    return LinearOperator(f"d{i}", lambda s: apply_d(i, lam, s))


def op_eta(i: int, n: int | None = None) -> LinearOperator:
    _check_root(i, n)
    return LinearOperator(f"eta{i}", lambda s: apply_eta(i, s, n))


def op_zeta(i: int, lam: Weight) -> LinearOperator:
    _check_root(i, lam.n)
    return LinearOperator(f"zeta{i}", lambda s: apply_zeta(i, lam, s))


def op_eta_power(i: int, mu: Scalar, policy: TruncationPolicy = DEFAULT_POLICY,
                 n: int | None = None) -> LinearOperator:
    _check_root(i, n)
    mu = Fraction(mu)
    return LinearOperator(f"eta{i}^({mu})", lambda s: apply_eta_power(i, mu, s, policy, n))


def op_partial(v: Var) -> LinearOperator:
    return LinearOperator(f"D{v[0]}{v[1]}", lambda s: partial_derivative(v, s))


def op_multiply(v: Var, e: Scalar = 1) -> LinearOperator:
    m = Monomial.var(v, e)
    return LinearOperator(f"x{v[0]}{v[1]}^{e}", lambda s: multiply(m, s))


def op_scalar(a: Scalar) -> LinearOperator:
    return LinearOperator(str(a), lambda s: s.scale(a))


def identity() -> LinearOperator:
    return LinearOperator("1", lambda s: s)


def compose(ops: Iterable[LinearOperator]) -> LinearOperator:
    """Left-to-right product: compose([A, B, C]) = A B C."""
    ops = list(ops)
    out = identity()
    for op in ops:
        out = out @ op
    return out
