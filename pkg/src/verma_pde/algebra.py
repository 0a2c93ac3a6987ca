"""Exact monomials and series in the variables x_{i,j} (1 <= j < i <= n).

The variables split in two families.  The *simple* ones x_{i+1,i} may carry
any rational exponent (negative and fractional included); the *deep* ones
x_{i,j} with i - j >= 2 only carry natural exponents.  A :class:`Series` is a
finite linear combination of such monomials with exact rational
coefficients.

Infinite sums are cut by *deep degree*, the total exponent on deep
variables.  A series with ``precision = K`` is exact on every term of deep
degree at most K and stores nothing above K; ``precision = None`` means the
series is exact outright.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Union

Var = tuple[int, int]
Scalar = Union[Fraction, int]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or an integer string; decimals are rejected."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    match = _RATIONAL_RE.match(str(text))
    if match is None:
        raise ValueError(f"not an exact rational: {text!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    return str(q)


def is_natural(q: Fraction) -> bool:
    return q.denominator == 1 and q >= 0


def falling_factorial(mu: Scalar, p: int) -> Fraction:
    """mu (mu - 1) ... (mu - p + 1); the empty product for p = 0."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    mu = Fraction(mu)
    out = Fraction(1)
    for k in range(p):
        out *= mu - k
    return out


def is_simple(v: Var) -> bool:
    return v[0] - v[1] == 1


def check_var(v: Var, n: int | None = None) -> None:
    i, j = v
    if not 1 <= j < i or (n is not None and i > n):
        raise ValueError(f"invalid variable index {v} (n={n})")


def variables(n: int) -> list[Var]:
    """All variables in PBW order (2,1),(3,1),(3,2),(4,1),...,(n,n-1)."""
    return [(i, j) for i in range(2, n + 1) for j in range(1, i)]


def deep_variables(n: int) -> list[Var]:
    return [v for v in variables(n) if not is_simple(v)]


class Monomial:
    """A product of variable powers, stored sorted by variable, zeros omitted."""

    __slots__ = ("exps", "_hash", "_deep")

    def __init__(self, exps: Mapping[Var, Scalar] | Iterable[tuple[Var, Scalar]] = ()):
        items = exps.items() if isinstance(exps, Mapping) else exps
        acc: dict[Var, Fraction] = {}
        for v, e in items:
            v = (int(v[0]), int(v[1]))
            check_var(v)
            acc[v] = acc.get(v, Fraction(0)) + Fraction(e)
        for v, e in acc.items():
            if not is_simple(v) and not is_natural(e):
                raise ValueError(f"deep variable x{v} needs a natural exponent, got {e}")
        self._set(tuple(sorted((v, e) for v, e in acc.items() if e != 0)))

    def _set(self, exps: tuple[tuple[Var, Fraction], ...]) -> None:
        self.exps = exps
        self._hash = hash(exps)
        self._deep = sum(int(e) for v, e in exps if not is_simple(v))

    @classmethod
    def _raw(cls, exps: tuple[tuple[Var, Fraction], ...]) -> "Monomial":
        m = cls.__new__(cls)
        m._set(exps)
        return m

    @classmethod
    def one(cls) -> "Monomial":
        return cls._raw(())

    @classmethod
    def var(cls, v: Var, e: Scalar = 1) -> "Monomial":
        return cls({v: e})

    def get(self, v: Var) -> Fraction:
        for w, e in self.exps:
            if w == v:
                return e
        return Fraction(0)

    def shifted(self, v: Var, delta: Fraction) -> "Monomial":
        """Multiply by x_v^delta.  Deep exponents must stay natural."""
        if delta == 0:
            return self
        out = []
        placed = False
        for w, e in self.exps:
            if w == v:
                e = e + delta
                placed = True
                if e != 0:
                    out.append((w, e))
            else:
                if not placed and w > v:
                    out.append((v, Fraction(delta)))
                    placed = True
                out.append((w, e))
        if not placed:
            out.append((v, Fraction(delta)))
        if not is_simple(v):
            e = self.get(v) + delta
            if e < 0 or e.denominator != 1:
                raise ValueError(f"deep exponent of x{v} would become {e}")
        return Monomial._raw(tuple(out))

    def times(self, other: "Monomial") -> "Monomial":
        out = self
        for v, e in other.exps:
            out = out.shifted(v, e)
        return out

    @property
    def deep_degree(self) -> int:
        return self._deep

    @property
    def is_polynomial(self) -> bool:
        return all(is_natural(e) for _, e in self.exps)

    @property
    def max_row(self) -> int:
        return max((v[0] for v, _ in self.exps), default=1)

    def lex_key(self, n: int) -> tuple[Fraction, ...]:
        return tuple(self.get(v) for v in variables(n))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Monomial({dict(self.exps)!r})"

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        parts = []
        for (i, j), e in self.exps:
            if e == 1:
                parts.append(f"x{i}{j}" if max(i, j) < 10 else f"x{i}_{j}")
            else:
                exp = str(e) if e.denominator == 1 and e > 0 else f"({e})"
                base = f"x{i}{j}" if max(i, j) < 10 else f"x{i}_{j}"
                parts.append(f"{base}^{exp}")
        return "*".join(parts)


def _clip(precision: int | None, other: int | None) -> int | None:
    if precision is None:
        return other
    if other is None:
        return precision
    return min(precision, other)


class Series:
    """Finite exact linear combination of monomials, with a precision tag.

    Values are treated as immutable: every operation returns a new Series.
    """

    __slots__ = ("terms", "precision")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None,
                 precision: int | None = None):
        if precision is not None and precision < 0:
            precision = -1  # nothing is known
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if c != 0 and (precision is None or m.deep_degree <= precision):
                clean[m] = Fraction(c)
        self.terms = clean
        self.precision = precision

    @classmethod
    def zero(cls) -> "Series":
        return cls()

    @classmethod
    def one(cls) -> "Series":
        return cls({Monomial.one(): 1})

    @classmethod
    def monomial(cls, exps: Mapping[Var, Scalar] | Monomial, coeff: Scalar = 1) -> "Series":
        m = exps if isinstance(exps, Monomial) else Monomial(exps)
        return cls({m: coeff})

    @classmethod
    def from_dict(cls, data: Mapping[tuple, Scalar]) -> "Series":
        """Build from ``{((i, j, e), ...): coeff}``; handy in tests."""
        return cls({Monomial({(i, j): e for i, j, e in key}): c for key, c in data.items()})

    @property
    def truncated(self) -> bool:
        return self.precision is not None

    @property
    def depth_used(self) -> int | None:
        return self.precision

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def restrict(self, precision: int | None) -> "Series":
        return Series(self.terms, _clip(self.precision, precision))

    def __add__(self, other: "Series") -> "Series":
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return Series(acc, _clip(self.precision, other.precision))

    def __neg__(self) -> "Series":
        return Series({m: -c for m, c in self.terms.items()}, self.precision)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def scale(self, a: Scalar) -> "Series":
        return Series({m: a * c for m, c in self.terms.items()}, self.precision)

    def __rmul__(self, a: Scalar) -> "Series":
        return self.scale(a)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Series) and self.terms == other.terms
                and self.precision == other.precision)

    __hash__ = None  # type: ignore[assignment]

    def agrees_with(self, other: "Series") -> bool:
        """Equality on every term both sides know exactly."""
        p = _clip(self.precision, other.precision)
        return self.restrict(p).terms == other.restrict(p).terms

    @property
    def is_polynomial(self) -> bool:
        return all(m.is_polynomial for m in self.terms)

    @property
    def max_row(self) -> int:
        return max((m.max_row for m in self.terms), default=1)

    def sorted_terms(self, n: int | None = None) -> list[tuple[Monomial, Fraction]]:
        """Terms in lex order, leading (largest x_{2,1} exponent, ...) first."""
        n = n or max(self.max_row, 2)
        return sorted(self.terms.items(), key=lambda t: t[0].lex_key(n), reverse=True)

    def leading(self, n: int | None = None) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("zero series has no leading term")
        return self.sorted_terms(n)[0]

    def normalized(self, n: int | None = None) -> "Series":
        if not self.terms:
            return self
        _, c = self.leading(n)
        return self.scale(1 / c)

    def __repr__(self) -> str:
        tag = "" if self.precision is None else f", precision={self.precision}"
        return f"Series({self}{tag})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            if m.exps and c == 1:
                parts.append(str(m))
            elif m.exps and c == -1:
                parts.append(f"-{m}")
            elif m.exps:
                parts.append(f"{c}*{m}")
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")


def series_add(a: Series, b: Series) -> Series:
    return a + b


def apply_termwise(fn: Callable[[Monomial], Iterable[tuple[Monomial, Fraction]]],
                   s: Series, loss: int = 0) -> Series:
    """Apply a monomial-wise linear map.

    ``loss`` is the largest drop in deep degree the map can cause; the output
    precision is reduced by it (a negative loss raises precision).
    """
    acc: defaultdict[Monomial, Fraction] = defaultdict(Fraction)
    for m, c in s.terms.items():
        for m2, a in fn(m):
            acc[m2] += c * a
    precision = None if s.precision is None else s.precision - loss
    return Series(acc, precision)


def partial_derivative(v: Var, s: Series) -> Series:
    check_var(v)

    def term(m: Monomial):
        e = m.get(v)
        if e != 0:
            yield m.shifted(v, Fraction(-1)), e

    return apply_termwise(term, s, loss=0 if is_simple(v) else 1)


def multiply(m: Monomial, s: Series) -> Series:
    """Multiply by a monomial."""
    return apply_termwise(lambda t: ((t.times(m), Fraction(1)),), s, loss=-m.deep_degree)


def substitute_zero(vs: Iterable[Var], s: Series) -> Series:
    """Set the given deep variables to zero."""
    vs = list(vs)
    for v in vs:
        check_var(v)
        if is_simple(v):
            raise ValueError(f"x{v} is a simple variable; substitution is undefined")
    out = {}
    for m, c in s.terms.items():
        es = [m.get(v) for v in vs]
        if any(e < 0 for e in es):
            raise ValueError("negative exponent on a substituted variable")
        if all(e == 0 for e in es):
            out[m] = c
    return Series(out, s.precision)


@dataclass(frozen=True)
class TruncationPolicy:
    """Deep-degree cutoff applied to non-terminating operator expansions."""

    depth: int = 8

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("truncation depth must be >= 1")


# --- JSON term encoding ---------------------------------------------------

def monomial_to_json(m: Monomial) -> list[dict]:
    return [{"i": i, "j": j, "e": format_rational(e)} for (i, j), e in m.exps]


def monomial_from_json(data: list[dict]) -> Monomial:
    return Monomial({(int(t["i"]), int(t["j"])): parse_rational(t["e"]) for t in data})


def series_to_json(s: Series) -> list[dict]:
    return [{"coeff": format_rational(c), "exps": monomial_to_json(m)}
            for m, c in s.sorted_terms()]


def series_from_json(data: list[dict], precision: int | None = None) -> Series:
    acc: dict[Monomial, Fraction] = {}
    for t in data:
        m = monomial_from_json(t["exps"])
        acc[m] = acc.get(m, Fraction(0)) + parse_rational(t["coeff"])
    return Series(acc, precision)
