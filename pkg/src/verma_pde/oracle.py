"""The Verma module M_lambda on its PBW basis E^alpha v_lambda.

Two routes to the action live here.  :func:`raise_` and :func:`lower` are the
closed-form action on PBW monomials; :func:`straighten` recomputes the action
of any matrix unit E_{a,b} from the bracket
[E_{a,b}, E_{c,d}] = delta_{bc} E_{a,d} - delta_{da} E_{c,b} by reordering
words into PBW order.  The second one shares nothing with the first and is
what the tests use to validate it.

:func:`singular_kernel` finds all singular vectors of a given weight drop by
exact elimination.  It is the brute-force reference for everything produced
by :mod:`verma_pde.singular`.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import linalg
from .algebra import Monomial, Series, Var, check_var, variables
from .operators import Weight

Letter = tuple[int, int]


class MultiIndex:
    """Exponents alpha_{i,j} of a PBW monomial, zeros omitted, sorted."""

    __slots__ = ("exps", "_hash")

    def __init__(self, exps: Mapping[Var, int] | Iterable[tuple[Var, int]] = ()):
        items = exps.items() if isinstance(exps, Mapping) else exps
        acc: dict[Var, int] = {}
        for v, e in items:
            check_var(v)
            if int(e) != e or e < 0:
                raise ValueError(f"PBW exponents are natural numbers, got {e}")
            acc[v] = acc.get(v, 0) + int(e)
        self.exps = tuple(sorted((v, e) for v, e in acc.items() if e))
        self._hash = hash(self.exps)

    def get(self, v: Var) -> int:
        for w, e in self.exps:
            if w == v:
                return e
        return 0

    def shifted(self, v: Var, delta: int) -> "MultiIndex":
        d = dict(self.exps)
        d[v] = d.get(v, 0) + delta
        return MultiIndex(d)

    def first(self) -> Var:
        return self.exps[0][0]

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def drop(self, n: int) -> tuple[int, ...]:
        """Simple-root content: E_{i,j} carries alpha_j + ... + alpha_{i-1}."""
        k = [0] * (n - 1)
        for (i, j), e in self.exps:
            for q in range(j, i):
                k[q - 1] += e
        return tuple(k)

    def lex_key(self, n: int) -> tuple[int, ...]:
        return tuple(self.get(v) for v in variables(n))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultiIndex) and self.exps == other.exps

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"MultiIndex({dict(self.exps)!r})"

    def __str__(self) -> str:
        if not self.exps:
            return "v"
        return "".join(f"E{i}{j}" + (f"^{e}" if e > 1 else "") for (i, j), e in self.exps) + "v"


class PBWVector:
    """Finite combination of E^alpha v_lambda with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[MultiIndex, Fraction | int] | None = None):
        self.terms = {a: Fraction(c) for a, c in (terms or {}).items() if c != 0}

    @classmethod
    def highest(cls) -> "PBWVector":
        return cls({MultiIndex(): 1})

    @classmethod
    def basis(cls, alpha: MultiIndex | Mapping[Var, int]) -> "PBWVector":
        return cls({alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PBWVector") -> "PBWVector":
        acc = dict(self.terms)
        for a, c in other.terms.items():
            acc[a] = acc.get(a, 0) + c
        return PBWVector(acc)

    def __sub__(self, other: "PBWVector") -> "PBWVector":
        return self + other.scale(-1)

    def scale(self, c: Fraction | int) -> "PBWVector":
        return PBWVector({a: c * x for a, x in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PBWVector) and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def sorted_terms(self, n: int) -> list[tuple[MultiIndex, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: t[0].lex_key(n), reverse=True)

    def normalized(self, n: int) -> "PBWVector":
        if not self.terms:
            return self
        return self.scale(1 / self.sorted_terms(n)[0][1])

    def __repr__(self) -> str:
        if not self.terms:
            return "PBWVector(0)"
        return "PBWVector(" + " + ".join(f"{c}*{a}" for a, c in self.terms.items()) + ")"


def _check_index(i: int, n: int | None) -> None:
    if i < 1 or (n is not None and i > n - 1):
        raise ValueError(f"simple root index {i} out of range for sl({n})")


def raise_(i: int, lam: Weight, v: PBWVector) -> PBWVector:
    """E_{i,i+1} acting on a PBW vector."""
    n = lam.n
    _check_index(i, n)
    acc: dict[MultiIndex, Fraction] = {}

    def add(a: MultiIndex, c: Fraction) -> None:
        acc[a] = acc.get(a, 0) + c

    for alpha, c in v.terms.items():
        for j in range(1, i):
            e = alpha.get((i + 1, j))
            if e:
                add(alpha.shifted((i + 1, j), -1).shifted((i, j), 1), c * e)
        for j in range(i + 2, n + 1):
            e = alpha.get((j, i))
            if e:
                add(alpha.shifted((j, i), -1).shifted((j, i + 1), 1), -c * e)
        e = alpha.get((i + 1, i))
        if e:
            factor = lam[i] + 1 - sum(alpha.get((j, i)) for j in range(i + 1, n + 1)) \
                + sum(alpha.get((j, i + 1)) for j in range(i + 2, n + 1))
            add(alpha.shifted((i + 1, i), -1), c * e * factor)
    return PBWVector(acc)


def lower(i: int, v: PBWVector, n: int | None = None) -> PBWVector:
    """E_{i+1,i} acting on a PBW vector."""
    _check_index(i, n)
    acc: dict[MultiIndex, Fraction] = {}
    for alpha, c in v.terms.items():
        a = alpha.shifted((i + 1, i), 1)
        acc[a] = acc.get(a, 0) + c
        for j in range(1, i):
            e = alpha.get((i, j))
            if e:
                a = alpha.shifted((i, j), -1).shifted((i + 1, j), 1)
                acc[a] = acc.get(a, 0) + c * e
    return PBWVector(acc)


def weight_of(lam: Weight, alpha: MultiIndex) -> tuple[Fraction, ...]:
    """h-eigenvalues of E^alpha v_lambda."""
    n = lam.n
    out = []
    for i in range(1, n):
        w = lam[i] - 2 * alpha.get((i + 1, i))
        w += sum(alpha.get((i, p)) - alpha.get((i + 1, p)) for p in range(1, i))
        w += sum(alpha.get((j, i + 1)) - alpha.get((j, i)) for j in range(i + 2, n + 1))
        out.append(Fraction(w))
    return tuple(out)


def tau(v: PBWVector) -> Series:
    return Series({Monomial({var: e for var, e in a.exps}): c for a, c in v.terms.items()})


def tau_inv(s: Series) -> PBWVector:
    if not s.is_polynomial:
        raise ValueError("tau_inv needs a polynomial series")
    return PBWVector({MultiIndex({v: int(e) for v, e in m.exps}): c for m, c in s.terms.items()})


# --- independent route: straightening with matrix-unit brackets -------------

def _bracket(x: Letter, y: Letter) -> list[tuple[Letter, int]]:
    (a, b), (c, d) = x, y
    out = []
    if b == c:
        out.append(((a, d), 1))
    if d == a:
        out.append(((c, b), -1))
    return out


def gl_weight(lam: Weight) -> tuple[Fraction, ...]:
    """A gl(n) weight Lambda restricting to lam: Lambda_a - Lambda_{a+1} = lambda_a."""
    n = lam.n
    big = [Fraction(0)] * (n + 1)
    for a in range(n - 1, 0, -1):
        big[a] = big[a + 1] + lam[a]
    return tuple(big[1:])


@lru_cache(maxsize=None)
def _act(big: tuple[Fraction, ...], letter: Letter,
         alpha: MultiIndex) -> tuple[tuple[MultiIndex, Fraction], ...]:
    a, b = letter
    if not alpha.exps:
        if a < b:
            return ()
        if a == b:
            return ((alpha, big[a - 1]),) if big[a - 1] != 0 else ()
        return ((alpha.shifted(letter, 1), Fraction(1)),)
    first = alpha.first()
    if a > b and letter <= first:
        return ((alpha.shifted(letter, 1), Fraction(1)),)
    rest = alpha.shifted(first, -1)
    acc: dict[MultiIndex, Fraction] = {}
    # letter * E_first * rest = E_first * (letter * rest) + [letter, E_first] * rest
    for beta, c in _act(big, letter, rest):
        for gamma, d in _act(big, first, beta):
            acc[gamma] = acc.get(gamma, 0) + c * d
    for other, sign in _bracket(letter, first):
        for gamma, d in _act(big, other, rest):
            acc[gamma] = acc.get(gamma, 0) + sign * d
    return tuple((g, c) for g, c in acc.items() if c != 0)


def straighten(letter: Letter, lam: Weight, v: PBWVector) -> PBWVector:
    """Action of the matrix unit E_{a,b} computed by PBW reordering."""
    a, b = letter
    if not (1 <= a <= lam.n and 1 <= b <= lam.n):
        raise ValueError(f"matrix unit {letter} out of range for sl({lam.n})")
    big = gl_weight(lam)
    acc: dict[MultiIndex, Fraction] = {}
    for alpha, c in v.terms.items():
        for gamma, d in _act(big, letter, alpha):
            acc[gamma] = acc.get(gamma, 0) + c * d
    return PBWVector(acc)


# --- weight spaces and the singular kernel ----------------------------------

def weight_space_basis(n: int, drop: Sequence[int]) -> list[MultiIndex]:
    """All alpha whose root content equals ``drop``, lex-leading first."""
    drop = tuple(int(k) for k in drop)
    if len(drop) != n - 1 or any(k < 0 for k in drop):
        raise ValueError(f"bad weight drop {drop} for sl({n})")
    vs = variables(n)
    found: list[tuple[int, ...]] = []

    def rec(idx: int, remaining: list[int], chosen: list[int]) -> None:
        if idx == len(vs):
            if not any(remaining):
                found.append(tuple(chosen))
            return
        i, j = vs[idx]
        cap = min(remaining[q - 1] for q in range(j, i))
        for e in range(cap, -1, -1):
            for q in range(j, i):
                remaining[q - 1] -= e
            chosen.append(e)
            rec(idx + 1, remaining, chosen)
            chosen.pop()
            for q in range(j, i):
                remaining[q - 1] += e

    rec(0, list(drop), [])
    return [MultiIndex(zip(vs, exps)) for exps in found]


def raising_matrix(lam: Weight, drop: Sequence[int],
                   basis: list[MultiIndex] | None = None) -> list[list[Fraction]]:
    """Stacked matrices of E_{1,2}, ..., E_{n-1,n} on one weight space."""
    n = lam.n
    basis = basis if basis is not None else weight_space_basis(n, drop)
    rows: list[list[Fraction]] = []
    for i in range(1, n):
        if drop[i - 1] == 0:
            continue
        target = list(drop)
        target[i - 1] -= 1
        index = {a: r for r, a in enumerate(weight_space_basis(n, target))}
        block = [[Fraction(0)] * len(basis) for _ in index]
        for col, alpha in enumerate(basis):
            for beta, c in raise_(i, lam, PBWVector.basis(alpha)).terms.items():
                block[index[beta]][col] += c
        rows.extend(block)
    return rows


def singular_kernel(lam: Weight, drop: Sequence[int]) -> list[PBWVector]:
    """Basis of the singular vectors of weight lam - sum_i drop_i alpha_i.

    Each basis vector is scaled so its lex-leading coefficient is 1.
    """
    n = lam.n
    basis = weight_space_basis(n, drop)
    rows = raising_matrix(lam, drop, basis)
    vectors = []
    for vec in linalg.nullspace(rows, len(basis)):
        v = PBWVector({alpha: c for alpha, c in zip(basis, vec)})
        vectors.append(v.normalized(n))
    return vectors


def is_singular(lam: Weight, v: PBWVector) -> bool:
    """Nonzero, homogeneous and killed by every E_{i,i+1}."""
    if v.is_zero():
        return False
    n = lam.n
    if len({a.drop(n) for a in v.terms}) != 1:
        return False
    return all(raise_(i, lam, v).is_zero() for i in range(1, n))


def in_kernel_span(lam: Weight, v: PBWVector) -> bool:
    """True when v lies in the oracle kernel at its own weight drop."""
    if v.is_zero():
        return False
    n = lam.n
    drops = {a.drop(n) for a in v.terms}
    if len(drops) != 1:
        return False
    (drop,) = drops
    kernel = singular_kernel(lam, drop)
    if not kernel:
        return False
    basis = weight_space_basis(n, drop)
    rows = [[k.terms.get(a, Fraction(0)) for a in basis] for k in kernel]
    with_v = rows + [[v.terms.get(a, Fraction(0)) for a in basis]]
    return linalg.rank(with_v) == linalg.rank(rows)


def drops_up_to(n: int, total: int) -> list[tuple[int, ...]]:
    """All weight drops with entry sum at most ``total``."""
    out = [k for k in itertools.product(range(total + 1), repeat=n - 1) if sum(k) <= total]
    return sorted(out, key=lambda k: (sum(k), k))
