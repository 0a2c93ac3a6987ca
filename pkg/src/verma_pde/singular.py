"""Singular vectors from products of fractional lowering powers.

The solutions of d_1 = ... = d_{n-1} = 0 built here are all of the form

    eta_{r_m}^{e_m} ... eta_{r_1}^{e_1}(1)

with exponents fixed by the weight.  An :class:`ExponentPlan` stores such a
product in written order (leftmost factor first); evaluation runs from the
right, starting at the constant 1.

There are n! index vectors (i_1, ..., i_{n-1}) with 0 <= i_p <= p.  Each one
gives a plan through :func:`theta_plan`, and :func:`enumerate_solutions`
evaluates all of them and sorts out which are honest polynomials.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg, oracle
from .algebra import (
    Monomial,
    Series,
    TruncationPolicy,
    format_rational,
    is_natural,
    parse_rational,
    series_from_json,
    series_to_json,
)
from .operators import (
    Weight,
    apply_d,
    apply_eta_power,
    cartan_entry,
    weight_drop,
    weight_eigenvalues,
)

Step = tuple[int, Fraction]
IndexVector = tuple[int, ...]

YES, NO, UNKNOWN = "yes", "no", "unknown"


# --- simple root maps and their exponents ------------------------------------

def validate_map(roots: Sequence[int], n: int) -> tuple[int, ...]:
    roots = tuple(int(r) for r in roots)
    for r in roots:
        if not 1 <= r <= n - 1:
            raise ValueError(f"root index {r} out of range for sl({n})")
    for a, b in zip(roots, roots[1:]):
        if a == b:
            raise ValueError("consecutive roots of a simple root map must differ")
    return roots


def iota_exponents(roots: Sequence[int], lam: Weight) -> list[Fraction]:
    """Exponents making eta_{r_m}^{e_m} ... eta_{r_1}^{e_1}(1) a solution.

    ``roots`` lists r_1, r_2, ... in application order.
    """
    roots = validate_map(roots, lam.n)
    out: list[Fraction] = []
    for k, r in enumerate(roots):
        e = lam[r] + 1 - sum(cartan_entry(r, roots[p]) * out[p] for p in range(k))
        out.append(e)
    return out


@dataclass(frozen=True)
class ExponentPlan:
    """Factors of an eta-product in written order; the rightmost acts first."""

    steps: tuple[Step, ...] = ()

    def __post_init__(self) -> None:
        clean = tuple((int(r), Fraction(e)) for r, e in self.steps)
        for r, _ in clean:
            if r < 1:
                raise ValueError(f"bad root index {r}")
        object.__setattr__(self, "steps", clean)

    @classmethod
    def from_application_order(cls, steps: Iterable[Step]) -> "ExponentPlan":
        return cls(tuple(reversed(list(steps))))

    def application_order(self) -> list[Step]:
        return list(reversed(self.steps))

    def simplified(self) -> "ExponentPlan":
        """Drop zero powers and merge neighbouring powers of the same eta."""
        out: list[list] = []
        for r, e in self.steps:
            if e == 0:
                continue
            if out and out[-1][0] == r:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([r, e])
        return ExponentPlan(tuple((r, e) for r, e in out))

    def drop(self, n: int) -> tuple[Fraction, ...]:
        """Total exponent per root index: the weight drop of the product."""
        k = [Fraction(0)] * (n - 1)
        for r, e in self.steps:
            k[r - 1] += e
        return tuple(k)

    @property
    def total(self) -> Fraction:
        return sum((e for _, e in self.steps), Fraction(0))

    def to_json(self) -> list:
        return [[r, format_rational(e)] for r, e in self.steps]

    @classmethod
    def from_json(cls, data: Sequence) -> "ExponentPlan":
        return cls(tuple((int(r), parse_rational(e)) for r, e in data))

    def __str__(self) -> str:
        if not self.steps:
            return "1"
        return " ".join(f"eta{r}^({e})" for r, e in self.steps) + " (1)"


def plan_from_map(roots: Sequence[int], lam: Weight) -> ExponentPlan:
    return ExponentPlan.from_application_order(zip(roots, iota_exponents(roots, lam)))


def build_eta_product(plan: ExponentPlan, policy: TruncationPolicy,
                      n: int | None = None, simplify: bool = True) -> Series:
    """Evaluate a plan on the constant 1, rightmost factor first."""
    todo = plan.simplified() if simplify else plan
    s = Series.one()
    for r, e in todo.application_order():
        s = apply_eta_power(r, e, s, policy, n)
    return s


# --- the n! index vectors ------------------------------------------------------

def index_vectors(n: int) -> list[IndexVector]:
    return list(itertools.product(*(range(p + 1) for p in range(1, n))))


def check_index(idx: Sequence[int], n: int) -> IndexVector:
    idx = tuple(int(i) for i in idx)
    if len(idx) != n - 1 or any(not 0 <= i <= p for p, i in enumerate(idx, start=1)):
        raise ValueError(f"index vector {idx} needs 0 <= i_p <= p and length {n - 1}")
    return idx


def ladder(level: Sequence[Fraction], j: int) -> Fraction:
    """lambda_{p,j} = sum_{q=j}^{p} (lambda^{(p)}_q + 1), and 0 for j = 0."""
    if j == 0:
        return Fraction(0)
    return sum((level[q - 1] + 1 for q in range(j, len(level) + 1)), Fraction(0))


def next_level(level: Sequence[Fraction], i: int) -> tuple[Fraction, ...]:
    """Weight seen by the remaining rank-(p-1) problem after choosing i_p = i."""
    p = len(level)
    if i == 0:
        return tuple(level[: p - 1])
    out = []
    for j in range(1, p):
        if j < i - 1:
            out.append(level[j - 1])
        elif j == i - 1:
            out.append(level[i - 1] + level[i - 2] + 1)
        else:
            out.append(level[j])
    return tuple(out)


@dataclass(frozen=True)
class WeightRecursion:
    """The per-level weights lambda^{(p)} visited while building one plan."""

    levels: tuple[tuple[Fraction, ...], ...]  # levels[k] is lambda^{(n-1-k)}

    def level(self, p: int) -> tuple[Fraction, ...]:
        n = len(self.levels) + 1
        return self.levels[n - 1 - p]


def weight_recursion(idx: Sequence[int], lam: Weight) -> WeightRecursion:
    n = lam.n
    idx = check_index(idx, n)
    levels = [tuple(lam.lam)]
    for p in range(n - 1, 1, -1):
        levels.append(next_level(levels[-1], idx[p - 1]))
    return WeightRecursion(tuple(levels))


def theta_plan(idx: Sequence[int], lam: Weight) -> ExponentPlan:
    n = lam.n
    idx = check_index(idx, n)
    rec = weight_recursion(idx, lam)
    blocks: list[list[Step]] = []
    for p in range(n - 1, 0, -1):
        i = idx[p - 1]
        if i == 0:
            continue
        level = rec.level(p)
        block = []
        for k in range(p, i - 1, -1):
            e = (k - i + 1) + sum(level[q - 1] for q in range(i, k + 1))
            block.append((k, e))
        blocks.append(block)
    # the block of level 1 is written leftmost
    return ExponentPlan(tuple(s for b in reversed(blocks) for s in b))


def default_depth(lam: Weight) -> int:
    top = max((theta_plan(idx, lam).total for idx in index_vectors(lam.n)), default=0)
    return 2 * math.ceil(max(Fraction(0), top)) + 4


# --- records -------------------------------------------------------------------

def polynomial_verdict(lam: Weight, s: Series) -> str:
    if any(not m.is_polynomial for m in s.terms):
        return NO
    if s.truncated:
        return UNKNOWN
    if all(apply_d(i, lam, s).is_zero() for i in range(1, lam.n)):
        return YES
    return NO


@dataclass(frozen=True)
class SolutionRecord:
    index: IndexVector
    plan: ExponentPlan
    series: Series
    weight: tuple[Fraction, ...]
    polynomial: str
    normalized: bool = True

    @property
    def exact(self) -> bool:
        return not self.series.truncated

    @property
    def depth(self) -> int | None:
        return self.series.precision

    def drop(self, n: int) -> tuple[Fraction, ...]:
        return self.plan.drop(n)

    def to_json(self) -> dict:
        return {
            "index": list(self.index),
            "plan": self.plan.to_json(),
            "polynomial": self.polynomial,
            "exact": self.exact,
            "depth": self.depth,
            "weight": [format_rational(w) for w in self.weight],
            "terms": series_to_json(self.series),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SolutionRecord":
        precision = data.get("depth") if not data.get("exact", True) else None
        return cls(
            index=tuple(int(i) for i in data["index"]),
            plan=ExponentPlan.from_json(data["plan"]),
            series=series_from_json(data["terms"], precision),
            weight=tuple(parse_rational(w) for w in data["weight"]),
            polynomial=data["polynomial"],
        )


def is_polynomial(rec: SolutionRecord, lam: Weight) -> str:
    """Recompute the verdict: "yes" (exact singular polynomial), "no", or "unknown"."""
    return polynomial_verdict(lam, rec.series)


def make_record(idx: Sequence[int], plan: ExponentPlan, lam: Weight,
                policy: TruncationPolicy) -> SolutionRecord:
    s = build_eta_product(plan, policy, lam.n).normalized(lam.n)
    w = weight_eigenvalues(lam, s)
    if w is None:
        raise ArithmeticError(f"plan {plan} produced a series that is not a weight vector")
    return SolutionRecord(tuple(idx), plan, s, w, polynomial_verdict(lam, s))


def _theta_record(args: tuple[IndexVector, Weight, TruncationPolicy]) -> SolutionRecord:
    idx, lam, policy = args
    return make_record(idx, theta_plan(idx, lam), lam, policy)


def theta(idx: Sequence[int], lam: Weight, policy: TruncationPolicy | None = None) -> SolutionRecord:
    policy = policy or TruncationPolicy(default_depth(lam))
    return _theta_record((check_index(idx, lam.n), lam, policy))


def enumerate_solutions(lam: Weight, policy: TruncationPolicy | None = None,
                        workers: int | None = None) -> list[SolutionRecord]:
    """All n! records, ordered by index vector."""
    policy = policy or TruncationPolicy(default_depth(lam))
    jobs = [(idx, lam, policy) for idx in index_vectors(lam.n)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_theta_record, jobs))
    return [_theta_record(job) for job in jobs]


@dataclass
class IndependenceReport:
    independent: bool
    groups: dict[tuple[Fraction, ...], list[IndexVector]] = field(default_factory=dict)
    duplicates: list[tuple[IndexVector, IndexVector]] = field(default_factory=list)


def independence_check(records: Sequence[SolutionRecord]) -> IndependenceReport:
    """Records of different weights are independent for free; records sharing
    a weight are tested by exact rank on the union of their supports."""
    groups: dict[tuple[Fraction, ...], list[SolutionRecord]] = {}
    for r in records:
        groups.setdefault(r.weight, []).append(r)
    ok = True
    dups = []
    for recs in groups.values():
        if len(recs) < 2:
            continue
        precision = None
        for r in recs:
            if r.series.precision is not None:
                precision = r.series.precision if precision is None else min(precision, r.series.precision)
        series = [r.series.restrict(precision) for r in recs]
        support = sorted({m for s in series for m in s.terms}, key=str)
        rows = [[s.coeff(m) for m in support] for s in series]
        if linalg.rank(rows) < len(rows):
            ok = False
        for a, b in itertools.combinations(range(len(recs)), 2):
            if series[a] == series[b]:
                dups.append((recs[a].index, recs[b].index))
    return IndependenceReport(ok, {w: [r.index for r in rs] for w, rs in groups.items()}, dups)


def oracle_confirms(rec: SolutionRecord, lam: Weight) -> bool:
    """A "yes" record must be a singular vector of the Verma module."""
    if rec.polynomial != YES:
        return False
    v = oracle.tau_inv(rec.series)
    return oracle.is_singular(lam, v) and oracle.in_kernel_span(lam, v)


def series_drop(lam: Weight, s: Series) -> tuple[Fraction, ...] | None:
    w = weight_eigenvalues(lam, s)
    return None if w is None else weight_drop(lam, w)


# --- special products --------------------------------------------------------

def mff_plan(lam: Weight) -> ExponentPlan:
    """The explicit singular vector of total weight drop (eps+1) per root."""
    n = lam.n
    eps = n - 2 + sum(lam.lam)
    if not is_natural(eps):
        raise ValueError(f"needs n - 2 + sum(lambda) in N, got {eps}")
    top = [Fraction(0)] + [ladder(lam.lam, q) for q in range(1, n)]  # lambda_{n-1,q}
    eps_q = [q + sum(lam.lam[:q]) for q in range(1, n - 1)]
    steps: list[Step] = [(q, top[q + 1]) for q in range(1, n - 1)]
    steps.append((n - 1, eps + 1))
    steps.extend((q, eps_q[q - 1]) for q in range(n - 2, 0, -1))
    return ExponentPlan(tuple(steps))


def mff_vector(lam: Weight, policy: TruncationPolicy | None = None) -> SolutionRecord:
    plan = mff_plan(lam)
    policy = policy or TruncationPolicy(2 * math.ceil(max(plan.total, 0)) + 4)
    idx = tuple(range(1, lam.n - 1)) + (1,)
    return make_record(idx, plan, lam, policy)


def phi_plan(mu: Sequence[Fraction], lam: Weight) -> ExponentPlan:
    """eta_2^{mu_2} eta_1^{...} ... eta_{n-1}^{mu_{n-1}} ... eta_1^{...}; mu_1 is unused."""
    n = lam.n
    mu = [Fraction(m) for m in mu]
    if len(mu) != n - 1:
        raise ValueError(f"mu needs {n - 1} entries")
    steps: list[Step] = []
    for i in range(2, n):
        e = mu[i - 1]
        steps.append((i, e))
        for k in range(1, i):
            e = e - lam[n - k] - 1
            steps.append((i - k, e))
    return ExponentPlan(tuple(steps))


def build_phi(mu: Sequence[Fraction], lam: Weight, policy: TruncationPolicy) -> Series:
    return build_eta_product(phi_plan(mu, lam), policy, lam.n)


def exchange_rewrite(plan: ExponentPlan, start: int | None = None) -> ExponentPlan | None:
    """Apply one exchange move eta_a^x eta_b^(x+y) eta_a^y -> eta_b^y eta_a^(x+y) eta_b^x.

    Rewrites the window beginning at ``start`` (or the first matching window);
    returns None when no window matches.
    """
    st = plan.steps
    positions = [start] if start is not None else range(len(st) - 2)
    for k in positions:
        if k < 0 or k + 2 >= len(st):
            continue
        (a, x), (b, xy), (c, y) = st[k:k + 3]
        if a == c and abs(a - b) == 1 and xy == x + y:
            new = st[:k] + ((b, y), (a, x + y), (b, x)) + st[k + 3:]
            return ExponentPlan(new)
    return None


# --- irreducibility ------------------------------------------------------------

@dataclass(frozen=True)
class IrreducibilityReport:
    irreducible: bool
    segments: tuple[tuple[int, int, Fraction], ...]  # (a, b, value) for every segment
    triggering: tuple[tuple[int, int], ...]
    natural_reading_triggering: tuple[tuple[int, int], ...]

    @property
    def readings_diverge(self) -> bool:
        return self.triggering != self.natural_reading_triggering


def irreducibility_report(lam: Weight) -> IrreducibilityReport:
    n = lam.n
    segs = []
    for a in range(1, n):
        for b in range(a, n):
            segs.append((a, b, (b - a + 1) + sum(lam[p] for p in range(a, b + 1))))
    positive = tuple((a, b) for a, b, v in segs if is_natural(v) and v > 0)
    natural = tuple((a, b) for a, b, v in segs if is_natural(v))
    return IrreducibilityReport(not positive, tuple(segs), positive, natural)


def irreducible(lam: Weight) -> bool:
    return irreducibility_report(lam).irreducible
