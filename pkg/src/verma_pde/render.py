"""Text and LaTeX renderings of plans, series and records."""

from __future__ import annotations

from fractions import Fraction

from .algebra import Monomial, Series
from .singular import ExponentPlan, SolutionRecord


def _latex_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    sign = "-" if q < 0 else ""
    return f"{sign}\\frac{{{abs(q.numerator)}}}{{{q.denominator}}}"


def latex_monomial(m: Monomial) -> str:
    parts = []
    for (i, j), e in m.exps:
        base = f"x_{{{i},{j}}}"
        parts.append(base if e == 1 else f"{base}^{{{_latex_rational(e)}}}")
    return " ".join(parts)


def latex_series(s: Series, n: int | None = None) -> str:
    if s.is_zero():
        out = "0"
    else:
        out = ""
        for k, (m, c) in enumerate(s.sorted_terms(n)):
            mono = latex_monomial(m)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{_latex_rational(mag)} {mono}"
            else:
                body = _latex_rational(mag)
            out += (("-" if sign == "-" else "") if k == 0 else f" {sign} ") + body
    if s.truncated:
        out += f" + O(\\deg > {s.precision})"
    return out


def latex_plan(plan: ExponentPlan) -> str:
    if not plan.steps:
        return "1"
    return "".join(f"\\eta_{{{r}}}^{{{_latex_rational(e)}}}" for r, e in plan.steps) + "(1)"


def text_series(s: Series, n: int | None = None) -> str:
    if s.is_zero():
        body = "0"
    else:
        body = " + ".join(
            (str(m) if c == 1 and m.exps else f"{c}" if not m.exps else f"{c}*{m}")
            for m, c in s.sorted_terms(n)
        ).replace("+ -", "- ")
    if s.truncated:
        body += f" + O(deep degree > {s.precision})"
    return body


def text_record(rec: SolutionRecord, n: int) -> str:
    idx = ",".join(str(i) for i in rec.index)
    weight = ", ".join(str(w) for w in rec.weight)
    head = f"theta[{idx}]  polynomial={rec.polynomial}  exact={str(rec.exact).lower()}  weight=({weight})"
    return f"{head}\n  plan:   {rec.plan}\n  series: {text_series(rec.series, n)}"


def latex_record(rec: SolutionRecord, n: int) -> str:
    idx = ",".join(str(i) for i in rec.index)
    return f"\\theta_{{({idx})}} = {latex_plan(rec.plan)} = {latex_series(rec.series, n)}"
