"""Engine-versus-oracle comparison used by tests and the ``check`` command."""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import EvaluationResult, run
from .model import AbductiveFramework, Literal
from .oracle import scenario_models, solutions_from_models


@dataclass
class Diff:
    query: Literal | None
    unsupported: list = field(default_factory=list)  # answer contexts with no solution above them
    missing: list = field(default_factory=list)  # minimal solutions absent from the answers
    bound_ok: bool = True
    result: EvaluationResult | None = None

    @property
    def ok(self) -> bool:
        return not self.unsupported and not self.missing and self.bound_ok

    def lines(self) -> list[str]:
        out = []
        fmt = lambda c: "{" + ", ".join(map(str, sorted(c))) + "}"  # noqa: E731
        for c in self.unsupported:
            out.append(f"query {self.query}: engine answer {fmt(c)} extends to no oracle solution")
        for c in self.missing:
            out.append(f"query {self.query}: minimal oracle solution {fmt(c)} not among engine answers")
        if not self.bound_ok:
            r = self.result
            out.append(f"query {self.query}: {r.total_ops} operations exceed the bound {r.bound}")
        return out


def compare(fw: AbductiveFramework, q: Literal | None, models=None, seed: int | None = None) -> Diff:
    if models is None:
        models = scenario_models(fw, () if q is None else (q.objective,))
    sols = solutions_from_models(models, q)
    result = run(fw, q, seed=seed)
    answers = set(result.answers)
    sol_sets = [s.abduced for s in sols]
    unsupported = [c for c in result.answers if not any(c <= b for b in sol_sets)]
    missing = sorted((s.abduced for s in sols if s.minimal and s.abduced not in answers), key=sorted)
    return Diff(q, unsupported, missing, result.within_bound, result)


def compare_all(fw: AbductiveFramework, queries, seed: int | None = None) -> list[Diff]:
    """Compare every query, sharing one scenario enumeration."""
    queries = list(queries)
    extra = tuple({q.objective for q in queries if q is not None})
    models = scenario_models(fw, extra)
    return [compare(fw, q, models, seed) for q in queries]
