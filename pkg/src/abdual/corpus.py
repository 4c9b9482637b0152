"""Random program/framework generators and the bundled example corpus."""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from .model import AbductiveFramework, Literal, ObjectiveLiteral, Program, Rule, BOTTOM
from .parser import parse_framework

ATOM_NAMES = ("a", "b", "c", "d", "e", "g")
ABDUCIBLE_NAMES = ("x", "y", "z")


def _random_literal(rng: random.Random, names, explicit: bool, negation: bool = True) -> Literal:
    o = ObjectiveLiteral(rng.choice(names), explicit and rng.random() < 0.25)
    return Literal(o, negation and rng.random() < 0.45)


def random_program(
    rng: random.Random,
    max_atoms: int = 6,
    max_rules: int = 8,
    max_body: int = 3,
    explicit: bool = True,
    names=ATOM_NAMES,
) -> Program:
    """A ground program over at most ``max_atoms`` atoms; facts are allowed (empty body)."""
    pool = names[: rng.randint(1, max_atoms)]
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        head = ObjectiveLiteral(rng.choice(pool), explicit and rng.random() < 0.2)
        body = tuple(_random_literal(rng, pool, explicit) for _ in range(rng.randint(0, max_body)))
        rules.append(Rule(Literal(head), body))
    return Program(tuple(rules))


def random_framework(
    rng: random.Random,
    max_atoms: int = 6,
    max_abducible_pairs: int = 3,
    max_integrity: int = 2,
    max_rules: int = 8,
    max_body: int = 3,
    explicit: bool = True,
) -> AbductiveFramework:
    """A framework with at most ``max_atoms`` atoms in total, some of which are abducible."""
    total = rng.randint(1, max_atoms)
    k = rng.randint(0, min(max_abducible_pairs, total))
    abd_names = ABDUCIBLE_NAMES[:k]
    prog_names = ATOM_NAMES[: max(1, total - k)]
    names = prog_names + abd_names
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        head = ObjectiveLiteral(rng.choice(prog_names), explicit and rng.random() < 0.2)
        body = tuple(_random_literal(rng, names, explicit) for _ in range(rng.randint(0, max_body)))
        rules.append(Rule(Literal(head), body))
    integrity = []
    for _ in range(rng.randint(0, max_integrity)):
        body = tuple(_random_literal(rng, names, explicit) for _ in range(rng.randint(1, 2)))
        integrity.append(Rule(BOTTOM, body))
    abducibles = frozenset(ObjectiveLiteral(n, neg) for n in abd_names for neg in (False, True))
    return AbductiveFramework(Program(tuple(rules)), abducibles, tuple(integrity))


def query_literals(fw: AbductiveFramework) -> list[Literal]:
    """Every literal over the framework's user objective literals, sorted."""
    objs = {o for o in fw.objective_literals() if not o.reserved}
    return sorted(Literal(o, neg) for o in objs for neg in (False, True))


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    text: str
    query: str | None

    def framework(self) -> AbductiveFramework:
        return parse_framework(self.text)


# name -> default query (None: no natural query)
_BUNDLED = {
    "p1": "q",
    "p2": "s",
    "p3": "q",
    "coherence": "c",
    "fold_m": "m",
    "gsm_pq": None,
}


def bundled_names() -> list[str]:
    return list(_BUNDLED)


def bundled(name: str) -> CorpusEntry:
    text = resources.files("abdual").joinpath("data", f"{name}.lp").read_text(encoding="utf-8")
    return CorpusEntry(name, text, _BUNDLED[name])


def bundled_corpus() -> list[CorpusEntry]:
    return [bundled(n) for n in _BUNDLED]
