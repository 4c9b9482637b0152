"""Symbolic vocabulary: literals, rules, programs, interpretations and frameworks.

All values are immutable.  Atoms are opaque ground names (``p``, ``q*``,
``edge(a,b)``); an objective literal pairs a name with an explicit-negation
flag and a literal adds a default-negation flag on top.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import FrameworkError, InconsistentScenarioError, ReservedSymbolError

TRUE_NAME = "t"
UNDEF_NAME = "u"
FALSE_NAME = "f"
BOTTOM_NAME = "bottom"
QUERY_NAME = "query"

CONSTANT_NAMES = frozenset({TRUE_NAME, UNDEF_NAME, FALSE_NAME})
RESERVED_NAMES = CONSTANT_NAMES | {BOTTOM_NAME, QUERY_NAME}
FOLD_PREFIXES = ("fold_a_", "fold_b_")


def is_reserved_name(name: str) -> bool:
    return name in RESERVED_NAMES or name.startswith(FOLD_PREFIXES)


@dataclass(frozen=True, slots=True, order=True)
class ObjectiveLiteral:
    name: str
    negated: bool = False
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.negated and is_reserved_name(self.name):
            raise ReservedSymbolError(f"reserved symbol {self.name!r} cannot be explicitly negated")
        object.__setattr__(self, "_hash", hash((self.name, self.negated)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return f"-{self.name}" if self.negated else self.name

    @property
    def reserved(self) -> bool:
        return is_reserved_name(self.name)

    @property
    def positive(self) -> Literal:
        return Literal(self)

    @property
    def negative(self) -> Literal:
        return Literal(self, True)


@dataclass(frozen=True, slots=True, order=True)
class Literal:
    objective: ObjectiveLiteral
    default_negated: bool = False
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.objective._hash, self.default_negated)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return f"not {self.objective}" if self.default_negated else str(self.objective)

    @property
    def is_positive(self) -> bool:
        return not self.default_negated

    @property
    def is_negative(self) -> bool:
        return self.default_negated


def conj_e(o: ObjectiveLiteral) -> ObjectiveLiteral:
    """Explicit conjugate: ``p`` <-> ``-p``."""
    if o.reserved:
        raise ReservedSymbolError(f"reserved symbol {o.name!r} has no explicit conjugate")
    return ObjectiveLiteral(o.name, not o.negated)


def conj_d(lit: Literal) -> Literal:
    """Default conjugate: ``L`` <-> ``not L``."""
    return Literal(lit.objective, not lit.default_negated)


def objective(name: str, negated: bool = False) -> ObjectiveLiteral:
    return ObjectiveLiteral(name, negated)


def literal(text: str) -> Literal:
    """Build a literal from ``p``, ``-p``, ``not p`` or ``not -p``; no validation of names."""
    text = text.strip()
    neg = False
    if text.startswith("not "):
        neg = True
        text = text[4:].strip()
    exp = text.startswith("-")
    if exp:
        text = text[1:]
    return Literal(ObjectiveLiteral(text, exp), neg)


TRUE = Literal(ObjectiveLiteral(TRUE_NAME))
UNDEF = Literal(ObjectiveLiteral(UNDEF_NAME))
FALSE = Literal(ObjectiveLiteral(FALSE_NAME))
BOTTOM = Literal(ObjectiveLiteral(BOTTOM_NAME))
QUERY = Literal(ObjectiveLiteral(QUERY_NAME))


@dataclass(frozen=True, slots=True)
class Rule:
    head: Literal
    body: tuple[Literal, ...] = ()

    def __post_init__(self):
        if not isinstance(self.body, tuple):
            object.__setattr__(self, "body", tuple(self.body))

    @property
    def size(self) -> int:
        return 1 + len(self.body)

    @property
    def is_fact(self) -> bool:
        return not self.body

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.body))}."


def _close_objective(objs: Iterable[ObjectiveLiteral]) -> set[ObjectiveLiteral]:
    out = set()
    for o in objs:
        if o.name in CONSTANT_NAMES:
            continue
        out.add(o)
        if not o.reserved:
            out.add(conj_e(o))
    return out


@dataclass(frozen=True)
class Program:
    """A finite ground rule set; rule order is kept for deterministic output."""

    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        seen = dict.fromkeys(self.rules)
        object.__setattr__(self, "rules", tuple(seen))

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __or__(self, other: Program | Iterable[Rule]) -> Program:
        return Program(self.rules + tuple(other))

    def occurring_objectives(self) -> set[ObjectiveLiteral]:
        objs = set()
        for r in self.rules:
            objs.add(r.head.objective)
            objs.update(b.objective for b in r.body)
        return objs

    def objective_literals(self) -> set[ObjectiveLiteral]:
        """Objective literals of the program closed under explicit conjugation (constants excluded)."""
        return _close_objective(self.occurring_objectives())

    def literals(self) -> set[Literal]:
        """Closure of occurring literals under explicit and default conjugation."""
        out = set()
        for o in self.objective_literals():
            out.add(Literal(o))
            out.add(Literal(o, True))
        return out

    def heads(self) -> set[Literal]:
        return {r.head for r in self.rules}

    def rules_for(self, head: Literal) -> list[Rule]:
        return [r for r in self.rules if r.head == head]

    def size(self) -> int:
        return sum(r.size for r in self.rules)

    def __str__(self):
        return "\n".join(map(str, self.rules))


def program_size(p: Program | Iterable[Rule]) -> int:
    """Sum over rules of one plus the body length."""
    return sum(r.size for r in p)


@dataclass(frozen=True, slots=True)
class Interpretation:
    """A pair of sets: true objective literals and default-negated (false) ones.

    ``false_set`` holds the objective literal ``O`` for each ``not O`` in the
    interpretation.  Neither consistency nor coherence is enforced.
    """

    true_set: frozenset[ObjectiveLiteral] = frozenset()
    false_set: frozenset[ObjectiveLiteral] = frozenset()

    @classmethod
    def from_literals(cls, lits: Iterable[Literal]) -> Interpretation:
        t, f = set(), set()
        for lit in lits:
            (f if lit.default_negated else t).add(lit.objective)
        return cls(frozenset(t), frozenset(f))

    def literals(self) -> set[Literal]:
        return {Literal(o) for o in self.true_set} | {Literal(o, True) for o in self.false_set}

    def __contains__(self, lit: Literal) -> bool:
        return self.holds(lit)

    def holds(self, lit: Literal) -> bool:
        """Membership with the convention that ``t`` and ``not f`` are always in, ``u``/``not u`` never."""
        name = lit.objective.name
        if name in CONSTANT_NAMES:
            if lit.default_negated:
                return name == FALSE_NAME
            return name == TRUE_NAME
        if lit.default_negated:
            return lit.objective in self.false_set
        return lit.objective in self.true_set

    def value(self, o: ObjectiveLiteral) -> str:
        """``'t'``, ``'f'``, ``'u'`` or ``'both'`` for paraconsistent literals."""
        t, f = o in self.true_set, o in self.false_set
        if t and f:
            return "both"
        return "t" if t else "f" if f else "u"

    def is_consistent(self) -> bool:
        return not (self.true_set & self.false_set)

    def is_coherent(self) -> bool:
        return all(o.reserved or conj_e(o) in self.false_set for o in self.true_set)

    def restrict(self, s: Iterable[ObjectiveLiteral]) -> Interpretation:
        s = set(s)
        return Interpretation(self.true_set & s, self.false_set & s)

    def __len__(self):
        return len(self.true_set) + len(self.false_set)

    def __str__(self):
        return "{" + ", ".join(map(str, sorted(self.literals()))) + "}"


def info_leq(i1: Interpretation, i2: Interpretation) -> bool:
    """Information ordering: both components are subsets."""
    return i1.true_set <= i2.true_set and i1.false_set <= i2.false_set


def restrict(i: Interpretation, s: Iterable[ObjectiveLiteral]) -> Interpretation:
    return i.restrict(s)


def _mentions(rule: Rule, name: str) -> bool:
    return rule.head.objective.name == name or any(b.objective.name == name for b in rule.body)


@dataclass(frozen=True)
class AbductiveFramework:
    """A program, a conjugation-closed set of abducibles and integrity rules (head ``bottom``)."""

    program: Program = field(default_factory=Program)
    abducibles: frozenset[ObjectiveLiteral] = frozenset()
    integrity: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "abducibles", frozenset(self.abducibles))
        object.__setattr__(self, "integrity", tuple(dict.fromkeys(self.integrity)))
        for a in self.abducibles:
            if a.reserved:
                raise ReservedSymbolError(f"reserved symbol {a.name!r} cannot be abducible")
            if conj_e(a) not in self.abducibles:
                raise FrameworkError(f"abducibles not closed under explicit negation: missing {conj_e(a)}")
        for r in self.program:
            if r.head.default_negated:
                raise FrameworkError(f"rule head must be an objective literal: {r}")
            if r.head.objective in self.abducibles:
                raise FrameworkError(f"abducible {r.head} is the head of a rule")
            if _mentions(r, BOTTOM_NAME):
                raise FrameworkError(f"bottom occurs in a program rule: {r}")
        for r in self.integrity:
            if r.head != BOTTOM or any(b.objective.name == BOTTOM_NAME for b in r.body):
                raise FrameworkError(f"malformed integrity rule: {r}")

    @property
    def rules(self) -> Program:
        """Program rules followed by integrity rules."""
        return self.program | self.integrity

    def objective_literals(self) -> set[ObjectiveLiteral]:
        return self.rules.objective_literals() | set(self.abducibles)


@dataclass(frozen=True)
class Scenario:
    framework: AbductiveFramework
    abduced: frozenset[ObjectiveLiteral] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "abduced", frozenset(self.abduced))
        extra = self.abduced - self.framework.abducibles
        if extra:
            raise FrameworkError(f"not abducible: {sorted(map(str, extra))}")
        if not context_consistent(self.abduced):
            raise InconsistentScenarioError(f"scenario abduces a literal and its explicit conjugate: {sorted(map(str, self.abduced))}")


def context_consistent(ctx: Iterable[ObjectiveLiteral]) -> bool:
    """No objective literal together with its explicit conjugate."""
    ctx = ctx if isinstance(ctx, (set, frozenset)) else set(ctx)
    # reserved names are never negated, so a clash is exactly a repeated name
    return len({o.name for o in ctx}) == len(ctx)


def scenario_program(s: Scenario) -> Program:
    """``A :- t`` for each abduced ``A``, ``A :- u`` for every other abducible."""
    rules = []
    for a in sorted(s.framework.abducibles):
        rules.append(Rule(Literal(a), (TRUE if a in s.abduced else UNDEF,)))
    return Program(tuple(rules))


def scenario_rules(fw: AbductiveFramework, abduced: Iterable[ObjectiveLiteral]) -> Program:
    """``P u P_B u I`` for the scenario abducing ``abduced``."""
    return fw.rules | scenario_program(Scenario(fw, frozenset(abduced)))
