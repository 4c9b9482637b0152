import pytest
from hypothesis import given

from abdual.dual import (
    COHERENCY,
    FOLDING,
    QUERY_TAG,
    SOURCE,
    attach_query,
    dual_fold,
    dual_size_check,
    dual_unfold,
    fold_a,
    fold_b,
)
from abdual.errors import NonGroundError, ReservedSymbolError
from abdual.model import AbductiveFramework, Program, Rule, literal
from abdual.oracle import fold_unfold_agree
from abdual.parser import parse_framework, parse_program

from .conftest import programs


def rules_text(rules):
    return {str(r) for r in rules}


def coherency(*names):
    out = set()
    for n in names:
        out |= {f"not {n} :- -{n}.", f"not -{n} :- {n}."}
    return out


P1_DUAL = {
    "p :- not q.",
    "p :- not r.",
    "q :- not p.",
    "query :- q, not bottom.",
    "not p :- q, r.",
    "not q :- p.",
    "not r :- t.",
    "not query :- not q.",
    "not query :- bottom.",
    "not bottom :- t.",
} | coherency("p", "q", "r")

P2_DUAL = {
    "s :- not p, not q, not r.",
    "p :- not s, not r, q.",
    "q :- not p, r.",
    "r :- not q, p.",
    "query :- s, not bottom.",
    "not s :- p.",
    "not s :- q.",
    "not s :- r.",
    "not p :- s.",
    "not p :- r.",
    "not p :- not q.",
    "not q :- p.",
    "not q :- not r.",
    "not r :- q.",
    "not r :- not p.",
    "not query :- not s.",
    "not query :- bottom.",
    "not bottom :- t.",
} | coherency("p", "q", "r", "s")

P3_DUAL = {
    "p :- not q*.",
    "q :- not p*.",
    "bottom :- p_constr.",
    "bottom :- q_constr.",
    "p_constr :- p, -p*.",
    "q_constr :- q, -q*.",
    "query :- q, not bottom.",
    "not p :- q*.",
    "not q :- p*.",
    "not bottom :- not p_constr, not q_constr.",
    "not p_constr :- not p.",
    "not p_constr :- not -p*.",
    "not q_constr :- not q.",
    "not q_constr :- not -q*.",
    "not query :- not q.",
    "not query :- bottom.",
} | coherency("p", "q", "p*", "q*", "p_constr", "q_constr")

M_FOLDING = {
    "not m :- not fold_a_1_m.",
    "not fold_a_1_m :- not fold_b_1_m, not fold_a_2_m.",
    "not fold_a_2_m :- not fold_b_2_m, not fold_a_3_m.",
    "not fold_a_3_m :- not fold_b_3_m.",
    "not fold_b_1_m :- not n1.",
    "not fold_b_1_m :- o1.",
    "not fold_b_2_m :- not n2.",
    "not fold_b_2_m :- o2.",
    "not fold_b_3_m :- not n3.",
    "not fold_b_3_m :- o3.",
}


def test_p1_dual_unfolded(fw_of):
    dp = dual_unfold(attach_query(fw_of("p1"), literal("q")))
    # explicit negations have no rules, so their negation holds unconditionally
    extra = {"not -p :- t.", "not -q :- t.", "not -r :- t."}
    assert rules_text(dp.rules) == P1_DUAL | extra


def test_p2_dual_unfolded(fw_of):
    dp = dual_unfold(attach_query(fw_of("p2"), literal("s")))
    extra = {f"not -{n} :- t." for n in "pqrs"}
    assert rules_text(dp.rules) == P2_DUAL | extra


def test_p3_dual_unfolded(fw_of):
    fw = fw_of("p3")
    dp = dual_unfold(attach_query(fw, literal("q")), fw.abducibles)
    extra = {"not -p :- t.", "not -q :- t.", "not -p_constr :- t.", "not -q_constr :- t."}
    assert rules_text(dp.rules) == P3_DUAL | extra


def test_m_folding_chain(fw_of):
    dp = dual_fold(fw_of("fold_m").rules)
    chains = {str(r) for r in dp.tagged(FOLDING) if r.body != (literal("t"),)}
    assert chains == M_FOLDING


def test_provenance_tags(fw_of):
    dp = dual_fold(attach_query(fw_of("p1"), literal("q")))
    assert len(dp.provenance) == len(dp.rules)
    assert rules_text(dp.tagged(SOURCE)) == {"p :- not q.", "p :- not r.", "q :- not p."}
    assert rules_text(dp.tagged(QUERY_TAG)) == {"query :- q, not bottom."}
    assert rules_text(dp.tagged(COHERENCY)) == coherency("p", "q", "r")
    # source, then folding, then coherency
    order = [t for t in dp.provenance if t != QUERY_TAG]
    assert order == sorted(order, key=[SOURCE, FOLDING, COHERENCY].index)


def test_fact_gets_no_negative_rule():
    dp = dual_fold(parse_program("p.\nq :- not p."))
    assert not [r for r in dp.rules if r.head == literal("not p") and r.body != (literal("-p"),)]


def test_empty_program_with_abducibles():
    fw = parse_framework("abducible a.")
    dp = dual_fold(Program(), fw.abducibles)
    assert rules_text(dp.rules) == coherency("a")


def _negative_rules(dp, head):
    return {str(r) for r, tag in zip(dp.rules, dp.provenance) if r.head == literal(head) and tag != COHERENCY}


def test_single_rule_unfolded():
    dp = dual_unfold(parse_program("a :- b, c."))
    assert _negative_rules(dp, "not a") == {"not a :- not b.", "not a :- not c."}
    two = dual_unfold(parse_program("a :- b.\na :- c."))
    assert _negative_rules(two, "not a") == {"not a :- not b, not c."}


def test_single_rule_folded_leaves():
    dp = dual_fold(parse_program("a :- b, c."))
    assert _negative_rules(dp, "not fold_b_1_a") == {"not fold_b_1_a :- not b.", "not fold_b_1_a :- not c."}


def test_attach_query(fw_of):
    assert str(attach_query(fw_of("p1"), literal("q")).rules[-1]) == "query :- q, not bottom."
    assert str(attach_query(fw_of("p2"), literal("s")).rules[-1]) == "query :- s, not bottom."
    p3 = attach_query(fw_of("p3"), literal("q"))
    assert "bottom :- p_constr." in rules_text(p3) and "query :- q, not bottom." in rules_text(p3)
    assert str(attach_query(AbductiveFramework(), None).rules[-1]) == "query :- not bottom."
    with pytest.raises(ReservedSymbolError):
        attach_query(fw_of("p1"), literal("bottom"))


def test_non_ground_rejected():
    with pytest.raises(NonGroundError):
        dual_fold(Program((Rule(literal("p"), (literal("X"),)),)))


def test_size_check_examples(fw_of):
    p1 = fw_of("p1")
    assert dual_size_check(p1.rules)[2]
    assert dual_size_check(Program()) == (0, 0, True)
    # the m program alone: three source rules of size 3 plus its ten folding rules
    chain = sum(r.size for r in parse_program("\n".join(M_FOLDING), dual=True))
    assert 9 + chain < 9 * 9


def test_size_check_counts_whole_dual(fw_of):
    # with the case-2 rules and coherency axioms of the conjugate closure
    assert dual_size_check(fw_of("fold_m").rules) == (9, 85, False)  # [DERIVED]
    assert dual_size_check(parse_program("p :- q.")) == (2, 22, False)  # [DERIVED]


@given(programs())
def test_fold_unfold_equivalent(p):
    assert fold_unfold_agree(p)


@given(programs())
def test_coherency_axioms_exactly_for_objective_literals(p):
    dp = dual_fold(p)
    heads = {r.head.objective for r in dp.tagged(COHERENCY)}
    assert heads == {o for o in p.objective_literals() if not o.reserved}


@given(programs())
def test_folding_names_stay_out_of_source_and_do_not_collide(p):
    dp = dual_fold(p)
    for r in dp.tagged(SOURCE):
        assert not any(lit.objective.name.startswith("fold_") for lit in (r.head, *r.body))
    objs = [o for o in p.objective_literals() if not o.reserved]
    assert len({fold_a(1, o) for o in objs}) == len(objs)
    assert len({fold_b(1, o) for o in objs}) == len(objs)
