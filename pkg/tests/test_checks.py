"""Exploration witness, bounded exploration, renaming invariance, equivalence."""
import random

import pytest

from basm.checks import (
    behaviorally_equivalent,
    check_bounded_exploration,
    check_iso_invariance,
    enum_bijections,
    exploration_witness,
    junk_state_sampler,
)
from basm.corpus import corpus_run, load_entry_program, load_entry_state
from basm.errors import BasmError
from basm.literals import load_state
from basm.oracles import OracleSession, UniformRandomPolicy
from basm.semantics import StepStats, step
from basm.state import Location, UpdateSet, Vocabulary
from basm.syntax import parse_program, parse_term_in


def test_euclid_witness_is_the_program_subterm_closure():
    prog = load_entry_program("euclid")
    w = exploration_witness(prog)
    v = prog.vocabulary
    assert w.size == 7  # d=a, d, a, b=0, b, 0, a mod b
    for text in ("a", "b", "d", "0", "a mod b", "d = a", "b = 0"):
        assert parse_term_in(text, v) in w
    assert parse_term_in("a + b", v) not in w


def test_step_work_is_bounded_by_the_witness():
    for name in ("euclid", "enumgraph", "primality"):
        prog = load_entry_program(name)
        state = load_entry_state(name)
        w = exploration_witness(prog)
        session = OracleSession(UniformRandomPolicy(3), prog.vocabulary)
        session.begin_step()
        stats = StepStats()
        step(state, prog.step_rule, session, stats)
        assert stats.explored <= w.size, name


@pytest.mark.parametrize("name", ["euclid", "enumgraph", "primality", "tangent"])
def test_bounded_exploration_holds_on_the_corpus(name):
    prog = load_entry_program(name)
    sampler = junk_state_sampler(prog, load_entry_state(name))
    report = check_bounded_exploration(prog, sampler, trials=60, seed=5)
    assert report.passed, report.failures[:3]


def test_bounded_exploration_catches_a_peeking_step():
    """A step function that consults a location outside the witness must be
    flagged: X and Y agree on the witness but not on the junk."""
    prog = load_entry_program("euclid")
    sampler = junk_state_sampler(prog, load_entry_state("euclid"))

    def peeking_step(state, rule, session):
        updates, interactions = step(state, rule, session)
        vocab = state.vocabulary
        peeked = state.read(Location(vocab.symbol("zz_junk0"), (0,)))
        out = UpdateSet()
        for loc, v in updates.items():
            out.add(loc, v)
        out.add(Location(vocab.symbol("zz_flag"), ()), peeked % 2 == 0)
        return out, interactions

    report = check_bounded_exploration(prog, sampler, trials=60, seed=5,
                                       step_fn=peeking_step)
    assert not report.passed
    assert len(report.failures) > 10


def test_enum_bijections_enumerates_all_permutations():
    v = Vocabulary()
    v.declare_enum("A", ["x", "y"])
    v.declare_enum("B", ["p", "q", "r"])
    assert len(list(enum_bijections(v))) == 12  # 2! * 3!
    assert list(enum_bijections(Vocabulary())) == [{}]


def test_enumgraph_commutes_with_every_renaming():
    prog = load_entry_program("enumgraph")
    state = load_entry_state("enumgraph")
    for bijection in enum_bijections(prog.vocabulary):
        report = check_iso_invariance(prog, state, bijection)
        assert report.passed, (bijection, report.failures)


def test_member_naming_program_breaks_invariance():
    prog = parse_program(
        "vocab {\n"
        "  enum Node { u, v }\n"
        "  var cur : Node\n"
        "}\n"
        "do until false { cur := u }\n"
    )
    state = load_state("cur := u", prog.vocabulary, source="<test>")
    swap = {"Node": {"u": "v", "v": "u"}}
    assert check_iso_invariance(prog, state, {"Node": {"u": "u", "v": "v"}}).passed
    report = check_iso_invariance(prog, state, swap)
    assert not report.passed


def test_bijection_on_builtin_sort_is_unsupported():
    prog = load_entry_program("euclid")
    state = load_entry_state("euclid")
    with pytest.raises(BasmError) as e:
        check_iso_invariance(prog, state, {"Integer": {}})
    assert e.value.kind == "unsupported-iso"


def test_iso_check_threads_scripted_answers():
    prog = load_entry_program("primality")
    state = load_entry_state("primality")
    for bijection in enum_bijections(prog.vocabulary):  # only the empty one
        report = check_iso_invariance(prog, state, bijection, scripted_answers=[4])
        assert report.passed, report.failures


def test_equivalence_is_stepwise():
    a = corpus_run("euclid")
    b = corpus_run("euclid")
    assert behaviorally_equivalent(a, b)
    shorter = corpus_run("euclid_while")
    assert not behaviorally_equivalent(a, shorter)


def test_equivalence_sees_interaction_differences():
    lo = corpus_run("tangent", choice=0)
    hi = corpus_run("tangent", choice=1)
    assert behaviorally_equivalent(lo, corpus_run("tangent", choice=0))
    assert not behaviorally_equivalent(lo, hi)


def test_equivalence_requires_a_shared_vocabulary():
    with pytest.raises(BasmError) as e:
        behaviorally_equivalent(corpus_run("euclid"), corpus_run("enumgraph"))
    assert e.value.kind == "vocab"


def test_sampler_pairs_agree_on_core_and_differ_on_junk():
    prog = load_entry_program("euclid")
    sampler = junk_state_sampler(prog, load_entry_state("euclid"))
    rng = random.Random(0)
    x, y = sampler(rng)
    for name in ("a", "b", "d"):
        loc = Location(x.vocabulary.symbol(name), ())
        assert x.read(loc) == y.read(loc)
    junk_differs = any(
        x.read(Location(x.vocabulary.symbol(f"zz_junk{i}"), (j,)))
        != y.read(Location(y.vocabulary.symbol(f"zz_junk{i}"), (j,)))
        for i in range(3)
        for j in range(4)
    )
    assert junk_differs
