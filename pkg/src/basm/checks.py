"""Runtime property checks.

Three of the defining properties of this machine model are phrased as
executable checks over programs and traces:

  * bounded exploration: one step only depends on (and only touches) the
    values of the program's own subterms, the "exploration witness";
  * isomorphism invariance: renaming enum universe members commutes with
    taking a step, provided oracle answers are renamed the same way;
  * replay determinism: a recorded trace, replayed against its program with
    the recorded answers fed back, reproduces itself exactly (see
    semantics.replay).

`behaviorally_equivalent` is the strictest trace equivalence: traces must
agree stepwise on update sets and on interaction sequences, and end the same
way. Two runs that change state identically but talk to their oracles
differently are distinct behaviors on purpose.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .errors import BasmError
from .literals import render_value
from .oracles import OracleSession, ScriptedPolicy, ScriptEntry, UniformRandomPolicy
from .semantics import Trace, step
from .state import (
    BOOLEAN,
    DYNAMIC,
    INTEGER,
    Location,
    State,
    Vocabulary,
    transport,
)
from .syntax import Program, Rule, Term, iter_subterms, rule_terms


@dataclass(frozen=True)
class Witness:
    """The syntactic closure of every term occurring in a program's step."""

    terms: frozenset

    @property
    def size(self) -> int:
        return len(self.terms)

    def __contains__(self, term: Term) -> bool:
        return term in self.terms


def exploration_witness(program: Program) -> Witness:
    acc: set[Term] = set()
    if program.halt is not None:
        acc.update(iter_subterms(program.halt))
    for t in rule_terms(program.step_rule):
        acc.update(iter_subterms(t))
    return Witness(frozenset(acc))


@dataclass
class CheckReport:
    check: str
    trials: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return json.dumps(
            {"check": self.check, "trials": self.trials, "failures": self.failures}
        )


def _observe(state: State, rule: Rule, session: OracleSession):
    """One step summarised for comparison: updates, interactions, or the error kind."""
    start = session.begin_step()
    try:
        updates, interactions = step(state, rule, session)
    except BasmError as e:
        partial = [
            (i.oracle, tuple(render_value(a) for a in i.args), render_value(i.answer))
            for i in session.log[start:]
        ]
        return ("error", e.kind, tuple(partial))
    ups = tuple(
        (loc.render(), render_value(v)) for loc, v in updates.items()
    )
    inter = tuple(
        (i.oracle, tuple(render_value(a) for a in i.args), render_value(i.answer))
        for i in interactions
    )
    return ("ok", ups, inter)


def junk_state_sampler(program: Program, base_state: State, *, junk_symbols: int = 3,
                       junk_entries: int = 4, int_range: tuple[int, int] = (-50, 50)):
    """Default sampler for bounded-exploration trials.

    Each trial builds a state X by randomising the program's integer and
    boolean variables over a copy of the base state, plus a handful of junk
    locations the program never mentions. Y is X with only the junk locations
    perturbed, so X and Y agree on every witness term.
    """
    vocab = program.vocabulary.copy()
    junk = [
        vocab.declare(f"zz_junk{i}", (INTEGER,), INTEGER, DYNAMIC)
        for i in range(junk_symbols)
    ]
    junk_flag = vocab.declare("zz_flag", (), BOOLEAN, DYNAMIC)
    lo, hi = int_range
    core_syms = [program.vocabulary.symbol(s.name) for s in program.vocabulary.dynamic_symbols()]

    def randomize_core(rng: random.Random) -> dict:
        interp = dict(base_state.interp)
        for sym in core_syms:
            if sym.arity != 0:
                continue
            if sym.result_sort is INTEGER:
                interp[Location(sym, ())] = rng.randint(lo, hi)
            elif sym.result_sort is BOOLEAN:
                interp[Location(sym, ())] = rng.choice((True, False))
        return interp

    def junk_bindings(rng: random.Random) -> dict:
        bound = {}
        for sym in junk:
            for i in range(junk_entries):
                bound[Location(sym, (i,))] = rng.randint(lo, hi)
        bound[Location(junk_flag, ())] = rng.choice((True, False))
        return bound

    def sample(rng: random.Random) -> tuple[State, State]:
        core = randomize_core(rng)
        x = State(vocab, {**core, **junk_bindings(rng)}, validate=False)
        y = State(vocab, {**core, **junk_bindings(rng)}, validate=False)
        return x, y

    return sample


def check_bounded_exploration(program: Program, sampler, trials: int, seed: int,
                              step_fn: Optional[Callable] = None) -> CheckReport:
    """States agreeing on the witness must step identically.

    Both states run one step under fresh uniform policies with the same trial
    seed, so equal query sequences receive identical answers; any divergence
    in updates, interactions, or failure kind is a counterexample.
    """
    rng = random.Random(seed)
    failures = []
    for trial in range(trials):
        x, y = sampler(rng)
        trial_seed = rng.getrandbits(63)
        sx = OracleSession(UniformRandomPolicy(trial_seed), x.vocabulary)
        sy = OracleSession(UniformRandomPolicy(trial_seed), y.vocabulary)
        runner = step_fn if step_fn is not None else step
        ox = _observe_with(runner, x, program.step_rule, sx)
        oy = _observe_with(runner, y, program.step_rule, sy)
        if ox != oy:
            failures.append(
                f"trial {trial} (seed {trial_seed}): steps differ: {ox!r} vs {oy!r}"
            )
    return CheckReport("bexp", trials, failures)


def _observe_with(step_fn, state, rule, session):
    if step_fn is step:
        return _observe(state, rule, session)
    start = session.begin_step()
    try:
        updates, interactions = step_fn(state, rule, session)
    except BasmError as e:
        return ("error", e.kind, ())
    ups = tuple((loc.render(), render_value(v)) for loc, v in updates.items())
    inter = tuple(
        (i.oracle, tuple(render_value(a) for a in i.args), render_value(i.answer))
        for i in interactions
    )
    return ("ok", ups, inter)


def _move_value(value, maps: dict, vocab: Vocabulary):
    from .state import EnumValue

    if isinstance(value, EnumValue) and value.sort_name in maps:
        return EnumValue(value.sort_name, maps[value.sort_name][value.member])
    return value


def check_iso_invariance(program: Program, state: State, bijection: dict,
                         scripted_answers: Iterable = ()) -> CheckReport:
    """Stepping commutes with renaming enum members.

    Runs one step from `state` and one from its transported twin, both under
    scripted answers (the twin's answers are transported too), and compares
    the twin's step against the transported original step.
    """
    vocab = program.vocabulary
    for sort_name in bijection:
        sort = vocab.sorts.get(sort_name)
        if sort is not None and not sort.is_enum:
            raise BasmError("unsupported-iso", f"bijection touches builtin sort {sort_name}")
    maps = {name: dict(perm) for name, perm in bijection.items()}
    moved_state = transport(state, bijection)

    answers = list(scripted_answers)
    moved_answers = [_move_value(a, maps, vocab) for a in answers]
    sx = OracleSession(ScriptedPolicy.from_answers(answers), vocab)
    sy = OracleSession(ScriptedPolicy.from_answers(moved_answers), vocab)

    failures = []
    obs_x = _observe(state, program.step_rule, sx)
    obs_y = _observe(moved_state, program.step_rule, sy)
    if obs_x[0] != obs_y[0]:
        failures.append(f"outcomes differ under {bijection!r}: {obs_x[0]} vs {obs_y[0]}")
        return CheckReport("iso", 1, failures)
    if obs_x[0] == "error":
        if obs_x != obs_y:
            failures.append(f"errors differ under {bijection!r}: {obs_x!r} vs {obs_y!r}")
        return CheckReport("iso", 1, failures)

    def move_rendered(value_text: str) -> str:
        for perm in maps.values():
            if value_text in perm:
                return perm[value_text]
        return value_text

    def move_loc(loc_text: str) -> str:
        if "(" not in loc_text:
            return loc_text
        head, body = loc_text.split("(", 1)
        parts = body[:-1].split(",")
        return f"{head}({','.join(move_rendered(p) for p in parts)})"

    expected_updates = tuple(
        sorted((move_loc(l), move_rendered(v)) for l, v in obs_x[1])
    )
    got_updates = tuple(sorted(obs_y[1]))
    if expected_updates != got_updates:
        failures.append(
            f"updates do not commute with {bijection!r}: "
            f"expected {expected_updates!r}, got {got_updates!r}"
        )
    expected_inter = tuple(
        (o, tuple(move_rendered(a) for a in args), move_rendered(ans))
        for o, args, ans in obs_x[2]
    )
    if expected_inter != obs_y[2]:
        failures.append(
            f"interactions do not commute with {bijection!r}: "
            f"expected {expected_inter!r}, got {obs_y[2]!r}"
        )
    return CheckReport("iso", 1, failures)


def enum_bijections(vocab: Vocabulary) -> Iterator[dict]:
    """Every bijection of every enum universe (identity included)."""
    from itertools import permutations, product

    enums = [s for s in vocab.sorts.values() if s.is_enum]
    if not enums:
        yield {}
        return
    per_sort = [
        [dict(zip(s.members, perm)) for perm in permutations(s.members)] for s in enums
    ]
    for combo in product(*per_sort):
        yield {s.name: perm for s, perm in zip(enums, combo)}


def behaviorally_equivalent(a: Trace, b: Trace) -> bool:
    """Stepwise equality of update sets and interaction sequences, same outcome."""
    if a.initial_state.vocabulary != b.initial_state.vocabulary:
        raise BasmError("vocab", "traces are over different vocabularies")
    if not a.outcome.same_as(b.outcome):
        return False
    if len(a.steps) != len(b.steps):
        return False
    for ra, rb in zip(a.steps, b.steps):
        if ra.updates != rb.updates:
            return False
        if list(ra.interactions) != list(rb.interactions):
            return False
    return True
