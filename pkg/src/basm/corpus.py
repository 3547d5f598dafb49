"""The bundled example programs and helpers to run them.

Entries live under corpus/<name>/ at the repository root:

  program.basm      the program
  init/*.state      initial states (the first listed is the default)
  scripts/*.jsonl   prepared oracle scripts, where the entry uses any
  golden/*.jsonl    recorded traces, regenerated by scripts/make_goldens.py

Entries:

  euclid           gcd by repeated remainder; do-until form, halts on d = a
  euclid_while     the loop alone, halting on b = 0; one step shorter, since
                   the final d := a is what the do-until form folds in
  euclid_implicit  the same step rule under implicit iteration (fixed point)
  tangent          tangent from q to circle C via the auxiliary circle over
                   the midpoint; the intersection oracle picks the touch point
  tangent_direct   the same construction as a single nested term, one step
  primality        repeated random base test a^(n-1) mod n != 1; the same
                   draw is read twice per step through the query cache
  enumgraph        successor walk on a two-member enum universe; fixture for
                   the isomorphism-invariance check

The default initial state of `primality` starts i at 1 and halts on i > k, so
exactly k bases are checked and the false-positive rate for composite n is
liar_rate(n) ** k.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import BasmError
from .geometry import Circle, Line, Point
from .literals import load_state, parse_value
from .oracles import BuiltinPolicy, ScriptedPolicy, ScriptEntry, UniformRandomPolicy
from .semantics import Trace, run
from .state import Location, State, UNDEF, UpdateSet, value_conforms
from .syntax import Program, parse_program
from .traceio import load_script


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    init_files: tuple[str, ...]
    golden_files: tuple[str, ...]
    policy: str = "builtin"  # builtin | uniform
    seed: int = 0
    script_files: tuple[str, ...] = ()


ENTRIES: dict[str, CorpusEntry] = {
    e.name: e
    for e in (
        CorpusEntry("euclid", ("a12b8.state",), ("a12b8.jsonl",)),
        CorpusEntry("euclid_while", ("a12b8.state",), ("a12b8.jsonl",)),
        CorpusEntry("euclid_implicit", ("a12b8.state",), ("a12b8.jsonl",)),
        CorpusEntry(
            "tangent",
            ("default.state",),
            ("choice0.jsonl", "choice1.jsonl"),
            script_files=("choice0.jsonl", "choice1.jsonl"),
        ),
        CorpusEntry("tangent_direct", ("default.state",), ("choice0.jsonl",)),
        CorpusEntry(
            "primality", ("n15k2.state",), ("n15k2_seed42.jsonl",), policy="uniform", seed=42
        ),
        CorpusEntry("enumgraph", ("default.state",), ("default.jsonl",)),
    )
}


def corpus_dir() -> Path:
    env = os.environ.get("BASM_CORPUS_DIR")
    if env:
        return Path(env)
    here = Path(__file__).resolve()
    candidate = here.parents[2] / "corpus"
    if candidate.is_dir():
        return candidate
    fallback = Path.cwd() / "corpus"
    if fallback.is_dir():
        return fallback
    raise BasmError("corpus", "corpus directory not found; set BASM_CORPUS_DIR")


def entry_dir(name: str) -> Path:
    if name not in ENTRIES:
        raise BasmError("corpus", f"unknown corpus entry: {name}")
    return corpus_dir() / name


_program_cache: dict[str, Program] = {}
_state_cache: dict[tuple[str, str], State] = {}


def load_entry_program(name: str) -> Program:
    if name not in _program_cache:
        path = entry_dir(name) / "program.basm"
        _program_cache[name] = parse_program(path.read_text())
    return _program_cache[name]


def load_entry_state(name: str, init_file: Optional[str] = None) -> State:
    entry = ENTRIES[name]
    init_file = init_file or entry.init_files[0]
    key = (name, init_file)
    if key not in _state_cache:
        program = load_entry_program(name)
        path = entry_dir(name) / "init" / init_file
        _state_cache[key] = load_state(path.read_text(), program.vocabulary, source=str(path))
    return _state_cache[key]


def _coerce(value, sort, vocabulary):
    if isinstance(value, str):
        return parse_value(value, sort, vocabulary)
    if isinstance(value, tuple) and len(value) == 2 and all(
        isinstance(c, (int, float)) for c in value
    ):
        value = Point(float(value[0]), float(value[1]))
    if isinstance(value, tuple) and len(value) == 2 and all(
        isinstance(c, Point) for c in value
    ):
        from .state import CIRCLE

        value = Circle(*value) if sort is CIRCLE else Line(*value)
    if value is None:
        return UNDEF
    if not value_conforms(value, sort, vocabulary):
        raise BasmError("sort", f"override value {value!r} does not fit sort {sort.name}")
    return value


def corpus_run(name: str, *, init_file: Optional[str] = None, policy=None,
               seed: Optional[int] = None, choice: Optional[int] = None,
               script=None, max_steps: Optional[int] = None, **bindings) -> Trace:
    """Run a corpus entry.

    Keyword `bindings` override initial-state variables by name (python ints,
    bools, (x, y) pairs for points, geometry objects, or literal strings).
    `choice` forces the deterministic intersection pick, `seed` selects the
    uniform policy, and `script` replays answers: a list of values, a list of
    (oracle, args, answer) triples, or the name of a file under the entry's
    scripts/ directory.
    """
    entry = ENTRIES.get(name)
    if entry is None:
        raise BasmError("corpus", f"unknown corpus entry: {name}")
    program = load_entry_program(name)
    state = load_entry_state(name, init_file)
    if bindings:
        updates = UpdateSet()
        for var, value in bindings.items():
            sym = program.vocabulary.symbol(var)
            if sym is None or sym.kind != "dynamic" or sym.arity != 0:
                raise BasmError("corpus", f"{name} has no variable named {var}")
            updates.add(Location(sym, ()), _coerce(value, sym.result_sort, program.vocabulary))
        from .state import apply_updates

        state = apply_updates(state, updates)
    if policy is None:
        if script is not None:
            policy = _script_policy(entry, program, script)
        elif choice is not None:
            policy = BuiltinPolicy(intersection_choice=choice)
        elif seed is not None:
            policy = UniformRandomPolicy(seed)
        elif entry.policy == "uniform":
            policy = UniformRandomPolicy(entry.seed if seed is None else seed)
        else:
            policy = BuiltinPolicy()
    return run(program, state, policy, max_steps=max_steps)


def _script_policy(entry: CorpusEntry, program: Program, script) -> ScriptedPolicy:
    if isinstance(script, str):
        path = entry_dir(entry.name) / "scripts" / script
        return load_script(path.read_text().splitlines(), program.vocabulary, mode="strict")
    entries = []
    for item in script:
        if isinstance(item, tuple) and len(item) == 3:
            entries.append(ScriptEntry(item[0], tuple(item[1]), item[2]))
        else:
            entries.append(ScriptEntry(None, None, item))
    return ScriptedPolicy(entries, mode="by-symbol")


def liar_rate(n: int) -> Fraction:
    """Exact fraction of bases a in [2, n-2] with a^(n-1) mod n = 1."""
    if n < 5:
        raise BasmError("corpus", "liar_rate needs n >= 5")
    hits = sum(1 for a in range(2, n - 1) if pow(a, n - 1, n) == 1)
    return Fraction(hits, n - 3)
