"""Oracle sessions: the query protocol, answer policies, and the seeded PRNG.

A session owns the full interaction log of a run and a per-step answer cache:
within one step, asking the same query again returns the cached answer and
records nothing new. The cache is cleared at step boundaries by the run loop.

Answer policies:

  BuiltinPolicy        fixed deterministic rules per query shape (see below)
  ScriptedPolicy       replays a prepared list or table of answers
  UniformRandomPolicy  seeded uniform choices from a SplitMix64 stream
  InteractivePolicy    prints each query on stderr and reads a literal answer

Policies recognise oracle symbols by signature, not by name. A query with
signature (Circle, Circle) -> Point is treated as circle intersection: the
deterministic rule picks a candidate index into the lexicographically ordered
intersection pair (default 0, the smaller point), the uniform rule draws the
index. A query with signature (Integer, Integer) -> Integer is treated as a
range pick from [b, c]: the deterministic rule answers b, the uniform rule
draws uniformly via rejection sampling. A reclassified static symbol is
answered by computing its static interpretation. Anything else can only be
answered by a script or interactively.

The PRNG is SplitMix64, fixed exactly so traces reproduce across machines and
languages (constants and the rejection scheme are spelled out in
docs/formats.md).
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

from . import geometry
from .errors import BasmError, ParseError
from .literals import parse_value, render_value
from .state import (
    CIRCLE,
    INTEGER,
    POINT,
    STATIC_IMPL,
    UNDEF,
    Query,
    Vocabulary,
    value_conforms,
)

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """The standard splitmix64 stream; 64-bit state, 64-bit outputs."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform_int(self, b: int, c: int) -> int:
        """Uniform draw from the integer segment [b, c] by rejection sampling."""
        if b > c:
            raise BasmError("oracle-domain", f"empty segment [{b}, {c}]")
        n = c - b + 1
        threshold = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < threshold:
                return b + (v % n)


@dataclass(frozen=True)
class Interaction:
    oracle: str
    args: tuple
    answer: object


def _is_intersection_query(q: Query) -> bool:
    sym = q.symbol
    return sym.arg_sorts == (CIRCLE, CIRCLE) and sym.result_sort is POINT


def _is_segment_query(q: Query) -> bool:
    sym = q.symbol
    return sym.arg_sorts == (INTEGER, INTEGER) and sym.result_sort is INTEGER


def _reclassified_static(q: Query):
    return STATIC_IMPL.get(q.symbol.name)


def _check_defined_args(q: Query):
    if any(a is UNDEF for a in q.args):
        raise BasmError("oracle-domain", f"oracle query with undef argument: {q.render()}")


class BuiltinPolicy:
    """Deterministic canonical answers.

    `intersection_choice` selects index 0 or 1 of the ordered candidate pair
    for circle-intersection queries; segment queries answer the lower endpoint.
    """

    def __init__(self, intersection_choice: int = 0):
        if intersection_choice not in (0, 1):
            raise BasmError("oracle-domain", "intersection choice must be 0 or 1")
        self.intersection_choice = intersection_choice

    def answer(self, session: "OracleSession", query: Query):
        impl = _reclassified_static(query)
        if impl is not None:
            fn, strict = impl
            if strict and any(a is UNDEF for a in query.args):
                return UNDEF
            return fn(*query.args)
        _check_defined_args(query)
        if _is_intersection_query(query):
            return geometry.intersect_circles(*query.args)[self.intersection_choice]
        if _is_segment_query(query):
            b, c = query.args
            if b > c:
                raise BasmError("oracle-domain", f"empty segment [{b}, {c}]")
            return b
        raise BasmError("oracle-domain", f"no builtin rule for oracle {query.symbol.name}")


class UniformRandomPolicy:
    """Uniform choices from the session's seeded SplitMix64 stream."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def answer(self, session: "OracleSession", query: Query):
        impl = _reclassified_static(query)
        if impl is not None:
            fn, strict = impl
            if strict and any(a is UNDEF for a in query.args):
                return UNDEF
            return fn(*query.args)
        _check_defined_args(query)
        if _is_intersection_query(query):
            candidates = geometry.intersect_circles(*query.args)
            return candidates[session.prng.uniform_int(0, 1)]
        if _is_segment_query(query):
            b, c = query.args
            return session.prng.uniform_int(b, c)
        raise BasmError("oracle-domain", f"no uniform rule for oracle {query.symbol.name}")


@dataclass(frozen=True)
class ScriptEntry:
    oracle: Optional[str]  # None matches any oracle symbol
    args: Optional[tuple]  # None matches any arguments
    answer: object


class ScriptedPolicy:
    """Replays prepared answers.

    List form: entries are consumed in order. In "strict" mode each entry must
    match the query's oracle name and arguments, in "by-symbol" mode only the
    name; an entry with oracle None matches anything. Table form: a mapping
    from rendered queries (e.g. "Random(2,13)") to answers, never consumed.
    """

    def __init__(self, entries: Iterable[ScriptEntry] = (), mode: str = "strict",
                 table: Optional[dict] = None):
        if mode not in ("strict", "by-symbol"):
            raise BasmError("script", f"unknown script mode: {mode}")
        self.entries = list(entries)
        self.mode = mode
        self.table = table
        self.cursor = 0

    @classmethod
    def from_answers(cls, answers: Iterable, oracle: Optional[str] = None) -> "ScriptedPolicy":
        entries = [ScriptEntry(oracle, None, a) for a in answers]
        return cls(entries, mode="by-symbol" if oracle else "strict")

    @classmethod
    def from_table(cls, table: dict) -> "ScriptedPolicy":
        return cls((), table=dict(table))

    def answer(self, session: "OracleSession", query: Query):
        if self.table is not None:
            key = query.render()
            if key not in self.table:
                raise BasmError("script", f"no scripted answer for {key}")
            return self.table[key]
        if self.cursor >= len(self.entries):
            raise BasmError("script", f"script exhausted at {query.render()}")
        entry = self.entries[self.cursor]
        if entry.oracle is not None and entry.oracle != query.symbol.name:
            raise BasmError(
                "script",
                f"script expected {entry.oracle}, program asked {query.render()}",
            )
        if self.mode == "strict" and entry.args is not None and entry.args != query.args:
            raise BasmError("script", f"script arguments do not match {query.render()}")
        self.cursor += 1
        return entry.answer


class InteractivePolicy:
    """Prompts on stderr, reads one literal per line from stdin.

    Circle-intersection queries also print the two ordered candidates; a bare
    0 or 1 picks one. A closed input stream aborts the run.
    """

    def __init__(self, input_stream: Optional[TextIO] = None,
                 output_stream: Optional[TextIO] = None):
        self.input = input_stream
        self.output = output_stream

    def answer(self, session: "OracleSession", query: Query):
        inp = self.input if self.input is not None else sys.stdin
        out = self.output if self.output is not None else sys.stderr
        candidates = None
        if _is_intersection_query(query) and not any(a is UNDEF for a in query.args):
            candidates = geometry.intersect_circles(*query.args)
        out.write(f"oracle {query.render()}\n")
        if candidates is not None:
            out.write(f"  [0] {render_value(candidates[0])}\n")
            out.write(f"  [1] {render_value(candidates[1])}\n")
        while True:
            out.write("? ")
            out.flush()
            line = inp.readline()
            if line == "":
                raise BasmError("aborted", f"oracle input closed at {query.render()}")
            text = line.strip()
            if candidates is not None and text in ("0", "1"):
                return candidates[int(text)]
            try:
                return parse_value(text, query.symbol.result_sort, session.vocabulary)
            except ParseError as e:
                out.write(f"  cannot read answer: {e.message}\n")


class OracleSession:
    """Per-run oracle state: policy, PRNG, per-step cache, and the full log."""

    __slots__ = ("policy", "vocabulary", "prng", "per_step_cache", "log")

    def __init__(self, policy, vocabulary: Vocabulary, seed: Optional[int] = None):
        self.policy = policy
        self.vocabulary = vocabulary
        if seed is None:
            seed = getattr(policy, "seed", 0)
        self.prng = SplitMix64(seed if seed is not None else 0)
        self.per_step_cache: dict[Query, object] = {}
        self.log: list[Interaction] = []

    def begin_step(self) -> int:
        """Clear the per-step cache; returns the log position for slicing."""
        self.per_step_cache.clear()
        return len(self.log)

    def ask(self, query: Query):
        cached = self.per_step_cache.get(query, _MISS)
        if cached is not _MISS:
            return cached
        answer = self.policy.answer(self, query)
        if not value_conforms(answer, query.symbol.result_sort, self.vocabulary):
            raise BasmError(
                "sort",
                f"oracle answer {render_value(answer)} is not a "
                f"{query.symbol.result_sort.name} (query {query.render()})",
            )
        self.log.append(Interaction(query.symbol.name, query.args, answer))
        self.per_step_cache[query] = answer
        return answer


_MISS = object()


def uniform_random(session: OracleSession, b: int, c: int) -> int:
    """Uniform integer from [b, c] using the session's PRNG stream."""
    return session.prng.uniform_int(b, c)
