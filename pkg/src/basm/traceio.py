"""Trace and script files.

A trace is JSON-lines with a fixed field order so equal runs give equal bytes:

  {"programId": "...", "initialState": {"a": "12", "b": "8"}}
  {"index": 0, "updates": [{"loc": "a", "value": "8"}], "interactions": [], "halted": false}
  ...
  {"outcome": "halted", "finalState": {"a": "4", "b": "0", "d": "4"}}

Updates are sorted by rendered location; state maps are sorted by key; all
values use the shared literal syntax. An error outcome carries the error kind:
{"outcome": "error", "error": "clash", "finalState": ...}.

A script file is JSON-lines too, one {"oracle", "args", "answer"} object per
line, which is exactly the shape of a trace's interaction records.
"""
from __future__ import annotations

import json
from typing import Iterable, TextIO

from .errors import BasmError, ParseError
from .literals import parse_location, parse_value, state_bindings, state_from_bindings
from .oracles import Interaction, ScriptedPolicy, ScriptEntry
from .semantics import Outcome, StepRecord, Trace
from .state import UpdateSet, Vocabulary
from .literals import render_value
from .syntax import Program


def _interaction_obj(i: Interaction) -> dict:
    return {
        "oracle": i.oracle,
        "args": [render_value(a) for a in i.args],
        "answer": render_value(i.answer),
    }


def trace_lines(trace: Trace) -> list[str]:
    lines = [
        json.dumps(
            {"programId": trace.program_id, "initialState": state_bindings(trace.initial_state)}
        )
    ]
    for record in trace.steps:
        lines.append(
            json.dumps(
                {
                    "index": record.index,
                    "updates": [
                        {"loc": loc.render(), "value": render_value(v)}
                        for loc, v in record.updates.items()
                    ],
                    "interactions": [_interaction_obj(i) for i in record.interactions],
                    "halted": record.halted_after,
                }
            )
        )
    final: dict = {"outcome": trace.outcome.kind}
    if trace.outcome.error is not None:
        final["error"] = trace.outcome.error
    final["finalState"] = state_bindings(trace.final_state)
    lines.append(json.dumps(final))
    return lines


def write_trace(trace: Trace, fp: TextIO):
    for line in trace_lines(trace):
        fp.write(line + "\n")


def render_trace(trace: Trace) -> str:
    return "\n".join(trace_lines(trace)) + "\n"


def _parse_interaction(obj: dict, vocabulary: Vocabulary) -> Interaction:
    sym = vocabulary.symbol(obj["oracle"])
    if sym is None:
        raise ParseError(f"unknown oracle in trace: {obj['oracle']}", kind="sort")
    args = tuple(
        parse_value(text, sort, vocabulary) for text, sort in zip(obj["args"], sym.arg_sorts)
    )
    if len(obj["args"]) != sym.arity:
        raise ParseError(f"arity mismatch in trace interaction for {sym.name}", kind="sort")
    answer = parse_value(obj["answer"], sym.result_sort, vocabulary)
    return Interaction(sym.name, args, answer)


def read_trace_raw(lines: Iterable[str]) -> tuple[dict, list[dict], dict]:
    """Header, step records, and final record as plain JSON objects."""
    rows = [json.loads(line) for line in lines if line.strip()]
    if len(rows) < 2 or "programId" not in rows[0] or "outcome" not in rows[-1]:
        raise ParseError("not a trace: expected a header line and a final outcome line")
    return rows[0], rows[1:-1], rows[-1]


def read_trace(lines: Iterable[str], program: Program) -> Trace:
    header, step_rows, final = read_trace_raw(lines)
    vocab = program.vocabulary
    initial = state_from_bindings(header["initialState"], vocab)
    steps = []
    for row in step_rows:
        updates = UpdateSet()
        for u in row["updates"]:
            loc = parse_location(u["loc"], vocab)
            updates.add(loc, parse_value(u["value"], loc.symbol.result_sort, vocab))
        interactions = tuple(_parse_interaction(i, vocab) for i in row["interactions"])
        steps.append(StepRecord(row["index"], updates, interactions, row["halted"]))
    outcome = Outcome(final["outcome"], final.get("error"))
    final_state = state_from_bindings(final["finalState"], vocab)
    return Trace(header["programId"], initial, steps, final_state, outcome)


def script_lines(trace: Trace) -> list[str]:
    """A script replaying the trace's interactions, in order."""
    return [
        json.dumps(_interaction_obj(i)) for record in trace.steps for i in record.interactions
    ]


def load_script(lines: Iterable[str], vocabulary: Vocabulary, mode: str = "strict") -> ScriptedPolicy:
    entries = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            interaction = _parse_interaction(obj, vocabulary)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"bad script line: {e}", line=lineno, column=1) from None
        entries.append(ScriptEntry(interaction.oracle, interaction.args, interaction.answer))
    if mode == "by-symbol":
        entries = [ScriptEntry(e.oracle, None, e.answer) for e in entries]
    return ScriptedPolicy(entries, mode=mode)
