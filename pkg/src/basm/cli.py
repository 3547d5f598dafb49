"""Command-line front end.

    basm run --program P.basm --init S.state [--trace out.jsonl] ...
    basm replay --program P.basm --trace out.jsonl
    basm check {replay,bexp,iso,equiv} ...
    basm corpus [list | NAME] [--set var=value ...] ...

Exit codes: 0 run halted / check passed, 1 runtime error or failed check,
2 parse or usage error, 3 step limit reached. ASM_MAX_STEPS sets the default
step budget; --max-steps overrides it per invocation.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .checks import (
    CheckReport,
    check_bounded_exploration,
    check_iso_invariance,
    enum_bijections,
    behaviorally_equivalent,
    junk_state_sampler,
)
from .corpus import ENTRIES, corpus_run
from .errors import BasmError, ParseError
from .literals import load_state, state_bindings
from .oracles import BuiltinPolicy, InteractivePolicy, UniformRandomPolicy
from .semantics import Trace, replay, run
from .syntax import Program, parse_program
from .traceio import load_script, read_trace, write_trace


def _load_program(path: str, oracle_statics) -> Program:
    return parse_program(Path(path).read_text(), oracle_statics=tuple(oracle_statics or ()))


def _load_init(path: str, program: Program):
    return load_state(Path(path).read_text(), program.vocabulary, source=path)


def _build_policy(args, program: Program):
    name = getattr(args, "policy", None)
    script = getattr(args, "script", None)
    if name is None:
        if script is not None:
            name = "scripted"
        elif args.seed is not None:
            name = "uniform"
        else:
            name = "builtin"
    if name == "builtin":
        return BuiltinPolicy(intersection_choice=args.choice or 0)
    if name == "uniform":
        return UniformRandomPolicy(args.seed or 0)
    if name == "interactive":
        return InteractivePolicy()
    if script is None:
        raise BasmError("script", "--policy scripted needs --script FILE")
    lines = Path(script).read_text().splitlines()
    return load_script(lines, program.vocabulary, mode=args.script_mode)


def _emit_trace(trace: Trace, dest: Optional[str]):
    if dest is None:
        return False
    if dest == "-":
        write_trace(trace, sys.stdout)
        return True
    with open(dest, "w") as fp:
        write_trace(trace, fp)
    return False


def _report_outcome(trace: Trace, quiet: bool) -> int:
    out = trace.outcome
    if out.kind == "error":
        print(f"error[{out.error}]: {out.detail}", file=sys.stderr)
        return 1
    if not quiet:
        print(f"outcome: {out.kind}")
        print(f"steps: {len(trace.steps)}")
        for loc, value in sorted(state_bindings(trace.final_state).items()):
            print(f"  {loc} = {value}")
    return 0 if out.kind == "halted" else 3


def _add_run_options(p: argparse.ArgumentParser, with_init: bool = True):
    if with_init:
        p.add_argument("--init", required=True, help="initial state file")
    p.add_argument("--policy", choices=["builtin", "uniform", "scripted", "interactive"])
    p.add_argument("--seed", type=int, default=None, help="seed for the uniform policy")
    p.add_argument("--choice", type=int, default=None,
                   help="intersection pick for the builtin policy (0 or 1)")
    p.add_argument("--script", help="oracle script file (trace or script JSONL)")
    p.add_argument("--script-mode", choices=["strict", "by-symbol"], default="strict")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--oracle-static", action="append", default=[], metavar="NAME",
                   help="treat this builtin static (e.g. mod) as an oracle")


def _cmd_run(args) -> int:
    program = _load_program(args.program, args.oracle_static)
    init = _load_init(args.init, program)
    policy = _build_policy(args, program)
    trace = run(program, init, policy, max_steps=args.max_steps)
    to_stdout = _emit_trace(trace, args.trace)
    return _report_outcome(trace, quiet=to_stdout)


def _cmd_replay(args) -> int:
    program = _load_program(args.program, args.oracle_static)
    lines = Path(args.trace).read_text().splitlines()
    trace = read_trace(lines, program)
    if replay(trace, program):
        print("replay: ok")
        return 0
    print("replay: mismatch", file=sys.stderr)
    return 1


def _print_report(report: CheckReport) -> int:
    print(report.to_json())
    return 0 if report.passed else 1


def _cmd_check(args) -> int:
    program = _load_program(args.program, args.oracle_static)
    if args.kind == "bexp":
        init = _load_init(args.init, program)
        sampler = junk_state_sampler(program, init)
        report = check_bounded_exploration(program, sampler, args.trials, args.seed or 0)
        return _print_report(report)
    if args.kind == "iso":
        init = _load_init(args.init, program)
        answers = []
        if args.script:
            policy = load_script(Path(args.script).read_text().splitlines(),
                                 program.vocabulary, mode="by-symbol")
            answers = [e.answer for e in policy.entries]
        failures: list = []
        count = 0
        for bijection in enum_bijections(program.vocabulary):
            count += 1
            failures.extend(
                check_iso_invariance(program, init, bijection, answers).failures
            )
        return _print_report(CheckReport("iso", count, failures))
    if args.kind == "replay":
        init = _load_init(args.init, program)
        failures = []
        base = args.seed or 0
        for trial in range(args.trials):
            trace = run(program, init, UniformRandomPolicy(base + trial),
                        max_steps=args.max_steps)
            if not replay(trace, program):
                failures.append(f"trial {trial}: replay diverged")
        return _print_report(CheckReport("replay", args.trials, failures))
    if args.kind == "equiv":
        if not args.other:
            raise BasmError("corpus", "check equiv needs --other PROGRAM")
        other = _load_program(args.other, args.oracle_static)
        trace_a = run(program, _load_init(args.init, program),
                      _build_policy(args, program), max_steps=args.max_steps)
        trace_b = run(other, _load_init(args.init, other),
                      _build_policy(args, other), max_steps=args.max_steps)
        failures = []
        if not behaviorally_equivalent(trace_a, trace_b):
            failures.append(f"{args.program} and {args.other} are not step equivalent")
        return _print_report(CheckReport("equiv", 1, failures))
    raise BasmError("corpus", f"unknown check: {args.kind}")


def _cmd_corpus(args) -> int:
    if args.name in (None, "list"):
        for name in sorted(ENTRIES):
            entry = ENTRIES[name]
            inits = ", ".join(entry.init_files)
            print(f"{name}: init [{inits}] policy {entry.policy}")
        return 0
    if args.name not in ENTRIES:
        raise BasmError("corpus", f"unknown corpus entry: {args.name}")
    bindings = {}
    for item in args.set or []:
        if "=" not in item:
            raise BasmError("corpus", f"--set expects var=value, got {item!r}")
        var, _, value = item.partition("=")
        bindings[var.strip()] = value.strip()
    trace = corpus_run(
        args.name,
        init_file=args.init,
        seed=args.seed,
        choice=args.choice,
        script=args.script,
        max_steps=args.max_steps,
        **bindings,
    )
    to_stdout = _emit_trace(trace, args.trace)
    return _report_outcome(trace, quiet=to_stdout)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="basm",
        description="Run and check abstract state machine programs with oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a program from an initial state")
    p_run.add_argument("--program", required=True)
    _add_run_options(p_run)
    p_run.add_argument("--trace", help="write trace JSONL here ('-' for stdout)")
    p_run.set_defaults(func=_cmd_run)

    p_replay = sub.add_parser("replay", help="verify a recorded trace reproduces")
    p_replay.add_argument("--program", required=True)
    p_replay.add_argument("--trace", required=True)
    p_replay.add_argument("--oracle-static", action="append", default=[], metavar="NAME")
    p_replay.set_defaults(func=_cmd_replay)

    p_check = sub.add_parser("check", help="run a property check, JSON report on stdout")
    p_check.add_argument("kind", choices=["replay", "bexp", "iso", "equiv"])
    p_check.add_argument("--program", required=True)
    _add_run_options(p_check)
    p_check.add_argument("--trials", type=int, default=100)
    p_check.add_argument("--other", help="second program for equiv")
    p_check.set_defaults(func=_cmd_check)

    p_corpus = sub.add_parser("corpus", help="run a bundled example")
    p_corpus.add_argument("name", nargs="?", help="entry name, or 'list'")
    p_corpus.add_argument("--init", help="initial state file name within the entry")
    p_corpus.add_argument("--seed", type=int, default=None)
    p_corpus.add_argument("--choice", type=int, default=None)
    p_corpus.add_argument("--script", help="script file name within the entry")
    p_corpus.add_argument("--max-steps", type=int, default=None)
    p_corpus.add_argument("--set", action="append", metavar="VAR=VALUE",
                          help="override an initial-state variable")
    p_corpus.add_argument("--trace", help="write trace JSONL here ('-' for stdout)")
    p_corpus.set_defaults(func=_cmd_corpus)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error[{e.kind}]: {e.message}", file=sys.stderr)
        return 2
    except BasmError as e:
        print(f"error[{e.kind}]: {e.message}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
