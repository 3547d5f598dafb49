"""End-to-end command line runs in a subprocess, including exit codes."""
import json
import subprocess
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]

EUCLID = "corpus/euclid/program.basm"
EUCLID_INIT = "corpus/euclid/init/a12b8.state"
PRIMALITY = "corpus/primality/program.basm"
PRIMALITY_INIT = "corpus/primality/init/n15k2.state"
TANGENT = "corpus/tangent/program.basm"
TANGENT_INIT = "corpus/tangent/init/default.state"

CLASHING = """\
vocab {
  var x : Integer
}
do until x = 3 {
  par { x := 1 ; x := 2 }
}
"""


def cli(*args, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "basm", *args],
        capture_output=True, text=True, input=stdin, cwd=REPO,
    )


def test_run_euclid():
    r = cli("run", "--program", EUCLID, "--init", EUCLID_INIT)
    assert r.returncode == 0
    assert "outcome: halted" in r.stdout
    assert "steps: 3" in r.stdout
    assert "d = 4" in r.stdout


def test_run_trace_and_replay_roundtrip(tmp_path):
    trace = tmp_path / "t.jsonl"
    r = cli("run", "--program", EUCLID, "--init", EUCLID_INIT, "--trace", str(trace))
    assert r.returncode == 0
    r = cli("replay", "--program", EUCLID, "--trace", str(trace))
    assert r.returncode == 0
    assert "replay: ok" in r.stdout


def test_replay_detects_tampering(tmp_path):
    trace = tmp_path / "t.jsonl"
    cli("run", "--program", EUCLID, "--init", EUCLID_INIT, "--trace", str(trace))
    trace.write_text(
        trace.read_text().replace('{"loc": "d", "value": "4"}',
                                  '{"loc": "d", "value": "5"}')
    )
    r = cli("replay", "--program", EUCLID, "--trace", str(trace))
    assert r.returncode == 1
    assert "mismatch" in r.stderr


def test_seeded_runs_are_byte_identical(tmp_path):
    files = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
    for f in files:
        r = cli("run", "--program", PRIMALITY, "--init", PRIMALITY_INIT,
                "--seed", "42", "--trace", str(f))
        assert r.returncode == 0
    assert files[0].read_bytes() == files[1].read_bytes()


def test_corpus_trace_on_stdout_is_stable():
    runs = [cli("corpus", "tangent", "--choice", "1", "--trace", "-") for _ in range(2)]
    assert runs[0].returncode == 0
    assert runs[0].stdout == runs[1].stdout
    assert runs[0].stdout.splitlines()[0].startswith('{"programId"')


def test_missing_and_broken_files_exit_2(tmp_path):
    assert cli("run", "--program", "no/such.basm", "--init", EUCLID_INIT).returncode == 2
    bad = tmp_path / "bad.basm"
    bad.write_text("vocab {\n  var x : Integer\n}\ndo until x = {\n}\n")
    r = cli("run", "--program", str(bad), "--init", EUCLID_INIT)
    assert r.returncode == 2
    assert "error[parse]" in r.stderr


def test_oracle_in_halt_condition_exits_2(tmp_path):
    src = tmp_path / "p.basm"
    src.write_text(
        "vocab {\n  var x : Integer\n  oracle Random(Integer, Integer) : Integer\n}\n"
        "do until Random(0, 1) = 0 {\n  x := 1\n}\n"
    )
    r = cli("run", "--program", str(src), "--init", EUCLID_INIT)
    assert r.returncode == 2
    assert "error[interactive-halt]" in r.stderr


def test_step_limit_exits_3():
    r = cli("run", "--program", EUCLID, "--init", EUCLID_INIT, "--max-steps", "1")
    assert r.returncode == 3
    assert "outcome: step-limit" in r.stdout


def test_clash_exits_1(tmp_path):
    src = tmp_path / "clash.basm"
    src.write_text(CLASHING)
    init = tmp_path / "init.basm"
    init.write_text("x := 0\n")
    r = cli("run", "--program", str(src), "--init", str(init))
    assert r.returncode == 1
    assert "error[clash]" in r.stderr


def test_check_bexp_report():
    r = cli("check", "bexp", "--program", EUCLID, "--init", EUCLID_INIT,
            "--trials", "25")
    assert r.returncode == 0
    report = json.loads(r.stdout)
    assert report == {"check": "bexp", "trials": 25, "failures": []}


def test_check_replay_report():
    r = cli("check", "replay", "--program", PRIMALITY, "--init", PRIMALITY_INIT,
            "--trials", "5", "--seed", "3")
    assert r.returncode == 0
    assert json.loads(r.stdout)["failures"] == []


def test_check_iso_enumgraph():
    r = cli("check", "iso", "--program", "corpus/enumgraph/program.basm",
            "--init", "corpus/enumgraph/init/default.state")
    assert r.returncode == 0
    report = json.loads(r.stdout)
    assert report["trials"] == 2  # identity and the one member swap
    assert report["failures"] == []


def test_check_equiv_flags_different_machines():
    r = cli("check", "equiv", "--program", EUCLID, "--init", EUCLID_INIT,
            "--other", "corpus/euclid_while/program.basm")
    assert r.returncode == 1
    assert json.loads(r.stdout)["failures"]


def test_corpus_list_names_every_entry():
    r = cli("corpus", "list")
    assert r.returncode == 0
    for name in ("euclid", "tangent", "primality", "enumgraph"):
        assert name in r.stdout


def test_corpus_set_overrides():
    r = cli("corpus", "euclid", "--set", "a=21", "--set", "b=14")
    assert r.returncode == 0
    assert "d = 7" in r.stdout
    assert cli("corpus", "euclid", "--set", "a21").returncode == 1
    assert cli("corpus", "nope").returncode == 1


def test_interactive_policy_reads_answers_from_stdin():
    r = cli("run", "--program", TANGENT, "--init", TANGENT_INIT,
            "--policy", "interactive", stdin="0\n0\n")
    assert r.returncode == 0
    assert "outcome: halted" in r.stdout
    assert "I(" in r.stderr  # the prompt names the query
    aborted = cli("run", "--program", TANGENT, "--init", TANGENT_INIT,
                  "--policy", "interactive", stdin="")
    assert aborted.returncode == 1
    assert "error[aborted]" in aborted.stderr


def test_oracle_static_round_trip(tmp_path):
    trace = tmp_path / "t.jsonl"
    r = cli("run", "--program", EUCLID, "--init", EUCLID_INIT,
            "--oracle-static", "mod", "--trace", str(trace))
    assert r.returncode == 0
    assert '"interactions": [{"oracle": "mod"' in trace.read_text()
    assert cli("replay", "--program", EUCLID, "--trace", str(trace),
               "--oracle-static", "mod").returncode == 0
    # without the flag the rerun never queries, so the records cannot match
    assert cli("replay", "--program", EUCLID, "--trace", str(trace)).returncode == 1


def test_unknown_subcommand_exits_2():
    assert cli("bogus").returncode == 2
