"""End-to-end runs of the command-line frontend, in-process via main(argv)."""

import json

import pytest

from alltoall.cli import main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as stop:  # argparse usage failures
        code = stop.code
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_bounds_builtin(capsys):
    doc = run_json(capsys, "bounds", "--builtin", "petersen")
    assert doc == {"P": 10, "d": 3, "D": 2, "n": [1, 3, 6], "theta": 5}


def test_bounds_adjacency_dump(tmp_path, capsys):
    arcs = tmp_path / "arcs.txt"
    code, _, _ = run(capsys, "bounds", "--builtin", "c4", "--adjacency", str(arcs))
    assert code == 0
    assert arcs.read_text().splitlines() == ["0 1 0", "1 2 0", "2 3 0", "3 0 0"]


def test_words_exact(capsys):
    doc = run_json(capsys, "words", "--builtin", "z7-124", "--exact")
    assert doc["psi_W"] == 3
    assert doc["theta"] == 3
    assert doc["psi_exact"] == 3
    assert doc["exact"] is True
    assert doc["occurrences"] == [3, 3, 3]
    assert sorted(len(w) for w in doc["words"].values()) == [1, 1, 1, 2, 2, 2]


def test_words_rejects_non_cayley(capsys):
    code, _, err = run(capsys, "words", "--builtin", "petersen")
    assert code == 1
    assert "factorization" in err


def test_schedule_to_simulate_round_trip(tmp_path, capsys):
    csv = tmp_path / "sched.csv"
    doc = run_json(capsys, "schedule", "--builtin", "z7-124", "--csv", str(csv))
    assert doc["makespan"] == 3
    assert doc["flags"] == {"balanced": True, "short": True, "optimal": True, "minimum": True}
    assert doc["bounds"] == {"theta": 3, "psi_for_W": 3, "corollary6": 3}
    verdict = run_json(capsys, "simulate", "--builtin", "z7-124", "--schedule", str(csv))
    assert verdict == {"tau": 3, "conflicts": 0, "undelivered": 0, "theta": 3, "optimal": True}


def test_schedule_greedy_c4(tmp_path, capsys):
    doc = run_json(capsys, "schedule", "--builtin", "c4", "--method", "greedy")
    assert doc["makespan"] == 6
    assert doc["bounds"]["corollary6"] is None  # a length-3 word is in play


def test_schedule_csv_rejects_corruption(tmp_path, capsys):
    csv = tmp_path / "sched.csv"
    run_json(capsys, "schedule", "--builtin", "c4", "--csv", str(csv))
    rows = csv.read_text().splitlines()
    rows[1] = "1,5,0,1"  # position 5 breaks the contiguity of word 1
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(rows) + "\n")
    code, _, err = run(capsys, "simulate", "--builtin", "c4", "--schedule", str(bad))
    assert code == 1
    assert "bad.csv" in err


def test_factorize_search_to_simulate(tmp_path, capsys):
    fact = tmp_path / "fact.json"
    doc = run_json(capsys, "factorize", "--builtin", "petersen", "--search")
    assert doc["n"] == 10 and doc["d"] == 3
    assert doc["search"]["factorizations"] >= 1
    assert sorted(len(w) for w in doc["words"]) == [0, 1, 1, 1, 2, 2, 2, 2, 2, 2]
    fact.write_text(json.dumps(doc))
    csv = tmp_path / "sched.csv"
    sched = run_json(capsys, "schedule", "--builtin", "petersen",
                     "--factorization", str(fact), "--csv", str(csv))
    assert sched["makespan"] == 5
    verdict = run_json(capsys, "simulate", "--builtin", "petersen",
                       "--schedule", str(csv), "--factorization", str(fact))
    assert verdict["tau"] == 5 and verdict["optimal"] is True


def test_factorize_without_search_lists_factors(capsys):
    doc = run_json(capsys, "factorize", "--builtin", "c4")
    assert doc["factors"] == [[1, 2, 3, 0]]
    assert doc["words"] == [[], [0], [0, 0], [0, 0, 0]]


def test_factorize_raw_digraph_has_no_words(tmp_path, capsys):
    spec = tmp_path / "ring.json"
    spec.write_text(json.dumps({"digraph": {"n": 3, "arcs": [[0, 1], [1, 2], [2, 0]]}}))
    doc = run_json(capsys, "factorize", "--spec", str(spec))
    assert doc["factors"] == [[1, 2, 0]]
    assert doc["words"] is None


def test_factorize_search_starved(capsys):
    code, _, err = run(capsys, "factorize", "--builtin", "petersen", "--search", "--budget", "1")
    assert code == 2
    assert "budget" in err


def test_pipeline_z7(tmp_path, capsys):
    out = tmp_path / "out"
    code, stdout, _ = run(capsys, "pipeline", "--builtin", "z7-124", "--outdir", str(out))
    assert code == 0
    assert stdout.strip().splitlines()[-1] == "tau=3 theta=3 psi_W=3 optimal=true"
    produced = {p.name for p in out.iterdir()}
    assert {"words.json", "schedule.csv", "schedule.json", "trace.csv", "verdict.json"} <= produced
    verdict = json.loads((out / "verdict.json").read_text())
    assert verdict["tau"] == verdict["theta"] == verdict["psi_W"] == 3
    trace_lines = (out / "trace.csv").read_text().splitlines()
    assert trace_lines[0] == "time,src,dst,gen,packet_src,packet_dst"
    assert len(trace_lines) == 1 + 9 * 7  # every word letter crosses once per shift


def test_pipeline_petersen_takes_factor_route(tmp_path, capsys):
    out = tmp_path / "out"
    code, stdout, _ = run(capsys, "pipeline", "--builtin", "petersen", "--outdir", str(out))
    assert code == 0
    assert "tau=5 theta=5" in stdout
    assert (out / "factorization.json").exists()
    assert not (out / "words.json").exists()


def test_pipeline_starved_search_fails_loudly(tmp_path, capsys):
    code, _, err = run(capsys, "pipeline", "--builtin", "petersen",
                       "--outdir", str(tmp_path / "x"), "--budget", "1")
    assert code == 2
    assert "budget" in err


def test_pipeline_reads_spec_file(tmp_path, capsys):
    spec = tmp_path / "z5.json"
    spec.write_text(json.dumps({"group": {"kind": "cyclic", "modulus": 5}, "generators": [1, 2]}))
    out = tmp_path / "out"
    code, stdout, _ = run(capsys, "pipeline", "--spec", str(spec), "--outdir", str(out))
    assert code == 0
    assert stdout.strip().splitlines()[-1] == "tau=4 theta=3 psi_W=4 optimal=false"


def write_network(path, **fields):
    path.write_text(json.dumps(fields))
    return str(path)


def test_compare_verdict_and_csv(tmp_path, capsys):
    a = write_network(tmp_path / "a.json", P=4096, d=8, D=6, rho=64)
    b = write_network(tmp_path / "b.json", P=1024, d=10, D=5, rho=64)
    csv = tmp_path / "rank.csv"
    doc = run_json(capsys, "compare", a, b, "--gamma-max", "40000",
                   "--matrix-dim", "256", "--iterations", "4", "--ranking", str(csv))
    assert doc["winner"] == "a"
    assert doc["ranking"] == ["a", "b"]
    assert doc["eliminated"] == []
    lines = csv.read_text().splitlines()
    assert lines[0] == "rank,name,P,d,D,wire_cost,compute,exchange,total"
    assert lines[1].startswith("1,a,4096,8,6,32768,")


def test_compare_all_eliminated(tmp_path, capsys):
    a = write_network(tmp_path / "a.json", P=4096, d=8, D=6, rho=64)
    b = write_network(tmp_path / "b.json", P=1024, d=10, D=5, rho=64)
    code, _, err = run(capsys, "compare", a, b, "--gamma-max", "2",
                       "--matrix-dim", "16", "--iterations", "1")
    assert code == 2
    assert "budget" in err


def test_compare_needs_two_files(tmp_path, capsys):
    a = write_network(tmp_path / "a.json", P=4096, d=8, D=6, rho=64)
    code, _, err = run(capsys, "compare", a, "--gamma-max", "10",
                       "--matrix-dim", "16", "--iterations", "1")
    assert code == 1


def test_spec_file_errors_carry_location(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text('{"group": {"kind": "cyclic", "modulus": 5}, ')
    code, _, err = run(capsys, "bounds", "--spec", str(broken))
    assert code == 1
    assert "broken.json:1:" in err
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"group": {"kind": "cyclic", "modulus": 5}}))
    code, _, err = run(capsys, "bounds", "--spec", str(wrong))
    assert code == 1
    assert "generators" in err


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "bounds")[0] == 1  # no graph source
    assert run(capsys, "schedule", "--builtin", "nope")[0] == 1
    assert run(capsys, "bogus-subcommand")[0] == 1


def test_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--help"])
    assert info.value.code == 0
    assert "pipeline" in capsys.readouterr().out
