"""Command-line interface: exit codes, file formats, piping, golden stats."""

import re

import pytest

from branchproofs.cli import main
from branchproofs.prooftree import parse_branching, proof_stats


TRIANGLE = "3 3\n0 1\n1 2\n0 2\n1 0 0\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_thin_segment_generation_and_verify(tmp_path, capsys):
    system = tmp_path / "thin.ineq"
    proof = tmp_path / "thin.proof"
    code, out = run(capsys, "thin-segment", "1000000",
                    "--system", str(system), "--proof", str(proof))
    assert code == 0 and "RESULT ok" in out
    code, out = run(capsys, "verify", "branching", str(system), str(proof))
    assert code == 0
    assert "RESULT valid" in out


def test_verify_invalid_names_leaf(tmp_path, capsys):
    system = tmp_path / "thin.ineq"
    proof = tmp_path / "thin.proof"
    run(capsys, "thin-segment", "1000000", "--system", str(system),
        "--proof", str(proof))
    bad = tmp_path / "bad.proof"
    bad.write_text("(node (1 0 0)\n  (leaf)\n  (leaf))\n")
    code, out = run(capsys, "verify", "branching", str(system), str(bad))
    assert code == 1
    assert "RESULT invalid" in out
    assert "L" in out  # the failing leaf path


def test_missing_file_is_an_input_error(tmp_path, capsys):
    code, out = run(capsys, "recompile", str(tmp_path / "nope.ineq"),
                    str(tmp_path / "nope.proof"))
    assert code == 2
    assert "RESULT error" in out


def test_recompile_and_certify_flow(tmp_path, capsys):
    system = tmp_path / "thin.ineq"
    proof = tmp_path / "thin.proof"
    run(capsys, "thin-segment", "1000000", "--system", str(system),
        "--proof", str(proof))
    out_proof = tmp_path / "small.proof"
    code, out = run(capsys, "recompile", str(system), str(proof),
                    "--radius", "3", "--out", str(out_proof))
    assert code == 0 and "RESULT valid" in out
    certified = tmp_path / "cert.proof"
    code, out = run(capsys, "certify", str(system), str(out_proof),
                    "--out", str(certified))
    assert code == 0
    code, out = run(capsys, "verify", "certified", str(system), str(certified))
    assert code == 0


def test_tseitin_pipe_to_cp(tmp_path, capsys):
    graph = tmp_path / "tri.graph"
    graph.write_text(TRIANGLE)
    system = tmp_path / "tri.ineq"
    proof = tmp_path / "tri.proof"
    code, out = run(capsys, "gen-tseitin", str(graph),
                    "--system", str(system), "--proof", str(proof))
    assert code == 0
    code, out = run(capsys, "verify", "enumerative", str(system), str(proof))
    assert code == 0
    cuts = tmp_path / "tri.cuts"
    code, out = run(capsys, "enum-to-cp", str(system), str(proof),
                    "--out", str(cuts))
    assert code == 0
    code, out = run(capsys, "verify", "cp", str(system), str(cuts))
    assert code == 0 and "RESULT valid" in out


def test_cp_verify_detects_short_list(tmp_path, capsys):
    graph = tmp_path / "tri.graph"
    graph.write_text(TRIANGLE)
    system = tmp_path / "tri.ineq"
    proof = tmp_path / "tri.proof"
    run(capsys, "gen-tseitin", str(graph), "--system", str(system),
        "--proof", str(proof))
    cuts = tmp_path / "weak.cuts"
    cuts.write_text("")  # zero cuts leave the fractional point intact
    code, out = run(capsys, "verify", "cp", str(system), str(cuts))
    assert code == 1 and "RESULT invalid" in out


def test_pipe_on_all_bundled_instances(tmp_path, capsys):
    """gen-tseitin -> enum-to-cp -> verify cp exits 0 for every shipped graph."""
    from pathlib import Path

    bundled = sorted(Path(__file__).resolve().parent.parent.glob("instances/*.graph"))
    assert bundled, "no bundled instance files found"
    assert {g.stem for g in bundled} >= {"triangle", "single_edge", "k4", "grid3x3"}
    for graph in bundled:
        system = tmp_path / f"{graph.stem}.ineq"
        proof = tmp_path / f"{graph.stem}.proof"
        cuts = tmp_path / f"{graph.stem}.cuts"
        assert run(capsys, "gen-tseitin", str(graph), "--system", str(system),
                   "--proof", str(proof))[0] == 0
        assert run(capsys, "enum-to-cp", str(system), str(proof),
                   "--out", str(cuts))[0] == 0
        code, out = run(capsys, "verify", "cp", str(system), str(cuts))
        assert code == 0, f"{graph.stem}: {out}"


def test_gen_pn_and_qn(tmp_path, capsys):
    code, out = run(capsys, "gen-pn", "3", "--out", str(tmp_path / "p3.ineq"))
    assert code == 0
    code, out = run(capsys, "gen-qn", "3", "--out", str(tmp_path / "q3.ineq"),
                    "--split-check")
    assert code == 0 and "RESULT valid" in out


def test_stats_matches_library(tmp_path, capsys):
    system = tmp_path / "thin.ineq"
    proof_path = tmp_path / "thin.proof"
    run(capsys, "thin-segment", "12345", "--system", str(system),
        "--proof", str(proof_path))
    code, out = run(capsys, "stats", str(proof_path))
    assert code == 0
    stats = proof_stats(parse_branching(proof_path.read_text()))
    match = re.search(r"length=(\d+) bit_size=(\d+) max_coeff=(\d+)", out)
    assert match is not None
    assert tuple(map(int, match.groups())) == (
        stats.length, stats.bit_size, stats.max_coeff
    )


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
