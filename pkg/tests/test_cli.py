from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from lbgraphs.cli import main
from lbgraphs.errors import CorruptionError
from lbgraphs.evaluate import make_rng, random_subgraph
from lbgraphs.formats import FILES, read_candidate, read_instance, write_candidate, write_instance
from lbgraphs.oracles import ShortcutSet

GOLDEN = Path(__file__).parent / "golden"
BASE_ARGS = ["generate", "base", "--d", "2", "--r", "1", "--D", "2"]
TRIVIAL = ["--baseline", "trivial", "--k", "20", "--seed", "7", "--budget-kind", "vertex_linear"]


def _files(path: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


@pytest.fixture()
def base_dir(tmp_path):
    out = tmp_path / "base"
    assert main([*BASE_ARGS, "--out", str(out)]) == 0
    return out


def test_generate_matches_golden_bytes(base_dir):
    assert _files(base_dir) == _files(GOLDEN / "base-2-1-2")


def test_shortcut_report_matches_golden(base_dir, tmp_path):
    rep = tmp_path / "r.txt"
    assert main(["eval", "shortcut", str(base_dir), *TRIVIAL, "--report", str(rep)]) == 0
    assert rep.read_bytes() == (GOLDEN / "shortcut-trivial-k20-seed7.txt").read_bytes()


def test_roundtrip_preserves_instance(base212, tmp_path):
    write_instance(base212, tmp_path / "x")
    inst, manifest = read_instance(tmp_path / "x")
    g, h = base212.graph, inst.graph
    assert manifest["counts"] == {"n": g.n, "m": g.m, "pairs": len(base212.pairs)}
    for name in ("src", "dst", "edge_kind", "vertex_kind", "vertex_layer", "coords", "provenance"):
        assert np.array_equal(getattr(g, name), getattr(h, name)), name
    for name in ("sources", "targets", "expected_length", "paths", "witness"):
        assert np.array_equal(getattr(base212.pairs, name), getattr(inst.pairs, name)), name


def test_roundtrip_rederives_spanner_edge_kinds(spanner_micro, tmp_path):
    write_instance(spanner_micro, tmp_path / "s")
    inst, _ = read_instance(tmp_path / "s")
    assert np.array_equal(inst.graph.edge_kind, spanner_micro.graph.edge_kind)
    assert inst.derived == spanner_micro.derived


def test_verify_passes_and_is_reproducible(base_dir, tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["verify", str(base_dir), "--report", str(a)]) == 0
    assert main(["verify", str(base_dir), "--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().endswith("status: PASS\n")


def test_inner_verify_exits_two(tmp_path):
    out = tmp_path / "inner"
    assert main(["generate", "inner", "--c", "1", "--L", "2", "--q", "4", "--out", str(out)]) == 0
    assert main(["verify", str(out), "--report", str(tmp_path / "v.txt")]) == 2
    assert "inner_conditions: FAIL" in (tmp_path / "v.txt").read_text()


def test_usage_errors_exit_one(tmp_path, capsys):
    assert main(["generate", "base", "--d", "0", "--r", "1", "--D", "1", "--out", str(tmp_path / "z")]) == 1
    assert main(["generate", "base", "--d", "2"]) == 1
    assert main(["frobnicate"]) == 1


def test_resource_limit_exits_three(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("LBGRAPHS_MAX_VERTICES", "100")
    assert main([*BASE_ARGS, "--out", str(tmp_path / "big")]) == 3


@pytest.mark.parametrize("mutate", ["drop_edge", "dup_pair", "manifest_count"])
def test_corruption_exits_four(base_dir, mutate, capsys):
    if mutate == "drop_edge":
        p = base_dir / "graph.txt"
        lines = p.read_text().splitlines(keepends=True)
        p.write_text("".join(lines[:-1]))
    elif mutate == "dup_pair":
        p = base_dir / "pairs.txt"
        lines = p.read_text().splitlines(keepends=True)
        p.write_text("".join(lines + [lines[-1]]))
    else:
        p = base_dir / "manifest.json"
        doc = json.loads(p.read_text())
        doc["counts"]["n"] += 1
        p.write_text(json.dumps(doc))
    assert main(["verify", str(base_dir)]) == 4
    with pytest.raises(CorruptionError):
        read_instance(base_dir)


def test_candidate_files_roundtrip_and_bind_to_instance(base_dir, tmp_path):
    inst, manifest = read_instance(base_dir)
    sc = ShortcutSet(tuple(zip(inst.pairs.sources[:2].tolist(), inst.pairs.targets[:2].tolist())))
    path = tmp_path / "sc.txt"
    write_candidate(path, manifest["digest"], sc)
    assert read_candidate(path, manifest["digest"]) == sc
    with pytest.raises(CorruptionError):
        read_candidate(path, "0" * 64)
    rep = tmp_path / "r.txt"
    assert main(["eval", "shortcut", str(base_dir), "--candidate", str(path), "--report", str(rep)]) == 0
    assert "measured.improved_pairs: 2" in rep.read_text()


def test_spanner_candidate_file(spanner_micro, tmp_path):
    manifest = write_instance(spanner_micro, tmp_path / "s")
    cand = random_subgraph(spanner_micro.graph, 100, make_rng(4))
    write_candidate(tmp_path / "c.txt", manifest["digest"], cand)
    assert read_candidate(tmp_path / "c.txt", manifest["digest"]) == cand
    code = main(["eval", "spanner", str(tmp_path / "s"), "--candidate", str(tmp_path / "c.txt"),
                 "--report", str(tmp_path / "r.txt")])
    assert code == 0
    assert "audit.clique_pigeonhole: PASS applies=1" in (tmp_path / "r.txt").read_text()


def test_eval_commands_are_byte_reproducible(spanner_micro, tmp_path):
    d = tmp_path / "s"
    write_instance(spanner_micro, d)
    runs = [
        ["eval", "spanner", str(d), "--candidate", "random", "--size", "3000", "--seed", "2"],
        ["eval", "emulator", str(d), "--candidate", "random", "--size", "40", "--seed", "2"],
        ["eval", "compress", str(d), "--T", "0,3", "--max-pairs", "6"],
    ]
    for i, argv in enumerate(runs):
        outs = []
        for j in range(2):
            rep = tmp_path / f"r{i}{j}.txt"
            main([*argv, "--report", str(rep)])
            outs.append(rep.read_bytes())
        assert outs[0] == outs[1]
        assert b"wall_clock" not in outs[0]


def test_timing_flag_adds_wall_clock(base_dir, tmp_path):
    rep = tmp_path / "t.txt"
    main(["eval", "shortcut", str(base_dir), *TRIVIAL, "--timing", "--report", str(rep)])
    assert "wall_clock_s:" in rep.read_text()


def test_sweep_and_export(tmp_path):
    out = tmp_path / "sweep.tsv"
    code = main(["sweep", "base", "--d", "2", "--r", "1", "--D", "1,2", "--eps", "0,1/2", "--out", str(out)])
    assert code == 0
    rows = out.read_text().splitlines()
    assert len(rows) == 5 and rows[1].startswith("base\td=2,r=1,D=1\t")
    inst = tmp_path / "b"
    main(["generate", "base", "--d", "2", "--r", "1", "--D", "1", "--out", str(inst)])
    assert main(["export", str(inst), "--format", "dot", "--out", str(tmp_path / "g.dot")]) == 0
    assert (tmp_path / "g.dot").read_text().startswith("digraph lbgraphs {")
    assert main(["export", str(inst), "--format", "json", "--out", str(tmp_path / "g.json")]) == 0
    doc = json.loads((tmp_path / "g.json").read_text())
    assert len(doc["pairs"]) == 52 and len(doc["vertices"]) == doc["vertices"][-1]["id"] + 1


def test_instance_files_listed():
    assert set(FILES) | {"manifest.json"} == set(_files(GOLDEN / "base-2-1-2"))
