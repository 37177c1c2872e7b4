"""Cache semantics and the command-line surface (exit codes, determinism)."""

import json
import os
import subprocess
import sys

import pytest

from turanlab.cache import CacheEntry, cache_entries, cache_lookup, cache_store, resolve_cache_path
from turanlab.cli import run
from turanlab.constructions import turan_hypergraph
from turanlab.hypergraph import format_hypergraph, save_hypergraph


def entry(value=8, ts=1.0, complete=True):
    return CacheEntry(
        predicate="cancellative",
        n=6,
        r=3,
        ell=None,
        value=value,
        extremal_classes=1,
        complete=complete,
        tool_version="0.1.0",
        timestamp=ts,
        stats={"nodes_explored": 28},
    )


def test_cache_round_trip(tmp_path):
    path = str(tmp_path / "cache.jsonl")
    assert cache_lookup(path, ("cancellative", 6, 3, None)) is None
    cache_store(path, entry())
    hit = cache_lookup(path, ("cancellative", 6, 3, None))
    assert hit is not None and hit.value == 8
    assert cache_lookup(path, ("cancellative", 7, 3, None)) is None


def test_cache_newest_wins_and_skips_incomplete(tmp_path):
    path = str(tmp_path / "cache.jsonl")
    cache_store(path, entry(value=8, ts=1.0))
    cache_store(path, entry(value=8, ts=2.0))
    cache_store(path, entry(value=99, ts=3.0, complete=False))
    hit = cache_lookup(path, ("cancellative", 6, 3, None))
    assert hit.timestamp == 2.0 and hit.value == 8


def test_cache_corrupt_lines_skipped(tmp_path, capfd):
    path = str(tmp_path / "cache.jsonl")
    cache_store(path, entry())
    with open(path, "a") as fh:
        fh.write("this is not json\n")
        fh.write('{"half": true\n')
    cache_store(path, entry(ts=5.0))
    entries = cache_entries(path)
    assert len(entries) == 2
    assert "corrupt cache line" in capfd.readouterr().err


def test_resolve_cache_path(monkeypatch):
    assert resolve_cache_path("x.jsonl") == "x.jsonl"
    monkeypatch.setenv("TURANLAB_CACHE", "env.jsonl")
    assert resolve_cache_path(None) == "env.jsonl"
    monkeypatch.delenv("TURANLAB_CACHE")
    assert resolve_cache_path(None) == "./turanlab-cache.jsonl"


def run_cli(args, capsys):
    code = run(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_construct_and_verify(tmp_path, capsys):
    code, out, _ = run_cli(["construct", "turan", "--n", "6", "--r", "3", "--ell", "3"], capsys)
    assert code == 0
    path = str(tmp_path / "t6.txt")
    with open(path, "w") as fh:
        fh.write(out)
    for cert in ("cancellative", "inequality2", "theorem13", "mantel-link", "link-count"):
        code, out, _ = run_cli(["verify", cert, path], capsys)
        assert code == 0, cert
        assert json.loads(out)["holds"] is True


def test_cli_verify_violation_and_precondition(tmp_path, capsys):
    bad = str(tmp_path / "bad.txt")
    with open(bad, "w") as fh:
        fh.write("5 3\n1 2 3\n1 2 4\n3 4 5\n")
    code, out, _ = run_cli(["verify", "cancellative", bad], capsys)
    assert code == 1
    assert json.loads(out)["holds"] is False
    # precondition failure: fisher-ryan on a K4-containing graph
    k4 = str(tmp_path / "k4.txt")
    with open(k4, "w") as fh:
        fh.write("4 2\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n")
    code, _, err = run_cli(["verify", "fisher-ryan", k4, "--ell", "3"], capsys)
    assert code == 2
    assert "precondition" in err
    # and on a cancellative certificate with a non-cancellative input
    code, _, _ = run_cli(["verify", "inequality2", bad], capsys)
    assert code == 2


def test_cli_usage_errors(capsys):
    code, _, _ = run_cli(["no-such-command"], capsys)
    assert code == 2
    code, _, _ = run_cli(["verify", "fisher-ryan", "/nonexistent/file"], capsys)
    assert code == 2
    code, _, _ = run_cli(["search", "--n", "5", "--r", "3", "--predicate", "k-free", "--no-cache"], capsys)
    assert code == 2  # k-free without --ell


def test_cli_search_cache_flow(tmp_path, capsys, monkeypatch):
    cache = str(tmp_path / "c.jsonl")
    args = ["search", "--n", "6", "--r", "3", "--predicate", "cancellative", "--cache", cache]
    code, fresh, _ = run_cli(args, capsys)
    assert code == 0
    payload = json.loads(fresh)
    assert payload["value"] == 8 and payload["extremal_classes"] == 1
    # second run hits the cache and is byte-identical
    code, cached, _ = run_cli(args, capsys)
    assert code == 0 and cached == fresh
    # --force recomputes, agrees, appends
    code, forced, _ = run_cli(args + ["--force"], capsys)
    assert code == 0 and forced == fresh
    assert len(cache_entries(cache)) == 2
    # tripwire: poison the cache with a wrong value, then force
    poisoned = CacheEntry(
        predicate="cancellative", n=6, r=3, ell=None, value=7, extremal_classes=1,
        complete=True, tool_version="x", timestamp=99.0, stats={},
    )
    cache_store(cache, poisoned)
    code, _, err = run_cli(args + ["--force"], capsys)
    assert code == 1
    assert "tripwire" in err


def test_cli_search_budget_exit_code(tmp_path, capsys):
    cache = str(tmp_path / "c.jsonl")
    code, out, _ = run_cli(
        ["search", "--n", "7", "--r", "3", "--predicate", "cancellative", "--budget", "5", "--cache", cache],
        capsys,
    )
    assert code == 3
    assert json.loads(out)["complete"] is False


def test_cli_stability_and_seed_requirement(tmp_path, capsys):
    path = str(tmp_path / "t9.txt")
    save_hypergraph(path, turan_hypergraph(9, 3, 3))
    code, out, _ = run_cli(["stability", "cancellative", path, "--json"], capsys)
    assert code == 0
    assert json.loads(out)["bad_edges"] == 0
    code, _, err = run_cli(["stability", "kfree", path], capsys)
    assert code == 2 and "--seed" in err
    code, out, _ = run_cli(["stability", "kfree", path, "--seed", "0", "--json"], capsys)
    assert code == 0
    g = str(tmp_path / "g.txt")
    code, out, _ = run_cli(
        ["construct", "triangle-free", "--n", "16", "--epsilon", "0.02", "--noise", "8", "--seed", "3"],
        capsys,
    )
    with open(g, "w") as fh:
        fh.write(out)
    code, out, _ = run_cli(["stability", "bipartite", g, "--seed", "3", "--json"], capsys)
    assert code == 0
    assert all(json.loads(out)["verified"].values())


def test_cli_construct_perturb(tmp_path, capsys):
    base = str(tmp_path / "t9.txt")
    save_hypergraph(base, turan_hypergraph(9, 3, 3))
    args = ["construct", "perturb", base, "--delete-fraction", "0.1",
            "--add-count", "1", "--seed", "7", "--keep-cancellative", "--json"]
    code, out, _ = run_cli(args, capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["edges"] == 26  # 27 - 2 deleted + 1 added
    code, out2, _ = run_cli(args, capsys)
    assert out2 == out  # seeded, deterministic


def test_cli_stability_generalized_and_kfree_verify(tmp_path, capsys):
    from turanlab.hypergraph import Hypergraph, mask_of
    from turanlab.hypergraph import auxiliary_graph

    g = auxiliary_graph(turan_hypergraph(12, 3, 3))
    g = Hypergraph(12, 2, g.edges + (mask_of((1, 2)),))
    path = str(tmp_path / "g12.txt")
    save_hypergraph(path, g)
    code, out, _ = run_cli(
        ["stability", "generalized", path, "--ell", "3", "--r", "3", "--seed", "0", "--json"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["bad_edges"] <= 1
    assert payload["witness_chain"]["removed_edges"] == [[1, 2]]
    t = str(tmp_path / "t9.txt")
    save_hypergraph(t, turan_hypergraph(9, 3, 3))
    code, out, _ = run_cli(["verify", "k-free", t, "--ell", "3"], capsys)
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run_cli(["verify", "fisher-ryan", t, "--ell", "3"], capsys)
    assert code == 2  # r = 3 input is not a graph


def test_cli_scan_csv(capsys):
    code, out, _ = run_cli(
        ["scan", "--kind", "cancellative", "--n", "9", "--params", "0.0,0.1", "--seeds", "1,2"],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,seed,epsilon,delta,bad_edges,case"
    assert len(lines) == 5
    code, out2, _ = run_cli(
        ["scan", "--kind", "cancellative", "--n", "9", "--params", "0.0,0.1", "--seeds", "1,2"],
        capsys,
    )
    assert out2 == out


def test_cli_manifest(tmp_path, capsys):
    code, out, err = run_cli(
        ["--manifest", "construct", "turan", "--n", "5", "--r", "2", "--ell", "2"], capsys
    )
    assert code == 0
    manifest = json.loads(err.strip().splitlines()[-1])
    assert manifest["command"][:2] == ["turanlab", "--manifest"]
    # digest recomputation matches the emitted payload
    import hashlib

    assert manifest["outputs"]["stdout"] == hashlib.sha256(out.encode()).hexdigest()
    # input files are digested too
    path = str(tmp_path / "in.txt")
    save_hypergraph(path, turan_hypergraph(6, 3, 3))
    code, out, err = run_cli(["--manifest", "verify", "cancellative", path], capsys)
    assert code == 0
    manifest = json.loads(err.strip().splitlines()[-1])
    with open(path, "rb") as fh:
        assert manifest["inputs"][path] == hashlib.sha256(fh.read()).hexdigest()


def test_cli_cache_subcommand(tmp_path, capsys):
    cache = str(tmp_path / "c.jsonl")
    cache_store(cache, entry())
    code, out, _ = run_cli(["cache", "list", "--cache", cache], capsys)
    assert code == 0
    assert len(json.loads(out)["entries"]) == 1
    code, out, _ = run_cli(
        ["cache", "get", "--predicate", "cancellative", "--n", "6", "--r", "3", "--cache", cache],
        capsys,
    )
    assert code == 0 and json.loads(out)["found"] is True
    code, out, _ = run_cli(
        ["cache", "get", "--predicate", "cancellative", "--n", "7", "--r", "3", "--cache", cache],
        capsys,
    )
    assert code == 1 and json.loads(out)["found"] is False


def test_cli_thread_count_byte_identity(tmp_path, capsys):
    """Representative determinism check: thread counts never change stdout."""
    path = str(tmp_path / "t9.txt")
    save_hypergraph(path, turan_hypergraph(9, 3, 3))
    outputs = []
    for t in ("1", "4", "8"):
        code, out, _ = run_cli(["verify", "inequality2", path, "--threads", t], capsys)
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1] == outputs[2]
    outputs = []
    for t in ("1", "4", "8"):
        code, out, _ = run_cli(
            ["scan", "--kind", "cancellative", "--n", "9,12", "--params", "0.1", "--seeds",
             "1,2,3", "--threads", t],
            capsys,
        )
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1] == outputs[2]


def test_cli_entry_point_subprocess():
    script = subprocess.run(
        [sys.executable, "-c", "from turanlab.cli import main; main()",
         "construct", "turan", "--n", "4", "--r", "2", "--ell", "2"],
        capture_output=True,
        text=True,
    )
    assert script.returncode == 0
    assert script.stdout.startswith("4 2\n")
