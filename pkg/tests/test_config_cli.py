import json

import pytest

from p2panon.cli import main
from p2panon.config import Scheme, load_config, parse_config
from p2panon.exceptions import ConfigError, RunError
from p2panon.graph import load_topology
from p2panon.metrics import summarize
from p2panon.report import (CSV_HEADER, ExperimentReport, Record, emit_report, metadata_path,
                            read_records_csv)
from p2panon.runner import run

MINIMAL = {"scheme": "dandelion", "topology": {"generator": "line", "n": 1000}, "p_f": 0.9,
           "adversary": {"fraction": 0.01}, "runs": 1000, "seed": 1}


def violations(doc, **kw):
    with pytest.raises(ConfigError) as exc:
        parse_config(doc, **kw)
    return dict(exc.value.violations)


def test_minimal_config_accepted():
    cfg = parse_config(MINIMAL)
    assert cfg.scheme is Scheme.DANDELION and cfg.topology.n == 1000
    assert cfg.adversary.resolve(1000) == 10 and cfg.runs == 1000 and cfg.seed == 1
    assert parse_config(json.dumps(MINIMAL)) == cfg


def test_p_f_out_of_range():
    assert "p_f" in violations({**MINIMAL, "p_f": 1.5})


def test_ln_with_p_f_is_mutually_exclusive():
    doc = {"scheme": "ln", "topology": {"generator": "weighted-random", "n": 50}, "p_f": 0.9,
           "adversary": {"count": 1}}
    assert "mutually exclusive" in violations(doc)["p_f"]


def test_every_violation_reported():
    doc = {"scheme": "dandelion", "topology": {"generator": "k-regular", "n": -3, "colour": 1},
           "p_f": "high", "adversary": {"count": 2, "fraction": 0.5}, "runs": 0, "extra": True}
    found = violations(doc)
    for path in ("extra", "topology.generator", "p_f", "runs", "adversary"):
        assert any(p.startswith(path) for p in found), path
    assert len(found) >= 5


def test_bad_json_and_missing_snapshot(tmp_path):
    assert "<document>" in violations("{not json")
    doc = {"scheme": "ln", "topology": {"generator": "snapshot", "path": "missing.json"},
           "adversary": {"count": 1}}
    assert "topology.path" in violations(doc, base_dir=tmp_path)


def _report(records, transactions=10, intercepted=None):
    return ExperimentReport({"scheme": "dandelion"}, records, transactions,
                            len(records) if intercepted is None else intercepted,
                            version="test")


def test_header_only_report(tmp_path):
    docs = emit_report(_report([]), "csv", tmp_path / "r.csv")
    assert docs["records"] == ",".join(CSV_HEADER) + "\n"
    meta = json.loads(metadata_path(tmp_path / "r.csv").read_text())
    assert meta["intercept_fraction"] == 0 and meta["summary"] is None
    assert (tmp_path / "r.meta.json").exists()


def test_three_records_and_stable_bytes():
    recs = [Record(1, "a2:p1", 1.0, 1.0, 2), Record(0, "a9:p8", 0.1 + 0.2, 0.25, 3),
            Record(0, "a1:p0", 0.0, 0.0, 1)]
    a = emit_report(_report(recs), "csv")
    assert len(a["records"].splitlines()) == 4
    assert a["records"].splitlines()[1].startswith("0,a1:p0")
    assert emit_report(_report(list(reversed(recs))), "csv") == a
    back = read_records_csv(a["records"])
    assert back == sorted(recs, key=lambda r: (r.run, r.observation))
    structured = json.loads(emit_report(_report(recs), "structured")["report"])
    assert len(structured["records"]) == 3


def test_unwritable_path(tmp_path):
    from p2panon.exceptions import AnonymityError
    with pytest.raises(AnonymityError):
        emit_report(_report([]), "csv", tmp_path / "no" / "such" / "r.csv")


SMALL = {"scheme": "dandelion++", "topology": {"generator": "quasi-4-regular", "n": 60},
         "p_f": 0.9, "adversary": {"fraction": 0.1}, "runs": 4, "tx_per_node": 2, "seed": 5,
         "bounds": {"max_hops": 6}}


def test_report_aggregates_recomputable():
    report = run(parse_config(SMALL), workers=1)
    assert len(report.records) == report.intercepted
    docs = emit_report(report, "csv")
    meta = json.loads(docs["metadata"])
    back = read_records_csv(docs["records"])
    assert meta["summary"] == summarize([r.entropy_bits for r in back]).as_dict()
    assert meta["record_count"] == len(back)
    assert "wall_clock_seconds" not in meta


def test_run_errors_carry_run_index(monkeypatch):
    import p2panon.hop.experiment as hop

    def boom(cfg, index):
        raise ValueError("bad")

    monkeypatch.setattr(hop, "run_hop_by_hop_once", boom)
    with pytest.raises(RunError) as exc:
        run(parse_config(SMALL), workers=1)
    assert exc.value.run_index == 0 and "run 0" in str(exc.value)


@pytest.fixture
def cfg_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(SMALL))
    return path


def test_cli_run_deterministic_across_workers(cfg_file, tmp_path):
    outs = []
    for w in (1, 3):
        out = tmp_path / f"w{w}.csv"
        assert main(["run", "--config", str(cfg_file), "--workers", str(w), "--out", str(out)]) == 0
        outs.append((out.read_bytes(), metadata_path(out).read_bytes()))
    assert outs[0] == outs[1]
    assert main(["run", "--config", str(cfg_file), "--seed", "6", "--out",
                 str(tmp_path / "s6.csv")]) == 0
    assert (tmp_path / "s6.csv").read_bytes() != outs[0][0]


def test_cli_summarize_and_gen_topology(cfg_file, tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["run", "--config", str(cfg_file), "--out", str(out), "--workers", "1"]) == 0
    assert main(["summarize", str(out)]) == 0
    doc = json.loads(capsys.readouterr().out)
    meta = json.loads(metadata_path(out).read_text())
    assert doc["summary"] == meta["summary"]
    topo = tmp_path / "t.json"
    assert main(["gen-topology", "--config", str(cfg_file), "--out", str(topo)]) == 0
    t = load_topology(topo)
    assert t.n == 60 and len(t.adversaries) == 6


def test_cli_structured_to_stdout(cfg_file, capsys):
    assert main(["run", "--config", str(cfg_file), "--format", "structured", "--workers", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["config"]["scheme"] == "dandelion++" and "records" in doc


def test_cli_learn_subgraph(tmp_path, capsys):
    cfg = {"scheme": "subgraph-learning", "topology": {"generator": "k-regular", "n": 120},
           "p_f": 0.9, "adversary": {"fraction": 0.1}, "tx_per_node": 30, "runs": 2, "seed": 3}
    path = tmp_path / "l.json"
    path.write_text(json.dumps(cfg))
    assert main(["learn-subgraph", "--config", str(path), "--workers", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "wall_clock_seconds" not in doc
    assert 0 < doc["accuracy"]["median"] <= 1
    assert main(["learn-subgraph", "--config", str(cfg_file_for(tmp_path))]) == 2


def cfg_file_for(tmp_path):
    p = tmp_path / "other.json"
    p.write_text(json.dumps(SMALL))
    return p


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({**MINIMAL, "p_f": 1.5, "runs": -1}))
    assert main(["run", "--config", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "p_f" in err and "runs" in err
    assert main(["run", "--config", str(tmp_path / "absent.json")]) == 2
    assert main(["summarize", str(tmp_path / "absent.csv")]) == 3
    garbage = tmp_path / "g.csv"
    garbage.write_text("a,b\n1,2\n")
    assert main(["summarize", str(garbage)]) == 3
    snap = tmp_path / "snap.json"
    snap.write_text("{}")
    ln = tmp_path / "ln.json"
    ln.write_text(json.dumps({"scheme": "ln", "topology": {"generator": "snapshot",
                                                           "path": "snap.json"},
                              "adversary": {"count": 1}}))
    assert main(["run", "--config", str(ln), "--workers", "1"]) == 3


def test_load_config_relative_snapshot(tmp_path):
    (tmp_path / "s.json").write_text("{}")
    (tmp_path / "c.json").write_text(json.dumps(
        {"scheme": "ln", "topology": {"generator": "snapshot", "path": "s.json"},
         "adversary": {"count": 1}, "k": 2}))
    cfg = load_config(tmp_path / "c.json")
    assert cfg.k == 2 and cfg.topology.path == str(tmp_path / "s.json")
