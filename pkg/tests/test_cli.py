"""End-to-end CLI pipeline tests on a small 4-environment layout."""
import json
import xml.etree.ElementTree as ET

import pytest

from conftest import SMALL_LAYOUT
from wmest.cli import main
from wmest.concept import Query
from wmest.gridworld import build_catalog, catalog_from_dict
from wmest.policy import plan_catalog

TRAIN_CFG = {"seed": 5, "dim": 8, "epochs": 40}


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory):
    """Run catalog -> plan -> graphs -> train once; return the directory."""
    out = tmp_path_factory.mktemp("cli")
    layout_path = out / "layout.json"
    layout_path.write_text(json.dumps(SMALL_LAYOUT.to_dict()))
    (out / "train.json").write_text(json.dumps(TRAIN_CFG))
    assert main(["catalog", "--layout", str(layout_path),
                 "--out", str(out / "catalog.json")]) == 0
    assert main(["plan", "--catalog", str(out / "catalog.json"),
                 "--out", str(out / "plan.json")]) == 0
    assert main(["graphs", "--catalog", str(out / "catalog.json"),
                 "--out", str(out / "graphs")]) == 0
    assert main(["train", "--graphs", str(out / "graphs"),
                 "--config", str(out / "train.json"),
                 "--out", str(out / "space.json")]) == 0
    return out


def _run_exp(artifacts, number, out_name, *extra):
    out_dir = artifacts / out_name
    return main(["exp", str(number),
                 "--catalog", str(artifacts / "catalog.json"),
                 "--space", str(artifacts / "space.json"),
                 "--out", str(out_dir), "--trials", "4", *extra]), out_dir


def test_pipeline_artifacts(artifacts):
    catalog = json.loads((artifacts / "catalog.json").read_text())
    assert len(catalog["environments"]) == 4
    plan = json.loads((artifacts / "plan.json").read_text())
    assert set(plan) == {"0", "1", "2", "3"}
    corpus = json.loads((artifacts / "graphs" / "corpus.json").read_text())
    assert corpus["env_ids"] == [0, 1, 2, 3]
    space = json.loads((artifacts / "space.json").read_text())
    assert len(space["vectors"]) == 4
    assert all(len(v) == TRAIN_CFG["dim"] for v in space["vectors"].values())


def test_exp2_writes_summary(artifacts, capsys):
    code, out_dir = _run_exp(artifacts, 2, "exp2")
    assert code == 0
    summary = json.loads((out_dir / "exp2_summary.json").read_text())
    assert summary["trials"] == 4
    assert (out_dir / "exp2_results.csv").exists()
    assert (out_dir / "exp2_cumulative.png").exists()
    assert "exp2 summary" in capsys.readouterr().out


def test_exp3_rerun_is_byte_identical(artifacts):
    code1, dir1 = _run_exp(artifacts, 3, "exp3a")
    code2, dir2 = _run_exp(artifacts, 3, "exp3b")
    assert code1 == code2 == 0
    assert ((dir1 / "exp3_results.csv").read_bytes()
            == (dir2 / "exp3_results.csv").read_bytes())
    assert (dir1 / "exp3_updates.png").exists()


def test_exp1_svg_one_point_per_environment(artifacts):
    code, out_dir = _run_exp(artifacts, 1, "exp1")
    assert code == 0
    root = ET.parse(out_dir / "exp1_scatter.svg").getroot()
    ns = "{http://www.w3.org/2000/svg}"
    points = [c for c in root.iter(f"{ns}circle")
              if c.get("class") == "env"]
    assert len(points) == 4
    # re-plotting from the CSV alone reproduces the figure files
    assert main(["plot", "--exp", "1", "--out", str(out_dir)]) == 0


def test_estimate_subcommand(artifacts):
    layout, catalog = catalog_from_dict(
        json.loads((artifacts / "catalog.json").read_text()))
    policies = plan_catalog(layout, catalog)
    # a query satisfied by some environments but not all of them
    p = policies[0]
    s, a = next(
        (s, a) for s, a in sorted(p.optimal_action.items())
        if any(q.optimal_action.get(s) not in (None, a)
               for q in policies.values()))
    queries_path = artifacts / "queries.json"
    queries_path.write_text(json.dumps([Query(state=s, action=a).to_dict()]))
    out_path = artifacts / "estimate.json"
    assert main(["estimate", "--catalog", str(artifacts / "catalog.json"),
                 "--space", str(artifacts / "space.json"),
                 "--obs", "0", "--queries", str(queries_path),
                 "--out", str(out_path)]) == 0
    result = json.loads(out_path.read_text())
    assert len(result["ranking"]) == 4
    assert result["env_est"] in (0, 1, 2, 3)


def test_missing_artifact_names_producer(artifacts, tmp_path, capsys):
    code = main(["plan", "--catalog", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "plan.json")])
    assert code == 2
    assert "catalog" in capsys.readouterr().err


def test_train_requires_seed(artifacts, tmp_path, capsys):
    code = main(["train", "--graphs", str(artifacts / "graphs"),
                 "--out", str(tmp_path / "space.json")])
    assert code == 2
    assert "seed" in capsys.readouterr().err


def test_noise_flags_rejected_outside_interactive_experiments(artifacts,
                                                              capsys):
    code, _ = _run_exp(artifacts, 2, "exp2_noise", "--policy-noise", "0.1")
    assert code == 2
    assert "experiments 3, 4" in capsys.readouterr().err


def test_unknown_subcommand_exits():
    with pytest.raises(SystemExit):
        main(["bogus"])
