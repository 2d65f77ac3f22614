import csv

from jmrealize.feasibility import decide_joint_measurability
from jmrealize.fixtures import diamond_hypergraph
from jmrealize.clifford import build_clifford
from jmrealize.povm import make_noisy_observable
from jmrealize.realization import realize, verify_realization
from jmrealize.report import (
    hypergraph_figure,
    residual_figure,
    spectra_figure,
    write_feasibility_report,
    write_verification_report,
)

PNG_MAGIC = b"\x89PNG"


def test_write_verification_report(tmp_path):
    r = realize(diamond_hypergraph())
    report = verify_realization(r)
    paths = write_verification_report(report, r, str(tmp_path / "out"))
    assert [p.rsplit("/", 1)[-1] for p in paths] == [
        "checks.csv",
        "hypergraph.png",
        "spectra.png",
    ]
    with open(paths[0], newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(report.checks)
    assert {row["check"] for row in rows} >= {"povm-valid", "edge-witness", "incompatibility-cert"}
    assert all(row["passed"] == "True" for row in rows)
    for png in paths[1:]:
        with open(png, "rb") as fh:
            assert fh.read(4) == PNG_MAGIC


def test_write_feasibility_report(tmp_path):
    fam = build_clifford(3)
    povms = [make_noisy_observable(fam, k, 0.9).povm for k in (1, 2)]
    report = decide_joint_measurability(povms)
    paths = write_feasibility_report(report, str(tmp_path), feas_tol=1e-7)
    with open(paths[0], newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["iteration", "residual"]
    assert len(rows) - 1 == len(report.residual_history)
    assert float(rows[1][1]) == report.residual_history[0]
    with open(paths[1], "rb") as fh:
        assert fh.read(4) == PNG_MAGIC


def test_figures_build_without_files():
    r = realize(diamond_hypergraph())
    assert hypergraph_figure(r.hypergraph) is not None
    assert spectra_figure(r) is not None
    assert residual_figure([1.0, 0.5, 0.25], feas_tol=1e-7) is not None
