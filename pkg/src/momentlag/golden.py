"""Deterministic per-fixture summaries, compared against the golden files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from . import corpus
from .koszul import basis_size, cohomology
from .lagrangian import lagrangian_report
from .polytope import Polytope
from .quadrics import polytope_to_quadrics

KOSZUL_SUMMARY_CAP = 300_000


def golden_dir() -> Path:
    return Path(str(resources.files("momentlag") / "fixtures" / "golden"))


def summarize(name: str) -> dict:
    from .cli import check_polytope, check_quadrics

    obj = corpus.load(name)
    out: dict = {"name": name}
    if isinstance(obj, Polytope):
        out["kind"] = "polytope"
        out["check"] = check_polytope(obj)
        QS = polytope_to_quadrics(obj)
        out["gale"] = QS.to_json()
    else:
        out["kind"] = "quadrics"
        QS = obj
    out["quadrics_check"] = check_quadrics(QS)
    if isinstance(obj, Polytope):
        from .polytope import nerve

        K = nerve(obj)
        if basis_size(K) <= KOSZUL_SUMMARY_CAP:
            out["cohomology_Z"] = cohomology(K, "Z").to_json()
    out["report"] = lagrangian_report(QS).to_json()
    return out
