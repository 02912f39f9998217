"""
LOCOCV command for thyroidiomics CLI

Runs leave-one-center-out cross-validation for one or both scenarios:
1 scores held-out centers on physician masks, 2 on predicted masks.
"""

from pathlib import Path
from typing import List, Tuple

import click

from ..evaluation.stats import DEFAULT_ALPHA, DEFAULT_MARGIN, tost_table
from ..experiment.lococv import SCENARIOS, FoldResult, LococvConfig, aggregate, run_scenarios
from ..experiment.manifest import load_manifest
from ..learning.features import DEFAULT_K, DEFAULT_THRESHOLD
from ..learning.model_selection import DEFAULT_FOLDS, LATTICE_PRESETS
from ..radiomics.base import ExtractionConfig
from ..utils.console import print_header, print_info, print_step, print_success, print_table, print_warning
from ..utils.file_utils import write_json_file, write_provenance
from .common import format_optional, get_workers, manifest_option, parse_lattice, seed_option


def fold_file_name(center_id: int) -> str:
    return f"fold_center_{center_id:02d}.json"


def write_scenario(results: List[FoldResult], out: Path) -> Tuple[dict, dict]:
    """Write per-fold results, summary.json and selection_report.json under ``out``"""
    summary = aggregate(results)
    for result in results:
        write_json_file(out / fold_file_name(result.center_id), result.to_dict())

    summary_doc = summary.to_dict()
    ordered = sorted(results, key=lambda r: r.center_id)
    summary_doc["folds"] = [r.metrics.to_dict() for r in ordered if r.metrics is not None]
    selection_doc = summary.selection.to_dict()
    write_json_file(out / "summary.json", summary_doc)
    write_json_file(out / "selection_report.json", selection_doc)
    return summary_doc, selection_doc


def show_summary(title: str, results: List[FoldResult]) -> None:
    rows = []
    for result in sorted(results, key=lambda r: r.center_id):
        report = result.metrics
        if report is None:
            rows.append([result.center_id, 0, "skipped", "-", "-"])
            continue
        rows.append(
            [
                result.center_id,
                report.n_cases,
                report.accuracy,
                format_optional(report.value("f1", "macro")),
                format_optional(report.value("roc_auc", "macro")),
            ]
        )
    print_table(title, ["center", "cases", "accuracy", "macro F1", "macro ROC AUC"], rows)


@click.command()
@manifest_option()
@click.option(
    "--scenario",
    "scenarios",
    type=click.Choice([str(s) for s in SCENARIOS]),
    multiple=True,
    default=("1",),
    show_default=True,
    help="1: physician masks, 2: predicted masks for the held-out center (repeatable)",
)
@click.option(
    "--threshold",
    type=click.FloatRange(0.0, 1.0, min_open=True),
    default=DEFAULT_THRESHOLD,
    show_default=True,
    help="Spearman |rho| filter threshold",
)
@click.option("--k", type=click.IntRange(min=1), default=DEFAULT_K, show_default=True, help="Features kept by RFE")
@click.option(
    "--lattice",
    default="default",
    show_default=True,
    help=f"Hyperparameter lattice: {', '.join(LATTICE_PRESETS)} or a JSON file of axes",
)
@click.option("--folds", type=click.IntRange(min=2), default=DEFAULT_FOLDS, show_default=True, help="Grid-search CV folds")
@click.option("--bin-width", type=float, default=0.3, show_default=True, help="Radiomics bin width")
@click.option(
    "--margin",
    type=click.FloatRange(0.0, min_open=True),
    default=DEFAULT_MARGIN,
    show_default=True,
    help="TOST margin when both scenarios run",
)
@seed_option
@click.option("--out", "-o", type=click.Path(file_okay=False, path_type=Path), required=True, help="Output directory")
@click.pass_context
def lococv_command(
    ctx: click.Context,
    manifest: Path,
    scenarios: Tuple[str, ...],
    threshold: float,
    k: int,
    lattice: str,
    folds: int,
    bin_width: float,
    margin: float,
    seed: int,
    out: Path,
) -> None:
    """
    Leave-one-center-out evaluation of the full radiomics pipeline.

    Writes one FoldResult JSON per center, summary.json (mean and sd across
    centers) and selection_report.json. With both scenarios, each gets its
    own subdirectory and tost.json compares them center by center.

    Examples:
        thyroidiomics lococv -m data/manifest.json --scenario 1 --seed 7 --out results/
        thyroidiomics lococv -m data/manifest.json --scenario 1 --scenario 2 --out results/
    """
    print_header("Leave-One-Center-Out Cross-Validation")

    config = LococvConfig(
        threshold=threshold,
        k=k,
        lattice=parse_lattice(lattice),
        folds=folds,
        seed=seed,
        extraction=ExtractionConfig(bin_width=bin_width),
    )
    dataset = load_manifest(manifest)
    selected = sorted({int(s) for s in scenarios})

    print_step(f"Running {len(dataset.centers)} folds for scenario(s) {selected}...")
    results = run_scenarios(dataset, selected, config, workers=get_workers(ctx))

    extra = {"scenarios": selected}
    for scenario in selected:
        target = out if len(selected) == 1 else out / f"scenario_{scenario}"
        summary_doc, _ = write_scenario(results[scenario], target)
        show_summary(f"Scenario {scenario}", results[scenario])
        failures = summary_doc["failures"]
        if failures["train"] or failures["test"]:
            print_warning(f"Scenario {scenario}: {failures['test']} test cases failed extraction")
        if summary_doc["skipped_centers"]:
            print_warning(f"Scenario {scenario}: centers {summary_doc['skipped_centers']} had no case to score")

    if len(selected) == 2:
        scored = {s: [r.metrics for r in results[s] if r.metrics is not None] for s in selected}
        rows = tost_table(scored[1], scored[2], margin, DEFAULT_ALPHA)
        write_json_file(out / "tost.json", {"margin": margin, "alpha": DEFAULT_ALPHA, "rows": [r.to_dict() for r in rows]})
        equivalent = sum(1 for r in rows if r.result is not None and r.result.equivalent)
        print_info(f"Equivalent metrics between scenarios: {equivalent}/{len(rows)}")

    write_provenance(out, "lococv", {"manifest": manifest, **config.to_dict()}, extra)
    print_success("LOCOCV completed")
    print_info(f"📁 Results: {out}")
