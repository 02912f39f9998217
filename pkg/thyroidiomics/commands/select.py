"""
Select command for thyroidiomics CLI

Runs the two-stage feature selection (Spearman filter, then RFE) on a
feature table.
"""

from dataclasses import replace
from pathlib import Path

import click

from ..evaluation.metrics import CATEGORIES
from ..experiment.lococv import RFE_HYPERPARAMS
from ..learning.features import DEFAULT_K, DEFAULT_THRESHOLD, FeatureTable, correlation_filter, fit_zscore, rfe_select
from ..utils.console import print_header, print_info, print_step, print_success, print_table, print_warning
from ..utils.file_utils import write_json_file, write_provenance
from .common import seed_option


@click.command()
@click.option(
    "--features",
    "-f",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Feature CSV from 'extract'",
)
@click.option(
    "--threshold",
    type=click.FloatRange(0.0, 1.0, min_open=True),
    default=DEFAULT_THRESHOLD,
    show_default=True,
    help="Spearman |rho| above which a column is dropped",
)
@click.option("--k", type=click.IntRange(min=1), default=DEFAULT_K, show_default=True, help="Features kept by RFE")
@seed_option
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Output JSON")
def select_command(features: Path, threshold: float, k: int, seed: int, out: Path) -> None:
    """
    Select features with a correlation filter and recursive elimination.

    Features are z-scored first. The output lists the selected names, their
    normalized importances and the columns dropped by the correlation filter.

    Examples:
        thyroidiomics select -f features.csv --out selection.json
        thyroidiomics select -f features.csv --threshold 0.9 --k 5 --out selection.json
    """
    print_header("Feature Selection")

    table = FeatureTable.read_csv(features)
    standardized = fit_zscore(table).apply(table)

    print_step(f"Filtering {len(table.columns)} columns at |rho| > {threshold}...")
    kept = correlation_filter(standardized, threshold)
    dropped = [c for c in table.columns if c not in kept]
    if len(kept) < k:
        print_warning(f"Only {len(kept)} columns survive the filter; keeping all of them")
        k = len(kept)

    print_step(f"Eliminating down to {k} features...")
    hp = replace(RFE_HYPERPARAMS, seed=seed)
    selected, importances = rfe_select(standardized.select(kept), k, hp, CATEGORIES)

    write_json_file(
        out,
        {
            "selected": selected,
            "importances": importances,
            "dropped_by_correlation": dropped,
            "threshold": threshold,
            "k": k,
        },
    )
    write_provenance(out, "select", {"features": features, "threshold": threshold, "k": k, "seed": seed})

    ranked = sorted(selected, key=lambda name: (-importances[name], name))
    print_table("Selected features", ["feature", "importance"], [[n, importances[n]] for n in ranked])
    print_success(f"Kept {len(selected)} features ({len(dropped)} dropped by correlation)")
    print_info(f"📁 Selection: {out}")
