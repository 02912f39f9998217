"""
Train command for thyroidiomics CLI

Grid-searches the boosted-tree hyperparameters and fits the final model.
"""

from pathlib import Path
from typing import List, Optional

import click

from ..errors import SchemaError
from ..evaluation.metrics import CATEGORIES
from ..learning.features import FeatureTable, fit_zscore
from ..learning.gbdt import train
from ..learning.model_selection import DEFAULT_FOLDS, LATTICE_PRESETS, grid_search_cv, resolve_lattice, with_seed
from ..utils.console import print_header, print_info, print_step, print_success
from ..utils.file_utils import read_json_file, write_json_file, write_provenance
from .common import get_workers, parse_lattice, seed_option


def load_selected(selection: Path) -> List[str]:
    data = read_json_file(selection)
    if not isinstance(data, dict) or not isinstance(data.get("selected"), list):
        raise SchemaError(f"{selection}: expected an object with a 'selected' list")
    return [str(name) for name in data["selected"]]


@click.command()
@click.option(
    "--features",
    "-f",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Training feature CSV",
)
@click.option(
    "--selection",
    "-s",
    type=click.Path(dir_okay=False, path_type=Path),
    help="selection.json from 'select' (default: all columns)",
)
@click.option(
    "--lattice",
    default="default",
    show_default=True,
    help=f"Hyperparameter lattice: {', '.join(LATTICE_PRESETS)} or a JSON file of axes",
)
@click.option("--folds", type=click.IntRange(min=2), default=DEFAULT_FOLDS, show_default=True, help="CV folds")
@seed_option
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Output model JSON")
@click.pass_context
def train_command(
    ctx: click.Context,
    features: Path,
    selection: Optional[Path],
    lattice: str,
    folds: int,
    seed: int,
    out: Path,
) -> None:
    """
    Train a boosted-tree classifier.

    Features are z-scored with parameters fit on this table; the parameters
    are stored in the model file so 'predict' applies the same transform.

    Examples:
        thyroidiomics train -f features.csv -s selection.json --out model.json
        thyroidiomics train -f features.csv --lattice quick --seed 7 --out model.json
    """
    print_header("Model Training")

    table = FeatureTable.read_csv(features)
    columns = load_selected(selection) if selection else list(table.columns)
    zscore = fit_zscore(table).subset(columns)
    standardized = zscore.apply(table.select(columns))

    grid = resolve_lattice(parse_lattice(lattice))
    print_step(f"Grid search over {len(grid)} points ({folds}-fold CV)...")
    best = grid_search_cv(standardized.values, standardized.labels, grid, folds, seed, CATEGORIES, get_workers(ctx))
    hp = with_seed(best, seed)
    print_info(f"Best hyperparameters: {hp.describe()}")

    print_step(f"Fitting on {table.n_rows} cases...")
    model = train(standardized.values, standardized.labels, hp, columns, CATEGORIES)

    document = model.to_dict()
    document["standardization"] = zscore.to_dict()
    write_json_file(out, document)
    write_provenance(
        out,
        "train",
        {"features": features, "selection": selection, "lattice": lattice, "folds": folds, "seed": seed},
    )

    print_success(f"Trained {model.n_rounds} rounds on {len(columns)} features")
    print_info(f"📁 Model: {out}")
