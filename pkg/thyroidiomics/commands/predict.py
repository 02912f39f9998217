"""
Predict command for thyroidiomics CLI

Scores a feature table with a trained model.
"""

from pathlib import Path
from typing import Any, Dict

import click
import numpy as np

from ..evaluation.metrics import build_metrics_report
from ..learning.features import FeatureTable, ZScoreParams
from ..learning.gbdt import GbdtModel, predict_proba
from ..utils.console import print_header, print_info, print_step, print_success, print_table
from ..utils.file_utils import read_json_file, write_json_file, write_provenance


@click.command()
@click.option(
    "--model",
    "-M",
    "model_path",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Model JSON from 'train'",
)
@click.option(
    "--features",
    "-f",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Feature CSV to score",
)
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Output JSON")
def predict_command(model_path: Path, features: Path, out: Path) -> None:
    """
    Predict pathology probabilities for every case of a feature table.

    When every row carries a label, a metrics report is added to the output.

    Examples:
        thyroidiomics predict -M model.json -f test.csv --out predictions.json
    """
    print_header("Prediction")

    document = read_json_file(model_path)
    model = GbdtModel.from_dict(document)
    table = FeatureTable.read_csv(features).select(list(model.feature_names))
    if "standardization" in document:
        table = ZScoreParams.from_dict(document["standardization"]).apply(table)

    print_step(f"Scoring {table.n_rows} cases...")
    probabilities = np.atleast_2d(predict_proba(model, table.values))

    output: Dict[str, Any] = {
        "categories": list(model.categories),
        "predictions": [
            {
                "case_id": case_id,
                "label": label or None,
                "predicted": model.categories[int(np.argmax(row))],
                "probabilities": {c: float(p) for c, p in zip(model.categories, row)},
            }
            for case_id, label, row in zip(table.case_ids, table.labels, probabilities)
        ],
    }

    labelled = table.n_rows > 0 and all(table.labels)
    if labelled:
        report = build_metrics_report(None, table.labels, probabilities, model.categories)
        output["metrics"] = report.to_dict()
        print_table(
            "Per-category metrics",
            ["category", "precision", "recall", "f1"],
            [[c] + [report.per_class[c][m] for m in ("precision", "recall", "f1")] for c in model.categories],
        )
        print_info(f"Accuracy: {report.accuracy:.4f}")

    write_json_file(out, output)
    write_provenance(out, "predict", {"model": model_path, "features": features})
    print_success(f"Scored {table.n_rows} cases")
    print_info(f"📁 Predictions: {out}")
