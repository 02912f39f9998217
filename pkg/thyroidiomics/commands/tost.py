"""
TOST command for thyroidiomics CLI

Paired equivalence tests between two per-center metric report lists.
"""

from pathlib import Path
from typing import Any, List, Optional

import click

from ..errors import SchemaError
from ..evaluation.metrics import AVERAGES, CATEGORIES, CLASS_METRICS, MetricsReport
from ..evaluation.stats import DEFAULT_ALPHA, DEFAULT_MARGIN, tost_compare, tost_table
from ..utils.console import print_header, print_info, print_table
from ..utils.file_utils import read_json_file, write_json_file, write_provenance


def load_reports(path: Path) -> List[MetricsReport]:
    """
    Per-center reports from a JSON list of MetricsReport objects, or from a
    LOCOCV summary.json (its ``folds`` list)
    """
    data: Any = read_json_file(path)
    if isinstance(data, dict) and "folds" in data:
        data = data["folds"]
    if not isinstance(data, list):
        raise SchemaError(f"{path}: expected a list of metrics reports or a LOCOCV summary")
    return [MetricsReport.from_dict(entry) for entry in data]


def _p(value: float) -> str:
    return f"{value:.4g}"


@click.command()
@click.option("--a", "a_path", type=click.Path(dir_okay=False, path_type=Path), required=True, help="First report list")
@click.option("--b", "b_path", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Second report list")
@click.option("--metric", type=click.Choice(CLASS_METRICS), default="f1", show_default=True, help="Metric to compare")
@click.option(
    "--class",
    "category",
    type=click.Choice(CATEGORIES + AVERAGES),
    default="MNG",
    show_default=True,
    help="Category or average",
)
@click.option(
    "--margin",
    type=click.FloatRange(0.0, min_open=True),
    default=DEFAULT_MARGIN,
    show_default=True,
    help="Equivalence margin",
)
@click.option(
    "--alpha",
    type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
    default=DEFAULT_ALPHA,
    show_default=True,
    help="Significance level",
)
@click.option("--all", "all_metrics", is_flag=True, help="Every class-wise metric and category")
@click.option("--out", "-o", type=click.Path(dir_okay=False, path_type=Path), help="Output JSON")
def tost_command(
    a_path: Path,
    b_path: Path,
    metric: str,
    category: str,
    margin: float,
    alpha: float,
    all_metrics: bool,
    out: Optional[Path],
) -> None:
    """
    Two one-sided tests for equivalence of paired per-center metrics.

    Examples:
        thyroidiomics tost --a s1/summary.json --b s2/summary.json --metric f1 --class MNG
        thyroidiomics tost --a s1/summary.json --b s2/summary.json --all --out tost.json
    """
    a_reports = load_reports(a_path)
    b_reports = load_reports(b_path)
    params = {"a": a_path, "b": b_path, "margin": margin, "alpha": alpha}

    if all_metrics:
        print_header("Equivalence Table")
        rows = tost_table(a_reports, b_reports, margin, alpha)
        table_rows = []
        for row in rows:
            if row.result is None:
                table_rows.append([row.metric, row.category, "-", "-", "-", row.reason])
            else:
                r = row.result
                table_rows.append(
                    [row.metric, row.category, r.n, f"{r.mean_diff:+.4f}", _p(r.p_tost), "yes" if r.equivalent else "no"]
                )
        print_table(f"TOST (margin {margin}, alpha {alpha})", ["metric", "class", "n", "mean diff", "p", "equivalent"], table_rows)
        equivalent = sum(1 for r in rows if r.result is not None and r.result.equivalent)
        print_info(f"Equivalent: {equivalent}/{len(rows)}")
        if out is not None:
            write_json_file(out, {"margin": margin, "alpha": alpha, "rows": [r.to_dict() for r in rows]})
            write_provenance(out, "tost", {**params, "all": True})
        return

    result = tost_compare(a_reports, b_reports, metric, category, margin, alpha)
    print_table(
        f"TOST {metric} [{category}]",
        ["n", "mean diff", "sd diff", "p lower", "p upper", "p", "equivalent"],
        [[result.n, result.mean_diff, result.sd_diff, _p(result.p_lower), _p(result.p_upper), _p(result.p_tost), "yes" if result.equivalent else "no"]],
    )
    if out is not None:
        write_json_file(out, {"metric": metric, "category": category, "result": result.to_dict()})
        write_provenance(out, "tost", {**params, "metric": metric, "category": category})
