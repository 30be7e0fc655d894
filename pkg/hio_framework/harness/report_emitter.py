import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from hio_framework.harness.run_report import RunReport
from hio_framework.hierarchy.hier_model import NetworkId
from hio_framework.system.errors import ReportError

_logger = logging.getLogger(__name__)

FOLDS_CSV = "folds.csv"
DECISIONS_JSONL = "gate_decisions.jsonl"
SUMMARY_TXT = "summary.txt"
LOSS_SERIES_CSV = "series_loss.csv"
GATE_SERIES_CSV = "series_gate.csv"
REPORT_JSON = "report.json"


def fold_table(report: RunReport) -> pd.DataFrame:
    rows = []
    for fold in report.folds:
        row = {
            "fold": fold.fold_index,
            "validation_fold": fold.validation_fold,
            "test_accuracy": fold.test_accuracy,
            "n_test": fold.n_test,
            "best_epoch": fold.best_epoch,
            "n_features": fold.n_features,
            "wall_clock_seconds": fold.wall_clock_seconds,
        }
        for network, counts in fold.gate_summary().items():
            row[f"{network}_accepted"] = counts["accepted"]
            row[f"{network}_reverted"] = counts["reverted"]
        for (true, predicted), count in np.ndenumerate(fold.confusion):
            row[f"confusion_{true}_{predicted}"] = int(count)
        rows.append(row)
    return pd.DataFrame(rows)


def loss_series(report: RunReport) -> pd.DataFrame:
    rows = [
        {"fold": fold.fold_index, **record.to_dict()}
        for fold in report.folds
        for record in fold.history
    ]
    return pd.DataFrame(rows)


def gate_series(report: RunReport) -> pd.DataFrame:
    rows = []
    for fold in report.folds:
        seen = {network_id: 0 for network_id in NetworkId}
        accepted = {network_id: 0 for network_id in NetworkId}
        for decision in fold.decisions:
            network_id = decision.network_id
            seen[network_id] += 1
            accepted[network_id] += decision.accepted
            rows.append(
                {
                    "fold": fold.fold_index,
                    "step": decision.step,
                    "network": network_id.value,
                    "accepted": decision.accepted,
                    "accept_rate": accepted[network_id] / seen[network_id],
                }
            )
    columns = ["fold", "step", "network", "accepted", "accept_rate"]
    return pd.DataFrame(rows, columns=columns)


def summary_text(report: RunReport) -> str:
    config = report.config
    gate = config.get("gate") or {}
    lines = [
        f"variant: {report.label}",
        f"epsilon: {gate.get('epsilon', 'n/a')}",
        f"reference_mode: {gate.get('reference_mode', 'n/a')}",
        f"k: {config['features']['k']}",
        f"n_folds: {config['n_folds']}",
        f"seed: {config['seed']}",
        f"mean accuracy: {report.mean_accuracy:.4f} (std {report.std_accuracy:.4f})",
        "fold accuracies: "
        + ", ".join(f"{accuracy:.4f}" for accuracy in report.fold_accuracies),
    ]
    for network, counts in report.gate_summary().items():
        lines.append(
            f"gate {network}: {counts['accepted']} accepted, "
            f"{counts['reverted']} reverted"
        )
    lines.append("confusion (rows true, columns predicted):")
    for row in report.confusion_total():
        lines.append("  " + " ".join(f"{count:5d}" for count in row))
    return "\n".join(lines) + "\n"


def _write(path: Path, write):
    try:
        write(path)
    except OSError as error:
        raise ReportError(path, error) from error
    return path


def emit_report(report: RunReport, out_dir) -> dict[str, Path]:
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as error:
        raise ReportError(out_dir, error) from error

    decisions = "".join(
        json.dumps({"fold": fold.fold_index, **decision.to_record()}) + "\n"
        for fold in report.folds
        for decision in fold.decisions
    )
    dump = json.dumps(report.to_dict(), sort_keys=True, indent=1)
    written = {
        "folds": _write(
            out_dir / FOLDS_CSV, lambda p: fold_table(report).to_csv(p, index=False)
        ),
        "decisions": _write(
            out_dir / DECISIONS_JSONL, lambda p: p.write_text(decisions, "utf-8")
        ),
        "summary": _write(
            out_dir / SUMMARY_TXT, lambda p: p.write_text(summary_text(report), "utf-8")
        ),
        "loss_series": _write(
            out_dir / LOSS_SERIES_CSV,
            lambda p: loss_series(report).to_csv(p, index=False),
        ),
        "gate_series": _write(
            out_dir / GATE_SERIES_CSV,
            lambda p: gate_series(report).to_csv(p, index=False),
        ),
        "report": _write(out_dir / REPORT_JSON, lambda p: p.write_text(dump, "utf-8")),
    }
    _logger.info("wrote %s report to %s", report.label, out_dir)
    return written


def load_report(out_dir) -> RunReport:
    path = Path(out_dir) / REPORT_JSON
    try:
        return RunReport.from_dict(json.loads(path.read_text(encoding="utf-8")))
    except (OSError, KeyError, TypeError, ValueError) as error:
        raise ReportError(path, error) from error


def load_fold_table(out_dir) -> pd.DataFrame:
    path = Path(out_dir) / FOLDS_CSV
    try:
        return pd.read_csv(path)
    except (OSError, ValueError) as error:
        raise ReportError(path, error) from error
