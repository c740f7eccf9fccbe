"""Rendering run reports: JSON, CSV, text tables, SVG heatmaps, manifests."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .metrics import CLASS_NAMES, EvalReport

_KIND_TITLES = {
    "logistic_regression": "Logistic Regression",
    "gaussian_nb": "Gaussian Naive Bayes",
    "decision_tree": "Decision Tree",
    "svm_rbf": "SVM",
    "knn": "KNN",
    "svm_sgd": "SVM-SGD",
}
_REGIME_TITLES = {False: "No data Augmentation", True: "Pose data Augmentation"}
_KIND_ORDER = list(_KIND_TITLES)


def _sort_key(report: EvalReport):
    meta = report.run_meta
    if meta is None:
        return (len(_KIND_ORDER), False, "", 0)
    kind_rank = _KIND_ORDER.index(meta.kind) if meta.kind in _KIND_ORDER else 99
    return (kind_rank, meta.augmented, meta.mask, meta.seed)


def reports_to_json(reports: Sequence[EvalReport]) -> str:
    """Deterministic JSON for a list of runs (sorted by run_meta)."""
    payload = [r.to_dict() for r in sorted(reports, key=_sort_key)]
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def reports_from_json(text: str) -> list[EvalReport]:
    return [EvalReport.from_dict(item) for item in json.loads(text)]


def reports_to_csv(reports: Sequence[EvalReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["classifier", "augmented", "mask", "seed",
         "accuracy", "f1_macro", "recall_macro", "precision_macro"]
    )
    for r in sorted(reports, key=_sort_key):
        meta = r.run_meta
        writer.writerow(
            [
                meta.kind if meta else "",
                str(bool(meta.augmented)).lower() if meta else "",
                meta.mask if meta else "",
                meta.seed if meta else "",
                f"{r.accuracy:.4f}",
                f"{r.f1_macro:.4f}",
                f"{r.recall_macro:.4f}",
                f"{r.precision_macro:.4f}",
            ]
        )
    return buf.getvalue()


def _text_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
        for i, h in enumerate(headers)
    ]
    def fmt(cells):
        return " | ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    sep = "-+-".join("-" * w for w in widths)
    return "\n".join([fmt(headers), sep] + [fmt(r) for r in rows]) + "\n"


def render_table3(reports: Sequence[EvalReport]) -> str:
    """Classifier-by-regime metric table (one row per run)."""
    rows = []
    for r in sorted(reports, key=_sort_key):
        meta = r.run_meta
        rows.append(
            [
                _KIND_TITLES.get(meta.kind, meta.kind) if meta else "?",
                _REGIME_TITLES[bool(meta.augmented)] if meta else "?",
                f"{r.accuracy:.2f}",
                f"{r.f1_macro:.2f}",
                f"{r.recall_macro:.2f}",
                f"{r.precision_macro:.2f}",
            ]
        )
    headers = ["Classifier", "Method", "Accuracy", "F1-score", "Recall", "Precision"]
    return _text_table(headers, rows)


def render_table4(reports: Sequence[EvalReport], masks: Sequence[str]) -> str:
    """Accuracy grid over keypoint subsets: one row per (kind, regime)."""
    cells: dict[tuple[str, bool], dict[str, float]] = {}
    for r in reports:
        meta = r.run_meta
        if meta is None:
            continue
        cells.setdefault((meta.kind, meta.augmented), {})[meta.mask] = r.accuracy
    rows = []
    for kind in _KIND_ORDER:
        for augmented in (False, True):
            row_cells = cells.get((kind, augmented))
            if row_cells is None:
                continue
            rows.append(
                [_KIND_TITLES[kind], _REGIME_TITLES[augmented]]
                + [
                    f"{row_cells[m]:.2f}" if m in row_cells else "-"
                    for m in masks
                ]
            )
    headers = ["Classifier", "Method"] + list(masks)
    return _text_table(headers, rows)


def table4_csv(reports: Sequence[EvalReport], masks: Sequence[str]) -> str:
    cells: dict[tuple[str, bool], dict[str, float]] = {}
    for r in reports:
        meta = r.run_meta
        if meta is None:
            continue
        cells.setdefault((meta.kind, meta.augmented), {})[meta.mask] = r.accuracy
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["classifier", "augmented"] + list(masks))
    for kind in _KIND_ORDER:
        for augmented in (False, True):
            row_cells = cells.get((kind, augmented))
            if row_cells is None:
                continue
            writer.writerow(
                [kind, str(augmented).lower()]
                + [
                    f"{row_cells[m]:.4f}" if m in row_cells else ""
                    for m in masks
                ]
            )
    return buf.getvalue()


def _heat_color(value: float) -> str:
    """White-to-blue ramp for a [0, 1] intensity."""
    v = min(max(value, 0.0), 1.0)
    r = round(255 * (1.0 - 0.75 * v))
    g = round(255 * (1.0 - 0.55 * v))
    b = 255
    return f"#{r:02x}{g:02x}{b:02x}"


def confusion_svg(matrix: np.ndarray, labels: Sequence[str] = CLASS_NAMES) -> str:
    """Standalone SVG heatmap of a confusion matrix."""
    matrix = np.asarray(matrix)
    n = matrix.shape[0]
    cell, left, top = 64, 140, 40
    width = left + n * cell + 20
    height = top + n * cell + 80
    peak = max(int(matrix.max()), 1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="monospace" font-size="12">',
        f'<text x="{left}" y="20">confusion matrix (rows: true, cols: predicted)</text>',
    ]
    for i in range(n):
        for j in range(n):
            x = left + j * cell
            y = top + i * cell
            color = _heat_color(matrix[i, j] / peak)
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                f'fill="{color}" stroke="#444"/>'
            )
            parts.append(
                f'<text x="{x + cell / 2:g}" y="{y + cell / 2 + 4:g}" '
                f'text-anchor="middle">{int(matrix[i, j])}</text>'
            )
    for i, label in enumerate(labels):
        y = top + i * cell + cell / 2 + 4
        parts.append(f'<text x="{left - 8}" y="{y:g}" text-anchor="end">{label}</text>')
        x = left + i * cell + cell / 2
        parts.append(
            f'<text x="{x:g}" y="{top + n * cell + 16}" text-anchor="middle" '
            f'transform="rotate(45 {x:g} {top + n * cell + 16})">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def accuracy_grid_svg(
    reports: Sequence[EvalReport], masks: Sequence[str]
) -> str:
    """SVG heatmap of the ablation accuracy grid."""
    cells: dict[tuple[str, bool], dict[str, float]] = {}
    for r in reports:
        meta = r.run_meta
        if meta is None:
            continue
        cells.setdefault((meta.kind, meta.augmented), {})[meta.mask] = r.accuracy
    rows = [
        (kind, augmented)
        for kind in _KIND_ORDER
        for augmented in (False, True)
        if (kind, augmented) in cells
    ]
    cell_w, cell_h, left, top = 80, 28, 300, 60
    width = left + len(masks) * cell_w + 20
    height = top + len(rows) * cell_h + 20
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="monospace" font-size="12">',
        f'<text x="{left}" y="20">accuracy by keypoint subset</text>',
    ]
    for j, mask in enumerate(masks):
        x = left + j * cell_w + cell_w / 2
        parts.append(f'<text x="{x:g}" y="{top - 8}" text-anchor="middle">{mask}</text>')
    for i, (kind, augmented) in enumerate(rows):
        y = top + i * cell_h
        title = f"{_KIND_TITLES[kind]} ({'aug' if augmented else 'no aug'})"
        parts.append(
            f'<text x="{left - 8}" y="{y + cell_h / 2 + 4:g}" text-anchor="end">{title}</text>'
        )
        for j, mask in enumerate(masks):
            x = left + j * cell_w
            acc = cells[(kind, augmented)].get(mask)
            color = _heat_color(acc) if acc is not None else "#eeeeee"
            text = f"{acc:.2f}" if acc is not None else "-"
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell_w}" height="{cell_h}" '
                f'fill="{color}" stroke="#444"/>'
            )
            parts.append(
                f'<text x="{x + cell_w / 2:g}" y="{y + cell_h / 2 + 4:g}" '
                f'text-anchor="middle">{text}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: str | Path) -> str:
    return sha256_bytes(Path(path).read_bytes())


def write_manifest(
    output_dir: str | Path,
    config: dict,
    seed: int,
    train_size: int,
    test_hash: str,
    artifacts: Sequence[str | Path],
) -> Path:
    """Record the effective config plus a content hash per artifact."""
    output_dir = Path(output_dir)
    config_blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    manifest = {
        "schema": 1,
        "config": config,
        "config_hash": sha256_bytes(config_blob.encode("utf-8")),
        "seed": seed,
        "train_size": train_size,
        "test_hash": test_hash,
        "artifacts": {
            str(Path(p).relative_to(output_dir)): sha256_file(p) for p in artifacts
        },
    }
    path = output_dir / "manifest.json"
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", "utf-8")
    return path
