"""Report rendering: aligned text tables, delimited files, and figures.

Every analysis or scoring command emits the same content three ways: a
tab-separated file for machines, an aligned-column table for terminals,
and a PNG figure rendered alongside them.
"""
from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_FLOAT_FORMAT = "{:.2f}"


def format_cell(value) -> str:
    if isinstance(value, float):
        return _FLOAT_FORMAT.format(value)
    return str(value)


def format_table(headers, rows) -> str:
    """Aligned-column text table with a header separator line."""
    cells = [[format_cell(v) for v in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    for row in cells:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def write_delimited(path, headers, rows, delimiter: str = "\t") -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(delimiter.join(headers) + "\n")
        for row in rows:
            handle.write(delimiter.join(format_cell(v) for v in row) + "\n")


def write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False, indent=2, sort_keys=True)
        handle.write("\n")


def _role_labels(group_key) -> tuple[str, str]:
    """(critic label, generator label); the iterative baseline has no critic."""
    generator_id, critic_id, _dataset, mode = group_key
    if mode == "self_refine":
        return "Self-Refine", generator_id
    return critic_id, generator_id


# Score reports (per-configuration metric aggregates) ----------------------


def score_table(reports) -> tuple[list[str], list[list]]:
    """Rows keyed (critic, generator); one column per (dataset, metric)."""
    columns: list[tuple[str, str]] = []
    cells: dict[tuple[str, str], dict[tuple[str, str], float]] = {}
    for report in reports:
        _g, _c, dataset, _mode = report.group_key
        column = (dataset, report.metric_id)
        if column not in columns:
            columns.append(column)
        row_key = _role_labels(report.group_key)
        cells.setdefault(row_key, {})[column] = report.aggregate
    headers = ["Critic", "Generator"] + [f"{d}/{m}" for d, m in columns]
    rows = []
    for (critic, generator), values in cells.items():
        row: list = [critic, generator]
        for column in columns:
            row.append(values.get(column, float("nan")))
        rows.append(row)
    return headers, rows


def save_score_figure(reports, path) -> None:
    headers, rows = score_table(reports)
    metrics = headers[2:]
    labels = [f"{c}/{g}" for c, g, *_ in rows]
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(labels)), 4))
    width = 0.8 / max(1, len(metrics))
    for i, metric in enumerate(metrics):
        values = [row[2 + i] for row in rows]
        positions = [j + i * width for j in range(len(labels))]
        ax.bar(positions, values, width=width, label=metric)
    ax.set_xticks([j + 0.4 - width / 2 for j in range(len(labels))])
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("score")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# Similarity reports (refined vs. initial / suggestion) ---------------------


def similarity_table(report: dict) -> tuple[list[str], list[list]]:
    headers = ["Generator", "Critic", "Dataset", "Init.", "Sug."]
    rows = []
    for group_key in sorted(report):
        generator_id, critic_id, dataset, _mode = group_key
        pair = report[group_key]
        rows.append([generator_id, critic_id, dataset, pair.init_sim, pair.sug_sim])
    return headers, rows


def save_similarity_figure(report: dict, path) -> None:
    headers, rows = similarity_table(report)
    labels = [f"{r[0]}/{r[1]}/{r[2]}" for r in rows]
    init_values = [r[3] for r in rows]
    sug_values = [r[4] for r in rows]
    positions = range(len(labels))
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(labels)), 4))
    ax.bar([p - 0.2 for p in positions], init_values, width=0.4, label="vs. initial")
    ax.bar([p + 0.2 for p in positions], sug_values, width=0.4, label="vs. suggestion")
    ax.set_xticks(list(positions))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("cosine similarity")
    ax.set_ylim(-1.0, 1.05)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# Language distributions ----------------------------------------------------


def language_table(distributions: dict) -> tuple[list[str], list[list]]:
    """distributions maps group_key -> LanguageDistribution."""
    headers = ["Generator", "Critic", "German", "English", "Other"]
    rows = []
    for group_key in sorted(distributions):
        critic, generator = _role_labels(group_key)
        dist = distributions[group_key]
        rows.append([generator, critic, dist.german_pct, dist.english_pct, dist.other_pct])
    return headers, rows


def save_language_figure(distributions: dict, path) -> None:
    headers, rows = language_table(distributions)
    labels = [f"{r[0]}/{r[1]}" for r in rows]
    german = [r[2] for r in rows]
    english = [r[3] for r in rows]
    other = [r[4] for r in rows]
    positions = range(len(labels))
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(labels)), 4))
    ax.bar(positions, german, label="German")
    ax.bar(positions, english, bottom=german, label="English")
    ax.bar(positions, other, bottom=[g + e for g, e in zip(german, english)], label="Other")
    ax.set_xticks(list(positions))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("% of explanations")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# Human-rating summaries -----------------------------------------------------


def rating_table(means_by_config: dict) -> tuple[list[str], list[list]]:
    """means_by_config maps a config label to {dimension: mean}."""
    headers = ["Configuration", "Faith.", "Coh.", "Insight."]
    dimension_order = ("faithfulness_binary", "coherence_likert5", "insightfulness_likert5")
    rows = []
    for label in sorted(means_by_config):
        means = means_by_config[label]
        rows.append([label] + [means.get(d, float("nan")) for d in dimension_order])
    return headers, rows


def save_rating_figure(means_by_config: dict, path) -> None:
    headers, rows = rating_table(means_by_config)
    labels = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(labels)), 4))
    width = 0.8 / 3
    for i, dimension in enumerate(headers[1:]):
        values = [row[1 + i] for row in rows]
        positions = [j + i * width for j in range(len(labels))]
        ax.bar(positions, values, width=width, label=dimension)
    ax.set_xticks([j + width for j in range(len(labels))])
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("mean rating")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report_bundle(out_dir, name: str, headers, rows, figure_fn=None, payload=None) -> dict:
    """Write the .tsv/.txt/.json triple (plus optional .png) for one report.

    Returns a dict of the paths written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "tsv": out_dir / f"{name}.tsv",
        "txt": out_dir / f"{name}.txt",
        "json": out_dir / f"{name}.json",
    }
    write_delimited(paths["tsv"], headers, rows)
    Path(paths["txt"]).write_text(format_table(headers, rows), encoding="utf-8")
    write_json(paths["json"], payload if payload is not None else {"headers": headers, "rows": rows})
    if figure_fn is not None:
        paths["png"] = out_dir / f"{name}.png"
        figure_fn(paths["png"])
    return {k: str(v) for k, v in paths.items()}
