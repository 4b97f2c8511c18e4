"""Operator surface: run pipelines, score traces, produce analyses.

Every subcommand is a thin wrapper over library calls; a single JSON config
file drives runs, and command-line flags override config fields.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import analysis, metrics, reporting
from .backend import BackendConfig, GenerationParams, build_backend
from .corpus import load_instances
from .errors import ConfigError, CrossRefineError
from .prompting import load_demo_store, load_templates
from .refinery import (
    MODES,
    Engine,
    EngineOptions,
    FailedTrace,
    SelfRefineConfig,
    read_traces,
    run_batch,
    serialize_trace,
)

MODE_FLAGS = {
    "cross": "cross_refine",
    "self": "self_refine",
    "ablate-feedback": "ablate_feedback_only",
    "ablate-suggestion": "ablate_suggestion_only",
}

ABLATION_SET = ("cross_refine", "ablate_feedback_only", "ablate_suggestion_only")


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def _require(config: dict, key: str):
    if key not in config:
        raise ConfigError(f"config is missing the {key!r} section")
    return config[key]


def _backend_config(raw: dict, name: str) -> BackendConfig:
    try:
        return BackendConfig(
            model_id=raw["model_id"],
            endpoint=raw["endpoint"],
            timeout_ms=int(raw.get("timeout_ms", 120_000)),
            max_retries=int(raw.get("max_retries", 2)),
            context_budget_tokens=int(raw.get("context_budget_tokens", 8_000)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {name} backend config: {exc}") from exc


def _existing_path(raw, what: str) -> Path:
    path = Path(raw)
    if not path.exists():
        raise ConfigError(f"{what} does not exist: {path}")
    return path


def run_experiment(config: dict, mode_override: str | None = None) -> Path:
    """Run one experiment per the config; returns the manifest path.

    Configuration is validated (paths, roles, parameters) before any
    backend is contacted.
    """
    dataset_cfg = _require(config, "dataset")
    dataset_path = _existing_path(dataset_cfg.get("path"), "dataset path")
    schema_kind = dataset_cfg.get("schema_kind")
    language = dataset_cfg.get("language", "en")
    dataset_id = dataset_cfg.get("id", dataset_path.stem)

    mode = mode_override or config.get("mode", "cross_refine")
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")

    roles_cfg = _require(config, "roles")
    generator_cfg = _backend_config(_require(roles_cfg, "generator"), "generator")
    critic_raw = roles_cfg.get("critic")
    critic_cfg = _backend_config(critic_raw, "critic") if critic_raw else generator_cfg
    if mode == "self_refine":
        critic_cfg = generator_cfg

    demos_cfg = _require(config, "demos")
    generate_store_path = _existing_path(demos_cfg.get("generate_store"), "generate demo store")
    refine_store_path = _existing_path(demos_cfg.get("refine_store"), "refine demo store")

    generation_cfg = config.get("generation", {})
    try:
        params = GenerationParams(
            temperature=float(generation_cfg.get("temperature", 0.0)),
            max_new_tokens=int(generation_cfg.get("max_new_tokens", 512)),
            stop_sequences=tuple(generation_cfg.get("stop_sequences", ())),
            seed=generation_cfg.get("seed"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid generation params: {exc}") from exc
    for role_name, role_cfg in (("generator", generator_cfg), ("critic", critic_cfg)):
        if params.max_new_tokens > role_cfg.context_budget_tokens:
            raise ConfigError(
                f"generation.max_new_tokens ({params.max_new_tokens}) exceeds the "
                f"{role_name} context budget ({role_cfg.context_budget_tokens})"
            )

    limits = config.get("limits", {})
    max_instances = limits.get("max_instances")
    worker_cap = int(limits.get("worker_cap", 1))
    if worker_cap < 1:
        raise ConfigError("limits.worker_cap must be >= 1")

    options_cfg = config.get("options", {})
    options = EngineOptions(
        force_refine=bool(options_cfg.get("force_refine", False)),
        strict_budget=bool(options_cfg.get("strict_budget", False)),
    )
    self_cfg_raw = config.get("self_refine", {})
    self_refine = SelfRefineConfig(
        max_iterations=int(self_cfg_raw.get("max_iterations", 3)),
        stop_on_no_change=bool(self_cfg_raw.get("stop_on_no_change", True)),
    )

    templates_cfg = config.get("templates", {})
    template_dir = templates_cfg.get("dir")
    if template_dir is not None:
        template_dir = _existing_path(template_dir, "template directory")
    templates = load_templates(template_dir, templates_cfg.get("language", language))

    output_dir = Path(config.get("output_dir", "out"))
    output_dir.mkdir(parents=True, exist_ok=True)

    instances = load_instances(dataset_path, schema_kind, language=language)
    if max_instances is not None:
        instances = instances[: int(max_instances)]

    generate_store = load_demo_store(generate_store_path, task_kind=schema_kind)
    refine_store = load_demo_store(refine_store_path, task_kind=schema_kind)

    engine = Engine(
        generator=build_backend(generator_cfg),
        critic=build_backend(critic_cfg),
        templates=templates,
        generate_store=generate_store,
        refine_store=refine_store,
        params=params,
        options=options,
        dataset_id=dataset_id,
    )

    traces_path = output_dir / "traces.jsonl"
    started_at = _utc_now()
    interrupted = False
    n_failures = 0
    n_written = 0
    with open(traces_path, "w", encoding="utf-8") as sink_handle:

        def sink(result) -> None:
            nonlocal n_failures, n_written
            sink_handle.write(serialize_trace(result) + "\n")
            sink_handle.flush()
            n_written += 1
            if isinstance(result, FailedTrace):
                n_failures += 1

        try:
            run_batch(
                engine,
                instances,
                mode,
                self_refine=self_refine,
                worker_cap=worker_cap,
                sink=sink,
            )
        except KeyboardInterrupt:
            interrupted = True

    manifest = {
        "config_hash": config_hash(config),
        "dataset_path": str(dataset_path),
        "dataset_id": dataset_id,
        "schema_kind": schema_kind,
        "language": language,
        "mode": mode,
        "roles": {
            "generator": {"model_id": generator_cfg.model_id, "endpoint": generator_cfg.endpoint},
            "critic": {"model_id": critic_cfg.model_id, "endpoint": critic_cfg.endpoint},
        },
        "started_at": started_at,
        "finished_at": _utc_now(),
        "n_instances": len(instances),
        "n_traces_written": n_written,
        "n_failures": n_failures,
        "interrupted": interrupted,
        "traces_path": str(traces_path),
    }
    manifest_path = output_dir / "manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")
    if interrupted:
        raise KeyboardInterrupt
    return manifest_path


def _apply_overrides(config: dict, args) -> dict:
    config = dict(config)
    if getattr(args, "max_instances", None) is not None:
        config.setdefault("limits", {})
        config["limits"] = dict(config["limits"], max_instances=args.max_instances)
    if getattr(args, "out", None) is not None:
        config["output_dir"] = args.out
    if getattr(args, "seed", None) is not None:
        config.setdefault("generation", {})
        config["generation"] = dict(config["generation"], seed=args.seed)
    if getattr(args, "fail_fast", False):
        config.setdefault("options", {})
        config["options"] = dict(config["options"], fail_fast=True)
    return config


def _cmd_run(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    mode = MODE_FLAGS[args.mode] if args.mode else None
    manifest_path = run_experiment(config, mode_override=mode)
    with open(manifest_path, encoding="utf-8") as handle:
        manifest = json.load(handle)
    print(f"wrote {manifest['n_traces_written']} traces to {manifest['traces_path']}")
    print(f"manifest: {manifest_path}")
    if manifest["n_failures"]:
        print(f"{manifest['n_failures']} instance(s) failed", file=sys.stderr)
        fail_fast = bool(config.get("options", {}).get("fail_fast", False)) or args.fail_fast
        if fail_fast:
            return 1
    return 0


def _cmd_ablate(args) -> int:
    """Expand one config into the component-ablation variant set and run all."""
    config = _apply_overrides(load_config(args.config), args)
    base_out = Path(config.get("output_dir", "out"))
    status = 0
    for mode in ABLATION_SET:
        variant = dict(config, output_dir=str(base_out / mode))
        manifest_path = run_experiment(variant, mode_override=mode)
        print(f"{mode}: {manifest_path}")
        with open(manifest_path, encoding="utf-8") as handle:
            if json.load(handle)["n_failures"] and args.fail_fast:
                status = 1
    return status


def _cmd_score(args) -> int:
    traces, failures = read_traces(_existing_path(args.traces, "traces file"))
    if failures:
        print(f"ignoring {len(failures)} failed trace(s)", file=sys.stderr)
    instances = load_instances(
        _existing_path(args.dataset, "dataset"), args.schema_kind, language=args.language
    )
    references = {i.id: i.gold_explanation for i in instances}
    metric_ids = [m.strip() for m in args.metrics.split(",") if m.strip()]
    reports = metrics.score_traces(
        traces, references, metric_ids, args.scorer_endpoint, language=args.language
    )
    headers, rows = reporting.score_table(reports)
    payload = [
        {
            "metric_id": r.metric_id,
            "group_key": list(r.group_key),
            "aggregate": r.aggregate,
            "per_example": list(r.per_example),
        }
        for r in reports
    ]
    paths = reporting.write_report_bundle(
        args.out,
        "scores",
        headers,
        rows,
        figure_fn=lambda p: reporting.save_score_figure(reports, p),
        payload=payload,
    )
    print(reporting.format_table(headers, rows), end="")
    print(f"wrote {paths['tsv']}, {paths['png']}")
    return 0


def _cmd_analyze(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    embedder = metrics.HashedTokenEmbedder()
    wrote = []

    if args.traces:
        traces, failures = read_traces(_existing_path(args.traces, "traces file"))
        if failures:
            print(f"ignoring {len(failures)} failed trace(s)", file=sys.stderr)

        criteria = analysis.FilterCriteria()
        filter_rows = []
        for trace in traces:
            verdict = analysis.passes_filters(trace.input_text, trace.final, criteria, embedder)
            filter_rows.append(
                [
                    trace.instance_id,
                    trace.mode,
                    "pass" if verdict.passed else "fail",
                    ";".join(verdict.failed_criteria()) or "-",
                ]
            )
        wrote.append(
            reporting.write_report_bundle(
                out_dir, "filters", ["Instance", "Mode", "Verdict", "Failed"], filter_rows
            )
        )

        refined_traces = [t for t in traces if t.refined and t.suggestion]
        if refined_traces:
            report = analysis.similarity_report(refined_traces, embedder)
            headers, rows = reporting.similarity_table(report)
            wrote.append(
                reporting.write_report_bundle(
                    out_dir,
                    "similarity",
                    headers,
                    rows,
                    figure_fn=lambda p: reporting.save_similarity_figure(report, p),
                )
            )

        groups: dict[tuple, list[str]] = {}
        for trace in traces:
            groups.setdefault(trace.group_key(), []).append(trace.final)
        distributions = {key: analysis.language_distribution(texts) for key, texts in groups.items()}
        headers, rows = reporting.language_table(distributions)
        wrote.append(
            reporting.write_report_bundle(
                out_dir,
                "language",
                headers,
                rows,
                figure_fn=lambda p: reporting.save_language_figure(distributions, p),
            )
        )

    if args.ratings:
        matrices = analysis.load_ratings_csv(_existing_path(args.ratings, "ratings file"))
        means = {dim: analysis.aggregate_ratings(m) for dim, m in matrices.items()}
        alpha_rows = []
        for dim, matrix in sorted(matrices.items()):
            level = analysis.agreement.DEFAULT_LEVEL[dim]
            alpha_rows.append([dim, level, analysis.krippendorff_alpha(matrix, level)])
        alpha_rows.append(["pooled", "interval", analysis.pooled_alpha(matrices.values())])
        wrote.append(
            reporting.write_report_bundle(
                out_dir, "agreement", ["Dimension", "Level", "Alpha"], alpha_rows
            )
        )
        mean_rows = [[dim, means[dim]] for dim in sorted(means)]
        wrote.append(
            reporting.write_report_bundle(out_dir, "rating_means", ["Dimension", "Mean"], mean_rows)
        )

    if not wrote:
        print("nothing to analyze: pass --traces and/or --ratings", file=sys.stderr)
        return 2
    for paths in wrote:
        print(f"wrote {paths['tsv']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossrefine",
        description="Run generator/critic explanation refinement and its evaluation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one pipeline over a dataset")
    run.add_argument("--config", required=True, help="JSON run config")
    run.add_argument("--mode", choices=sorted(MODE_FLAGS), help="override the config mode")
    run.add_argument("--max-instances", type=int, default=None)
    run.add_argument("--out", default=None, help="override the output directory")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--fail-fast", action="store_true")
    run.set_defaults(fn=_cmd_run)

    ablate = sub.add_parser("ablate", help="run the component-ablation variant set")
    ablate.add_argument("--config", required=True)
    ablate.add_argument("--max-instances", type=int, default=None)
    ablate.add_argument("--out", default=None)
    ablate.add_argument("--seed", type=int, default=None)
    ablate.add_argument("--fail-fast", action="store_true")
    ablate.set_defaults(fn=_cmd_ablate)

    score = sub.add_parser("score", help="score traces against a scorer endpoint")
    score.add_argument("--traces", required=True)
    score.add_argument("--dataset", required=True, help="dataset JSONL with gold explanations")
    score.add_argument("--schema-kind", required=True, choices=["commonsense_qa", "nli", "fact_check"])
    score.add_argument("--language", default="en", choices=["en", "de"])
    score.add_argument("--metrics", default="bleurt,bartscore,tigerscore")
    score.add_argument("--scorer-endpoint", required=True)
    score.add_argument("--out", default="out/reports")
    score.set_defaults(fn=_cmd_score)

    analyze = sub.add_parser("analyze", help="filters, similarity, language, agreement")
    analyze.add_argument("--traces", default=None)
    analyze.add_argument("--ratings", default=None, help="CSV: rater_id,item_id,dimension,value")
    analyze.add_argument("--out", default="out/reports")
    analyze.set_defaults(fn=_cmd_analyze)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CrossRefineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("interrupted; completed traces were flushed", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
