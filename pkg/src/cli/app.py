"""
Command-line entry point.

Usage:
    python main.py preprocess --dataset news.csv
    python main.py build-graph --window 30
    python main.py train --model textgcn --seeds 0,1,2,3,4
    python main.py sweep --sweep labels --proportions 1,5,10,20 --models textgcn,tfidf
    python main.py compare --models textgcn,textgcn-t2v,tfidf,counts
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import yaml
from pydantic import ValidationError

from src.analysis.comparison import render_results_table
from src.analysis.experiment import ExperimentError
from src.cli.commands import (
    cmd_build_graph,
    cmd_compare,
    cmd_demo_data,
    cmd_embed,
    cmd_preprocess,
    cmd_sweep,
    cmd_train,
)
from src.config import Settings, configure_logging, load_settings
from src.constants import ModelName, SweepKind
from src.models.configs import RunConfig
from src.storage.report_writer import plotdata_frame
from src.storage.workspace import Workspace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

MODEL_CHOICES = [model.value for model in ModelName]


# ==============================================================================
# Argument types
# ==============================================================================

def _split_items(text: str) -> list[str]:
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a non-empty comma-separated list")
    return items


def int_list(text: str) -> list[int]:
    """Parse '0,1,2' into [0, 1, 2]."""
    try:
        return [int(item) for item in _split_items(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}")


def percent_list(text: str) -> list[float]:
    """Parse '1,5,10' (percent) into [0.01, 0.05, 0.1]."""
    try:
        values = [float(item) for item in _split_items(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}")
    if any(not 0.0 < value <= 100.0 for value in values):
        raise argparse.ArgumentTypeError(f"percentages must be in (0, 100]: {text!r}")
    return [value / 100.0 for value in values]


def size_list(text: str) -> list[int]:
    """Parse window sizes, each >= 1."""
    sizes = int_list(text)
    if any(size < 1 for size in sizes):
        raise argparse.ArgumentTypeError(f"window sizes must be >= 1: {text!r}")
    return sizes


def model_list(text: str) -> list[ModelName]:
    """Parse 'textgcn,tfidf' into ModelName values."""
    models = []
    for item in _split_items(text):
        if item not in MODEL_CHOICES:
            raise argparse.ArgumentTypeError(
                f"unknown model {item!r} (choose from {', '.join(MODEL_CHOICES)})"
            )
        models.append(ModelName(item))
    return models


# ==============================================================================
# Parser
# ==============================================================================

def _logging_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--log-level", default=None, help="Logging level (default from TEXTGRAPH_LOG_LEVEL or INFO)")
    return parent


def _run_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("inputs")
    group.add_argument("--config", type=Path, default=None, help="YAML file with RunConfig values")
    group.add_argument("--dataset", type=Path, default=None, help="CSV with id,content,category columns")
    group.add_argument("--workdir", type=Path, default=None, help="Artifact directory (env TEXTGRAPH_WORKDIR)")
    group.add_argument("--stopwords", type=Path, default=None, help="Stopword list (one per line)")
    group.add_argument("--stemmer-table", type=Path, default=None, help="token<TAB>stem table")
    group.add_argument("--pretrained", type=Path, default=None, help="Word-vector text file for avg-embed")

    group = parent.add_argument_group("experiment")
    group.add_argument("--model", choices=MODEL_CHOICES, default=None)
    group.add_argument("--seeds", type=int_list, default=None, help="Comma-separated run seeds")
    group.add_argument("--split-seed", type=int, default=None)
    group.add_argument("--window", type=int, default=None, help="PPMI co-occurrence window size")
    group.add_argument("--no-ppmi", action="store_true", help="Omit word-word edges")
    group.add_argument("--label-proportion", type=float, default=None, help="Labelled fraction of train, in (0, 1]")
    group.add_argument("--fixed-label-mask", action="store_true", help="Same labelled subset for every seed")
    group.add_argument("--epochs", type=int, default=None)
    group.add_argument("--lr", type=float, default=None)
    group.add_argument("--hidden", type=int, default=None)
    group.add_argument("--dropout", type=float, default=None)
    group.add_argument("--embed-epochs", type=int, default=None)
    group.add_argument("--embed-dim", type=int, default=None)

    group = parent.add_argument_group("execution")
    group.add_argument("--jobs", type=int, default=None, help="Worker processes for seed runs")
    group.add_argument(
        "--no-resource-stats", action="store_true", help="Write zero runtime/memory fields (reproducible files)"
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one sub-command per pipeline stage."""
    parser = argparse.ArgumentParser(
        prog="textgraph",
        description="Semi-supervised news classification with graph convolutional networks",
    )
    logging_options = _logging_options()
    run_options = _run_options()
    parents = [logging_options, run_options]
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("preprocess", parents=parents, help="Clean, tokenise and split the dataset")
    subparsers.add_parser("embed", parents=parents, help="Train skip-gram / PV-DBOW / PV-DM tables")
    subparsers.add_parser("build-graph", parents=parents, help="Build the normalised document-word graph")
    subparsers.add_parser("train", parents=parents, help="Train and evaluate one model over all seeds")

    sweep = subparsers.add_parser("sweep", parents=parents, help="Window-size or label-proportion sweep")
    sweep.add_argument("--sweep", dest="sweep_kind", choices=[kind.value for kind in SweepKind], required=True)
    sweep.add_argument("--sizes", type=size_list, default=None, help="Window sizes, e.g. 5,10,20,30")
    sweep.add_argument("--include-no-ppmi", action="store_true", help="Add the graph without word-word edges")
    sweep.add_argument("--proportions", type=percent_list, default=None, help="Percentages, e.g. 1,5,10,20")
    sweep.add_argument("--models", type=model_list, default=None, help="Models for the label sweep")

    compare = subparsers.add_parser("compare", parents=parents, help="Results table over several models")
    compare.add_argument("--models", type=model_list, required=True)

    demo = subparsers.add_parser("demo-data", parents=[logging_options], help="Write a synthetic topic corpus")
    demo.add_argument("--output", type=Path, required=True)
    demo.add_argument("--docs", type=int, default=200)
    demo.add_argument("--classes", type=int, default=2)
    demo.add_argument("--words-per-topic", type=int, default=50)
    demo.add_argument("--doc-length", type=int, default=15)
    demo.add_argument("--seed", type=int, default=0)
    return parser


# ==============================================================================
# Configuration merge
# ==============================================================================

def _merge(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _drop_none(values: dict[str, Any]) -> dict[str, Any]:
    cleaned = {}
    for key, value in values.items():
        if isinstance(value, dict):
            value = _drop_none(value)
            if not value:
                continue
        if value is not None:
            cleaned[key] = value
    return cleaned


def load_config_file(path: Path) -> dict[str, Any]:
    """
    Read a YAML RunConfig file.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the file is not a YAML mapping
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ValueError(f"{path}: invalid YAML: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping at the top level")
    return data


def flag_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """RunConfig fields set explicitly on the command line."""
    return _drop_none({
        "dataset": args.dataset,
        "workdir": args.workdir,
        "stopwords": args.stopwords,
        "stemmer_table": args.stemmer_table,
        "pretrained": args.pretrained,
        "model": args.model,
        "seeds": args.seeds,
        "split_seed": args.split_seed,
        "window_size": args.window,
        "include_ppmi": False if args.no_ppmi else None,
        "label_proportion": args.label_proportion,
        "fixed_label_mask": True if args.fixed_label_mask else None,
        "jobs": args.jobs,
        "train": {
            "epochs": args.epochs,
            "learning_rate": args.lr,
            "hidden": args.hidden,
            "dropout": args.dropout,
        },
        "embedding": {
            "epochs": args.embed_epochs,
            "dimension": args.embed_dim,
        },
    })


def build_run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    """
    Merge settings, the optional YAML file and explicit flags into a RunConfig.

    Later sources win: environment settings, then the YAML file, then flags.

    Raises:
        pydantic.ValidationError: If a merged value violates a RunConfig invariant
    """
    values: dict[str, Any] = {"workdir": settings.workdir, "jobs": settings.jobs}
    if args.config is not None:
        values = _merge(values, load_config_file(args.config))
    values = _merge(values, flag_overrides(args))
    return RunConfig.model_validate(values)


# ==============================================================================
# Dispatch
# ==============================================================================

def _dispatch(args: argparse.Namespace, config: RunConfig, settings: Settings) -> None:
    workspace = Workspace(config.workdir)
    command = args.command

    if command == "preprocess":
        print(cmd_preprocess(config, settings, workspace), end="")
    elif command == "embed":
        for path in cmd_embed(config, settings, workspace):
            print(path)
    elif command == "build-graph":
        print(cmd_build_graph(config, settings, workspace))
    elif command == "train":
        report = cmd_train(config, settings, workspace)
        print(render_results_table([report]), end="")
    elif command == "sweep":
        result = cmd_sweep(
            config,
            settings,
            workspace,
            SweepKind(args.sweep_kind),
            sizes=args.sizes,
            include_no_ppmi=args.include_no_ppmi,
            proportions=args.proportions,
            models=args.models,
        )
        print(plotdata_frame(result).to_string(index=False))
    elif command == "compare":
        print(cmd_compare(config, settings, workspace, args.models), end="")
    else:
        raise ValueError(f"Unknown command: {command}")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run one command, and return its exit code.

    Returns:
        0 on success, 1 on a failed run, 2 on a usage error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        settings = load_settings(
            log_level=args.log_level,
            workdir=getattr(args, "workdir", None),
            jobs=getattr(args, "jobs", None),
            record_resources=False if getattr(args, "no_resource_stats", False) else None,
        )
    except ValidationError as e:
        print(f"❌ Invalid settings: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(settings)

    try:
        if args.command == "demo-data":
            path = cmd_demo_data(
                args.output, args.docs, args.classes, args.words_per_topic, args.doc_length, args.seed
            )
            print(path)
            return EXIT_OK

        try:
            config = build_run_config(args, settings)
        except ValidationError as e:
            print(f"❌ Invalid configuration: {e}", file=sys.stderr)
            return EXIT_USAGE

        _dispatch(args, config, settings)
    except (ValueError, FileNotFoundError, OSError, ExperimentError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK
