import logging
import sys
from functools import wraps
from pathlib import Path

import click

from hio_framework.dataset.dataset import save_dataset
from hio_framework.dataset.synthetic import SyntheticConfig, gen_synthetic
from hio_framework.harness.comparison import compare_variants
from hio_framework.harness.cross_validation import run_cv
from hio_framework.harness.experiment_config import (
    ExperimentConfig,
    ModelVariant,
    apply_overrides,
)
from hio_framework.harness.report_emitter import emit_report, load_report, summary_text
from hio_framework.hierarchy.gate import GateDataSource, ReferenceMode
from hio_framework.system.errors import ConfigError, HioError, ReportError
from hio_framework.system.logging_setup import configure_logging

_logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "HIO_OUTPUT_DIR"
VARIANTS = [variant.value for variant in ModelVariant]

# flag name -> dotted ExperimentConfig field
EXPERIMENT_FLAGS = {
    "epsilon": "gate.epsilon",
    "reference_mode": "gate.reference_mode",
    "gate_interval": "gate.gate_interval_steps",
    "gate_data": "gate.gate_data",
    "learning_rate": "train.learning_rate",
    "epochs": "train.epochs",
    "batch_size": "train.batch_size",
    "checkpoint_interval": "train.checkpoint_interval_epochs",
    "train_seed": "train.rng_seed",
    "k": "features.k",
    "n_folds": "n_folds",
    "seed": "seed",
    "semisupervised_folds": "semisupervised_folds",
    "n_jobs": "n_jobs",
    "resample": "resample_training",
    "wall_clock": "record_wall_clock",
}


def reports_errors(command):
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except HioError as error:
            _logger.debug("command failed", exc_info=True)
            click.echo(f"error: {error}", err=True)
            sys.exit(1)

    return wrapper


def experiment_options(command):
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False),
            help="YAML experiment config; flags override its fields.",
        ),
        click.option(
            "--dataset",
            "dataset_path",
            type=click.Path(dir_okay=False),
            help="JSONL dataset; the synthetic generator is used without it.",
        ),
        click.option(
            "--epsilon",
            type=float,
            help="Acceptable error rate of the gate ('inf' never reverts).",
        ),
        click.option(
            "--reference-mode", type=click.Choice([m.value for m in ReferenceMode])
        ),
        click.option(
            "--gate-interval", type=int, help="Optimizer steps per gate evaluation."
        ),
        click.option(
            "--gate-data", type=click.Choice([s.value for s in GateDataSource])
        ),
        click.option("--learning-rate", type=float),
        click.option("--epochs", type=int),
        click.option("--batch-size", type=int, help="Full batch when unset."),
        click.option("--checkpoint-interval", type=int),
        click.option(
            "--train-seed", type=int, help="Base seed of initialization and batching."
        ),
        click.option("--k", type=int, help="Features kept by the t-test selection."),
        click.option("--n-folds", type=int),
        click.option("--seed", type=int, help="Seed of the fold split and role draws."),
        click.option(
            "--semisupervised-folds",
            type=int,
            help="Pretrain the intermediate networks on this many training folds.",
        ),
        click.option("--n-jobs", type=int, help="Folds trained concurrently."),
        click.option(
            "--resample/--no-resample",
            default=None,
            help="Oversample training rows to balance persuasion classes.",
        ),
        click.option(
            "--wall-clock/--no-wall-clock",
            default=None,
            help="Record per-fold wall-clock time; off makes reports repeatable.",
        ),
        click.option(
            "--out-dir",
            type=click.Path(file_okay=False),
            required=True,
            envvar=OUTPUT_DIR_ENV,
            show_envvar=True,
            help="Directory the report files are written to.",
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def experiment_values(config_path, dataset_path, flags: dict) -> dict:
    values = {}
    if config_path is not None:
        values = ExperimentConfig.from_yaml(config_path).to_dict()
    if dataset_path is not None:
        values["dataset_path"] = dataset_path
        values["synthetic"] = None
    overrides = {EXPERIMENT_FLAGS[name]: value for name, value in flags.items()}
    return apply_overrides(values, overrides)


def _experiment(values: dict, variant=None) -> ExperimentConfig:
    values = dict(values)
    if variant is not None:
        values["variant"] = variant
    if ModelVariant(values.get("variant", ModelVariant.HIO)).uses_gate:
        if values.get("gate") is None:
            values["gate"] = {}
    return ExperimentConfig.from_dict(values)


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debugging.")
def cli(verbose):
    """Hierarchical ensembles with gated intermediate objectives."""
    configure_logging(verbose)


@cli.command()
@click.argument("out_path", type=click.Path(dir_okay=False))
@click.option("--n-samples", type=int, default=1000, show_default=True)
@click.option("--n-speakers", type=int, default=100, show_default=True)
@click.option(
    "--widths",
    default="20,20,20",
    show_default=True,
    help="Comma-separated feature width of each modality.",
)
@click.option("--noise-level", type=float, default=0.3, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@reports_errors
def generate(out_path, n_samples, n_speakers, widths, noise_level, seed):
    """Writes a synthetic dataset with planted passion and credibility structure."""
    try:
        modality_widths = tuple(int(width) for width in widths.split(","))
    except ValueError:
        raise ConfigError(
            f"--widths must be comma-separated integers, got {widths!r}"
        ) from None
    cfg = SyntheticConfig(
        n_samples=n_samples,
        n_speakers=n_speakers,
        modality_widths=modality_widths,
        noise_level=noise_level,
        seed=seed,
    )
    path = save_dataset(gen_synthetic(cfg), out_path)
    click.echo(f"wrote {n_samples} samples to {path}")


@cli.command()
@click.option(
    "--variant", type=click.Choice(VARIANTS), help="Model variant [default: hio]."
)
@experiment_options
@reports_errors
def train(variant, config_path, dataset_path, out_dir, **flags):
    """Cross-validates one model variant and writes its report."""
    values = experiment_values(config_path, dataset_path, flags)
    cfg = _experiment(values, variant)
    report = run_cv(cfg)
    emit_report(report, out_dir)
    cfg.to_yaml(Path(out_dir) / "config.yaml")
    click.echo(summary_text(report), nl=False)


@cli.command()
@click.option(
    "--variant",
    "variants",
    type=click.Choice(VARIANTS),
    multiple=True,
    help="Variant to compare; repeat the flag. The first is the reference.",
)
@experiment_options
@reports_errors
def compare(variants, config_path, dataset_path, out_dir, **flags):
    """Cross-validates several variants on the same folds, paired fold by fold."""
    variants = variants or (
        ModelVariant.LATE_FUSION_BASELINE.value,
        ModelVariant.STACKING.value,
        ModelVariant.HIO.value,
    )
    values = experiment_values(config_path, dataset_path, flags)
    cfgs = [_experiment(values, variant) for variant in variants]
    table = compare_variants(cfgs)
    out_dir = Path(out_dir)
    for label, report in zip(table.labels, table.reports):
        emit_report(report, out_dir / label)
    frame_path = out_dir / "comparison.csv"
    try:
        table.to_frame().to_csv(frame_path, index=False)
        table.summary_frame().to_csv(out_dir / "comparison_summary.csv", index=False)
    except OSError as error:
        raise ReportError(frame_path, error) from error
    click.echo(table.summary_frame().to_string(index=False))


@cli.command()
@click.argument("report_dir", type=click.Path(file_okay=False, exists=True))
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False),
    envvar=OUTPUT_DIR_ENV,
    show_envvar=True,
    help="Where to re-emit; defaults to REPORT_DIR.",
)
@reports_errors
def report(report_dir, out_dir):
    """Re-emits every report file from a saved report.json."""
    loaded = load_report(report_dir)
    emit_report(loaded, out_dir or report_dir)
    click.echo(summary_text(loaded), nl=False)
