import logging
import time
from dataclasses import replace
from typing import Callable, Optional

import numpy as np
from joblib import Parallel, delayed
from sklearn.metrics import accuracy_score, confusion_matrix

from hio_framework.dataset.dataset import Dataset, load_dataset
from hio_framework.dataset.folds import (
    FoldPlan,
    FoldRoles,
    semisupervised_plan,
    split_folds,
)
from hio_framework.dataset.sample import REQUIRED_TRAITS, Trait
from hio_framework.dataset.synthetic import gen_synthetic
from hio_framework.features.labels import N_CLASSES
from hio_framework.features.pipeline import TEXT_MODALITY, FeaturePipeline
from hio_framework.harness.experiment_config import ExperimentConfig, ModelVariant
from hio_framework.harness.run_report import FoldResult, RunReport
from hio_framework.hierarchy.hier_model import forward_hier
from hio_framework.hierarchy.hio_trainer import train_end_to_end, train_hio
from hio_framework.hierarchy.late_fusion import forward_late_fusion, train_late_fusion
from hio_framework.hierarchy.stacking import StackingMode, train_stacking
from hio_framework.hierarchy.task_data import FoldData, TaskData
from hio_framework.hierarchy.trainer_state import TrainingRun
from hio_framework.nn.train_config import derive_seed
from hio_framework.system.errors import DataError, FoldError, HioError

_logger = logging.getLogger(__name__)

Predict = Callable[[TaskData], np.ndarray]


def resolve_dataset(cfg: ExperimentConfig) -> Dataset:
    if cfg.dataset_path is not None:
        return load_dataset(cfg.dataset_path)
    return gen_synthetic(cfg.synthetic)


def variant_modalities(cfg: ExperimentConfig, dataset: Dataset) -> tuple[str, ...]:
    available = set(dataset.modality_names)
    if dataset.has_transcripts:
        available.add(TEXT_MODALITY)
    wanted = cfg.variant.modalities or tuple(sorted(available))
    missing = [name for name in wanted if name not in available]
    if missing:
        raise DataError(f"variant {cfg.variant.value} needs modalities {missing}")
    return tuple(wanted)


def _task_data(
    dataset: Dataset, ids: list[str], features: np.ndarray, blocks=None
) -> TaskData:
    return TaskData(
        features=features,
        labels={trait: dataset.labels(trait, ids) for trait in REQUIRED_TRAITS},
        sample_ids=ids,
        blocks=blocks or {},
    )


def _raw_blocks(dataset: Dataset, ids: list[str], modalities) -> dict:
    stored = [name for name in modalities if name in dataset.modality_names]
    return dataset.blocks(ids, stored)


def _fitted(cfg, dataset, modalities, train_ids) -> FeaturePipeline:
    pipeline = FeaturePipeline(cfg.features, modalities)
    return pipeline.fit(
        _raw_blocks(dataset, train_ids, modalities),
        dataset.labels(Trait.PERSUASION, train_ids),
        dataset.transcripts(train_ids),
    )


def _transform(pipeline: FeaturePipeline, dataset, ids) -> np.ndarray:
    blocks = _raw_blocks(dataset, ids, pipeline.modalities)
    return pipeline.transform(blocks, dataset.transcripts(ids))


def build_fold_data(
    cfg: ExperimentConfig, dataset: Dataset, plan: FoldPlan, roles: FoldRoles
) -> tuple[FoldData, tuple[int, ...]]:
    """Fold-local features for one test fold, fit on its training rows only.

    Returns the fold and the training folds used for pretraining.
    """
    ids = {
        "train": plan.ids_in(roles.training_folds),
        "validation": plan.fold_ids(roles.validation_fold),
        "test": plan.fold_ids(roles.test_fold),
    }
    modalities = variant_modalities(cfg, dataset)
    if cfg.variant.is_hierarchical:
        pipeline = _fitted(cfg, dataset, modalities, ids["train"])
        parts = {
            role: _task_data(dataset, role_ids, _transform(pipeline, dataset, role_ids))
            for role, role_ids in ids.items()
        }
    else:
        pipelines = {
            name: _fitted(cfg, dataset, (name,), ids["train"]) for name in modalities
        }
        parts = {}
        for role, role_ids in ids.items():
            blocks = {
                name: _transform(pipeline, dataset, role_ids)
                for name, pipeline in pipelines.items()
            }
            fused = np.hstack([blocks[name] for name in sorted(blocks)])
            parts[role] = _task_data(dataset, role_ids, fused, blocks)

    train, pretrain, pretrain_folds = parts["train"], None, roles.training_folds
    if cfg.semisupervised_folds is not None:
        pretrain_folds = semisupervised_plan(
            plan, roles, cfg.semisupervised_folds, cfg.seed
        )
        keep = set(plan.ids_in(pretrain_folds))
        rows = [i for i, sid in enumerate(train.sample_ids) if sid in keep]
        pretrain = train.rows(rows)
    if cfg.resample_training:
        rng = np.random.default_rng([cfg.seed, roles.test_fold])
        train = train.balanced(Trait.PERSUASION, rng)
    fold = FoldData(
        fold_index=roles.test_fold,
        train=train,
        validation=parts["validation"],
        test=parts["test"],
        pretrain=pretrain,
    )
    return fold, tuple(pretrain_folds)


def train_variant(cfg: ExperimentConfig, fold: FoldData) -> tuple[Predict, TrainingRun]:
    train_cfg = replace(
        cfg.train, rng_seed=derive_seed(cfg.train.rng_seed, fold.fold_index)
    )
    variant, architecture = cfg.variant, cfg.architecture
    if variant is ModelVariant.LATE_FUSION_BASELINE:
        model, run = train_late_fusion(fold, train_cfg, architecture)
        return (lambda data: forward_late_fusion(model, data.blocks)), run

    if variant.uses_gate:
        model, run = train_hio(fold, cfg.gate, train_cfg, architecture)
    elif variant in (ModelVariant.STACKING, ModelVariant.TEXT_ONLY_STACKING):
        model, run = train_stacking(fold, train_cfg, architecture)
    elif variant is ModelVariant.FROZEN_STACKING:
        model, run = train_stacking(
            fold, train_cfg, architecture, mode=StackingMode.FROZEN_INTERMEDIATES
        )
    else:
        model, run = train_end_to_end(fold, train_cfg, architecture)
    return (lambda data: forward_hier(model, data.features)), run


def run_fold(
    cfg: ExperimentConfig, dataset: Dataset, plan: FoldPlan, test_fold: int
) -> FoldResult:
    started = time.perf_counter()
    try:
        roles = plan.roles(test_fold, cfg.seed)
        fold, pretrain_folds = build_fold_data(cfg, dataset, plan, roles)
        _logger.info(
            "fold %d: %d train, %d validation (fold %d), %d test rows",
            test_fold,
            len(fold.train),
            len(fold.validation),
            roles.validation_fold,
            len(fold.test),
        )
        predict, run = train_variant(cfg, fold)
        y_true = fold.test.labels_for(Trait.PERSUASION)
        y_pred = np.argmax(predict(fold.test), axis=1)
    except FoldError:
        raise
    except (HioError, ArithmeticError, ValueError) as error:
        raise FoldError(test_fold, error) from error

    missing = sorted(set(range(N_CLASSES)) - set(y_true.tolist()))
    if missing:
        _logger.warning(
            "fold %d: test rows lack persuasion classes %s", test_fold, missing
        )
    elapsed = time.perf_counter() - started if cfg.record_wall_clock else 0.0
    result = FoldResult(
        fold_index=test_fold,
        validation_fold=roles.validation_fold,
        test_accuracy=float(accuracy_score(y_true, y_pred)),
        confusion=confusion_matrix(y_true, y_pred, labels=list(range(N_CLASSES))),
        test_ids=fold.test.sample_ids,
        validation_ids=fold.validation.sample_ids,
        train_ids=tuple(sorted(set(fold.train.sample_ids))),
        pretrain_folds=pretrain_folds,
        wall_clock_seconds=elapsed,
        best_epoch=run.best_epoch,
        n_features=fold.width,
        history=run.history,
        decisions=run.decisions,
    )
    _logger.info(
        "fold %d: test accuracy %.3f (%.1fs)", test_fold, result.test_accuracy, elapsed
    )
    return result


def run_cv(
    cfg: ExperimentConfig,
    dataset: Optional[Dataset] = None,
    plan: Optional[FoldPlan] = None,
) -> RunReport:
    """Cross-validates one variant: every fold is the test fold once.

    Folds are independent and run through joblib when n_jobs != 1.
    """
    dataset = dataset if dataset is not None else resolve_dataset(cfg)
    plan = plan if plan is not None else split_folds(dataset, cfg.n_folds, cfg.seed)
    _logger.info(
        "%s: %d samples, %d folds, seed %d",
        cfg.label,
        len(dataset),
        plan.n_folds,
        cfg.seed,
    )
    folds = Parallel(n_jobs=cfg.n_jobs)(
        delayed(run_fold)(cfg, dataset, plan, test_fold)
        for test_fold in range(plan.n_folds)
    )
    report = RunReport(config=cfg.to_dict(), folds=list(folds))
    _logger.info("%s: mean accuracy %.4f", cfg.label, report.mean_accuracy)
    return report
