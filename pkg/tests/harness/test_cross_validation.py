import json
from dataclasses import replace

import numpy as np
import pytest
from sklearn.metrics import accuracy_score

from hio_framework.dataset.folds import split_folds
from hio_framework.dataset.sample import Trait
from hio_framework.dataset.synthetic import SyntheticConfig
from hio_framework.harness.cross_validation import (
    build_fold_data,
    resolve_dataset,
    run_cv,
)
from hio_framework.hierarchy.gate import GateConfig
from hio_framework.hierarchy.hier_model import forward_hier
from hio_framework.hierarchy.hio_trainer import train_end_to_end
from hio_framework.nn.train_config import derive_seed
from hio_framework.system.errors import DataError, FoldError


def test_every_fold_is_tested_once_with_consistent_metrics(experiment):
    cfg = experiment()
    report = run_cv(cfg)
    dataset = resolve_dataset(cfg)
    assert [fold.fold_index for fold in report.folds] == [0, 1, 2, 3]
    tested = [sid for fold in report.folds for sid in fold.test_ids]
    assert sorted(tested) == sorted(dataset.sample_ids)
    assert report.mean_accuracy == float(np.mean(report.fold_accuracies))
    for fold in report.folds:
        assert fold.confusion.shape == (3, 3)
        assert fold.confusion.sum() == fold.n_test
        assert np.trace(fold.confusion) / fold.confusion.sum() == fold.test_accuracy
        assert fold.validation_fold != fold.fold_index
        assert not set(fold.test_ids) & set(fold.train_ids)
        assert not set(fold.validation_ids) & set(fold.train_ids)
        assert fold.n_features <= cfg.features.k
        assert len(fold.decisions) == 2 * cfg.train.epochs


def test_same_config_and_seed_give_identical_reports(experiment):
    cfg = experiment(gate=GateConfig(epsilon=1.1))
    first = json.dumps(run_cv(cfg).to_dict(), sort_keys=True)
    second = json.dumps(run_cv(cfg).to_dict(), sort_keys=True)
    assert first == second


def test_parallel_folds_match_sequential_folds(experiment):
    sequential = run_cv(experiment())
    parallel = run_cv(experiment(n_jobs=2))
    assert parallel.fold_accuracies == sequential.fold_accuracies


def test_unbounded_stacking_matches_ungated_training(experiment):
    stacking = run_cv(experiment(variant="stacking"))
    plain = run_cv(experiment(variant="end_to_end"))
    assert stacking.fold_accuracies == plain.fold_accuracies
    assert stacking.gate_summary()["P"]["reverted"] == 0


@pytest.mark.parametrize("variant", ["late_fusion_baseline", "frozen_stacking"])
def test_ungated_variants_log_no_gate_decisions(experiment, variant):
    report = run_cv(experiment(variant=variant))
    assert all(fold.decisions == [] for fold in report.folds)
    assert all(0.0 <= accuracy <= 1.0 for accuracy in report.fold_accuracies)


def test_text_only_stacking_gates_text_features_without_reverting(experiment):
    cfg = experiment(variant="text_only_stacking")
    report = run_cv(cfg)
    assert all(fold.decisions for fold in report.folds)
    assert all(fold.n_features <= 3 for fold in report.folds)
    summary = report.gate_summary()
    assert summary["P"]["reverted"] == summary["C"]["reverted"] == 0

    dataset = resolve_dataset(cfg)
    plan = split_folds(dataset, cfg.n_folds, cfg.seed)
    fold, _ = build_fold_data(cfg, dataset, plan, plan.roles(0, cfg.seed))
    train_cfg = replace(cfg.train, rng_seed=derive_seed(cfg.train.rng_seed, 0))
    model, _ = train_end_to_end(fold, train_cfg, cfg.architecture)
    y_pred = np.argmax(forward_hier(model, fold.test.features), axis=1)
    y_true = fold.test.labels_for(Trait.PERSUASION)
    assert report.folds[0].test_accuracy == accuracy_score(y_true, y_pred)


def test_text_only_needs_a_text_modality(experiment):
    synthetic = SyntheticConfig(
        n_samples=120,
        n_speakers=30,
        modality_widths=(4, 3, 3),
        modality_names=("acoustic", "visual", "pose"),
        seed=5,
    )
    with pytest.raises(FoldError) as caught:
        run_cv(experiment(variant="text_only", synthetic=synthetic))
    assert caught.value.fold_index == 0
    assert isinstance(caught.value.cause, DataError)


def test_semisupervised_pretraining_draws_from_the_training_folds(experiment):
    report = run_cv(experiment(semisupervised_folds=1))
    for fold in report.folds:
        assert len(fold.pretrain_folds) == 1
        assert fold.pretrain_folds[0] not in (fold.fold_index, fold.validation_fold)


def test_fold_data_keeps_pretraining_rows_inside_the_training_rows(experiment):
    cfg = experiment(semisupervised_folds=1)
    dataset = resolve_dataset(cfg)
    plan = split_folds(dataset, cfg.n_folds, cfg.seed)
    roles = plan.roles(0, cfg.seed)
    fold, pretrain_folds = build_fold_data(cfg, dataset, plan, roles)
    assert set(fold.pretrain.sample_ids) == set(plan.ids_in(pretrain_folds))
    assert set(fold.pretrain.sample_ids) < set(fold.train.sample_ids)
    assert fold.test.width == fold.train.width == fold.validation.width


def test_resampling_balances_the_training_persuasion_classes(experiment):
    cfg = experiment(resample_training=True)
    dataset = resolve_dataset(cfg)
    plan = split_folds(dataset, cfg.n_folds, cfg.seed)
    fold, _ = build_fold_data(cfg, dataset, plan, plan.roles(1, cfg.seed))
    counts = np.bincount(fold.train.labels_for(Trait.PERSUASION), minlength=3)
    assert len(set(counts.tolist())) == 1


def test_late_fusion_folds_carry_one_block_per_modality(experiment):
    cfg = experiment(variant="late_fusion_baseline")
    dataset = resolve_dataset(cfg)
    plan = split_folds(dataset, cfg.n_folds, cfg.seed)
    fold, _ = build_fold_data(cfg, dataset, plan, plan.roles(2, cfg.seed))
    assert sorted(fold.train.blocks) == ["acoustic", "text", "visual"]
    widths = sum(block.shape[1] for block in fold.test.blocks.values())
    assert widths == fold.test.width
