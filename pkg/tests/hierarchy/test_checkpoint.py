import pytest

from hio_framework.hierarchy.checkpoint import CheckpointTracker
from hio_framework.nn.mlp import init_mlp
from hio_framework.nn.snapshot import snapshot
from hio_framework.system.errors import ConfigError


def test_checkpoints_fall_on_the_interval_and_the_final_epoch():
    tracker = CheckpointTracker(interval=4, final_epoch=10)
    assert [e for e in range(1, 11) if tracker.due(e)] == [4, 8, 10]


def test_ties_keep_the_earlier_checkpoint():
    tracker = CheckpointTracker(interval=1, final_epoch=3)
    first, second = init_mlp([2, 3], seed=0), init_mlp([2, 3], seed=1)
    assert tracker.offer(1, 0.5, first)
    assert not tracker.offer(2, 0.5, second)
    assert tracker.best_epoch == 1
    assert snapshot(first).equals(tracker.best_model)


def test_lower_is_better_for_losses():
    tracker = CheckpointTracker(interval=1, final_epoch=3, higher_is_better=False)
    net = init_mlp([2, 3], seed=0)
    tracker.offer(1, 2.0, net)
    tracker.offer(2, 3.0, net)
    tracker.offer(3, 1.0, net)
    assert (tracker.best_epoch, tracker.best_score) == (3, 1.0)


def test_the_kept_model_is_a_copy():
    tracker = CheckpointTracker(interval=1, final_epoch=1)
    net = init_mlp([2, 3], seed=0)
    saved = snapshot(net)
    tracker.offer(1, 1.0, net)
    net.layers[0].weights[:] = 0.0
    assert saved.equals(tracker.best_model)


def test_interval_must_be_positive():
    with pytest.raises(ConfigError):
        CheckpointTracker(interval=0, final_epoch=5)
