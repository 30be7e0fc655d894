from dataclasses import dataclass

import numpy as np

from hio_framework.system.errors import EmptyInputError, FeatureError

POOLED_STATISTICS = ("mean", "std", "min", "max", "range")


@dataclass
class FrameSequence:
    frames: np.ndarray

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.size == 0:
            raise EmptyInputError("frame sequence is empty")
        if self.frames.ndim != 2:
            raise FeatureError("frames must share one fixed width")

    @property
    def width(self) -> int:
        return self.frames.shape[1]


def pool_temporal(seq: FrameSequence) -> np.ndarray:
    """(mean, population std, min, max, max - min) per frame dimension,
    concatenated dimension-major."""
    # column-sorted so every statistic is bit-identical under frame permutation
    frames = np.sort(seq.frames, axis=0)
    minimum = frames.min(axis=0)
    maximum = frames.max(axis=0)
    # rounding can push the mean of a near-constant column just past its bounds
    mean = np.clip(frames.mean(axis=0), minimum, maximum)
    stats = np.stack(
        [mean, frames.std(axis=0), minimum, maximum, maximum - minimum], axis=1
    )
    return stats.reshape(-1)
