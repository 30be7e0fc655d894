import logging
from dataclasses import dataclass
from typing import Any, Optional

from hio_framework.system.errors import ConfigError

_logger = logging.getLogger(__name__)


@dataclass
class CheckpointTracker:
    """Early stopping by retention: keeps a copy of the best model seen at
    checkpoint epochs. Ties keep the earlier checkpoint.
    """

    interval: int
    final_epoch: int
    higher_is_better: bool = True
    best_score: Optional[float] = None
    best_epoch: Optional[int] = None
    best_model: Any = None

    def __post_init__(self):
        if self.interval < 1:
            raise ConfigError(f"checkpoint interval must be >= 1, got {self.interval}")

    def due(self, epoch: int) -> bool:
        return epoch % self.interval == 0 or epoch == self.final_epoch

    def _improves(self, score: float) -> bool:
        if self.best_score is None:
            return True
        if self.higher_is_better:
            return score > self.best_score
        return score < self.best_score

    def offer(self, epoch: int, score: float, model) -> bool:
        if not self._improves(score):
            return False
        self.best_score = float(score)
        self.best_epoch = epoch
        self.best_model = model.copy()
        _logger.debug("checkpoint at epoch %d, score %.6g", epoch, score)
        return True
