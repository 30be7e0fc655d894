import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Hashable

_logger = logging.getLogger(__name__)


class TrainingEvent(str, Enum):
    GATE_DECISION = "gate_decision"
    CHECKPOINT = "checkpoint"
    EPOCH_END = "epoch_end"


@dataclass
class EventPublisher:
    _subscriptions: dict[TrainingEvent, dict[Hashable, Callable]] = field(
        init=False, default_factory=dict
    )

    def subscribe(self, event: TrainingEvent, listener: Hashable, callback: Callable):
        self._subscriptions.setdefault(TrainingEvent(event), {})[listener] = callback

    def unsubscribe(self, listener: Hashable, events: list[TrainingEvent] = None):
        for event in events or list(self._subscriptions):
            self._subscriptions.get(TrainingEvent(event), {}).pop(listener, None)

    def publish(self, event: TrainingEvent, payload) -> int:
        handlers = list(self._subscriptions.get(TrainingEvent(event), {}).values())
        for handler in handlers:
            handler(payload)
        _logger.debug("%s delivered to %d listener(s)", event.value, len(handlers))
        return len(handlers)
