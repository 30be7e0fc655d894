from hio_framework.system.events import EventPublisher, TrainingEvent


def test_publish_reaches_only_subscribers_of_that_event():
    events = EventPublisher()
    seen = []
    events.subscribe(TrainingEvent.EPOCH_END, "a", seen.append)
    assert events.publish(TrainingEvent.EPOCH_END, 1) == 1
    assert events.publish(TrainingEvent.CHECKPOINT, 2) == 0
    assert seen == [1]


def test_resubscribing_replaces_the_callback():
    events = EventPublisher()
    first, second = [], []
    events.subscribe("gate_decision", "log", first.append)
    events.subscribe("gate_decision", "log", second.append)
    events.publish(TrainingEvent.GATE_DECISION, "d")
    assert (first, second) == ([], ["d"])


def test_unsubscribe_from_some_or_all_events():
    events = EventPublisher()
    seen = []
    for event in TrainingEvent:
        events.subscribe(event, "x", seen.append)
    events.unsubscribe("x", [TrainingEvent.CHECKPOINT])
    assert events.publish(TrainingEvent.CHECKPOINT, 0) == 0
    assert events.publish(TrainingEvent.EPOCH_END, 0) == 1
    events.unsubscribe("x")
    assert events.publish(TrainingEvent.EPOCH_END, 0) == 0
