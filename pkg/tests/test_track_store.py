import random

import pytest

from vilabel.errors import DuplicateDetection, InvariantViolation, UnknownDetection, UnknownTrack
from vilabel.mot_io import Detection
from vilabel.track_store import TrackSpan, TrackStore


def det(frame, track_id, x=0.0, y=0.0, w=5.0, h=5.0, conf=0.9, label=1, **kw):
    return Detection(frame, track_id, x, y, w, h, conf, label, **kw)


def test_load_empty():
    store = TrackStore.load([])
    assert len(store) == 0
    assert store.track_ids() == []
    assert store.next_unused_track_id() == 1


def test_load_counts_tracks():
    store = TrackStore.load([det(1, 1), det(1, 2), det(2, 1)])
    assert len(store) == 3
    assert store.track_ids() == [1, 2]


def test_load_duplicate_key():
    with pytest.raises(DuplicateDetection):
        TrackStore.load([det(5, 1), det(5, 1, x=9.0)])


def test_detections_at_sorted_and_stable():
    store = TrackStore.load([det(1, 2), det(1, 1), det(2, 1)])
    assert store.detections_at(99) == []
    first = store.detections_at(1)
    assert [d.track_id for d in first] == [1, 2]
    assert store.detections_at(1) == first  # pure query


def test_all_detections_canonical_order():
    store = TrackStore.load([det(9, 3), det(1, 2), det(1, 1)])
    assert [(d.frame, d.track_id) for d in store.all_detections()] == [
        (1, 1),
        (1, 2),
        (9, 3),
    ]


def test_track_span():
    store = TrackStore.load([det(10, 1), det(11, 1), det(12, 1)])
    assert store.track_span(1) == TrackSpan(1, 10, 12, 3)

    gappy = TrackStore.load([det(10, 1), det(12, 1)])
    assert gappy.track_span(1) == TrackSpan(1, 10, 12, 2)

    with pytest.raises(UnknownTrack):
        gappy.track_span(2)


def test_track_frames():
    store = TrackStore.load([det(12, 1), det(10, 1)])
    assert store.track_frames(1) == [10, 12]
    with pytest.raises(UnknownTrack):
        store.track_frames(9)


def test_next_unused_track_id_is_max_plus_one():
    store = TrackStore.load([det(1, 1), det(1, 3), det(1, 7)])
    assert store.next_unused_track_id() == 8
    store.insert(det(1, 8))
    assert store.next_unused_track_id() == 9


def test_draw_box_defaults():
    store = TrackStore()
    drawn = store.draw_box(4, (10.0, 10.0, 5.0, 5.0), class_label=1)
    assert drawn.track_id == 1
    assert drawn.det_conf == 1.0
    assert drawn.individual_id is None
    assert store.get(1, 4) == drawn


def test_draw_box_occupied_slot():
    store = TrackStore.load([det(4, 2)])
    with pytest.raises(DuplicateDetection):
        store.draw_box(4, (0.0, 0.0, 5.0, 5.0), class_label=1, track_id=2)


def test_draw_box_degenerate():
    store = TrackStore()
    with pytest.raises(InvariantViolation):
        store.draw_box(4, (0.0, 0.0, 0.0, 5.0), class_label=1)
    with pytest.raises(InvariantViolation):
        store.draw_box(-1, (0.0, 0.0, 5.0, 5.0), class_label=1)


def test_resize_box_geometry_only():
    original = det(3, 1, x=10.0, y=10.0, w=5.0, h=5.0, individual_id=2, id_conf=0.7)
    store = TrackStore.load([original])
    resized = store.resize_box(1, 3, (8.0, 8.0, 9.0, 9.0))
    assert resized.bbox == (8.0, 8.0, 9.0, 9.0)
    assert (resized.det_conf, resized.class_label) == (0.9, 1)
    assert (resized.individual_id, resized.id_conf) == (2, 0.7)

    back = store.resize_box(1, 3, (10.0, 10.0, 5.0, 5.0))
    assert back == original

    with pytest.raises(InvariantViolation):
        store.resize_box(1, 3, (0.0, 0.0, 0.0, 1.0))
    with pytest.raises(UnknownDetection):
        store.resize_box(1, 99, (0.0, 0.0, 1.0, 1.0))


def test_remove():
    store = TrackStore.load([det(1, 1), det(2, 1)])
    removed = store.remove(1, 2)
    assert removed.frame == 2
    assert store.track_frames(1) == [1]
    store.remove(1, 1)
    assert not store.has_track(1)
    with pytest.raises(UnknownDetection):
        store.remove(1, 1)


def test_replace_detection_requires_existing():
    store = TrackStore.load([det(1, 1)])
    store.replace_detection(det(1, 1, x=99.0))
    assert store.get(1, 1).x == 99.0
    with pytest.raises(UnknownDetection):
        store.replace_detection(det(2, 1))


def test_class_name_fallback():
    store = TrackStore()
    store.class_names[1] = "lemur"
    assert store.class_name(1) == "lemur"
    assert store.class_name(7) == "7"


def test_index_coherence_random_ops():
    """Union of per-frame buckets equals the full set after random mutations."""
    rng = random.Random(11)
    store = TrackStore()
    live = {}
    for _ in range(3000):
        op = rng.random()
        frame = rng.randint(0, 60)
        tid = rng.randint(1, 15)
        if op < 0.55:
            if (frame, tid) not in live:
                d = det(frame, tid, x=float(rng.randint(0, 500)))
                store.insert(d)
                live[(frame, tid)] = d
        elif op < 0.8:
            if (frame, tid) in live:
                store.remove(tid, frame)
                del live[(frame, tid)]
        else:
            if (frame, tid) in live:
                d = store.resize_box(tid, frame, (1.0, 1.0, float(rng.randint(1, 9)), 2.0))
                live[(frame, tid)] = d
    assert len(store) == len(live)
    frames = {f for f, _ in live}
    union = [d for f in sorted(frames) for d in store.detections_at(f)]
    assert sorted(union, key=lambda d: (d.frame, d.track_id)) == sorted(
        live.values(), key=lambda d: (d.frame, d.track_id)
    )
    assert store.all_detections() == sorted(
        live.values(), key=lambda d: (d.frame, d.track_id)
    )
    for tid in store.track_ids():
        assert store.next_unused_track_id() > tid


def test_replace_all_keeps_class_names():
    store = TrackStore.load([det(1, 1)])
    store.class_names[1] = "lemur"
    store.replace_all([det(2, 2)])
    assert store.class_name(1) == "lemur"
    assert store.track_ids() == [2]
    with pytest.raises(DuplicateDetection):
        store.replace_all([det(2, 2), det(2, 2)])
