"""Scoped correction procedures for tracking and identification errors.

Each operation fixes one of the common error types: wrong class, wrong
identity, ID switch, false positive, false negative (drawn or interpolated
boxes) and imprecise boxes (resize lives on the store). Corrections apply to
an entire track, to the track from a given frame onward (inclusive), or to a
single frame.

All operations validate their preconditions before the first mutation, so a
raised error leaves the store untouched.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from .errors import EmptyScope, MissingEndpoint, NotInRoster, UnknownTrack
from .mot_io import Detection
from .track_store import TrackStore

logger = logging.getLogger(__name__)

WHOLE_TRACK = "whole_track"
FROM_FRAME = "from_frame"
SINGLE_FRAME = "single_frame"


@dataclass(frozen=True, slots=True)
class Scope:
    """Extent of a correction: the whole track, frames >= f, or frame f alone."""

    kind: str
    frame: int | None = None

    def __post_init__(self):
        if self.kind not in (WHOLE_TRACK, FROM_FRAME, SINGLE_FRAME):
            raise ValueError(f"unknown scope kind {self.kind!r}")
        if self.kind == WHOLE_TRACK:
            if self.frame is not None:
                raise ValueError("whole-track scope takes no frame")
        else:
            if self.frame is None or self.frame < 0:
                raise ValueError(f"scope frame must be >= 0, got {self.frame}")

    @classmethod
    def whole_track(cls) -> "Scope":
        return cls(WHOLE_TRACK)

    @classmethod
    def from_frame(cls, frame: int) -> "Scope":
        return cls(FROM_FRAME, frame)

    @classmethod
    def single_frame(cls, frame: int) -> "Scope":
        return cls(SINGLE_FRAME, frame)

    def contains(self, frame: int) -> bool:
        if self.kind == WHOLE_TRACK:
            return True
        if self.kind == FROM_FRAME:
            return frame >= self.frame
        return frame == self.frame

    def to_json(self) -> dict:
        if self.kind == WHOLE_TRACK:
            return {"kind": self.kind}
        return {"kind": self.kind, "frame": self.frame}

    @classmethod
    def from_json(cls, data: dict) -> "Scope":
        return cls(data["kind"], data.get("frame"))

    def __str__(self) -> str:
        if self.kind == WHOLE_TRACK:
            return "whole track"
        if self.kind == FROM_FRAME:
            return f"from frame {self.frame}"
        return f"frame {self.frame}"


def scope_frames(store: TrackStore, track_id: int, scope: Scope) -> list[int]:
    """Frames of the track selected by the scope, sorted ascending.

    Raises UnknownTrack if the track does not exist and EmptyScope if no
    existing detection falls inside the scope.
    """
    frames = [f for f in store.track_frames(track_id) if scope.contains(f)]
    if not frames:
        raise EmptyScope(track_id, scope)
    return frames


def change_class(
    store: TrackStore, track_id: int, new_class: int, scope: Scope
) -> int:
    """Relabel the class of all in-scope detections; returns the count."""
    frames = scope_frames(store, track_id, scope)
    for frame in frames:
        det = store.get(track_id, frame)
        store.replace_detection(replace(det, class_label=new_class))
    return len(frames)


def assign_individual(
    store: TrackStore,
    track_id: int,
    individual: str | None,
    roster: list[str],
    scope: Scope = Scope.whole_track(),
) -> int:
    """Set (or clear, with None) the identity of all in-scope detections.

    The name must come from the roster; it is stored as its 1-based roster
    index with identity confidence 1.0, human assignment being authoritative.
    """
    if individual is None:
        individual_id = None
        id_conf = None
    else:
        if individual not in roster:
            raise NotInRoster(individual)
        individual_id = roster.index(individual) + 1
        id_conf = 1.0
    frames = scope_frames(store, track_id, scope)
    for frame in frames:
        det = store.get(track_id, frame)
        store.replace_detection(
            replace(det, individual_id=individual_id, id_conf=id_conf)
        )
    return len(frames)


def reassign_track_id(store: TrackStore, track_id: int, scope: Scope) -> int:
    """Move the in-scope detections to the next unused track id.

    This is the ID-switch fix: click the frame where the switch happens and
    reassign from there. Returns the new track id.
    """
    frames = scope_frames(store, track_id, scope)
    new_id = store.next_unused_track_id()
    for frame in frames:
        det = store.remove(track_id, frame)
        store.insert(replace(det, track_id=new_id))
    return new_id


def remove_track(store: TrackStore, track_id: int, scope: Scope) -> int:
    """Delete the in-scope detections; returns the count removed.

    Behavior records are left alone: they reference individual names, not
    tracks, and the alignment report surfaces any resulting gaps.
    """
    frames = scope_frames(store, track_id, scope)
    for frame in frames:
        store.remove(track_id, frame)
    return len(frames)


def interpolate_track(
    store: TrackStore, track_id: int, frame_a: int, frame_b: int
) -> int:
    """Fill the gap between two keyframe boxes with linearly interpolated ones.

    Every interior frame t in (frame_a, frame_b) with no existing detection on
    the track gets a box with each coordinate at
    ``v_a + (v_b - v_a) * (t - frame_a) / (frame_b - frame_a)``. Class and
    identity are copied from the frame_a endpoint, confidence is 1.0, and
    existing interior detections are left untouched. Returns the insert count.
    """
    if not store.has_track(track_id):
        raise UnknownTrack(track_id)
    if frame_a >= frame_b:
        raise ValueError(f"frame_a must be before frame_b, got {frame_a} >= {frame_b}")
    start = store.get(track_id, frame_a)
    if start is None:
        raise MissingEndpoint(track_id, frame_a)
    end = store.get(track_id, frame_b)
    if end is None:
        raise MissingEndpoint(track_id, frame_b)
    if start.class_label != end.class_label:
        logger.warning(
            "interpolation endpoints of track %d disagree in class (%d vs %d); "
            "keeping %d from frame %d",
            track_id,
            start.class_label,
            end.class_label,
            start.class_label,
            frame_a,
        )

    span = frame_b - frame_a
    inserted = 0
    for t in range(frame_a + 1, frame_b):
        if store.get(track_id, t) is not None:
            continue
        step = t - frame_a
        store.insert(
            Detection(
                frame=t,
                track_id=track_id,
                x=start.x + (end.x - start.x) * step / span,
                y=start.y + (end.y - start.y) * step / span,
                w=start.w + (end.w - start.w) * step / span,
                h=start.h + (end.h - start.h) * step / span,
                det_conf=1.0,
                class_label=start.class_label,
                individual_id=start.individual_id,
                id_conf=start.id_conf,
            )
        )
        inserted += 1
    return inserted
