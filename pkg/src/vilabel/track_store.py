"""Frame-indexed in-memory store of detections with box-level editing.

The store keeps one detection per (frame, track_id) and two indexes: a
per-frame bucket for overlay queries and a per-track frame set for span
queries. All mutations are applied sequentially by the session layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DuplicateDetection, InvariantViolation, UnknownDetection, UnknownTrack
from .mot_io import Detection


@dataclass(frozen=True, slots=True)
class TrackSpan:
    track_id: int
    first_frame: int
    last_frame: int
    frame_count: int


def validate_bbox(x: float, y: float, w: float, h: float) -> None:
    if not all(math.isfinite(v) for v in (x, y, w, h)):
        raise InvariantViolation("bbox coordinates must be finite")
    if w <= 0:
        raise InvariantViolation(f"bbox width must be positive, got {w}")
    if h <= 0:
        raise InvariantViolation(f"bbox height must be positive, got {h}")


class TrackStore:
    def __init__(self) -> None:
        self._by_frame: dict[int, dict[int, Detection]] = {}
        self._track_frames: dict[int, set[int]] = {}
        self.class_names: dict[int, str] = {}

    @classmethod
    def load(cls, detections: list[Detection]) -> "TrackStore":
        store = cls()
        for det in detections:
            store.insert(det)
        return store

    def replace_all(self, detections: list[Detection]) -> None:
        """Swap in a new detection set, keeping the class-name table."""
        by_frame: dict[int, dict[int, Detection]] = {}
        track_frames: dict[int, set[int]] = {}
        for det in detections:
            bucket = by_frame.setdefault(det.frame, {})
            if det.track_id in bucket:
                raise DuplicateDetection(det.frame, det.track_id)
            bucket[det.track_id] = det
            track_frames.setdefault(det.track_id, set()).add(det.frame)
        self._by_frame = by_frame
        self._track_frames = track_frames

    def __len__(self) -> int:
        return sum(len(bucket) for bucket in self._by_frame.values())

    def insert(self, det: Detection) -> None:
        bucket = self._by_frame.setdefault(det.frame, {})
        if det.track_id in bucket:
            raise DuplicateDetection(det.frame, det.track_id)
        bucket[det.track_id] = det
        self._track_frames.setdefault(det.track_id, set()).add(det.frame)

    def remove(self, track_id: int, frame: int) -> Detection:
        bucket = self._by_frame.get(frame)
        if bucket is None or track_id not in bucket:
            raise UnknownDetection(track_id, frame)
        det = bucket.pop(track_id)
        if not bucket:
            del self._by_frame[frame]
        frames = self._track_frames[track_id]
        frames.discard(frame)
        if not frames:
            del self._track_frames[track_id]
        return det

    def get(self, track_id: int, frame: int) -> Detection | None:
        bucket = self._by_frame.get(frame)
        if bucket is None:
            return None
        return bucket.get(track_id)

    def detections_at(self, frame: int) -> list[Detection]:
        bucket = self._by_frame.get(frame)
        if not bucket:
            return []
        return [bucket[tid] for tid in sorted(bucket)]

    def all_detections(self) -> list[Detection]:
        """Every detection in canonical (frame, track_id) order."""
        out: list[Detection] = []
        for frame in sorted(self._by_frame):
            bucket = self._by_frame[frame]
            out.extend(bucket[tid] for tid in sorted(bucket))
        return out

    def track_ids(self) -> list[int]:
        return sorted(self._track_frames)

    def has_track(self, track_id: int) -> bool:
        return track_id in self._track_frames

    def track_frames(self, track_id: int) -> list[int]:
        if track_id not in self._track_frames:
            raise UnknownTrack(track_id)
        return sorted(self._track_frames[track_id])

    def track_span(self, track_id: int) -> TrackSpan:
        frames = self._track_frames.get(track_id)
        if not frames:
            raise UnknownTrack(track_id)
        return TrackSpan(
            track_id=track_id,
            first_frame=min(frames),
            last_frame=max(frames),
            frame_count=len(frames),
        )

    def next_unused_track_id(self) -> int:
        if not self._track_frames:
            return 1
        return max(self._track_frames) + 1

    def draw_box(
        self,
        frame: int,
        bbox: tuple[float, float, float, float],
        class_label: int,
        track_id: int | None = None,
    ) -> Detection:
        """Insert a hand-drawn box. Manual boxes are ground truth: conf 1.0."""
        x, y, w, h = bbox
        validate_bbox(x, y, w, h)
        if frame < 0:
            raise InvariantViolation(f"frame must be >= 0, got {frame}")
        if track_id is None:
            track_id = self.next_unused_track_id()
        det = Detection(
            frame=frame,
            track_id=track_id,
            x=float(x),
            y=float(y),
            w=float(w),
            h=float(h),
            det_conf=1.0,
            class_label=class_label,
        )
        self.insert(det)
        return det

    def resize_box(
        self, track_id: int, frame: int, bbox: tuple[float, float, float, float]
    ) -> Detection:
        """Replace the geometry of an existing detection; all else untouched."""
        x, y, w, h = bbox
        validate_bbox(x, y, w, h)
        old = self.get(track_id, frame)
        if old is None:
            raise UnknownDetection(track_id, frame)
        det = replace(old, x=float(x), y=float(y), w=float(w), h=float(h))
        self._by_frame[frame][track_id] = det
        return det

    def replace_detection(self, det: Detection) -> None:
        """Overwrite the detection at (det.frame, det.track_id), which must exist."""
        bucket = self._by_frame.get(det.frame)
        if bucket is None or det.track_id not in bucket:
            raise UnknownDetection(det.track_id, det.frame)
        bucket[det.track_id] = det

    def class_name(self, class_label: int) -> str:
        return self.class_names.get(class_label, str(class_label))
