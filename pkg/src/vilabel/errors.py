"""Exception types shared across the package.

Every error raised by the engine layers derives from LabelingError so the
service and CLI can map them to exit codes / HTTP statuses in one place.
"""

from __future__ import annotations


class LabelingError(Exception):
    """Base class for all domain errors."""


class MalformedLine(LabelingError):
    """A tracking-file line has the wrong column count or a non-numeric field."""

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class InvariantViolation(LabelingError):
    """A value breaks a domain invariant (w <= 0, confidence outside [0,1], ...)."""

    def __init__(self, reason: str, line_no: int | None = None):
        self.line_no = line_no
        self.reason = reason
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{where}{reason}")


class MixedFormats(LabelingError):
    """A tracking file switches column count mid-file."""

    def __init__(self, line_no: int, expected: int, got: int):
        self.line_no = line_no
        self.expected = expected
        self.got = got
        super().__init__(
            f"line {line_no}: {got} columns contradict detected {expected}-column format"
        )


class DuplicateName(LabelingError):
    """A roster or ethogram file repeats an entry."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate entry: {name!r}")


class DuplicateDetection(LabelingError):
    def __init__(self, frame: int, track_id: int):
        self.frame = frame
        self.track_id = track_id
        super().__init__(f"duplicate detection for track {track_id} at frame {frame}")


class UnknownTrack(LabelingError):
    def __init__(self, track_id: int):
        self.track_id = track_id
        super().__init__(f"unknown track id {track_id}")


class UnknownDetection(LabelingError):
    def __init__(self, track_id: int, frame: int):
        self.track_id = track_id
        self.frame = frame
        super().__init__(f"track {track_id} has no detection at frame {frame}")


class EmptyScope(LabelingError):
    def __init__(self, track_id: int, scope: object):
        self.track_id = track_id
        self.scope = scope
        super().__init__(f"scope {scope} selects no detection of track {track_id}")


class MissingEndpoint(LabelingError):
    def __init__(self, track_id: int, frame: int):
        self.track_id = track_id
        self.frame = frame
        super().__init__(f"track {track_id} has no endpoint detection at frame {frame}")


class NotInRoster(LabelingError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"{name!r} is not in the individuals list")


class NotInEthogram(LabelingError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"{label!r} is not in the ethogram")


class UnknownRecord(LabelingError):
    def __init__(self, record_id: int):
        self.record_id = record_id
        super().__init__(f"unknown behavior record {record_id}")


class AlreadyClosed(LabelingError):
    def __init__(self, record_id: int):
        self.record_id = record_id
        super().__init__(f"behavior record {record_id} is already closed")


class NegativeDuration(LabelingError):
    def __init__(self, start_frame: int, end_frame: int):
        self.start_frame = start_frame
        self.end_frame = end_frame
        super().__init__(f"end frame {end_frame} lies before start frame {start_frame}")


class SelfInteraction(LabelingError):
    def __init__(self, subject: str, action: str):
        self.subject = subject
        self.action = action
        super().__init__(
            f"{subject!r} cannot target itself with {action!r}; "
            "mark the action self-directed to allow this"
        )


class ShortcutConflict(LabelingError):
    def __init__(self, key: str, taken_by: str):
        self.key = key
        self.taken_by = taken_by
        super().__init__(f"key {key!r} is already bound to {taken_by!r}")


class AnnotatorUnset(LabelingError):
    def __init__(self):
        super().__init__("annotator name is not set")


class NoTrackingLoaded(LabelingError):
    def __init__(self):
        super().__init__("no tracking file has been loaded")


class BadFps(LabelingError):
    def __init__(self, fps: float):
        self.fps = fps
        super().__init__(f"fps must be positive, got {fps}")


class BadCommand(LabelingError):
    """A command has an unknown kind or structurally invalid parameters."""

    def __init__(self, kind: str, reason: str):
        self.kind = kind
        self.reason = reason
        super().__init__(f"command {kind!r}: {reason}")


class CorruptJournal(LabelingError):
    def __init__(self, seq: int, reason: str):
        self.seq = seq
        self.reason = reason
        super().__init__(f"journal corrupt at command {seq}: {reason}")
