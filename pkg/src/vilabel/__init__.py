"""Local-first workbench for correcting multi-object tracking output and
annotating individual actions and interactions on video."""

from .annotation import AnnotationLog, BehaviorRecord, assign_shortcuts
from .corrections import (
    Scope,
    assign_individual,
    change_class,
    interpolate_track,
    reassign_track_id,
    remove_track,
    scope_frames,
)
from .errors import (
    AlreadyClosed,
    AnnotatorUnset,
    BadCommand,
    BadFps,
    CorruptJournal,
    DuplicateDetection,
    DuplicateName,
    EmptyScope,
    InvariantViolation,
    LabelingError,
    MalformedLine,
    MissingEndpoint,
    MixedFormats,
    NegativeDuration,
    NoTrackingLoaded,
    NotInEthogram,
    NotInRoster,
    SelfInteraction,
    ShortcutConflict,
    UnknownDetection,
    UnknownRecord,
    UnknownTrack,
)
from .exports import (
    AlignmentEntry,
    AlignmentReport,
    SnapshotRegistry,
    alignment_csv,
    alignment_report,
    export_bundle,
    export_interactions,
    export_metadata,
    export_notes,
    export_tracking,
    parse_interactions,
)
from .mot_io import (
    MISSING,
    Detection,
    TrackingFormat,
    parse_ethogram,
    parse_roster,
    parse_tracking,
    serialize_tracking,
)
from .session import Project, create_project, resume, synced_frame
from .state import ProjectState, View, state_hash
from .track_store import TrackSpan, TrackStore

__version__ = "0.1.0"

__all__ = [
    "AlignmentEntry",
    "AlignmentReport",
    "AlreadyClosed",
    "AnnotationLog",
    "AnnotatorUnset",
    "BadCommand",
    "BadFps",
    "BehaviorRecord",
    "CorruptJournal",
    "Detection",
    "DuplicateDetection",
    "DuplicateName",
    "EmptyScope",
    "InvariantViolation",
    "LabelingError",
    "MISSING",
    "MalformedLine",
    "MissingEndpoint",
    "MixedFormats",
    "NegativeDuration",
    "NoTrackingLoaded",
    "NotInEthogram",
    "NotInRoster",
    "Project",
    "ProjectState",
    "Scope",
    "SelfInteraction",
    "ShortcutConflict",
    "SnapshotRegistry",
    "TrackSpan",
    "TrackStore",
    "TrackingFormat",
    "UnknownDetection",
    "UnknownRecord",
    "UnknownTrack",
    "View",
    "alignment_csv",
    "alignment_report",
    "assign_individual",
    "assign_shortcuts",
    "change_class",
    "create_project",
    "export_bundle",
    "export_interactions",
    "export_metadata",
    "export_notes",
    "export_tracking",
    "interpolate_track",
    "parse_ethogram",
    "parse_interactions",
    "parse_roster",
    "parse_tracking",
    "reassign_track_id",
    "remove_track",
    "resume",
    "scope_frames",
    "serialize_tracking",
    "state_hash",
    "synced_frame",
]
