"""Export artifacts and the tracking-to-behavior alignment report.

All export files are named "<main-video-basename>_<suffix>.<ext>". Tracking
goes out in the format it came in, with every correction applied. The
interactions CSV carries one row per behavior record with frame and second
timings. The alignment report answers, frame by frame, whether the subject
(and target) of each behavior was actually tracked under that identity,
which is what decides whether a segment is usable for model training.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .annotation import BehaviorRecord
from .errors import AnnotatorUnset, NoTrackingLoaded
from .mot_io import serialize_tracking
from .session import Project, SNAPSHOT_DIR

logger = logging.getLogger(__name__)

INTERACTIONS_HEADER = [
    "subject",
    "action",
    "target",
    "start_frame",
    "end_frame",
    "duration_frames",
    "start_s",
    "end_s",
    "duration_s",
]


def export_filename(project: Project, suffix: str) -> str:
    ext = {"tracking": "txt", "interactions": "csv", "metadata": "csv", "notes": "txt"}[
        suffix
    ]
    return f"{project.video_name}_{suffix}.{ext}"


def export_tracking(project: Project) -> tuple[str, str]:
    """Serialize the corrected store in the originally imported format."""
    fmt = project.state.tracking_format
    if fmt is None:
        raise NoTrackingLoaded()
    text = serialize_tracking(
        project.state.store.all_detections(), fmt, frame_base=project.config.frame_base
    )
    return export_filename(project, "tracking"), text


def _seconds(frames: int, fps: float) -> str:
    return f"{frames / fps:.3f}"


def export_interactions(project: Project) -> tuple[str, str]:
    """One CSV row per behavior record, ordered like the behaviors panel.

    Actions leave the target empty; records still open at export time leave
    end and duration empty. Seconds are frames / fps at millisecond precision.
    """
    fps = project.fps
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(INTERACTIONS_HEADER)
    for record in project.state.annotation.listing():
        closed = record.end_frame is not None
        writer.writerow(
            [
                record.subject,
                record.action,
                record.target or "",
                record.start_frame,
                record.end_frame if closed else "",
                record.duration_frames() if closed else "",
                _seconds(record.start_frame, fps),
                _seconds(record.end_frame, fps) if closed else "",
                _seconds(record.duration_frames(), fps) if closed else "",
            ]
        )
    return export_filename(project, "interactions"), buf.getvalue()


def parse_interactions(text: str) -> list[dict]:
    """Read an interactions CSV back into record dicts (closure counterpart)."""
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or rows[0] != INTERACTIONS_HEADER:
        raise ValueError("not an interactions CSV")
    records = []
    for row in rows[1:]:
        records.append(
            {
                "subject": row[0],
                "action": row[1],
                "target": row[2] or None,
                "start_frame": int(row[3]),
                "end_frame": int(row[4]) if row[4] else None,
            }
        )
    return records


def export_metadata(project: Project, now: datetime | None = None) -> tuple[str, str]:
    """Key-value CSV: annotator, video, fps, roster, ethogram, export time."""
    if not project.state.annotator.strip():
        raise AnnotatorUnset()
    stamp = (now or datetime.now()).isoformat(timespec="seconds")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    writer.writerow(["annotator", project.state.annotator])
    writer.writerow(["video", Path(project.config.main_video).name])
    writer.writerow(["fps", project.fps])
    for name in project.state.annotation.roster:
        writer.writerow(["individual", name])
    for label in project.state.annotation.ethogram:
        writer.writerow(["action", label])
    writer.writerow(["exported_at", stamp])
    return export_filename(project, "metadata"), buf.getvalue()


def export_notes(project: Project) -> tuple[str, str]:
    return export_filename(project, "notes"), project.state.annotation.get_notes()


def export_bundle(project: Project, now: datetime | None = None) -> dict[str, bytes]:
    """All four export files keyed by file name."""
    bundle = {}
    for name, text in (
        export_tracking(project),
        export_interactions(project),
        export_metadata(project, now=now),
        export_notes(project),
    ):
        bundle[name] = text.encode("utf-8")
    return bundle


# --- alignment report ---


@dataclass(frozen=True, slots=True)
class AlignmentEntry:
    record_id: int
    subject: str
    action: str
    target: str | None
    start_frame: int
    end_frame: int
    total_frames: int
    subject_covered: int
    target_covered: int | None
    covered_frames: int
    coverage: float
    gaps: tuple[tuple[int, int], ...]


@dataclass(frozen=True, slots=True)
class AlignmentReport:
    entries: tuple[AlignmentEntry, ...]
    skipped_open: tuple[int, ...]


def _gap_runs(uncovered: list[int]) -> tuple[tuple[int, int], ...]:
    runs = []
    for frame in uncovered:
        if runs and frame == runs[-1][1] + 1:
            runs[-1][1] = frame
        else:
            runs.append([frame, frame])
    return tuple((lo, hi) for lo, hi in runs)


def alignment_report(project: Project) -> AlignmentReport:
    """Per-frame coverage of each closed behavior record by tracked identities.

    A frame of a record counts as covered when some detection on that frame
    carries the subject's identity, and the target's likewise for
    interactions. The interval is closed: both the start and the end frame
    are inspected. Computed by direct scan; at desk scale this is both the
    implementation and the reference.
    """
    state = project.state
    entries = []
    skipped = []
    names_cache: dict[int, set[str]] = {}

    def names_at(frame: int) -> set[str]:
        cached = names_cache.get(frame)
        if cached is None:
            cached = set()
            for det in state.store.detections_at(frame):
                name = state.individual_name(det.individual_id)
                if name is not None:
                    cached.add(name)
            names_cache[frame] = cached
        return cached

    for record in state.annotation.listing():
        if record.end_frame is None:
            skipped.append(record.record_id)
            logger.warning(
                "alignment: skipping open behavior record %d", record.record_id
            )
            continue
        subject_covered = 0
        target_covered = 0
        covered = 0
        uncovered = []
        for frame in range(record.start_frame, record.end_frame + 1):
            present = names_at(frame)
            subject_here = record.subject in present
            target_here = record.target in present if record.target else True
            subject_covered += subject_here
            target_covered += record.target is not None and record.target in present
            if subject_here and target_here:
                covered += 1
            else:
                uncovered.append(frame)
        total = record.end_frame - record.start_frame + 1
        entries.append(
            AlignmentEntry(
                record_id=record.record_id,
                subject=record.subject,
                action=record.action,
                target=record.target,
                start_frame=record.start_frame,
                end_frame=record.end_frame,
                total_frames=total,
                subject_covered=subject_covered,
                target_covered=target_covered if record.target else None,
                covered_frames=covered,
                coverage=covered / total,
                gaps=_gap_runs(uncovered),
            )
        )
    return AlignmentReport(entries=tuple(entries), skipped_open=tuple(skipped))


def alignment_csv(report: AlignmentReport) -> str:
    """Render the report as CSV; gaps serialize as "lo-hi" runs joined by '|'."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "record_id",
            "subject",
            "action",
            "target",
            "start_frame",
            "end_frame",
            "total_frames",
            "subject_covered",
            "target_covered",
            "covered_frames",
            "coverage",
            "gaps",
        ]
    )
    for e in report.entries:
        writer.writerow(
            [
                e.record_id,
                e.subject,
                e.action,
                e.target or "",
                e.start_frame,
                e.end_frame,
                e.total_frames,
                e.subject_covered,
                e.target_covered if e.target_covered is not None else "",
                e.covered_frames,
                f"{e.coverage:.6f}",
                "|".join(f"{lo}-{hi}" for lo, hi in e.gaps),
            ]
        )
    return buf.getvalue()


# --- frame snapshots ---


class SnapshotRegistry:
    """Disk-backed registry of captured frame images under snapshots/."""

    def __init__(self, project_dir: Path):
        self.directory = Path(project_dir) / SNAPSHOT_DIR
        self.registry_path = self.directory / "registry.json"
        self.entries: list[dict] = []
        if self.registry_path.exists():
            self.entries = json.loads(self.registry_path.read_text(encoding="utf-8"))

    def _save(self) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        tmp = self.registry_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self.entries, indent=2), encoding="utf-8")
        tmp.replace(self.registry_path)

    def _used_names(self) -> set[str]:
        return {entry["file"] for entry in self.entries}

    def _pick_name(self, video_name: str, frame: int, with_boxes: bool) -> str:
        base = f"{video_name}_f{frame:06d}"
        used = self._used_names()
        candidate = f"{base}.png"
        if candidate not in used:
            return candidate
        holder = next(e for e in self.entries if e["file"] == candidate)
        if holder["with_boxes"] != with_boxes and f"{base}_boxes.png" not in used:
            return f"{base}_boxes.png"
        n = 2
        while f"{base}_{n}.png" in used:
            n += 1
        return f"{base}_{n}.png"

    def register(
        self, video_name: str, frame: int, with_boxes: bool, image: bytes
    ) -> str:
        """Store PNG bytes as they came in and record the capture. Returns the name."""
        name = self._pick_name(video_name, frame, with_boxes)
        self.directory.mkdir(parents=True, exist_ok=True)
        (self.directory / name).write_bytes(image)
        self.entries.append({"file": name, "frame": frame, "with_boxes": with_boxes})
        self._save()
        return name

    def listing(self) -> list[dict]:
        return [dict(entry) for entry in self.entries]
