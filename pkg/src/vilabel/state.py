"""Whole-project annotation state and its canonical JSON form.

The JSON form backs journal checkpoints and the state hash used to verify
replay determinism: two states are equal iff their canonical JSON matches.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .annotation import AnnotationLog, BehaviorRecord
from .mot_io import Detection, TrackingFormat
from .track_store import TrackStore

# Default box colors, cycled by class label.
PALETTE = [
    "#e6194b",
    "#3cb44b",
    "#ffe119",
    "#4363d8",
    "#f58231",
    "#911eb4",
    "#46f0f0",
    "#f032e6",
]

DEFAULT_STYLE = {"color": None, "opacity": 1.0, "thickness": 2, "hidden": False}


@dataclass
class View:
    view_id: str
    path: str
    frame_offset: int
    frame_count: int | None = None


class ProjectState:
    """Everything the journal reproduces: detections, lists, records, styles."""

    def __init__(self, frame_base: int = 1) -> None:
        self.frame_base = frame_base
        self.store = TrackStore()
        self.annotation = AnnotationLog()
        self.tracking_format: TrackingFormat | None = None
        self.styles: dict[int, dict] = {}
        self.views: list[View] = []
        self.annotator: str = ""

    def style_for(self, class_label: int) -> dict:
        style = dict(DEFAULT_STYLE)
        style["color"] = PALETTE[class_label % len(PALETTE)]
        style.update(self.styles.get(class_label, {}))
        return style

    def individual_name(self, individual_id: int | None) -> str | None:
        """Resolve a 1-based roster index to its name; out-of-range ids display raw."""
        if individual_id is None:
            return None
        roster = self.annotation.roster
        if 1 <= individual_id <= len(roster):
            return roster[individual_id - 1]
        return str(individual_id)

    def view_by_id(self, view_id: str) -> View | None:
        for view in self.views:
            if view.view_id == view_id:
                return view
        return None


def _detection_to_row(det: Detection) -> list:
    return [
        det.frame,
        det.track_id,
        det.x,
        det.y,
        det.w,
        det.h,
        det.det_conf,
        det.class_label,
        det.individual_id,
        det.id_conf,
    ]


def _detection_from_row(row: list) -> Detection:
    return Detection(
        frame=row[0],
        track_id=row[1],
        x=row[2],
        y=row[3],
        w=row[4],
        h=row[5],
        det_conf=row[6],
        class_label=row[7],
        individual_id=row[8],
        id_conf=row[9],
    )


def _record_to_dict(record: BehaviorRecord) -> dict:
    return {
        "record_id": record.record_id,
        "subject": record.subject,
        "action": record.action,
        "target": record.target,
        "start_frame": record.start_frame,
        "end_frame": record.end_frame,
        "created_by": record.created_by,
    }


def _record_from_dict(data: dict) -> BehaviorRecord:
    return BehaviorRecord(
        record_id=data["record_id"],
        subject=data["subject"],
        action=data["action"],
        target=data["target"],
        start_frame=data["start_frame"],
        end_frame=data["end_frame"],
        created_by=data["created_by"],
    )


def state_to_json(state: ProjectState) -> dict:
    ann = state.annotation
    return {
        "detections": [_detection_to_row(d) for d in state.store.all_detections()],
        "tracking_format": state.tracking_format.value if state.tracking_format else None,
        "class_names": sorted(state.store.class_names.items()),
        "styles": sorted((label, style) for label, style in state.styles.items()),
        "views": [
            {
                "view_id": v.view_id,
                "path": v.path,
                "frame_offset": v.frame_offset,
                "frame_count": v.frame_count,
            }
            for v in state.views
        ],
        "annotator": state.annotator,
        "roster": list(ann.roster),
        "ethogram": list(ann.ethogram),
        "self_directed": sorted(ann.self_directed),
        "shortcut_overrides": {
            panel: sorted(overrides.items())
            for panel, overrides in ann.shortcut_overrides.items()
        },
        "records": [_record_to_dict(r) for r in sorted(ann.records.values(), key=lambda r: r.record_id)],
        "next_record_id": ann.next_record_id,
        "notes": ann.notes,
    }


def state_from_json(data: dict, frame_base: int = 1) -> ProjectState:
    state = ProjectState(frame_base=frame_base)
    state.store.replace_all([_detection_from_row(row) for row in data["detections"]])
    state.store.class_names = {int(k): v for k, v in data["class_names"]}
    if data["tracking_format"]:
        state.tracking_format = TrackingFormat(data["tracking_format"])
    state.styles = {int(label): dict(style) for label, style in data["styles"]}
    state.views = [
        View(
            view_id=v["view_id"],
            path=v["path"],
            frame_offset=v["frame_offset"],
            frame_count=v["frame_count"],
        )
        for v in data["views"]
    ]
    state.annotator = data["annotator"]
    ann = state.annotation
    ann.roster = list(data["roster"])
    ann.ethogram = list(data["ethogram"])
    ann.self_directed = set(data["self_directed"])
    ann.shortcut_overrides = {
        panel: dict(pairs) for panel, pairs in data["shortcut_overrides"].items()
    }
    ann.records = {
        rec["record_id"]: _record_from_dict(rec) for rec in data["records"]
    }
    ann.next_record_id = data["next_record_id"]
    ann.notes = data["notes"]
    return state


def state_hash(state: ProjectState) -> str:
    payload = json.dumps(
        state_to_json(state), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
