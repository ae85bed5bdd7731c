"""Journalable commands: every project mutation in one replayable vocabulary.

A command is {seq, ts, kind, params} with a canonical JSON-line form that
round-trips bit-exactly. Each kind has a pure ``check`` (raises the same
errors its ``run`` would, without touching state) and a ``run`` that mutates
and returns a JSON-able result. The session appends to the journal between
check and run, so an invalid command never reaches the journal and a
journaled command always applies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Any, Callable

from . import corrections
from .corrections import Scope
from .errors import (
    AlreadyClosed,
    BadCommand,
    DuplicateDetection,
    DuplicateName,
    MissingEndpoint,
    NegativeDuration,
    NotInEthogram,
    NotInRoster,
    ShortcutConflict,
    UnknownDetection,
    UnknownRecord,
    UnknownTrack,
)
from .mot_io import parse_tracking, TrackingFormat
from .state import ProjectState, View
from .track_store import validate_bbox


@dataclass(frozen=True, slots=True)
class Command:
    seq: int
    ts: float
    kind: str
    params: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params, "seq": self.seq, "ts": self.ts}


def encode_command(cmd: Command) -> str:
    return json.dumps(
        cmd.to_json(), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    )


def decode_command(line: str) -> Command:
    data = json.loads(line)
    return Command(
        seq=data["seq"], ts=data["ts"], kind=data["kind"], params=data["params"]
    )


def canonical_params(kind: str, params: dict) -> dict:
    """Normalize params to their JSON-native shape so live apply == replay."""
    try:
        return json.loads(json.dumps(params))
    except (TypeError, ValueError) as exc:
        raise BadCommand(kind, f"parameters are not JSON-serializable: {exc}") from None


CheckFn = Callable[[ProjectState, dict], None]
RunFn = Callable[[ProjectState, dict], Any]

HANDLERS: dict[str, tuple[CheckFn, RunFn]] = {}


def _register(kind: str, check: CheckFn, run: RunFn) -> None:
    HANDLERS[kind] = (check, run)


def handlers_for(kind: str) -> tuple[CheckFn, RunFn]:
    try:
        return HANDLERS[kind]
    except KeyError:
        raise BadCommand(kind, "unknown command kind") from None


def command_kinds() -> list[str]:
    return sorted(HANDLERS)


def _req(params: dict, kind: str, key: str, types: tuple, allow_none: bool = False):
    if key not in params:
        raise BadCommand(kind, f"missing parameter {key!r}")
    value = params[key]
    if value is None:
        if allow_none:
            return None
        raise BadCommand(kind, f"parameter {key!r} must not be null")
    if types == (int,) and isinstance(value, bool):
        raise BadCommand(kind, f"parameter {key!r} must be an integer")
    if not isinstance(value, types):
        raise BadCommand(kind, f"parameter {key!r} has wrong type {type(value).__name__}")
    return value


def _opt(params: dict, kind: str, key: str, types: tuple, default=None):
    if key not in params or params[key] is None:
        return default
    return _req(params, kind, key, types)


def _scope(params: dict, kind: str) -> Scope:
    raw = _opt(params, kind, "scope", (dict,))
    if raw is None:
        return Scope.whole_track()
    try:
        return Scope.from_json(raw)
    except (KeyError, ValueError) as exc:
        raise BadCommand(kind, f"bad scope: {exc}") from None


def _bbox(params: dict, kind: str) -> tuple[float, float, float, float]:
    vals = []
    for key in ("x", "y", "w", "h"):
        vals.append(float(_req(params, kind, key, (int, float))))
    return tuple(vals)


# --- project setup ---


def _check_set_annotator(state, params):
    name = _req(params, "set_annotator", "name", (str,))
    if not name.strip():
        raise BadCommand("set_annotator", "annotator name must not be blank")


def _run_set_annotator(state, params):
    state.annotator = params["name"]
    return {"annotator": state.annotator}


def _check_name_list(kind: str, key: str):
    def check(state, params):
        names = _req(params, kind, key, (list,))
        seen = set()
        for name in names:
            if not isinstance(name, str) or not name.strip():
                raise BadCommand(kind, "entries must be non-empty strings")
            if name in seen:
                raise DuplicateName(name)
            seen.add(name)

    return check


def _run_set_roster(state, params):
    state.annotation.set_roster(params["names"])
    return {"count": len(params["names"])}


def _run_set_ethogram(state, params):
    state.annotation.set_ethogram(params["labels"])
    return {"count": len(params["labels"])}


def _check_set_self_directed(state, params):
    labels = _req(params, "set_self_directed", "labels", (list,))
    probe = list(labels)
    for label in probe:
        if not isinstance(label, str):
            raise BadCommand("set_self_directed", "labels must be strings")
    missing = [label for label in probe if label not in state.annotation.ethogram]
    if missing:
        raise NotInEthogram(missing[0])


def _run_set_self_directed(state, params):
    state.annotation.set_self_directed(params["labels"])
    return {"count": len(params["labels"])}


def _check_set_shortcut(state, params):
    panel = _req(params, "set_shortcut", "panel", (str,))
    name = _req(params, "set_shortcut", "name", (str,))
    key = _req(params, "set_shortcut", "key", (str,))
    if panel not in ("individuals", "ethogram"):
        raise BadCommand("set_shortcut", f"unknown panel {panel!r}")
    if not key:
        raise BadCommand("set_shortcut", "key must not be empty")
    ann = state.annotation
    items = ann.roster if panel == "individuals" else ann.ethogram
    if name not in items:
        raise NotInRoster(name) if panel == "individuals" else NotInEthogram(name)
    current = ann.shortcuts(panel)
    for other, bound in current.items():
        if bound == key and other != name:
            raise ShortcutConflict(key, other)


def _run_set_shortcut(state, params):
    state.annotation.set_shortcut(params["panel"], params["name"], params["key"])
    return {"panel": params["panel"], "name": params["name"], "key": params["key"]}


def _check_set_class_names(state, params):
    entries = _req(params, "set_class_names", "entries", (list,))
    for entry in entries:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or isinstance(entry[0], bool)
            or not isinstance(entry[0], int)
            or not isinstance(entry[1], str)
        ):
            raise BadCommand("set_class_names", "entries must be [label, name] pairs")


def _run_set_class_names(state, params):
    state.store.class_names = {int(label): name for label, name in params["entries"]}
    return {"count": len(params["entries"])}


def _check_set_style(state, params):
    _req(params, "set_style", "class_label", (int,))
    opacity = _opt(params, "set_style", "opacity", (int, float))
    if opacity is not None and not 0.0 <= float(opacity) <= 1.0:
        raise BadCommand("set_style", f"opacity {opacity} outside [0, 1]")
    thickness = _opt(params, "set_style", "thickness", (int, float))
    if thickness is not None and float(thickness) <= 0:
        raise BadCommand("set_style", "thickness must be positive")
    _opt(params, "set_style", "color", (str,))
    _opt(params, "set_style", "hidden", (bool,))


def _run_set_style(state, params):
    label = params["class_label"]
    style = state.styles.setdefault(label, {})
    for key in ("color", "opacity", "thickness", "hidden"):
        if params.get(key) is not None:
            style[key] = params[key]
    return {"class_label": label, "style": state.style_for(label)}


def _check_add_view(state, params):
    view_id = _req(params, "add_view", "view_id", (str,))
    _req(params, "add_view", "path", (str,))
    _req(params, "add_view", "frame_offset", (int,))
    _opt(params, "add_view", "frame_count", (int,))
    if not view_id or view_id == "main":
        raise BadCommand("add_view", f"bad view id {view_id!r}")
    if state.view_by_id(view_id) is not None:
        raise BadCommand("add_view", f"view {view_id!r} already exists")


def _run_add_view(state, params):
    view = View(
        view_id=params["view_id"],
        path=params["path"],
        frame_offset=params["frame_offset"],
        frame_count=params.get("frame_count"),
    )
    state.views.append(view)
    return {"view_id": view.view_id}


def _check_set_view_offset(state, params):
    view_id = _req(params, "set_view_offset", "view_id", (str,))
    _req(params, "set_view_offset", "frame_offset", (int,))
    if state.view_by_id(view_id) is None:
        raise BadCommand("set_view_offset", f"unknown view {view_id!r}")


def _run_set_view_offset(state, params):
    view = state.view_by_id(params["view_id"])
    view.frame_offset = params["frame_offset"]
    return {"view_id": view.view_id, "frame_offset": view.frame_offset}


def _parse_payload(state, params):
    text = _req(params, "load_tracking", "text", (str,))
    fmt_name = _opt(params, "load_tracking", "format", (str,))
    hint = TrackingFormat(fmt_name) if fmt_name else None
    return parse_tracking(text, format_hint=hint, frame_base=state.frame_base)


def _check_load_tracking(state, params):
    detections, _ = _parse_payload(state, params)
    seen = set()
    for det in detections:
        key = (det.frame, det.track_id)
        if key in seen:
            raise DuplicateDetection(det.frame, det.track_id)
        seen.add(key)


def _run_load_tracking(state, params):
    detections, fmt = _parse_payload(state, params)
    state.store.replace_all(detections)
    state.tracking_format = fmt
    return {"detections": len(detections), "format": fmt.value}


def _check_set_notes(state, params):
    _req(params, "set_notes", "text", (str,))


def _run_set_notes(state, params):
    state.annotation.set_notes(params["text"])
    return {"length": len(params["text"])}


# --- box editing ---


def _check_draw_box(state, params):
    frame = _req(params, "draw_box", "frame", (int,))
    bbox = _bbox(params, "draw_box")
    _req(params, "draw_box", "class_label", (int,))
    track_id = _opt(params, "draw_box", "track_id", (int,))
    validate_bbox(*bbox)
    if frame < 0:
        raise BadCommand("draw_box", f"frame must be >= 0, got {frame}")
    if track_id is not None:
        if track_id < 1:
            raise BadCommand("draw_box", f"track id must be positive, got {track_id}")
        if state.store.get(track_id, frame) is not None:
            raise DuplicateDetection(frame, track_id)


def _run_draw_box(state, params):
    det = state.store.draw_box(
        frame=params["frame"],
        bbox=_bbox(params, "draw_box"),
        class_label=params["class_label"],
        track_id=params.get("track_id"),
    )
    return {"track_id": det.track_id, "frame": det.frame}


def _check_resize_box(state, params):
    track_id = _req(params, "resize_box", "track_id", (int,))
    frame = _req(params, "resize_box", "frame", (int,))
    bbox = _bbox(params, "resize_box")
    validate_bbox(*bbox)
    if state.store.get(track_id, frame) is None:
        raise UnknownDetection(track_id, frame)


def _run_resize_box(state, params):
    det = state.store.resize_box(
        params["track_id"], params["frame"], _bbox(params, "resize_box")
    )
    return {"track_id": det.track_id, "frame": det.frame, "bbox": list(det.bbox)}


# --- scoped corrections ---


def _check_scoped(kind: str):
    def check(state, params):
        track_id = _req(params, kind, "track_id", (int,))
        scope = _scope(params, kind)
        corrections.scope_frames(state.store, track_id, scope)

    return check


def _check_change_class(state, params):
    _req(params, "change_class", "new_class", (int,))
    _check_scoped("change_class")(state, params)


def _run_change_class(state, params):
    count = corrections.change_class(
        state.store, params["track_id"], params["new_class"], _scope(params, "change_class")
    )
    return {"modified": count}


def _check_assign_individual(state, params):
    individual = _req(
        params, "assign_individual", "individual", (str,), allow_none=True
    )
    if individual is not None and individual not in state.annotation.roster:
        raise NotInRoster(individual)
    _check_scoped("assign_individual")(state, params)


def _run_assign_individual(state, params):
    count = corrections.assign_individual(
        state.store,
        params["track_id"],
        params["individual"],
        state.annotation.roster,
        _scope(params, "assign_individual"),
    )
    return {"modified": count}


def _run_reassign_track_id(state, params):
    new_id = corrections.reassign_track_id(
        state.store, params["track_id"], _scope(params, "reassign_track_id")
    )
    return {"new_track_id": new_id}


def _run_remove_track(state, params):
    count = corrections.remove_track(
        state.store, params["track_id"], _scope(params, "remove_track")
    )
    return {"removed": count}


def _check_interpolate_track(state, params):
    track_id = _req(params, "interpolate_track", "track_id", (int,))
    frame_a = _req(params, "interpolate_track", "frame_a", (int,))
    frame_b = _req(params, "interpolate_track", "frame_b", (int,))
    if frame_a >= frame_b:
        raise BadCommand(
            "interpolate_track", f"frame_a must be before frame_b, got {frame_a} >= {frame_b}"
        )
    if not state.store.has_track(track_id):
        raise UnknownTrack(track_id)
    if state.store.get(track_id, frame_a) is None:
        raise MissingEndpoint(track_id, frame_a)
    if state.store.get(track_id, frame_b) is None:
        raise MissingEndpoint(track_id, frame_b)


def _run_interpolate_track(state, params):
    count = corrections.interpolate_track(
        state.store, params["track_id"], params["frame_a"], params["frame_b"]
    )
    return {"inserted": count}


# --- behavior records ---


def _check_open_behavior(state, params):
    subject = _req(params, "open_behavior", "subject", (str,))
    action = _req(params, "open_behavior", "action", (str,))
    target = _opt(params, "open_behavior", "target", (str,))
    start_frame = _req(params, "open_behavior", "start_frame", (int,))
    state.annotation._check_subject_target(subject, action, target)
    if start_frame < 0:
        raise BadCommand("open_behavior", f"start frame must be >= 0, got {start_frame}")


def _run_open_behavior(state, params):
    record_id = state.annotation.open_behavior(
        subject=params["subject"],
        action=params["action"],
        target=params.get("target"),
        start_frame=params["start_frame"],
        created_by=state.annotator,
    )
    return {"record_id": record_id}


def _check_close_behavior(state, params):
    record_id = _req(params, "close_behavior", "record_id", (int,))
    end_frame = _req(params, "close_behavior", "end_frame", (int,))
    record = state.annotation.records.get(record_id)
    if record is None:
        raise UnknownRecord(record_id)
    if record.end_frame is not None:
        raise AlreadyClosed(record_id)
    if end_frame < record.start_frame:
        raise NegativeDuration(record.start_frame, end_frame)


def _run_close_behavior(state, params):
    record = state.annotation.close_behavior(params["record_id"], params["end_frame"])
    return {
        "record_id": record.record_id,
        "duration_frames": record.duration_frames(),
    }


def _check_edit_behavior(state, params):
    record_id = _req(params, "edit_behavior", "record_id", (int,))
    field = _req(params, "edit_behavior", "field", (str,))
    value = params.get("value")
    if field in ("subject", "action") and not isinstance(value, str):
        raise BadCommand("edit_behavior", f"{field} must be a string")
    if field == "target" and value is not None and not isinstance(value, str):
        raise BadCommand("edit_behavior", "target must be a string or null")
    if field == "start_frame" and (isinstance(value, bool) or not isinstance(value, int)):
        raise BadCommand("edit_behavior", "start_frame must be an integer")
    if field == "end_frame" and value is not None and (
        isinstance(value, bool) or not isinstance(value, int)
    ):
        raise BadCommand("edit_behavior", "end_frame must be an integer or null")
    if field not in ("subject", "action", "target", "start_frame", "end_frame"):
        raise BadCommand("edit_behavior", f"unknown record field {field!r}")
    log = state.annotation
    record = log.records.get(record_id)
    if record is None:
        raise UnknownRecord(record_id)
    updated = replace(record, **{field: value})
    log._check_subject_target(updated.subject, updated.action, updated.target)
    if updated.start_frame < 0:
        raise BadCommand("edit_behavior", "start frame must be >= 0")
    if updated.end_frame is not None and updated.end_frame < updated.start_frame:
        raise NegativeDuration(updated.start_frame, updated.end_frame)


def _run_edit_behavior(state, params):
    record = state.annotation.edit_behavior(
        params["record_id"], params["field"], params.get("value")
    )
    return {"record_id": record.record_id}


def _check_delete_behavior(state, params):
    record_id = _req(params, "delete_behavior", "record_id", (int,))
    if record_id not in state.annotation.records:
        raise UnknownRecord(record_id)


def _run_delete_behavior(state, params):
    state.annotation.delete_behavior(params["record_id"])
    return {"record_id": params["record_id"]}


_register("set_annotator", _check_set_annotator, _run_set_annotator)
_register("set_roster", _check_name_list("set_roster", "names"), _run_set_roster)
_register("set_ethogram", _check_name_list("set_ethogram", "labels"), _run_set_ethogram)
_register("set_self_directed", _check_set_self_directed, _run_set_self_directed)
_register("set_shortcut", _check_set_shortcut, _run_set_shortcut)
_register("set_class_names", _check_set_class_names, _run_set_class_names)
_register("set_style", _check_set_style, _run_set_style)
_register("add_view", _check_add_view, _run_add_view)
_register("set_view_offset", _check_set_view_offset, _run_set_view_offset)
_register("load_tracking", _check_load_tracking, _run_load_tracking)
_register("set_notes", _check_set_notes, _run_set_notes)
_register("draw_box", _check_draw_box, _run_draw_box)
_register("resize_box", _check_resize_box, _run_resize_box)
_register("change_class", _check_change_class, _run_change_class)
_register("assign_individual", _check_assign_individual, _run_assign_individual)
_register("reassign_track_id", _check_scoped("reassign_track_id"), _run_reassign_track_id)
_register("remove_track", _check_scoped("remove_track"), _run_remove_track)
_register("interpolate_track", _check_interpolate_track, _run_interpolate_track)
_register("open_behavior", _check_open_behavior, _run_open_behavior)
_register("close_behavior", _check_close_behavior, _run_close_behavior)
_register("edit_behavior", _check_edit_behavior, _run_edit_behavior)
_register("delete_behavior", _check_delete_behavior, _run_delete_behavior)
