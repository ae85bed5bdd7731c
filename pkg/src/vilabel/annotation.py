"""Roster, ethogram, keyboard shortcuts and behavior record lifecycle.

A behavior record ties a subject (and, for interactions, a target) to an
action label over a frame interval. Records stay open while the annotator
watches for the end of the behavior and are closed with the end frame.
Subjects and targets must come from the individuals roster, actions from the
ethogram; free text is rejected at the door to keep exports typo-free.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, replace

from .errors import (
    AlreadyClosed,
    DuplicateName,
    NegativeDuration,
    NotInEthogram,
    NotInRoster,
    SelfInteraction,
    ShortcutConflict,
    UnknownRecord,
)

LETTERS = string.ascii_lowercase


@dataclass(frozen=True, slots=True)
class BehaviorRecord:
    record_id: int
    subject: str
    action: str
    target: str | None
    start_frame: int
    end_frame: int | None
    created_by: str

    @property
    def is_open(self) -> bool:
        return self.end_frame is None

    @property
    def is_interaction(self) -> bool:
        return self.target is not None

    def duration_frames(self) -> int | None:
        if self.end_frame is None:
            return None
        return self.end_frame - self.start_frame

    def duration_seconds(self, fps: float) -> float | None:
        frames = self.duration_frames()
        if frames is None:
            return None
        return frames / fps


def assign_shortcuts(items: list[str]) -> dict[str, str]:
    """Auto-assign one lowercase letter per item, preferring initials.

    Two passes in list order: first every item claims its initial letter if
    still free (non a-z initials skip this pass), then each unassigned item
    takes the first free letter occurring in its own name, falling back to the
    first free letter of the alphabet. Once all 26 letters are taken the
    remaining items stay unassigned; those can be bound to key combinations
    by hand.
    """
    taken: set[str] = set()
    assigned: dict[str, str] = {}
    for name in items:
        initial = name[:1].lower()
        if initial in LETTERS and initial not in taken:
            assigned[name] = initial
            taken.add(initial)
    for name in items:
        if name in assigned:
            continue
        if len(taken) == len(LETTERS):
            break
        key = next(
            (c for c in name.lower() if c in LETTERS and c not in taken), None
        )
        if key is None:
            key = next(c for c in LETTERS if c not in taken)
        assigned[name] = key
        taken.add(key)
    return assigned


def _validate_names(names: list[str], what: str) -> None:
    seen: set[str] = set()
    for name in names:
        if not name.strip():
            raise ValueError(f"empty {what} entry")
        if name in seen:
            raise DuplicateName(name)
        seen.add(name)


class AnnotationLog:
    """Mutable annotation state: lists, shortcuts, behavior records, notes."""

    def __init__(self) -> None:
        self.roster: list[str] = []
        self.ethogram: list[str] = []
        self.self_directed: set[str] = set()
        self.shortcut_overrides: dict[str, dict[str, str]] = {
            "individuals": {},
            "ethogram": {},
        }
        self.records: dict[int, BehaviorRecord] = {}
        self.next_record_id: int = 1
        self.notes: str = ""

    # --- lists and shortcuts ---

    def set_roster(self, names: list[str]) -> None:
        _validate_names(names, "individual")
        self.roster = list(names)
        self.shortcut_overrides["individuals"] = {}

    def set_ethogram(self, labels: list[str]) -> None:
        _validate_names(labels, "ethogram")
        self.ethogram = list(labels)
        self.shortcut_overrides["ethogram"] = {}

    def shortcuts(self, panel: str) -> dict[str, str]:
        """Effective shortcut map for a panel: auto assignment plus overrides."""
        items = self.roster if panel == "individuals" else self.ethogram
        mapping = assign_shortcuts(items)
        overrides = self.shortcut_overrides[panel]
        if overrides:
            auto_of = {v: k for k, v in mapping.items()}
            for name, key in overrides.items():
                if name not in items:
                    continue
                old = mapping.pop(name, None)
                if old is not None:
                    auto_of.pop(old, None)
                mapping[name] = key
        return mapping

    def set_shortcut(self, panel: str, name: str, key: str) -> None:
        if panel not in self.shortcut_overrides:
            raise ValueError(f"unknown panel {panel!r}")
        items = self.roster if panel == "individuals" else self.ethogram
        if name not in items:
            raise NotInRoster(name) if panel == "individuals" else NotInEthogram(name)
        current = self.shortcuts(panel)
        for other, bound in current.items():
            if bound == key and other != name:
                raise ShortcutConflict(key, other)
        self.shortcut_overrides[panel][name] = key

    def set_self_directed(self, labels: list[str]) -> None:
        """Actions in this set may target their own subject."""
        for label in labels:
            if label not in self.ethogram:
                raise NotInEthogram(label)
        self.self_directed = set(labels)

    # --- behavior records ---

    def _check_subject_target(
        self, subject: str, action: str, target: str | None
    ) -> None:
        if subject not in self.roster:
            raise NotInRoster(subject)
        if action not in self.ethogram:
            raise NotInEthogram(action)
        if target is not None:
            if target not in self.roster:
                raise NotInRoster(target)
            if target == subject and action not in self.self_directed:
                raise SelfInteraction(subject, action)

    def open_behavior(
        self,
        subject: str,
        action: str,
        target: str | None,
        start_frame: int,
        created_by: str = "",
    ) -> int:
        self._check_subject_target(subject, action, target)
        if start_frame < 0:
            raise ValueError(f"start frame must be >= 0, got {start_frame}")
        record_id = self.next_record_id
        self.records[record_id] = BehaviorRecord(
            record_id=record_id,
            subject=subject,
            action=action,
            target=target,
            start_frame=start_frame,
            end_frame=None,
            created_by=created_by,
        )
        self.next_record_id += 1
        return record_id

    def close_behavior(self, record_id: int, end_frame: int) -> BehaviorRecord:
        record = self.records.get(record_id)
        if record is None:
            raise UnknownRecord(record_id)
        if record.end_frame is not None:
            raise AlreadyClosed(record_id)
        if end_frame < record.start_frame:
            raise NegativeDuration(record.start_frame, end_frame)
        record = replace(record, end_frame=end_frame)
        self.records[record_id] = record
        return record

    def edit_behavior(self, record_id: int, field: str, value) -> BehaviorRecord:
        """Replace one field of a record, under the same validation as creation.

        Setting ``end_frame`` to None reopens the record; setting ``target``
        to None turns an interaction into a plain action.
        """
        record = self.records.get(record_id)
        if record is None:
            raise UnknownRecord(record_id)
        if field not in ("subject", "action", "target", "start_frame", "end_frame"):
            raise ValueError(f"unknown record field {field!r}")

        updated = replace(record, **{field: value})
        self._check_subject_target(updated.subject, updated.action, updated.target)
        if updated.start_frame < 0:
            raise ValueError(f"start frame must be >= 0, got {updated.start_frame}")
        if updated.end_frame is not None and updated.end_frame < updated.start_frame:
            raise NegativeDuration(updated.start_frame, updated.end_frame)
        self.records[record_id] = updated
        return updated

    def delete_behavior(self, record_id: int) -> None:
        if record_id not in self.records:
            raise UnknownRecord(record_id)
        del self.records[record_id]

    def listing(self) -> list[BehaviorRecord]:
        """Records in behaviors-panel order: by start frame, then record id."""
        return sorted(self.records.values(), key=lambda r: (r.start_frame, r.record_id))

    # --- notes ---

    def set_notes(self, text: str) -> None:
        self.notes = text

    def get_notes(self) -> str:
        return self.notes
