"""Shared test helpers.

The formatting and generation helpers here are written independently of the
package's serializer on purpose: they are the oracle side of round-trip and
fidelity checks, so they must not share code with what they verify.
"""

from __future__ import annotations

import random

import pytest

from vilabel.session import create_project


# --- independent number formatting (oracle side) ---


def oracle_number(v: float) -> str:
    """Canonical cell text: integers bare, floats via shortest repr."""
    if isinstance(v, int):
        return str(v)
    if v == int(v) and abs(v) < 10**16:
        return str(int(v))
    return repr(v)


def oracle_row(row: tuple, extended: bool, frame_base: int = 1) -> str:
    frame, tid, x, y, w, h, conf, label = row[:8]
    cells = [
        str(frame + frame_base),
        str(tid),
        oracle_number(x),
        oracle_number(y),
        oracle_number(w),
        oracle_number(h),
        oracle_number(conf),
        str(label),
    ]
    if extended:
        ind, id_conf = row[8], row[9]
        if ind is None:
            cells += ["-1", "-1"]
        else:
            cells += [str(ind), oracle_number(id_conf)]
    return ",".join(cells)


def oracle_text(rows: list[tuple], extended: bool, frame_base: int = 1) -> str:
    if not rows:
        return ""
    return "\n".join(oracle_row(r, extended, frame_base) for r in rows) + "\n"


def random_rows(
    rng: random.Random,
    n_lines: int,
    extended: bool,
    max_frame: int = 5000,
    n_tracks: int = 60,
) -> list[tuple]:
    """Unique (frame, track_id) rows in canonical order.

    Values are quantized to short decimals so they are exactly representable;
    the round-trip checks are about formatting, not float pathology (that is
    covered separately by repr-based property tests).
    """
    keys = set()
    while len(keys) < n_lines:
        keys.add((rng.randint(0, max_frame), rng.randint(1, n_tracks)))
    rows = []
    for frame, tid in sorted(keys):
        x = round(rng.uniform(0, 1900), rng.choice((0, 1, 2)))
        y = round(rng.uniform(0, 1000), rng.choice((0, 1, 2)))
        w = round(rng.uniform(1, 300), 2)
        h = round(rng.uniform(1, 300), 2)
        conf = round(rng.random(), 3)
        label = rng.randint(0, 3)
        if extended and rng.random() < 0.6:
            ind = rng.randint(1, 12)
            id_conf = round(rng.random(), 3)
        else:
            ind, id_conf = None, None
        rows.append((frame, tid, x, y, w, h, conf, label, ind, id_conf))
    return rows


def messy_row(rng: random.Random, row: tuple, extended: bool, frame_base: int = 1) -> str:
    """Non-canonical but valid rendering of a row (extra zeros, .0 on ints)."""

    def cell(v, as_int=False):
        if as_int:
            return str(v) + rng.choice(("", ".0"))
        # random_rows quantizes to at most 3 decimals, so 3+ digits is lossless
        text = f"{v:.{rng.choice((3, 4, 6))}f}"
        return text

    frame, tid, x, y, w, h, conf, label = row[:8]
    cells = [
        cell(frame + frame_base, as_int=True),
        cell(tid, as_int=True),
        cell(x),
        cell(y),
        cell(w),
        cell(h),
        cell(conf),
        cell(label, as_int=True),
    ]
    if extended:
        ind, id_conf = row[8], row[9]
        if ind is None:
            cells += ["-1", "-1"]
        else:
            cells += [cell(ind, as_int=True), cell(id_conf)]
    return ",".join(cells)


def messy_text(rng, rows, extended, frame_base: int = 1) -> str:
    if not rows:
        return ""
    return "\n".join(messy_row(rng, r, extended, frame_base) for r in rows) + "\n"


# --- project factory ---


@pytest.fixture
def project_dir(tmp_path):
    return tmp_path / "proj"


@pytest.fixture
def project(tmp_path):
    video = tmp_path / "clip.mp4"
    video.write_bytes(b"\x00" * 2048)
    proj = create_project(
        tmp_path / "proj",
        main_video=str(video),
        fps=25.0,
        frame_count=1000,
        frame_base=1,
    )
    yield proj
    proj.close()


# --- random journaled sessions ---

SESSION_ROSTER = ["George", "Genovesa", "Mia", "Rafa", "Unsure"]
SESSION_ETHOGRAM = ["looking at", "successful lift", "scrounging", "licking"]


def seed_session(project, rng: random.Random, n_tracks: int = 6, n_frames: int = 120):
    """Annotator, lists, and a generated tracking import, all journaled."""
    project.apply("set_annotator", {"name": "tester"})
    project.apply("set_roster", {"names": list(SESSION_ROSTER)})
    project.apply("set_ethogram", {"labels": list(SESSION_ETHOGRAM)})
    project.apply("set_self_directed", {"labels": ["licking"]})
    rows = []
    for tid in range(1, n_tracks + 1):
        first = rng.randint(0, 10)
        last = rng.randint(n_frames - 10, n_frames - 1)
        for frame in range(first, last + 1):
            rows.append(
                f"{frame + 1},{tid},{rng.randint(0, 500)},{rng.randint(0, 300)},"
                f"{rng.randint(5, 40)},{rng.randint(5, 40)},0.9,{rng.choice((1, 2))}"
            )
    project.apply("load_tracking", {"text": "\n".join(rows) + "\n", "frame_base": 1})


def drive_session(project, rng: random.Random, n_commands: int) -> int:
    """Apply n_commands random valid commands; returns the final version."""
    from vilabel.errors import LabelingError

    store = project.state.store
    ann = project.state.annotation
    open_records = []
    applied = 0
    while applied < n_commands:
        roll = rng.random()
        tracks = store.track_ids()
        try:
            if roll < 0.12 or not tracks:
                frame = rng.randint(0, 200)
                project.apply(
                    "draw_box",
                    {
                        "frame": frame,
                        "x": float(rng.randint(0, 500)),
                        "y": float(rng.randint(0, 300)),
                        "w": float(rng.randint(1, 50)),
                        "h": float(rng.randint(1, 50)),
                        "class_label": rng.choice((1, 2)),
                    },
                )
            elif roll < 0.24:
                tid = rng.choice(tracks)
                frames = store.track_frames(tid)
                project.apply(
                    "resize_box",
                    {
                        "track_id": tid,
                        "frame": rng.choice(frames),
                        "x": float(rng.randint(0, 500)),
                        "y": float(rng.randint(0, 300)),
                        "w": float(rng.randint(1, 50)),
                        "h": float(rng.randint(1, 50)),
                    },
                )
            elif roll < 0.36:
                tid = rng.choice(tracks)
                frames = store.track_frames(tid)
                scope = rng.choice(
                    [
                        {"kind": "whole_track"},
                        {"kind": "from_frame", "frame": rng.choice(frames)},
                        {"kind": "single_frame", "frame": rng.choice(frames)},
                    ]
                )
                project.apply(
                    "change_class",
                    {"track_id": tid, "new_class": rng.choice((1, 2)), "scope": scope},
                )
            elif roll < 0.48:
                tid = rng.choice(tracks)
                project.apply(
                    "assign_individual",
                    {
                        "track_id": tid,
                        "individual": rng.choice(SESSION_ROSTER + [None]),
                        "scope": {
                            "kind": "from_frame",
                            "frame": rng.choice(store.track_frames(tid)),
                        },
                    },
                )
            elif roll < 0.56:
                tid = rng.choice(tracks)
                project.apply(
                    "reassign_track_id",
                    {
                        "track_id": tid,
                        "scope": {
                            "kind": "from_frame",
                            "frame": rng.choice(store.track_frames(tid)),
                        },
                    },
                )
            elif roll < 0.62:
                tid = rng.choice(tracks)
                project.apply(
                    "remove_track",
                    {
                        "track_id": tid,
                        "scope": {
                            "kind": "single_frame",
                            "frame": rng.choice(store.track_frames(tid)),
                        },
                    },
                )
            elif roll < 0.68:
                tid = rng.choice(tracks)
                frames = store.track_frames(tid)
                a = rng.choice(frames)
                project.apply(
                    "interpolate_track",
                    {"track_id": tid, "frame_a": a, "frame_b": a + rng.randint(2, 6)},
                )
            elif roll < 0.8:
                start = rng.randint(0, 300)
                result = project.apply(
                    "open_behavior",
                    {
                        "subject": rng.choice(SESSION_ROSTER),
                        "action": rng.choice(SESSION_ETHOGRAM[:-1]),
                        "target": rng.choice(SESSION_ROSTER + [None]),
                        "start_frame": start,
                    },
                )
                open_records.append((result["record_id"], start))
            elif roll < 0.88 and open_records:
                record_id, start = open_records.pop(rng.randrange(len(open_records)))
                project.apply(
                    "close_behavior",
                    {"record_id": record_id, "end_frame": start + rng.randint(0, 80)},
                )
            elif roll < 0.92 and ann.records:
                record_id = rng.choice(sorted(ann.records))
                project.apply(
                    "edit_behavior",
                    {
                        "record_id": record_id,
                        "field": "subject",
                        "value": rng.choice(SESSION_ROSTER),
                    },
                )
            elif roll < 0.95:
                project.apply("set_notes", {"text": f"note {applied}"})
            elif roll < 0.98:
                project.apply(
                    "set_style",
                    {
                        "class_label": rng.choice((1, 2)),
                        "style": {"opacity": round(rng.random(), 2)},
                    },
                )
            else:
                project.apply(
                    "set_shortcut",
                    {
                        "panel": "individuals",
                        "name": rng.choice(SESSION_ROSTER),
                        "key": rng.choice("qxyz0123"),
                    },
                )
        except LabelingError:
            continue
        applied += 1
    return project.version


# --- alignment reference ---


def brute_force_alignment(detections, roster, records):
    """Frame-by-frame coverage reference computed straight off a detection list.

    ``detections`` are raw row tuples (frame at index 0, individual id at
    index 8); ``records`` are dicts with id/subject/target/start/end. Open
    records are ignored. Returns {record_id: (covered, total, gaps)}.
    """
    results = {}
    for record in records:
        if record["end"] is None:
            continue
        per_frame = []
        for frame in range(record["start"], record["end"] + 1):
            names = set()
            for det in detections:
                if det[0] == frame and det[8] is not None:
                    if 1 <= det[8] <= len(roster):
                        names.add(roster[det[8] - 1])
            ok = record["subject"] in names
            if record["target"] is not None:
                ok = ok and record["target"] in names
            per_frame.append(ok)
        covered = sum(per_frame)
        gaps = []
        for i, ok in enumerate(per_frame):
            frame = record["start"] + i
            if not ok:
                if gaps and gaps[-1][1] == frame - 1:
                    gaps[-1][1] = frame
                else:
                    gaps.append([frame, frame])
        results[record["id"]] = (
            covered,
            len(per_frame),
            tuple((a, b) for a, b in gaps),
        )
    return results


# --- acceptance summary lines ---

ACCEPTANCE_FILE = "test_acceptance.py"

_CRITERIA = {
    "test_mot_round_trip_randomized": "MOT round-trip (1000 files/format, byte-exact after one canonicalization, <30s)",
    "test_format_fidelity_simplified": "Format fidelity (simplified fixture import/export byte-identical)",
    "test_correction_invariants_randomized": "Correction invariants (>=10000 ops: conservation, partition, interpolation affinity)",
    "test_shortcut_properties": "Shortcut algorithm (injectivity + initial preference, 1000 rosters; 30 items -> 26 keys)",
    "test_journal_resume_deep_equal": "Journal/resume (500-command sessions deep-equal via state hash)",
    "test_crash_after_fsync": "Crash recovery (resume includes fsync'd command, 100/100 trials)",
    "test_alignment_oracle_randomized": "Alignment report vs brute-force oracle (200 projects)",
    "test_alignment_worked_example": "Alignment worked example (11 frames, 6 covered, gap [16,20])",
    "test_export_closure": "Export closure (CSV reparse equality; duration_s x fps == duration_frames)",
    "test_performance_budgets": "Performance (100k parse <1s; detections_at median <1ms; 10k resume <2s)",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if ACCEPTANCE_FILE not in str(getattr(report, "nodeid", "")):
                continue
            name = report.nodeid.split("::")[-1]
            base = name.split("[")[0]
            label = _CRITERIA.get(base, base)
            lines.append((label, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for label, status in lines:
            terminalreporter.write_line(f"[{status}] {label}")
