"""A populated example project: a small troop of lemurs at a feeding box.

The generated tracking contains the classic correction targets on purpose:
an identity switch mid-track, a short false-positive track, and a detection
gap to interpolate across. Everything is deterministic so the demo doubles
as an end-to-end smoke corpus.
"""

from __future__ import annotations

from pathlib import Path

from .mot_io import Detection, TrackingFormat, serialize_tracking
from .session import Project, create_project

DEMO_FPS = 25.0
DEMO_FRAME_COUNT = 200

DEMO_ROSTER = [
    "George",
    "Genovesa",
    "Mia",
    "Rafa",
    "Tonka",
    "Luna",
    "Kiki",
    "Unsure",
]

DEMO_ETHOGRAM = [
    "looking at",
    "successful lift",
    "unsuccessful lift",
    "successful push",
    "unsuccessful push",
    "successful slide",
    "unsuccessful slide",
    "scrounging",
    "licking",
    "manipulating the food box",
]

LEMUR = 1
FOODBOX = 2


def _det(frame, track_id, x, y, w, h, conf, label, ind=None, id_conf=None):
    return Detection(
        frame=frame,
        track_id=track_id,
        x=float(x),
        y=float(y),
        w=float(w),
        h=float(h),
        det_conf=float(conf),
        class_label=label,
        individual_id=ind,
        id_conf=id_conf,
    )


def demo_detections() -> list[Detection]:
    """Scenario detections in canonical (frame, track_id) order, frames 0..199."""
    dets = []
    for frame in range(DEMO_FRAME_COUNT):
        # track 1: George, identified upstream, crosses left to right
        dets.append(
            _det(frame, 1, 40.0 + 2.5 * frame, 120.0, 64.0, 48.0, 0.97, LEMUR, 1, 0.9)
        )
        # track 2: unidentified lemur near the box, detector misses frames 70..79
        if frame < 150 and not 70 <= frame <= 79:
            dets.append(
                _det(frame, 2, 300.0, 200.0 + 0.5 * frame, 60.0, 50.0, 0.91, LEMUR)
            )
        # track 3: follows Genovesa until an identity switch at frame 60,
        # after which the box actually covers a different animal
        if 10 <= frame < 100:
            dets.append(
                _det(frame, 3, 500.0 - 1.5 * frame, 90.0, 58.0, 46.0, 0.88, LEMUR, 2, 0.8)
            )
        # track 4: the switched-away animal picked up as a fresh track
        if frame >= 100:
            dets.append(
                _det(frame, 4, 350.0, 90.0 + 0.25 * frame, 58.0, 46.0, 0.9, LEMUR)
            )
        # track 5: the feeding box, static
        dets.append(_det(frame, 5, 280.0, 240.0, 90.0, 70.0, 0.99, FOODBOX))
        # track 6: short false positive on a swaying branch
        if 40 <= frame <= 44:
            dets.append(_det(frame, 6, 20.0, 20.0, 30.0, 30.0, 0.3, LEMUR))
    return dets


def demo_tracking_text(
    fmt: TrackingFormat = TrackingFormat.EXTENDED, frame_base: int = 1
) -> str:
    return serialize_tracking(demo_detections(), fmt, frame_base=frame_base)


def build_demo_project(directory: Path) -> Project:
    directory = Path(directory)
    video = directory / "troop.mp4"
    directory.mkdir(parents=True, exist_ok=True)
    # placeholder bytes so byte-range serving has something to serve;
    # swap in a real recording to use the player
    video.write_bytes(b"\x00" * 4096)
    project = create_project(
        directory,
        main_video=str(video),
        fps=DEMO_FPS,
        frame_count=DEMO_FRAME_COUNT,
        frame_base=1,
    )

    project.apply("set_annotator", {"name": "demo"})
    project.apply("set_roster", {"names": DEMO_ROSTER})
    project.apply("set_ethogram", {"labels": DEMO_ETHOGRAM})
    project.apply("set_self_directed", {"labels": ["licking"]})
    project.apply(
        "set_class_names",
        {"entries": [[LEMUR, "lemur"], [FOODBOX, "feeding box"]]},
    )
    project.apply("load_tracking", {"text": demo_tracking_text(), "frame_base": 1})
    project.apply(
        "add_view",
        {
            "view_id": "side",
            "path": str(directory / "troop_side.mp4"),
            "frame_offset": 12,
            "frame_count": DEMO_FRAME_COUNT,
        },
    )
    project.apply(
        "add_view",
        {
            "view_id": "top",
            "path": str(directory / "troop_top.mp4"),
            "frame_offset": -8,
            "frame_count": DEMO_FRAME_COUNT,
        },
    )

    # corrections: drop the false positive, split the switched track, give the
    # split-off part its real identity, fill the detection gap, name track 2
    project.apply("remove_track", {"track_id": 6})
    split = project.apply(
        "reassign_track_id",
        {"track_id": 3, "scope": {"kind": "from_frame", "frame": 60}},
    )
    project.apply(
        "assign_individual",
        {"track_id": split["new_track_id"], "individual": "Rafa"},
    )
    project.apply("assign_individual", {"track_id": 2, "individual": "Mia"})
    project.apply("interpolate_track", {"track_id": 2, "frame_a": 69, "frame_b": 80})
    project.apply("assign_individual", {"track_id": 4, "individual": "Unsure"})

    looking = project.apply(
        "open_behavior",
        {"subject": "George", "action": "looking at", "target": "Genovesa",
         "start_frame": 30},
    )
    project.apply(
        "close_behavior", {"record_id": looking["record_id"], "end_frame": 75}
    )
    push = project.apply(
        "open_behavior",
        {"subject": "Mia", "action": "successful push", "start_frame": 100},
    )
    project.apply("close_behavior", {"record_id": push["record_id"], "end_frame": 140})
    lick = project.apply(
        "open_behavior",
        {"subject": "Mia", "action": "licking", "target": "Mia", "start_frame": 140},
    )
    project.apply("close_behavior", {"record_id": lick["record_id"], "end_frame": 155})
    # left open on purpose: the demo ends mid-bout
    project.apply(
        "open_behavior",
        {"subject": "George", "action": "scrounging", "start_frame": 180},
    )
    project.apply(
        "set_notes",
        {"text": "Track 3 switched identities at frame 60; split and relabeled.\n"},
    )
    return project
