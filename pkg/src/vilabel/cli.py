"""Command-line entry points: serve the API, validate or convert tracking
files, export artifacts, and print the alignment report."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import LabelingError
from .exports import (
    alignment_csv,
    alignment_report,
    export_bundle,
    export_interactions,
    export_metadata,
    export_notes,
    export_tracking,
)
from .mot_io import TrackingFormat, parse_tracking, serialize_tracking
from .session import EXPORT_DIR, create_project, resume
from .track_store import TrackStore

DEFAULT_PORT = 8000


def _env_port() -> int:
    raw = os.environ.get("SILVI_PORT", "").strip()
    if not raw:
        return DEFAULT_PORT
    try:
        return int(raw)
    except ValueError:
        print(f"warning: ignoring non-numeric SILVI_PORT={raw!r}", file=sys.stderr)
        return DEFAULT_PORT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vilabel",
        description="Video labeling workbench: tracking correction, "
        "behavior annotation, aligned exports.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_init = sub.add_parser("init", help="create an empty project directory")
    p_init.add_argument("project", type=Path)
    p_init.add_argument("--video", required=True, help="path to the main video file")
    p_init.add_argument("--fps", type=float, required=True)
    p_init.add_argument("--frame-count", type=int, default=None)
    p_init.add_argument("--frame-base", type=int, choices=(0, 1), default=1)

    p_demo = sub.add_parser("demo", help="create a populated example project")
    p_demo.add_argument("project", type=Path)

    p_serve = sub.add_parser("serve", help="start the HTTP API for a project")
    p_serve.add_argument("--project", type=Path, required=True)
    p_serve.add_argument(
        "--port",
        type=int,
        default=None,
        help=f"default: $SILVI_PORT or {DEFAULT_PORT}",
    )
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui", type=Path, default=None, help="static UI directory")
    p_serve.add_argument(
        "--recover",
        action="store_true",
        help="on journal corruption, resume from the last valid command",
    )

    p_validate = sub.add_parser("validate", help="parse a tracking file and report")
    p_validate.add_argument("file", type=Path)
    p_validate.add_argument("--frame-base", type=int, choices=(0, 1), default=1)
    p_validate.add_argument(
        "--format", choices=[f.value for f in TrackingFormat], default=None
    )

    p_export = sub.add_parser("export", help="write export files for a project")
    p_export.add_argument("project", type=Path)
    p_export.add_argument(
        "--what",
        choices=("tracking", "interactions", "metadata", "notes", "all"),
        default="all",
    )
    p_export.add_argument("--out", type=Path, default=None)

    p_align = sub.add_parser(
        "align", help="print per-record tracking/behavior coverage as CSV"
    )
    p_align.add_argument("project", type=Path)
    p_align.add_argument("--out", type=Path, default=None)

    p_convert = sub.add_parser(
        "convert", help="rewrite a tracking file in the other column layout"
    )
    p_convert.add_argument("infile", type=Path)
    p_convert.add_argument("outfile", type=Path)
    p_convert.add_argument(
        "--to", choices=[f.value for f in TrackingFormat], required=True
    )
    p_convert.add_argument("--frame-base", type=int, choices=(0, 1), default=1)

    return parser


def _cmd_init(args) -> int:
    project = create_project(
        args.project,
        main_video=args.video,
        fps=args.fps,
        frame_count=args.frame_count,
        frame_base=args.frame_base,
    )
    project.close()
    print(f"created project at {args.project}")
    return 0


def _cmd_demo(args) -> int:
    from .fixtures import build_demo_project

    project = build_demo_project(args.project)
    print(
        f"created demo project at {args.project} "
        f"({len(project.state.store)} detections, "
        f"{len(project.state.annotation.listing())} behavior records)"
    )
    project.close()
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    port = args.port if args.port is not None else _env_port()
    project = resume(args.project, recover=args.recover)
    print(f"serving {project.video_name} at http://{args.host}:{port}/")
    try:
        serve(project, port=port, host=args.host, ui_dir=args.ui)
    finally:
        project.close()
    return 0


def _cmd_validate(args) -> int:
    text = args.file.read_text(encoding="utf-8")
    hint = TrackingFormat(args.format) if args.format else None
    detections, fmt = parse_tracking(text, format_hint=hint, frame_base=args.frame_base)
    store = TrackStore.load(detections)
    frames = sorted({det.frame for det in detections})
    identified = sum(det.individual_id is not None for det in detections)
    print(f"format: {fmt.value}")
    print(f"detections: {len(detections)}")
    print(f"tracks: {len(store.track_ids())}")
    if frames:
        print(f"frames: {frames[0]}..{frames[-1]} ({len(frames)} with detections)")
    print(f"identified: {identified}/{len(detections)}")
    print("OK")
    return 0


def _cmd_export(args) -> int:
    project = resume(args.project)
    try:
        out_dir = args.out if args.out is not None else args.project / EXPORT_DIR
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.what == "all":
            files = export_bundle(project)
        else:
            name, text = {
                "tracking": export_tracking,
                "interactions": export_interactions,
                "metadata": export_metadata,
                "notes": export_notes,
            }[args.what](project)
            files = {name: text.encode("utf-8")}
        for name, data in files.items():
            (out_dir / name).write_bytes(data)
            print(out_dir / name)
    finally:
        project.close()
    return 0


def _cmd_align(args) -> int:
    project = resume(args.project)
    try:
        report = alignment_report(project)
    finally:
        project.close()
    text = alignment_csv(report)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
        print(args.out)
    else:
        sys.stdout.write(text)
    for record_id in report.skipped_open:
        print(f"note: record {record_id} is still open, skipped", file=sys.stderr)
    return 0


def _cmd_convert(args) -> int:
    text = args.infile.read_text(encoding="utf-8")
    detections, fmt = parse_tracking(text, frame_base=args.frame_base)
    target = TrackingFormat(args.to)
    args.outfile.write_text(
        serialize_tracking(detections, target, frame_base=args.frame_base),
        encoding="utf-8",
    )
    print(f"{args.infile}: {fmt.value} -> {target.value}, {len(detections)} lines")
    return 0


_COMMANDS = {
    "init": _cmd_init,
    "demo": _cmd_demo,
    "serve": _cmd_serve,
    "validate": _cmd_validate,
    "export": _cmd_export,
    "align": _cmd_align,
    "convert": _cmd_convert,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except LabelingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileExistsError as exc:
        print(f"error: already exists: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
