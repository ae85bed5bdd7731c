"""Project lifecycle: creation, journaled mutation, resume after restart.

A project directory holds:

    project.json        creation-time config (video, fps, frame base)
    journal.jsonl       the command journal (single writer)
    checkpoints/        periodic full-state checkpoints to bound resume time
    snapshots/          exported frame images and their registry
    exports/            CSV / tracking exports written by the CLI

Every mutation is journaled before it is applied, so the in-memory state at
version N always equals a replay of commands 1..N from the empty state.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .commands import Command, canonical_params, handlers_for
from .errors import BadFps, CorruptJournal
from .journal import Journal, latest_checkpoint, read_journal, truncate_journal, write_checkpoint
from .state import ProjectState, state_from_json, state_hash, state_to_json

logger = logging.getLogger(__name__)

PROJECT_FILE = "project.json"
JOURNAL_FILE = "journal.jsonl"
CHECKPOINT_DIR = "checkpoints"
SNAPSHOT_DIR = "snapshots"
EXPORT_DIR = "exports"

CHECKPOINT_INTERVAL = 1000


@dataclass
class ProjectConfig:
    main_video: str
    fps: float
    frame_count: int | None
    frame_base: int
    created_at: str

    def to_json(self) -> dict:
        return {
            "main_video": self.main_video,
            "fps": self.fps,
            "frame_count": self.frame_count,
            "frame_base": self.frame_base,
            "created_at": self.created_at,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ProjectConfig":
        return cls(
            main_video=data["main_video"],
            fps=data["fps"],
            frame_count=data.get("frame_count"),
            frame_base=data.get("frame_base", 1),
            created_at=data.get("created_at", ""),
        )


class Project:
    """An open project: config, live state, and the journal handle."""

    def __init__(
        self,
        directory: Path,
        config: ProjectConfig,
        state: ProjectState,
        journal: Journal,
        version: int,
    ):
        self.directory = Path(directory)
        self.config = config
        self.state = state
        self.journal = journal
        self.version = version
        self.listeners: list[Callable[[int], None]] = []

    @property
    def video_name(self) -> str:
        """Basename of the main video without extension; prefixes all exports."""
        return Path(self.config.main_video).stem

    @property
    def fps(self) -> float:
        return self.config.fps

    def apply(self, kind: str, params: dict):
        """Validate, journal (fsync), then apply one command.

        An invalid command leaves both journal and state untouched; an IO
        failure while appending leaves the state untouched. Returns the
        command's result and bumps the state version to the journal length.
        """
        params = canonical_params(kind, params)
        check, run = handlers_for(kind)
        check(self.state, params)
        cmd = Command(seq=self.version + 1, ts=time.time(), kind=kind, params=params)
        self.journal.append(cmd)
        result = run(self.state, params)
        self.version = cmd.seq
        if self.version % CHECKPOINT_INTERVAL == 0:
            write_checkpoint(
                self.directory / CHECKPOINT_DIR, self.version, state_to_json(self.state)
            )
        for listener in self.listeners:
            listener(self.version)
        return result

    def state_hash(self) -> str:
        return state_hash(self.state)

    def close(self) -> None:
        self.journal.close()


def create_project(
    directory: Path,
    main_video: str,
    fps: float,
    frame_count: int | None = None,
    frame_base: int = 1,
) -> Project:
    if not fps > 0:
        raise BadFps(fps)
    if frame_base not in (0, 1):
        raise ValueError(f"frame base must be 0 or 1, got {frame_base}")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    config_path = directory / PROJECT_FILE
    if config_path.exists():
        raise FileExistsError(f"project already exists at {directory}")
    config = ProjectConfig(
        main_video=str(main_video),
        fps=float(fps),
        frame_count=frame_count,
        frame_base=frame_base,
        created_at=time.strftime("%Y-%m-%dT%H:%M:%S"),
    )
    config_path.write_text(json.dumps(config.to_json(), indent=2), encoding="utf-8")
    journal_path = directory / JOURNAL_FILE
    journal_path.touch()
    state = ProjectState(frame_base=config.frame_base)
    return Project(directory, config, state, Journal(journal_path), version=0)


def replay(commands: list[Command], state: ProjectState) -> ProjectState:
    """Apply journaled commands in order; any failure means corruption."""
    for cmd in commands:
        _, run = handlers_for(cmd.kind)
        try:
            run(state, cmd.params)
        except Exception as exc:
            raise CorruptJournal(cmd.seq, f"replay failed: {exc}") from exc
    return state


def resume(directory: Path, recover: bool = False) -> Project:
    """Reopen a project at exactly the state it had before shutdown."""
    directory = Path(directory)
    config_path = directory / PROJECT_FILE
    if not config_path.exists():
        raise FileNotFoundError(f"no project at {directory}")
    config = ProjectConfig.from_json(json.loads(config_path.read_text(encoding="utf-8")))

    journal_path = directory / JOURNAL_FILE
    contents = read_journal(journal_path, recover=recover)
    if contents.dropped_tail:
        truncate_journal(journal_path, contents.valid_bytes)

    commands = contents.commands
    state = None
    checkpoint = latest_checkpoint(directory / CHECKPOINT_DIR, len(commands))
    if checkpoint is not None:
        seq, state_json = checkpoint
        try:
            state = state_from_json(state_json, frame_base=config.frame_base)
            commands = commands[seq:]
        except Exception:
            logger.warning("checkpoint %d unusable, replaying full journal", seq)
            state = None
            commands = contents.commands
    if state is None:
        state = ProjectState(frame_base=config.frame_base)
    replay(commands, state)
    return Project(
        directory,
        config,
        state,
        Journal(journal_path),
        version=len(contents.commands),
    )


def synced_frame(main_frame: int, frame_offset: int, frame_count: int | None) -> int:
    """Frame a secondary view shows for a main frame: offset then clamp."""
    frame = main_frame + frame_offset
    if frame < 0:
        return 0
    if frame_count is not None and frame > frame_count - 1:
        return frame_count - 1
    return frame
