"""Append-only command journal with crash recovery and state checkpoints.

One canonical JSON line per command, fsync'd before the command is
acknowledged. A partial final line (the signature of a crash mid-append) is
dropped automatically on read; corruption anywhere earlier raises
CorruptJournal unless recovery to the last valid prefix is requested.
"""

from __future__ import annotations

import json
import logging
import os
import re
from dataclasses import dataclass
from pathlib import Path

from .commands import Command, decode_command, encode_command
from .errors import CorruptJournal

logger = logging.getLogger(__name__)

CHECKPOINT_PATTERN = re.compile(r"checkpoint_(\d{8})\.json$")


class Journal:
    """Append handle over the journal file. Reading goes through read_journal."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._fh = open(self.path, "a", encoding="utf-8")

    def append(self, cmd: Command) -> None:
        self._fh.write(encode_command(cmd) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()


@dataclass
class JournalContents:
    commands: list[Command]
    valid_bytes: int
    dropped_tail: bool
    warning: str | None


def read_journal(path: Path, recover: bool = False) -> JournalContents:
    """Read and validate the journal: JSON-decodable lines, gapless seq from 1.

    A bad *final* line is treated as a torn write and dropped with a warning.
    A bad line earlier in the file raises CorruptJournal, or truncates to the
    last valid prefix when ``recover`` is set.
    """
    raw = Path(path).read_bytes()
    commands: list[Command] = []
    offset = 0
    warning = None
    dropped = False
    for chunk in raw.split(b"\n"):
        if offset >= len(raw):
            break
        line_end = offset + len(chunk) + 1  # +1 for the newline
        seq = len(commands) + 1
        problem = None
        torn = False
        if line_end > len(raw):
            problem = "truncated final line"
            torn = True
        else:
            try:
                cmd = decode_command(chunk.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError) as exc:
                problem = f"undecodable line ({type(exc).__name__})"
                # an undecodable last line is the signature of a torn append
                torn = line_end >= len(raw)
            else:
                if cmd.seq != seq:
                    problem = f"sequence number {cmd.seq} where {seq} expected"
                elif encode_command(cmd) != chunk.decode("utf-8"):
                    problem = "non-canonical command encoding"
        if problem is None:
            commands.append(cmd)
            offset = line_end
            continue
        if torn or recover:
            warning = f"dropping journal tail at command {seq}: {problem}"
            logger.warning(warning)
            dropped = True
            break
        raise CorruptJournal(seq, problem)
    return JournalContents(
        commands=commands, valid_bytes=offset, dropped_tail=dropped, warning=warning
    )


def truncate_journal(path: Path, valid_bytes: int) -> None:
    with open(path, "r+b") as fh:
        fh.truncate(valid_bytes)
        fh.flush()
        os.fsync(fh.fileno())


def checkpoint_path(directory: Path, seq: int) -> Path:
    return Path(directory) / f"checkpoint_{seq:08d}.json"


def write_checkpoint(directory: Path, seq: int, state_json: dict) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = checkpoint_path(directory, seq)
    tmp = path.with_suffix(".json.tmp")
    tmp.write_text(
        json.dumps({"seq": seq, "state": state_json}, separators=(",", ":")),
        encoding="utf-8",
    )
    tmp.replace(path)
    return path


def latest_checkpoint(directory: Path, max_seq: int) -> tuple[int, dict] | None:
    """Newest loadable checkpoint with seq <= max_seq, or None."""
    directory = Path(directory)
    if not directory.is_dir():
        return None
    candidates = []
    for entry in directory.iterdir():
        match = CHECKPOINT_PATTERN.match(entry.name)
        if match:
            candidates.append((int(match.group(1)), entry))
    for seq, path in sorted(candidates, reverse=True):
        if seq > max_seq:
            continue
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            if data["seq"] == seq:
                return seq, data["state"]
        except (OSError, ValueError, KeyError):
            logger.warning("skipping unreadable checkpoint %s", path)
    return None
