"""Readers and writers for the four ingest file formats.

Tracking files follow the MOT Challenge per-detection convention: one
comma-separated line per detection. The simplified variant has 8 columns
(frame, track id, bbox left, bbox top, width, height, detection confidence,
class), the extended variant appends individual id and identity confidence
for 10 columns. Individuals and ethogram files are one value per line.

Frames are 1-based on disk by default and 0-based in memory; ``frame_base``
shifts that for tools that emit 0-based files. Serialization is canonical
(shortest round-trip decimals, integers without a decimal point) so that
``parse -> serialize -> parse`` is an exact identity and a second
serialization pass is byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DuplicateName, InvariantViolation, MalformedLine, MixedFormats

# MOT files mark an absent individual id / confidence with -1.
MISSING = -1


class TrackingFormat(Enum):
    SIMPLIFIED = "simplified"
    EXTENDED = "extended"

    @property
    def columns(self) -> int:
        return 8 if self is TrackingFormat.SIMPLIFIED else 10


_COLUMN_COUNTS = {fmt.columns: fmt for fmt in TrackingFormat}


@dataclass(frozen=True, slots=True)
class Detection:
    """One bounding-box observation: a box on one frame belonging to one track.

    ``x``/``y`` locate the top-left corner in pixels. ``individual_id`` is a
    1-based index into the individuals roster; ``id_conf`` accompanies it and
    both are None when the detection carries no identity.
    """

    frame: int
    track_id: int
    x: float
    y: float
    w: float
    h: float
    det_conf: float
    class_label: int
    individual_id: int | None = None
    id_conf: float | None = None

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.w, self.h)


def _parse_int(field: str, line_no: int, what: str) -> int:
    try:
        return int(field)
    except ValueError:
        pass
    try:
        value = float(field)
    except ValueError:
        raise MalformedLine(line_no, f"non-numeric {what}: {field!r}") from None
    if not value.is_integer():
        raise MalformedLine(line_no, f"{what} must be an integer, got {field!r}")
    return int(value)


def _parse_float(field: str, line_no: int, what: str) -> float:
    try:
        return float(field)
    except ValueError:
        raise MalformedLine(line_no, f"non-numeric {what}: {field!r}") from None


def _parse_line(
    fields: list[str], line_no: int, fmt: TrackingFormat, frame_base: int
) -> Detection:
    frame = _parse_int(fields[0], line_no, "frame") - frame_base
    track_id = _parse_int(fields[1], line_no, "track id")
    x = _parse_float(fields[2], line_no, "bbox x")
    y = _parse_float(fields[3], line_no, "bbox y")
    w = _parse_float(fields[4], line_no, "bbox width")
    h = _parse_float(fields[5], line_no, "bbox height")
    det_conf = _parse_float(fields[6], line_no, "detection confidence")
    class_label = _parse_int(fields[7], line_no, "class label")

    if frame < 0:
        raise InvariantViolation(
            f"frame {frame + frame_base} below frame base {frame_base}", line_no
        )
    if track_id < 1:
        raise InvariantViolation(f"track id must be positive, got {track_id}", line_no)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvariantViolation("bbox coordinates must be finite", line_no)
    if not (w > 0 and math.isfinite(w)):
        raise InvariantViolation(f"bbox width must be positive, got {w}", line_no)
    if not (h > 0 and math.isfinite(h)):
        raise InvariantViolation(f"bbox height must be positive, got {h}", line_no)
    if not 0.0 <= det_conf <= 1.0:
        raise InvariantViolation(
            f"detection confidence {det_conf} outside [0, 1]", line_no
        )

    individual_id: int | None = None
    id_conf: float | None = None
    if fmt is TrackingFormat.EXTENDED:
        raw_id = _parse_int(fields[8], line_no, "individual id")
        raw_conf = _parse_float(fields[9], line_no, "identity confidence")
        if raw_id == MISSING and raw_conf == MISSING:
            pass
        elif raw_id == MISSING or raw_conf == MISSING:
            raise InvariantViolation(
                "individual id and identity confidence must both be set or both -1",
                line_no,
            )
        else:
            if raw_id < 0:
                raise InvariantViolation(
                    f"individual id must be >= 0 or the -1 sentinel, got {raw_id}",
                    line_no,
                )
            if not 0.0 <= raw_conf <= 1.0:
                raise InvariantViolation(
                    f"identity confidence {raw_conf} outside [0, 1]", line_no
                )
            individual_id = raw_id
            id_conf = raw_conf

    return Detection(
        frame=frame,
        track_id=track_id,
        x=x,
        y=y,
        w=w,
        h=h,
        det_conf=det_conf,
        class_label=class_label,
        individual_id=individual_id,
        id_conf=id_conf,
    )


def parse_tracking(
    text: str,
    format_hint: TrackingFormat | None = None,
    frame_base: int = 1,
) -> tuple[list[Detection], TrackingFormat]:
    """Parse a tracking file into detections, in file order.

    The format is taken from ``format_hint`` or auto-detected from the column
    count of the first non-empty line. Raises MalformedLine for wrong column
    counts or non-numeric fields, InvariantViolation for out-of-range values,
    and MixedFormats when a later line has the other variant's column count.
    """
    detections: list[Detection] = []
    fmt = format_hint
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(",")]
        if fmt is None:
            detected = _COLUMN_COUNTS.get(len(fields))
            if detected is None:
                raise MalformedLine(
                    line_no,
                    f"expected 8 or 10 columns, got {len(fields)}",
                )
            fmt = detected
        elif len(fields) != fmt.columns:
            if len(fields) in _COLUMN_COUNTS:
                raise MixedFormats(line_no, fmt.columns, len(fields))
            raise MalformedLine(
                line_no,
                f"expected {fmt.columns} columns, got {len(fields)}",
            )
        detections.append(_parse_line(fields, line_no, fmt, frame_base))
    return detections, fmt or TrackingFormat.SIMPLIFIED


def format_number(value: float) -> str:
    """Shortest decimal text that parses back to exactly ``value``.

    Integral values drop the decimal point so canonical files stay close to
    upstream tracker output.
    """
    if math.isfinite(value) and value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def serialize_tracking(
    detections: list[Detection],
    fmt: TrackingFormat,
    frame_base: int = 1,
) -> str:
    """Render detections in the given format, preserving list order.

    Detections without an identity serialize the -1 sentinel in both extended
    identity columns. The output ends with a newline unless empty.
    """
    rows = []
    for det in detections:
        row = (
            f"{det.frame + frame_base},{det.track_id},"
            f"{format_number(det.x)},{format_number(det.y)},"
            f"{format_number(det.w)},{format_number(det.h)},"
            f"{format_number(det.det_conf)},{det.class_label}"
        )
        if fmt is TrackingFormat.EXTENDED:
            if det.individual_id is None or det.id_conf is None:
                row += f",{MISSING},{MISSING}"
            else:
                row += f",{det.individual_id},{format_number(det.id_conf)}"
        rows.append(row)
    if not rows:
        return ""
    return "\n".join(rows) + "\n"


def _parse_name_list(text: str) -> list[str]:
    names: list[str] = []
    seen: set[str] = set()
    for line in text.splitlines():
        name = line.strip()
        if not name:
            continue
        if name in seen:
            raise DuplicateName(name)
        seen.add(name)
        names.append(name)
    return names


def parse_roster(text: str) -> list[str]:
    """Parse an individuals file: one name per line, order-preserving."""
    return _parse_name_list(text)


def parse_ethogram(text: str) -> list[str]:
    """Parse an ethogram file: one action/interaction label per line."""
    return _parse_name_list(text)
