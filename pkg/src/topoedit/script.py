"""Line-oriented JSON edit-script format.

One JSON object per line; the first line is a version header. Brush
rectangles are in diagram data coordinates so scripts are resolution
independent. The same format is written by session logs (server GET /log)
and consumed by the CLI, which is what makes replay equivalence possible.
"""

from __future__ import annotations

import json

from .errors import ScriptParseError

FORMAT_NAME = "topoedit-script"
FORMAT_VERSION = 1

STEP_SELECT = "select"
STEP_EDIT = "edit"
STEP_SAVE_IMAGE = "save_image"
STEP_DUMP_DIAGRAMS = "dump_diagrams"
STEP_DUMP_MASK = "dump_mask"

_OUTPUT_STEPS = (STEP_SAVE_IMAGE, STEP_DUMP_DIAGRAMS, STEP_DUMP_MASK)
_CHANNELS = ("red", "green", "blue", "saturation", "brightness")
_EDIT_KINDS = ("contrast", "denoise", "brightness", "gamma")


def header_line() -> str:
    return json.dumps({"format": FORMAT_NAME, "version": FORMAT_VERSION}, sort_keys=True)


def serialize_steps(steps) -> list:
    lines = [header_line()]
    for step in steps:
        lines.append(json.dumps(step, sort_keys=True))
    return lines


def _require(cond: bool, line_no: int, message: str) -> None:
    if not cond:
        raise ScriptParseError(f"line {line_no}: {message}")


def _validate_rect(rect, line_no: int) -> None:
    _require(isinstance(rect, dict), line_no, "rect must be an object")
    for axis in ("x", "y"):
        r = rect.get(axis)
        _require(
            isinstance(r, list) and len(r) == 2 and all(isinstance(v, (int, float)) for v in r),
            line_no,
            f"rect.{axis} must be [min, max]",
        )
        _require(r[0] < r[1], line_no, f"rect.{axis} must satisfy min < max")


def parse_script(text: str) -> list:
    """Parse script text into a list of step dicts.

    Raises ScriptParseError on structural problems; step *preconditions*
    (such as editing without a selection) are checked at execution time.
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ScriptParseError("empty script: missing header line")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ScriptParseError(f"line 1: invalid JSON: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
        raise ScriptParseError("line 1: missing script header")
    if header.get("version") != FORMAT_VERSION:
        raise ScriptParseError(f"unsupported script version {header.get('version')!r}")

    steps = []
    for line_no, line in enumerate(lines[1:], start=2):
        try:
            step = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ScriptParseError(f"line {line_no}: invalid JSON: {exc}") from exc
        _require(isinstance(step, dict), line_no, "step must be a JSON object")
        op = step.get("op")
        if op == STEP_SELECT:
            _require(step.get("channel") in _CHANNELS, line_no, "select needs a valid channel")
            _require(step.get("diagram") in ("pd", "pv"), line_no, "select needs diagram 'pd' or 'pv'")
            rects = step.get("rects")
            _require(isinstance(rects, list) and rects, line_no, "select needs at least one rect")
            for rect in rects:
                _validate_rect(rect, line_no)
        elif op == STEP_EDIT:
            _require(step.get("kind") in _EDIT_KINDS, line_no, "edit needs a valid kind")
            _require(isinstance(step.get("scale"), (int, float)), line_no, "edit needs a numeric scale")
        elif op in _OUTPUT_STEPS:
            name = step.get("name")
            _require(isinstance(name, str) and name, line_no, f"{op} needs an output name")
            _require("/" not in name and ".." not in name, line_no, "output name must be a plain file name")
            if op == STEP_DUMP_DIAGRAMS:
                _require(step.get("channel") in _CHANNELS, line_no, "dump_diagrams needs a channel")
        else:
            _require(False, line_no, f"unknown step op {op!r}")
        steps.append(step)
    return steps


def load_script(path) -> list:
    try:
        text = open(path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise ScriptParseError(f"cannot read script {path}: {exc}") from exc
    return parse_script(text)
