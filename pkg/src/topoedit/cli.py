"""Batch command-line driver.

``topoedit run`` executes a deterministic edit script against an image and
writes the final PNG (plus any requested intermediate outputs) into an
output directory. ``topoedit diagrams`` dumps diagram point lists for one
channel. ``topoedit serve`` starts the local HTTP session service.

Exit codes: 0 success, 2 script/input parse error, 3 step failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import script as script_format
from . import serialize
from .edits import EditOp
from .errors import ScriptParseError, StepPreconditionError, TopoeditError
from .features import BrushRect, mask_to_png_bytes
from .field import ChannelId, load_image, save_image
from .session import Session, analyze_field
from .bruteforce import pairs_match

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_STEP = 3


def _diagram_payload(sess: Session, channel: ChannelId) -> dict:
    analysis = sess.analysis(channel)
    return {
        "channel": channel.value,
        "pd": [
            {"pair": pt.pair_id, "x": pt.x, "y": pt.y, "kind": pt.kind.value}
            for pt in analysis.pd_points
        ],
        "pv": [
            {"pair": pt.pair_id, "x": pt.x, "y": pt.y, "kind": pt.kind.value}
            for pt in analysis.pv_points
        ],
    }


def run_script(image_path, script_path, out_dir, connectivity: int = 8, dump_trees: bool = False) -> int:
    """Execute a script; returns a process exit code."""
    try:
        steps = script_format.load_script(script_path)
    except ScriptParseError as exc:
        print(f"script error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        image = load_image(image_path)
    except (TopoeditError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sess = Session(image, connectivity=connectivity)

    for index, step in enumerate(steps):
        try:
            _run_step(sess, step, out)
        except (TopoeditError, ValueError) as exc:
            failure = StepPreconditionError(index, str(exc))
            print(f"step error: {failure}", file=sys.stderr)
            return EXIT_STEP

    save_image(sess.render(), out / "final.png")
    if dump_trees:
        for channel in ChannelId:
            analysis = sess.analysis(channel)
            payload = {
                "join": serialize.tree_to_dict(analysis.join_tree),
                "split": serialize.tree_to_dict(analysis.split_tree),
                "contour": serialize.contour_tree_to_dict(analysis.contour),
                "pairs": serialize.pairs_to_dict(analysis.pairs),
            }
            (out / f"trees_{channel.value}.json").write_text(serialize.dumps(payload))
    return EXIT_OK


def _run_step(sess: Session, step: dict, out: Path) -> None:
    op = step["op"]
    if op == script_format.STEP_SELECT:
        channel = ChannelId.parse(step["channel"])
        rects = [
            BrushRect(diagram=step["diagram"], x=tuple(r["x"]), y=tuple(r["y"]))
            for r in step["rects"]
        ]
        sess.select(channel, step["diagram"], rects)
    elif op == script_format.STEP_EDIT:
        sess.apply_to_selection(EditOp(step["kind"]), float(step["scale"]))
    elif op == script_format.STEP_SAVE_IMAGE:
        save_image(sess.render(), out / step["name"])
    elif op == script_format.STEP_DUMP_DIAGRAMS:
        channel = ChannelId.parse(step["channel"])
        (out / step["name"]).write_text(serialize.dumps(_diagram_payload(sess, channel)))
    elif op == script_format.STEP_DUMP_MASK:
        (out / step["name"]).write_bytes(mask_to_png_bytes(sess.selection_mask()))


def dump_diagrams(image_path, channel_name: str, out_path, connectivity: int = 8) -> int:
    try:
        image = load_image(image_path)
        channel = ChannelId.parse(channel_name)
    except (TopoeditError, FileNotFoundError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sess = Session(image, connectivity=connectivity)
    Path(out_path).write_text(serialize.dumps(_diagram_payload(sess, channel)))
    return EXIT_OK


def _block_downsample(values: np.ndarray, size: int) -> np.ndarray:
    h, w = values.shape
    bh, bw = max(1, h // size), max(1, w // size)
    th, tw = (h // bh) * bh, (w // bw) * bw
    return values[:th, :tw].reshape(th // bh, bh, tw // bw, bw).mean(axis=(1, 3))


def seed_check(image_path, connectivity: int = 8, size: int = 8, levels: int = 6) -> int:
    """Compare the sweep pipeline against the brute-force oracle on a
    downsampled, coarsely quantized copy of the input's brightness channel."""
    try:
        image = load_image(image_path)
    except (TopoeditError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sess = Session(image, connectivity=connectivity)
    values = sess.field(ChannelId.BRIGHTNESS).values
    small = np.floor(_block_downsample(values, size) / 256.0 * levels).clip(0, levels - 1)
    ok = True
    for conn in (4, 8):
        field = sess.field(ChannelId.BRIGHTNESS).with_values(small)
        analysis = analyze_field(field, connectivity=conn)
        match = pairs_match(small, analysis.pairs, connectivity=conn)
        print(f"seed-check connectivity={conn}: {'PASS' if match else 'FAIL'}")
        ok = ok and match
    return EXIT_OK if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topoedit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute an edit script")
    run.add_argument("--input", required=True, help="input PNG or ASCII PPM")
    run.add_argument("--script", required=True, help="edit script (one JSON step per line)")
    run.add_argument("--out-dir", required=True, help="directory for outputs")
    run.add_argument("--connectivity", type=int, choices=(4, 8), default=8)
    run.add_argument("--dump-trees", action="store_true", help="also dump tree JSON per channel")
    run.add_argument("--seed-check", action="store_true", help="run the oracle suite on the input's downsample")

    diagrams = sub.add_parser("diagrams", help="dump PD and PV point lists as JSON")
    diagrams.add_argument("--input", required=True)
    diagrams.add_argument("--channel", required=True)
    diagrams.add_argument("--out", required=True)
    diagrams.add_argument("--connectivity", type=int, choices=(4, 8), default=8)

    serve = sub.add_parser("serve", help="start the local HTTP session service")
    serve.add_argument("--port", type=int, default=7230)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--connectivity", type=int, choices=(4, 8), default=8)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        if args.seed_check:
            status = seed_check(args.input, connectivity=args.connectivity)
            if status != EXIT_OK:
                return status
        return run_script(
            args.input,
            args.script,
            args.out_dir,
            connectivity=args.connectivity,
            dump_trees=args.dump_trees,
        )
    if args.command == "diagrams":
        return dump_diagrams(args.input, args.channel, args.out, connectivity=args.connectivity)
    if args.command == "serve":
        from .server import serve

        serve(host=args.host, port=args.port, connectivity=args.connectivity)
        return EXIT_OK
    return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
