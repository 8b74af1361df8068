#!/usr/bin/env python3
"""Regenerate the committed golden CLI reports in tests/golden/.

The goldens pin the exact bytes of `sensor-shapley analyze --scenario N
--format json` with the default metric. Rerun after any intentional change
to report content or rendering, and eyeball the diff before committing.
"""

import contextlib
import io
import sys
from pathlib import Path

from sensor_shapley.cli import main

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "golden"


def capture(argv) -> str:
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(argv)
    if code != 0:
        raise SystemExit(f"command {argv} exited with {code}")
    return out.getvalue()


def regenerate() -> None:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for sid in (1, 2):
        text = capture(["analyze", "--scenario", str(sid), "--format", "json"])
        path = GOLDEN_DIR / f"analyze_scenario{sid}.json"
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path} ({len(text)} bytes)")


if __name__ == "__main__":
    sys.exit(regenerate())
