"""Regenerate the golden CLI reports (timing stripped)."""

import pathlib
import sys

from fimod import io
from fimod.cli import run

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
from cli_cases import CASES  # noqa: E402


def main():
    out = ROOT / "tests" / "golden"
    out.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        report, _, _ = run(argv)
        report.pop("seconds")
        (out / f"{name}.json").write_text(io.dumps(report))
        print("wrote", name)


if __name__ == "__main__":
    main()
