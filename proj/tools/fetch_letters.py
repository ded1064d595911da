#!/usr/bin/env python3
"""Fetch the UCI letter-recognition records and write them in UCI layout.

The records are taken from the KEEL copy bundled in the ``keel-ds`` wheel on
PyPI (label in the last column, rows permuted relative to the UCI file). This
script moves the label to the first column and keeps the KEEL row order.

Usage: fetch_letters.py [output path]   (default: data/letter-recognition.data)
"""
import glob
import pathlib
import subprocess
import sys
import tempfile
import zipfile

MEMBER = "keel_ds/data/balanced/raw/letter.dat"


def main() -> int:
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/letter-recognition.data")
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "keel-ds==0.2.5", "-d", tmp],
            check=True,
        )
        wheel = glob.glob(f"{tmp}/keel_ds-*.whl")[0]
        raw = zipfile.ZipFile(wheel).read(MEMBER).decode("ascii")

    lines = []
    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 17:
            raise SystemExit(f"unexpected record: {line!r}")
        lines.append(",".join([fields[-1]] + fields[:-1]))

    if len(lines) != 20000:
        raise SystemExit(f"expected 20000 records, got {len(lines)}")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} records to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
