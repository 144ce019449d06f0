"""Write every catalog entry as a system file (one ``<id>.sys`` per entry)."""

from __future__ import annotations

import argparse
from pathlib import Path

from adjflow import catalog


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", nargs="?", default="systems")
    args = parser.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for entry in catalog.entries():
        (out / f"{entry.id}.sys").write_text(entry.export(), encoding="utf-8")
    print(f"wrote {len(catalog.ENTRIES)} files to {out}/")


if __name__ == "__main__":
    main()
