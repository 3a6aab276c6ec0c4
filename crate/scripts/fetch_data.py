"""Export the two application datasets into data/ as plain CSV.

    pip install rdatasets
    python scripts/fetch_data.py [outdir]
"""

import sys
from pathlib import Path

import rdatasets

SOURCES = {"uis": ("quantreg", "uis"), "jobs": ("mediation", "jobs")}


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data"
    outdir.mkdir(parents=True, exist_ok=True)
    for name, (package, item) in SOURCES.items():
        frame = rdatasets.data(package, item)
        frame = frame.drop(columns=[c for c in frame.columns if c in ("rownames", "Unnamed: 0")])
        path = outdir / f"{name}.csv"
        frame.to_csv(path, index=False)
        print(f"{path}: {len(frame)} rows, {len(frame.columns)} columns")


if __name__ == "__main__":
    main()
