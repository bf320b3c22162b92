#!/usr/bin/env python3
"""Download the benchmark datasets into data/.

iris ships with the repository; banknote authentication is pulled from the
UCI archive on demand (the acceptance suite skips its check when the file is
absent). Usage:

    python3 tools/fetch_datasets.py [--data-dir data] [--force]
"""

import argparse
import sys
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

DATASETS = {
    "banknote.csv": {
        "url": f"{UCI}/00267/data_banknote_authentication.txt",
        "header": "variance,skewness,curtosis,entropy,class",
    },
    "iris.csv": {
        "url": f"{UCI}/iris/iris.data",
        "header": "sepal_length,sepal_width,petal_length,petal_width,species",
    },
}


def fetch(name: str, spec: dict, data_dir: Path, force: bool) -> bool:
    target = data_dir / name
    if target.exists() and not force:
        print(f"{target}: already present, skipping (use --force to refetch)")
        return True
    try:
        with urllib.request.urlopen(spec["url"], timeout=60) as response:
            body = response.read().decode("utf-8")
    except OSError as err:
        print(f"{target}: download failed: {err}", file=sys.stderr)
        return False
    rows = [line.strip() for line in body.splitlines() if line.strip()]
    target.write_text(spec["header"] + "\n" + "\n".join(rows) + "\n")
    print(f"{target}: {len(rows)} rows")
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data-dir", default="data", type=Path)
    parser.add_argument("--force", action="store_true")
    args = parser.parse_args()
    args.data_dir.mkdir(parents=True, exist_ok=True)
    ok = all(fetch(name, spec, args.data_dir, args.force) for name, spec in DATASETS.items())
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
