#!/usr/bin/env python3
"""Download the hypergraph dataset files used by the gated tests.

Fetches the paired nverts/simplices text files of the Benson corpus
format into data/ at the repository root.  The ingestion test and the
dataset demo pick them up from there; both skip cleanly when the
files are absent, so running this script is optional.

Sources are the dataset pages at
https://www.cs.cornell.edu/~arb/data/ which serve one zip archive per
dataset containing <name>-nverts.txt and <name>-simplices.txt.
"""

import argparse
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

BASE = "https://www.cs.cornell.edu/~arb/data"

DATASETS = {
    "NDC-classes": f"{BASE}/NDC-classes/NDC-classes.zip",
    "contact-primary-school":
        f"{BASE}/contact-primary-school/contact-primary-school.zip",
    "email-Eu": f"{BASE}/email-Eu/email-Eu.zip",
}

WANTED_SUFFIXES = ("-nverts.txt", "-simplices.txt", "-node-labels.txt")


def fetch(name: str, url: str, dest: Path) -> bool:
    print(f"{name}: downloading {url}")
    try:
        with urllib.request.urlopen(url, timeout=120) as resp:
            payload = resp.read()
    except OSError as exc:
        print(f"{name}: download failed: {exc}", file=sys.stderr)
        return False
    try:
        archive = zipfile.ZipFile(io.BytesIO(payload))
    except zipfile.BadZipFile as exc:
        print(f"{name}: not a zip archive: {exc}", file=sys.stderr)
        return False
    extracted = 0
    for member in archive.namelist():
        base = Path(member).name
        if base.endswith(WANTED_SUFFIXES) and base.startswith(name):
            (dest / base).write_bytes(archive.read(member))
            print(f"  wrote {dest / base}")
            extracted += 1
    if extracted == 0:
        print(f"{name}: archive held no expected text files", file=sys.stderr)
        return False
    return True


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("names", nargs="*", default=[],
                        help="datasets to fetch (default: NDC-classes)")
    parser.add_argument("--dest", default=None,
                        help="output directory (default: <repo>/data)")
    args = parser.parse_args(argv)

    names = args.names or ["NDC-classes"]
    unknown = [n for n in names if n not in DATASETS]
    if unknown:
        print(f"unknown datasets: {unknown}; known: {sorted(DATASETS)}",
              file=sys.stderr)
        return 2

    dest = Path(args.dest) if args.dest else (
        Path(__file__).resolve().parent.parent / "data")
    dest.mkdir(parents=True, exist_ok=True)

    ok = all(fetch(n, DATASETS[n], dest) for n in names)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
