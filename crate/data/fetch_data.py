#!/usr/bin/env python3
"""Fetch the benchmark datasets into UCI raw layout.

Default mode downloads the original files from the UCI repository:

    python3 data/fetch_data.py

Offline hosts can rebuild the same layouts from copies bundled inside
public PyPI packages (pydataset, Orange3, imbalanced-databases):

    python3 data/fetch_data.py --from-pypi

Both modes write:
    breast-cancer-wisconsin.data   id, 9 attributes, class (2 benign, 4 malignant), '?' = missing
    processed.cleveland.data       13 attributes, diagnosis (0 healthy, >=1 disease), '?' = missing
    pima-indians-diabetes.data     8 attributes, class (0/1)
"""

import argparse
import csv
import io
import os
import subprocess
import sys
import tarfile
import tempfile
import urllib.request
import zipfile

HERE = os.path.dirname(os.path.abspath(__file__))

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"
URLS = {
    "breast-cancer-wisconsin.data": f"{UCI}/breast-cancer-wisconsin/breast-cancer-wisconsin.data",
    "processed.cleveland.data": f"{UCI}/heart-disease/processed.cleveland.data",
    # UCI withdrew the Pima file; this mirror is byte-identical to the original.
    "pima-indians-diabetes.data": "https://raw.githubusercontent.com/jbrownlee/Datasets/master/pima-indians-diabetes.data.csv",
}


def write(name, lines):
    with open(os.path.join(HERE, name), "w") as f:
        for line in lines:
            f.write(line + "\n")
    print(f"wrote {name}: {len(lines)} records")


def from_uci():
    for name, url in URLS.items():
        with urllib.request.urlopen(url) as r:
            text = r.read().decode()
        write(name, [l.strip() for l in text.splitlines() if l.strip()])


def pip_download(pkg, dest):
    subprocess.check_call(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "-d", dest, pkg]
    )
    return [os.path.join(dest, f) for f in os.listdir(dest)]


def cancer_from_pydataset(tmp):
    (sdist,) = pip_download("pydataset==0.2.0", os.path.join(tmp, "pydataset"))
    with tarfile.open(sdist) as outer:
        res = outer.extractfile("pydataset-0.2.0/pydataset/resources.tar.gz").read()
    with tarfile.open(fileobj=io.BytesIO(res)) as inner:
        raw = inner.extractfile("resources/rdata/csv/MASS/biopsy.csv").read().decode()
    lines = []
    for row in list(csv.reader(io.StringIO(raw)))[1:]:
        ident, attrs, label = row[1], row[2:11], row[11]
        attrs = ["?" if a == "NA" else a for a in attrs]
        lines.append(",".join([ident] + attrs + ["2" if label == "benign" else "4"]))
    write("breast-cancer-wisconsin.data", lines)


HEART_CODES = {
    1: {"female": "0.0", "male": "1.0"},
    2: {"typical ang": "1.0", "atypical ang": "2.0", "non-anginal": "3.0", "asymptomatic": "4.0"},
    6: {"normal": "0.0", "ST-T abnormal": "1.0", "left vent hypertrophy": "2.0"},
    10: {"upsloping": "1.0", "flat": "2.0", "downsloping": "3.0"},
    12: {"normal": "3.0", "fixed defect": "6.0", "reversable defect": "7.0"},
}


def heart_from_orange(tmp):
    wheel = [w for w in pip_download("Orange3==3.39.0", os.path.join(tmp, "orange")) if w.endswith(".whl")][0]
    with zipfile.ZipFile(wheel) as z:
        raw = z.read("Orange/datasets/heart_disease.tab").decode()
    lines = []
    for row in raw.splitlines()[3:]:
        cols = row.split("\t")
        out = []
        for i, v in enumerate(cols):
            if v in ("", "?"):
                out.append("?")
            elif i in HEART_CODES:
                out.append(HEART_CODES[i][v])
            elif i == 13:
                out.append(v)
            else:
                out.append(str(float(v)))
        lines.append(",".join(out))
    write("processed.cleveland.data", lines)


def diabetes_from_imbalanced_databases(tmp):
    wheel = pip_download("imbalanced-databases==0.1.1", os.path.join(tmp, "imbdb"))[0]
    with zipfile.ZipFile(wheel) as z:
        raw = z.read("imbalanced_databases/data/pima/pima.dat").decode()
    lines = []
    for row in raw.splitlines():
        if not row.strip() or row.startswith("@"):
            continue
        cols = [c.strip() for c in row.split(",")]
        cols[-1] = "1" if cols[-1] == "positive" else "0"
        lines.append(",".join(cols))
    write("pima-indians-diabetes.data", lines)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--from-pypi", action="store_true", help="rebuild from PyPI-bundled copies")
    args = ap.parse_args()
    if not args.from_pypi:
        from_uci()
        return
    with tempfile.TemporaryDirectory() as tmp:
        cancer_from_pydataset(tmp)
        heart_from_orange(tmp)
        diabetes_from_imbalanced_databases(tmp)


if __name__ == "__main__":
    main()
