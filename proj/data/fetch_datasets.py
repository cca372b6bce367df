#!/usr/bin/env python3
"""Rebuild the benchmark CSVs in this directory from packaged copies of UCI datasets.

Sources (fetched with `pip download --no-deps`):
  pydataset 0.2.0  -> iris, breast-w (MASS::biopsy), diabetes (MASS::Pima.tr + Pima.te)
  Orange3          -> heart (Cleveland heart disease), ionosphere
  scikit-learn     -> wine
"""
import csv
import io
import pathlib
import subprocess
import sys
import tarfile
import tempfile
import zipfile

HERE = pathlib.Path(__file__).resolve().parent


def write(name, header, rows):
    with open(HERE / f"{name}.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"{name}: {len(rows)} rows, {len(header) - 1} predictors")


def clean(v):
    v = v.strip()
    return "?" if v in ("", "NA", "?") else v.replace(" ", "_")


def rdata(tar, member):
    f = tar.extractfile(member)
    rows = list(csv.reader(io.TextIOWrapper(f)))
    return rows[0][1:], [[clean(c) for c in r[1:]] for r in rows[1:]]


def orange_tab(zf, member):
    lines = zf.read(member).decode().splitlines()
    header = [h.replace(" ", "_").replace(">", "gt") for h in lines[0].split("\t")]
    rows = [[clean(c) for c in l.split("\t")] for l in lines[3:] if l.strip()]
    return header, rows


def main():
    tmp = pathlib.Path(tempfile.mkdtemp())
    for pkg in ("pydataset==0.2.0", "Orange3"):
        subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps", "-q",
                        "-d", str(tmp), pkg], check=True)

    outer = tarfile.open(next(tmp.glob("pydataset-*.tar.gz")))
    inner = tarfile.open(fileobj=outer.extractfile("pydataset-0.2.0/pydataset/resources.tar.gz"))
    base = "resources/rdata/csv/"

    h, rows = rdata(inner, base + "datasets/iris.csv")
    write("iris", h, rows)

    h, rows = rdata(inner, base + "MASS/biopsy.csv")
    write("breast-w", h[1:], [r[1:] for r in rows])  # drop sample ID

    h, tr = rdata(inner, base + "MASS/Pima.tr.csv")
    _, te = rdata(inner, base + "MASS/Pima.te.csv")
    write("diabetes", h, tr + te)

    zf = zipfile.ZipFile(next(tmp.glob("orange3-*.whl")))
    h, rows = orange_tab(zf, "Orange/datasets/heart_disease.tab")
    write("heart", h, rows)
    h, rows = orange_tab(zf, "Orange/tests/datasets/ionosphere.tab")
    write("ionosphere", h, rows)

    from sklearn.datasets import load_wine
    wine = load_wine()
    write("wine", list(wine.feature_names) + ["class"],
          [[repr(float(v)) if not float(v).is_integer() else str(int(v)) for v in x] + [f"c{y}"]
           for x, y in zip(wine.data, wine.target)])


if __name__ == "__main__":
    main()
