"""Smoke test for the cubic_fatpoints_py extension.

Build first with `cargo build -p cubic-fatpoints-py --release` (or without
--release), then run `python3 python/smoke_test.py`. Set CUBIC_FATPOINTS_LIB
to load a specific shared library instead.
"""

import importlib.machinery
import importlib.util
import os
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def find_library():
    explicit = os.environ.get("CUBIC_FATPOINTS_LIB")
    if explicit:
        return pathlib.Path(explicit)
    names = ["libcubic_fatpoints_py.so", "libcubic_fatpoints_py.dylib", "cubic_fatpoints_py.dll"]
    for profile in ("release", "debug"):
        for name in names:
            path = ROOT / "target" / profile / name
            if path.exists():
                return path
    sys.exit("extension not built; run: cargo build -p cubic-fatpoints-py --release")


def load():
    path = find_library()
    loader = importlib.machinery.ExtensionFileLoader("cubic_fatpoints_py", str(path))
    spec = importlib.util.spec_from_file_location("cubic_fatpoints_py", str(path), loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    cf = load()

    types = cf.all_types()
    assert len(types) == 90
    assert types[15].label == "3A_1d" and types[15].graph == "3A_1"
    assert cf.type_by_id(86).torsion == "Z3"

    t = cf.classify("0: AB, CD; 2: ABCDEF")
    assert t.id == 16, t

    classes = cf.parse_negset("1: ABC, ADE")
    assert [c.coefficients() for c in classes] == [[1, -1, -1, -1, 0, 0, 0], [1, -1, 0, 0, -1, -1, 0]]
    k = cf.DivisorClass([-3, 1, 1, 1, 1, 1, 1])
    assert k.self_intersection() == 3
    assert cf.cohomology(cf.DivisorClass([3, -1, -1, -1, -1, -1, -1]), "") == (4, 0, 0)

    r = cf.resolution(86, [3] * 6)
    assert r.f0 == [(6, 1), (8, 3), (9, 3)], r.f0
    assert r.f1 == [(9, 3), (10, 3)], r.f1
    assert [r.hilbert_ideal(t) for t in range(8)] == [0, 0, 0, 0, 0, 0, 1, 3]
    assert r.degree == 36

    try:
        cf.resolution(91, [1] * 6)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown type accepted")

    assert cf.table1().startswith("id\tlabel\tneg\ttorsion\n")
    print("smoke test passed")


if __name__ == "__main__":
    main()
