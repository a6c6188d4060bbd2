"""Smoke test for the pynovikov extension module.

Build and install first:

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/pynovikov-*.whl
"""

import json
import sys

import pynovikov
from pynovikov import Complex, NovikovError


def check(label, cond):
    print(f"{'ok  ' if cond else 'FAIL'} {label}")
    return cond


def main():
    results = []

    circle = Complex.corpus("circle")
    results.append(check("circle has Euler characteristic 0", circle.euler_characteristic() == 0))
    results.append(check("circle, class 1", circle.novikov_betti([1])["betti"] == [0, 0]))
    results.append(check("circle, class 0", circle.novikov_betti("0")["betti"] == [1, 1]))

    torus = Complex.corpus("torus")
    report = torus.novikov_betti("1,1")
    results.append(check("torus, class (1,1)", report["betti"] == [0, 0, 0]))
    results.append(check("report method tag", report["method"] == "fraction-field exact"))
    results.append(check("torus ordinary", torus.novikov_betti([0, 0])["betti"] == [1, 2, 1]))
    poly = torus.polytope_betti("1,0;0,1", restrict=[0])
    results.append(check("torus polytope restricted", poly["betti"] == [0, 0, 0]))

    klein = Complex.corpus("klein")
    results.append(check("Klein bottle over Z2", klein.ring == "Z2" and klein.novikov_betti([1])["betti"] == [0, 0, 0]))
    results.append(check("Klein oracle", klein.oracle([1])["betti"] == [0, 0, 0]))

    sub = Complex.corpus("subdivided_circle")
    reduced = sub.morse(seed=3)
    results.append(check("Morse reduction keeps one vertex", [len(c) for c in reduced.cells] == [1, 1]))
    results.append(check("reduced complex keeps Betti numbers", reduced.novikov_betti([1])["betti"] == [0, 0]))

    check_report = torus.main_theorem_check("1,0;0,1", [1, 0], ["1/2", "1/2"])
    results.append(check("comparison square", check_report["passed"]))

    family = pynovikov.rational_approximation_family("1,1", "1/10", cover="1,0;0,1")
    results.append(check("approximation family", len(family["classes"]) == 2 and all(family["flags"].values())))

    doc = json.loads(torus.to_json())
    results.append(check("round trip", Complex.from_json(json.dumps(doc)) == torus))

    twisted = torus.twisted("1,1")
    results.append(check("twisted complex over the quotient", twisted.rank == 1))

    try:
        Complex.from_json('{"coefficients":"Z","rank":1,"cells":[["v"],["e"],["f"]],"boundaries":[[["t - 1"]],[["1"]]]}')
        results.append(check("invalid complex rejected", False))
    except NovikovError as e:
        results.append(check("invalid complex rejected", str(e).startswith("validation")))

    demo = pynovikov.run_demo()
    results.append(check("all demo criteria pass", len(demo) == 12 and all(d["passed"] for d in demo)))

    print(f"{sum(results)}/{len(results)} checks passed")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
