"""Smoke test for the Python bindings.

Build the extension first, e.g.

    cargo build -p taut-py --release --features extension-module
    cp target/release/libtaut.so python/taut.so
    python3 python/smoke_test.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import taut  # noqa: E402


def main():
    square = taut.Complex.from_json(
        '{"vertices":["a","b","c","d"],"edges":[["a","b"],["b","c"],["c","d"],["d","a"]]}'
    )
    assert square.dimension == 1
    assert square.census() == [4, 4]
    assert square.homology(1) == (1, [])
    assert not square.is_acyclic()
    assert square.normally_generates([["a", "b", "c", "d"]]) == "proved"
    assert square.normally_generates() == "refuted"

    p = taut.Presentation.p(square, [["a", "b", "c", "d"]], [0, 1])
    assert len(p.generators) == 8 and len(p.relators) == 5
    assert "FreeGroup" in p.to_gap()

    z5 = taut.Presentation(["a"], [[("a", 1)] * 5])
    claim = z5.is_trivial([("a", 1)] * 10)
    assert claim["verdict"]["status"] == "proved"
    taut.verify_claim(json.dumps(claim))
    assert len(z5.ball(2)["vertices"]) == 5

    pentagon = taut.Complex.numbered(5, [(i, (i + 1) % 5) for i in range(5)])
    spectrum = taut.graph_spectrum_of(pentagon, 8)
    assert spectrum.taut_lengths() == [5]
    assert spectrum.status(6) == "not_taut"
    spectrum.verify()

    racg = taut.Presentation.racg(pentagon)
    assert taut.group_spectrum(racg, 6).taut_lengths() == [4]
    assert taut.coxeter_normal_form(pentagon, ["0", "1", "1", "2"]) == ["0", "2"]
    assert taut.artin_normal_form(square, [("a", 1), ("b", 1), ("a", -1)]) == [("b", 1)]
    assert len(taut.artin_normal_form(square, [("a", 1), ("c", 1), ("a", -1)])) == 3

    assert taut.k_related([5, 20], [6, 24], 2) == (True, None)
    assert taut.k_related([5], [100], 1) == (False, 5)
    assert taut.least_c(1, 4) == 5
    sched = taut.schedule(1, 4, 2)
    assert sched["disjoint"] is True
    assert taut.obstruction({3}, set(), 5) == [(3, 5 ** 7)]
    assert taut.kernel_bound(3, {0}, {0, 4}) == (3, "2√2")

    try:
        taut.schedule(1, 4, 1, c=2)
    except taut.TautError:
        pass
    else:
        raise AssertionError("invalid constants accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
