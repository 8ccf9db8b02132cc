"""Smoke test for the d0res Python module.

Build and install first, e.g.
    pip install maturin
    maturin develop -m crates/python/Cargo.toml
then run `python python/smoke_test.py`.
"""

import json

import d0res


def main():
    cusp = d0res.Germ.from_implicit([((0, 2), "1"), ((3, 0), "-1")])
    assert cusp.n == [2] and cusp.r0 == 2 and cusp.bii is None
    assert cusp.certify(2).passed

    tac = d0res.Germ.from_branches(
        [d0res.Branch([[(1, "1")], [(2, "1")]]), d0res.Branch([[(1, "1")], [(2, "-1")]])]
    )
    assert (tac.bii, tac.l0, tac.r0) == (2, 3, 3)
    try:
        tac.certify(2)
    except d0res.RankBelowCritical:
        pass
    else:
        raise AssertionError("rank 2 is below r0 for the tacnode")
    below = tac.certify_exploratory(2)
    assert ("points", [0, 1], "NotSeparated") in below.verdicts

    line = d0res.Branch([[(1, "1")], []])
    assert d0res.intersection_length(line, d0res.Branch([[], [(1, "1")]])) == 1
    fib = line.fiber(2)
    assert fib.annihilator(2) == ["y", "x^2", "x*y", "y^2"]
    assert fib.support_length() == 2
    assert line.pushforward_restriction_oracle(3)
    assert not line.graph_jet_class_vanishes()

    report = json.loads(d0res.analyze(json.dumps({"curve": {"implicit": {"poly": [[[0, 2], "1"], [[4, 0], "-1"]]}}})))
    assert report["germ"]["r0"] == 3 and report["pass"]
    assert "r0 = 3" in d0res.analyze('{"curve":{"implicit":{"poly":[[[0,2],"1"],[[4,0],"-1"]]}}}', "text")

    try:
        d0res.analyze('{"curve":{}}')
    except ValueError as e:
        assert "curve" in str(e)
    else:
        raise AssertionError("empty curve must be rejected")

    print("d0res", d0res.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
