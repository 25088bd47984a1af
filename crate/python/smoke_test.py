"""Smoke test for the stable_image extension module."""

from fractions import Fraction

import stable_image as si

EXAMPLE = "f(x,y) = (x - 2*(x*y+1) - y*(x*y+1)^2, -1 - y*(x*y+1))"


def main():
    f = si.PolyMap(EXAMPLE)
    assert f.apply((1, -1)) == f.apply((3, 0)) == (Fraction(1), Fraction(-1))

    kind, jac = si.classify(f)
    assert kind == "NonConstantJacobian", kind
    assert si.classify(si.PolyMap("f(x,y) = (x + y^2, y)"))[0] == "JacobianPair"

    assert not si.in_image(f, (0, 0))
    assert si.in_image(f, (Fraction(-2), Fraction(-1)))

    fiber = si.solve_fiber(f, (1, -1))
    assert fiber["status"] == "finite" and fiber["distinct_count"] == 2
    assert fiber["rational_solutions"] == [(1, -1), (3, 0)]
    assert si.a_membership(f, (1, -1), 1) == "no"

    search = si.coimage_candidates(f)
    assert search["coimage"] == [(0, 0)] and search["exhausted"]

    rep = si.stabilization_report(f, search["candidates"], k_max=3)
    assert rep["K"] == 1, rep["lines"]

    w = si.injectivity_witness_search(f, [(1, -1)])
    assert w is not None and f.apply(w[0]) == f.apply(w[1]) == w[2]

    p = si.Poly("x*y - 1")
    assert p.evaluate(Fraction(1, 2), 4) == 1
    assert str(f.iterate(1)) == str(f)

    spec = si.DynSpec(open(__file__.rsplit("/", 2)[0] + "/crates/core/tests/data/merge.spec").read())
    assert spec.is_stable()[0] == "not stable"
    print("smoke test ok")


if __name__ == "__main__":
    main()
