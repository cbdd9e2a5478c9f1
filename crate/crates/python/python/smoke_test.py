"""Smoke test for the falconer extension module.

Build and run from the workspace root:

    cargo build -p falconer-py --features extension-module --release
    cp target/release/libfalconer.so crates/python/python/falconer.so
    python3 crates/python/python/smoke_test.py
"""

import falconer as fc


def main():
    p = fc.Polynomial("x*y + z")
    q = fc.Polynomial("x - 1")
    assert str(p * q) == str(fc.Polynomial("x^2*y - x*y + x*z - z"))
    assert p.derivative("x") == fc.Polynomial("y")
    assert p.evaluate({"x": "1/2", "y": "4", "z": "-1"}) == "1"
    assert p.substitute({"z": "x"}) == fc.Polynomial("x*y + x")
    assert p.variables() == ["x", "y", "z"]

    cls = fc.classify("x*y + z")
    assert cls["verdict"] == "FalconerType" and cls["case"] == "TwoCrossTerms", cls
    assert fc.classify("x*y")["verdict"] == "MissingVariable"
    cls = fc.classify("(x + y + z)^2")
    assert cls["verdict"] == "DegenerateSquare", cls
    cls = fc.classify("x*y + x*z + y*z")
    assert cls["case"] == "AllCrossTerms", cls

    red = fc.reduce("x*y + x*z + y*z")
    assert red["identity_residual"] == "0", red

    f = fc.Quadratic("x*y + y*z + x^2")
    assert len(f.coefficients()) == 10
    assert f.reduce()["identity_residual"] == "0"

    assert fc.monge_ampere(red["psi"]) == red["monge_ampere"]
    assert fc.monge_ampere("x*y + z*t", u=["x", "z", "a"], v=["y", "t", "b"]) is not None

    img = fc.image_set("x*y + z", 7, [1, 2], [1, 2], [1, 2])
    assert img == [2, 3, 4, 5, 6], img

    census = fc.expander_census("x*y + x*z", 211, 20, trials=5, seed=3)
    assert len(census["rows"]) == 5
    csv = fc.expander_census("x*y + x*z", 211, 20, trials=5, seed=3, csv=True)
    assert csv.splitlines()[0] == "p,N,family,seed,trial,image_size,ratio,ratio_float"

    assert fc.cover_check_distance(list(range(65)), 101)
    assert not fc.cover_check_distance([0], 101)

    cover = fc.cantor_cover(3, [0, 2], 2)
    assert cover[0] == ("0", "1/9") and len(cover) == 4

    m = fc.image_measure("x*y + z", "point:0", "unit", "cantor:3:0,2", depth=3)
    assert m == "8/27", m

    mass = fc.near_zero_mass("x*y + x*z + y*z", "cantor:3:0,2", "unit", "unit",
                             ["1/64", "1/16"], depth=2)
    assert len(mass["rows"]) == 2

    assert fc.sharpness_demo(3)[-1] == (3, "8/27")
    assert fc.dimension_threshold("corollary-1.4") == "4/7"
    assert "corollary-1.4" in fc.THRESHOLD_PRESETS

    try:
        fc.classify("x*y*z")
    except ValueError:
        pass
    else:
        raise AssertionError("cubic accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
