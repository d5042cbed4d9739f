"""Smoke test for the `sips` extension module.

Build first, e.g. `maturin develop -m crates/py/Cargo.toml --release`, or copy
`target/release/libsips.so` to `sips.so` somewhere on PYTHONPATH.
"""

import math

import sips


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    assert sips.list_models() == ["scarf", "poschl_teller", "morse", "oscillator"]

    scarf = sips.Model("scarf")
    p = {"a": 3.0, "B": 1.0}
    assert scarf.param_names == ["a", "B"]
    assert scarf.spectrum(p, 10) == [0.0, 5.0, 8.0]
    assert sips.algebra_spectrum("scarf", 3.5, {"B": 1.0}, 3) == [0.0, 5.0, 8.0]

    oracle = scarf.oracle_spectrum(p, 3)
    assert all(close(e, x, 1e-3) for e, x in zip(oracle, [0.0, 5.0, 8.0])), oracle

    for n in range(3):
        x, psi = scarf.wavefunction(p, n)
        assert len(x) == len(psi) == 4001
        assert sips.node_count(psi) == n
        assert scarf.ladder_residual(p, n) < 1e-3

    assert max(scarf.shape_invariance_residuals(p, 2)) < 1e-9

    try:
        scarf.energy(p, 5)
    except ValueError as e:
        assert "out of range" in str(e)
    else:
        raise AssertionError("level 5 should be rejected")

    try:
        sips.algebra_spectrum("oscillator", 1.5)
    except ValueError:
        pass
    else:
        raise AssertionError("oscillator is not in the SO(2,1) class")

    assert sips.classify(-1.5, 1.5)[0] == "D_plus"
    assert sips.classify(-1.5, 0.7)[0] is None
    assert sips.ladder_coefficient(-1.5, 1.5, "lower") == 0.0
    assert close(sips.ladder_coefficient(-1.5, 1.5, "raise"), math.sqrt(3.0), 1e-15)
    weights = sips.enumerate_multiplet("D_minus", j=-2.0, count=3)
    assert [w[0] for w in weights] == [-2.0, -3.0, -4.0]
    assert sips.region_of(-4.0, 0.0) == "forbidden"

    print("python smoke test passed")


if __name__ == "__main__":
    main()
