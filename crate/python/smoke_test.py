#!/usr/bin/env python3
"""Smoke test for the weightlab_py extension module.

Builds nothing itself: expects `cargo build --release -p weightlab-py`
to have produced target/release/libweightlab_py.so. Copies the shared
object next to a temp directory under the importable name and checks a
handful of closed-form values end to end.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def import_module():
    for profile in ("release", "debug"):
        so = ROOT / "target" / profile / "libweightlab_py.so"
        if so.exists():
            tmp = tempfile.mkdtemp(prefix="weightlab_py_")
            shutil.copy(so, Path(tmp) / "weightlab_py.so")
            sys.path.insert(0, tmp)
            import weightlab_py

            return weightlab_py
    sys.exit("build the extension first: cargo build --release -p weightlab-py")


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol * max(1.0, abs(b)), f"{a} != {b}"


def main():
    wl = import_module()

    # piecewise-power construction and evaluation
    f = wl.PiecewisePower.indicator(0.0, 1.0)
    approx(f(0.5), 1.0)
    approx(f(2.0), 0.0)
    approx(f.integrate(-math.inf, math.inf), 1.0)

    g = wl.PiecewisePower.pure_power(1.0, -0.5)
    approx(g(4.0), 0.5)
    approx(g.product(g)(4.0), 0.25)
    approx(g.power(2.0)(4.0), 0.25)

    rt = wl.PiecewisePower.from_descriptor(f.to_descriptor())
    approx(rt(0.5), 1.0)

    # maximal operators: M chi_[0,1](2) = 1/2, centered = 1/4
    approx(wl.maximal_at(f, 2.0), 0.5, 1e-8)
    approx(wl.maximal_centered_at(f, 2.0), 0.25, 1e-7)
    one = wl.PiecewisePower.constant(1.0)
    approx(wl.dual_t_at(f, one, one, 2.0), 0.5, 1e-8)

    # weight constants: step weight chi_[0,1] + 4 chi_[1,2] has A_2 = 25/16
    w = wl.PiecewisePower([(0.0, 1.0, 1.0, 0.0), (1.0, 2.0, 4.0, 0.0)])
    value, lo, hi = wl.ap_constant(w, 2.0, domain=(0.0, 2.0))
    approx(value, 25.0 / 16.0, 1e-6)
    value, _, _ = wl.ainfty_fujii_wilson(one, domain=(-10.0, 10.0))
    approx(value, 1.0, 1e-6)

    # Lorentz norms: ||chi_[0,1]||_{L^{p,q}(1)} = (p/q)^{1/q}
    approx(wl.lorentz_norm(f, one, 2.0, 1.0), 2.0, 1e-8)
    approx(wl.lorentz_norm(f, one, 2.0, 2.0), 1.0, 1e-8)
    approx(wl.distribution(f, one, 0.5), 1.0)

    # bounds
    approx(wl.buckley_bound(2.0, 4.0), 4.0)
    approx(wl.mixed_bound_lorentz(2.0, 1.0, apc=4.0, ainfty_sigma=2.0), 32.0)
    approx(wl.dual_bound(2.0, 2.0), math.sqrt(2 * math.log(math.e + 1)) * 2.0)

    # exponent fitting
    slope, intercept, r2 = wl.fit_exponent([(0.5, 2.0), (0.25, 4.0)])
    approx(slope, -1.0)
    approx(r2, 1.0)

    # a tiny sweep end to end
    import json

    report = json.loads(
        wl.run_sweep(
            json.dumps(
                {
                    "family": "buckley",
                    "p": 2.0,
                    "q": 2.0,
                    "deltas": [0.5, 0.25, 0.125],
                    "grid_levels": 40,
                }
            )
        )
    )
    assert report["verdict"] is True, report
    assert len(report["rows"]) == 3

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
