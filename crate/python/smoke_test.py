#!/usr/bin/env python3
"""Smoke test for the cnct_py extension module.

Builds the cdylib if needed, loads it straight from the cargo target
directory, and exercises each exported entry point once.

Usage: python3 python/smoke_test.py
"""

import importlib.util
import math
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    lib = ROOT / "target" / "debug" / "libcnct_py.so"
    if not lib.exists():
        subprocess.run(
            ["cargo", "build", "-p", "cnct-py"], cwd=ROOT, check=True
        )
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="cnct_py_"))
    target = tmp / "cnct_py.so"
    shutil.copy2(lib, target)
    spec = importlib.util.spec_from_file_location("cnct_py", target)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def approx(a, b, tol=1e-10):
    assert abs(a - b) <= tol * max(1.0, abs(b)), f"{a} != {b} (tol {tol})"


def main():
    m = load_module()

    approx(m.riemann_zeta(2.0), math.pi**2 / 6)
    approx(m.hurwitz_zeta(2.0, 2.0), math.pi**2 / 6 - 1)
    approx(m.jonquiere(0.9, 1.0), -math.log(0.1))
    approx(m.lerch_phi(0.0, 2.0, 4.0), 1 / 16)
    approx(m.lerch_phi(0.5, 2.0, 1.0), 1.1644810529300251)

    s = m.lerch_phi_str("0.5", "2", "1", 30)
    assert s.startswith("1.16448105293002501180"), s

    d = m.LerchDistribution("zipf", 2.0)
    approx(d.pmf(1), 6 / math.pi**2)
    approx(d.cdf(1), d.pmf(1))
    approx(d.pgf(1.0), 1.0, 1e-12)
    t = d.truncated(1, 10)
    assert t.cdf(10) == 1.0

    g = m.LerchDistribution("lerch", 0.0, z=0.5, v=1.0)  # geometric
    approx(g.mean(), 1.0, 1e-9)

    try:
        m.lerch_phi(1.0, 0.5, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("divergent parameters must raise ValueError")

    assert abs(m.naive_term_count(200) - 205.35) < 1.0

    rep = m.verify_identity(10)
    assert rep["matching_digits"] >= 10, rep
    assert rep["lhs"].startswith("2.37254516"), rep

    print("cnct_py smoke test: all checks passed")


if __name__ == "__main__":
    main()
