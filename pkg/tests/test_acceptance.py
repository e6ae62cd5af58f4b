"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest -s tests/test_acceptance.py`` to see the PASS/FAIL lines.
"""

import io
import math
import subprocess
import sys
import time
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np

from kuga import cli, dims, rst
from kuga import symplectic as sp
from kuga.cyclo import SingularityType, snap
from kuga.dims import RegionStatus
from kuga.rst import Locus, Status
from kuga.symplectic import SiegelPoint, SpElement

import printed_tables
from conftest import random_symplectic
from test_dims import j_oracle

TESTS = Path(__file__).parent


def report(num, title, failures):
    line = f"criterion {num} [{title}]: " + ("PASS" if not failures else "FAIL")
    if failures:
        line += " -- " + "; ".join(failures)
    print(line)
    assert not failures, line


def check(failures, ok, what):
    if not ok:
        failures.append(what)


def test_criterion_1_tables():
    fails = []
    for name, nrows in (("C2", 11), ("Q2", 11), ("Q1", 7)):
        t0 = time.perf_counter()
        out = io.StringIO()
        code = cli.main(["tables", "--preset", name, "--n", "1"], out=out)
        elapsed = time.perf_counter() - t0
        check(fails, code == 0, f"{name} exit {code}")
        check(fails, out.getvalue() == cli.fixture_path(name, 1).read_text(), f"{name} text")
        rows = rst.build_table(rst.preset(name, 1))
        got = {r.powers: (r.type.order, r.type.exponents) for r in rows}
        want = {k: printed_tables.cell(v, 1) for k, v in printed_tables.TABLES[name].items()}
        check(fails, len(rows) == nrows, f"{name} has {len(rows)} rows")
        check(fails, got == want, f"{name} cells")
        check(fails, elapsed < 1.0, f"{name} took {elapsed:.2f}s")
    report(1, "table reproduction", fails)


def test_criterion_2_interior_verdicts():
    fails = []
    for n in range(1, 7):
        v = rst.analyze(rst.preset("C2", n, True))
        if n <= 2:
            check(fails, v.status is Status.NOT_CANONICAL, f"n={n} {v.status.value}")
            check(fails, v.witness is not None and v.witness.powers == (5, 0), f"n={n} witness")
            want = Fraction(4, 6) if n == 1 else Fraction(5, 6)
            check(fails, v.witness is not None and v.witness.rst_sum == want, f"n={n} sum")
        else:
            check(fails, v.status is Status.CANONICAL, f"n={n} {v.status.value}")
    report(2, "interior verdicts", fails)


def test_criterion_3_boundary_verdicts():
    fails = []
    for name in ("Q1", "Q2"):
        for sigma in (False, True):
            for n in range(1, 7):
                v = rst.analyze(rst.preset(name, n, sigma))
                check(fails, v.status is Status.CANONICAL, f"{name} sigma={sigma} n={n}")
    report(3, "boundary verdicts", fails)


def test_criterion_4_isolated_types():
    fails = []
    a, b = SingularityType(2, (1, 1, 1)), SingularityType(3, (1, 2, 1))
    check(fails, a.rst_sum == Fraction(3, 2), f"1/2(1,1,1) -> {a.rst_sum}")
    check(fails, b.rst_sum == Fraction(4, 3), f"1/3(1,2,1) -> {b.rst_sum}")
    check(fails, a.rst_sum >= 1 and b.rst_sum >= 1, "below 1")
    check(fails, set(rst.ISOLATED_BOUNDARY_TYPES) == {a, b}, "isolated type list")
    report(4, "isolated boundary types", fails)


def test_criterion_5_automorphy():
    fails = []
    cases = (("C2", Fraction(5, 6), 6), ("Q1", Fraction(3, 4), 4))
    for name, root, k in cases:
        sc = rst.preset(name, 1, False)
        N = sc.automorphy(sc.elements[0].gamma)
        exps = sorted(snap(z, 12).fraction for z in np.linalg.eigvals(N))
        check(fails, exps == [0, root], f"{name} eigen-exponents {exps}")
        err = np.max(np.abs(np.linalg.matrix_power(N, k) - np.eye(2)))
        check(fails, err <= 1e-9, f"{name} |N^{k} - 1| = {err:.2e}")
    report(5, "automorphy eigenvalues", fails)


def test_criterion_6_minimal_primes():
    fails = []
    check(fails, dims.minimal_prime(5) == 5, "minimal_prime(5)")
    check(fails, dims.minimal_prime(6) == 3, "minimal_prime(6)")
    for (k, p), want in {(5, 5): 1, (5, 3): 0, (6, 3): 1}.items():
        got, ref = dims.jacobi_lower_bound(k, p), j_oracle(k, p)
        check(fails, got == want == ref, f"j({k},{p}) = {got}, oracle {ref}, expected {want}")
    report(6, "minimal primes", fails)


def test_criterion_7_region():
    fails = []
    S = lambda p, n: dims.classify(p, n).status
    for p, n in ((3, 4), (5, 3)):
        check(fails, S(p, n) is RegionStatus.RGT, f"({p},{n})")
    for p, n in ((3, 3), (5, 2), (31, 2)):
        check(fails, S(p, n) is RegionStatus.UNKNOWN, f"({p},{n})")
    check(fails, all(S(37, n) is RegionStatus.RGT for n in range(50)), "(37, n)")
    check(fails, all(S(2, n) is RegionStatus.OUT_OF_SCOPE for n in range(10)), "(2, n)")
    grid = {(c.p, c.n): c.status is RegionStatus.RGT for c in dims.region_grid(41, 8)}
    primes = sorted({p for p, _ in grid})
    for p in primes:
        check(fails, all(grid[p, n] <= grid[p, n + 1] for n in range(8)), f"monotone in n at p={p}")
    for n in range(9):
        col = [grid[p, n] for p in primes]
        check(fails, col == sorted(col), f"monotone in p at n={n}")
    report(7, "region", fails)


ALL = [(name, sigma) for name in rst.PRESETS for sigma in (False, True)]


def _primitive_root_independence():
    for name, sigma in ALL:
        for n in (1, 2, 3):
            sc = rst.preset(name, n, sigma)
            v = rst.analyze(sc)
            L = math.lcm(*sc.generator_orders())
            base = Counter(r.type.over(L).exponents for r in v.table)
            sums = sorted(r.rst_sum for r in v.table)
            for m in (m for m in range(1, L) if math.gcd(m, L) == 1):
                twisted = [r.type.over(L).scaled(m) for r in v.table]
                if Counter(t.exponents for t in twisted) != base:
                    return f"{name} n={n} m={m}"
                if sorted(t.rst_sum for t in twisted) != sums:
                    return f"{name} n={n} m={m} sums"
    return None


def _conjugation_invariance():
    C2 = SpElement(sp.PRESET_MATRICES["C2"])
    point = SiegelPoint.diagonal(sp.RHO, 2j)
    for seed in range(3):
        h = random_symplectic(np.random.default_rng(seed), steps=4)
        for n in (1, 2, 3):
            ref = rst.analyze(rst.preset("C2", n, True))
            sc = rst.Scenario("C2^h", Locus.INTERIOR, sp.act(h, point),
                              (h @ C2 @ h.inverse(),), n, True)
            v = rst.analyze(sc)
            ms = lambda t: Counter((r.type.order, r.type.exponents) for r in t.table)
            if ms(v) != ms(ref) or v.status != ref.status:
                return f"seed {seed} n={n}"
    return None


def _tau3_independence():
    cells = lambda sc: {r.powers: (r.type.order, r.type.exponents) for r in rst.build_table(sc)}
    ref = cells(rst.preset("C2", 1, True))
    bad = [t for t in (1j, 3j, 1 + 2j, -0.5 + 5j) if cells(rst.preset("C2", 1, True, tau3=t)) != ref]
    return f"tau3 in {bad}" if bad else None


def _homomorphism():
    for name, sigma in ALL:
        for n in (1, 2, 3):
            sc = rst.preset(name, n, sigma)
            rows = rst.build_table(sc)
            L = math.lcm(*sc.generator_orders())
            gens = {r.powers.index(1): np.array(r.type.over(L).exponents)
                    for r in rows if sum(r.powers) == 1}
            for r in rows:
                want = sum(k * gens[i] for i, k in enumerate(r.powers)) % L
                if list(r.type.over(L).exponents) != want.tolist():
                    return f"{name} n={n} {r.powers}"
    return None


def _no_quasi_reflections():
    for name, sigma in ALL:
        for n in range(1, 7):
            if any(r.type.is_quasi_reflection for r in rst.analyze(rst.preset(name, n, sigma)).table):
                return f"{name} sigma={sigma} n={n}"
    return None


def _dim_periodicity():
    bad = [r for r in range(0, 61, 2) if dims.dim_M(r + 12) != dims.dim_M(r) + 1]
    return f"r in {bad}" if bad else None


def _jacobi_monotone():
    bad = []
    primes = [p for p in range(3, 54) if dims.isprime(p)]
    for k in range(4, 13):
        vals = [dims.jacobi_lower_bound(k, p) for p in primes]
        bad += [f"j({k},{p})={a} > j({k},{q})={b}"
                for p, q, a, b in zip(primes, primes[1:], vals, vals[1:]) if a > b]
    return ", ".join(bad) if bad else None


def _suite_runtime():
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           str(TESTS), "--ignore", str(TESTS / "test_acceptance.py")],
                          capture_output=True, text=True, check=False)
    elapsed = time.perf_counter() - t0
    print(f"  rest of suite: {elapsed:.1f}s, {proc.stdout.strip().splitlines()[-1]}")
    return None if elapsed < 30 else f"{elapsed:.1f}s"


def test_criterion_8_properties():
    fails = []
    for title, fn in (("primitive-root independence", _primitive_root_independence),
                      ("conjugation invariance", _conjugation_invariance),
                      ("tau3 independence", _tau3_independence),
                      ("table homomorphism", _homomorphism),
                      ("no quasi-reflections", _no_quasi_reflections),
                      ("dim_M periodicity", _dim_periodicity),
                      ("j(k, p) nondecreasing in p", _jacobi_monotone),
                      ("suite runtime < 30 s", _suite_runtime)):
        problem = fn()
        print(f"  {title}: {'ok' if problem is None else 'FAIL (' + problem + ')'}")
        if problem is not None:
            fails.append(f"{title}: {problem}")
    report(8, "property suites", fails)
