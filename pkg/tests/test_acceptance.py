"""Acceptance criteria, one test each. Every test prints a single PASS/FAIL line.

All checks are exact; the runtime bounds are the only non-algebraic part.
"""

import time

import pytest

from qsteenrod.harness import ACCEPTANCE, REGISTRY

# criterion -> (keyword arguments, runtime bound in seconds or None)
PARAMS = {
    1: ({"primes": (3, 5, 7), "d_factor": 3}, 5.0),
    2: ({"q_max": 3}, 1.0),
    3: ({"primes": (3, 5), "h_max": 4, "q_factor": 3}, 30.0),
    4: ({"primes": (3, 5, 7), "h_max": 4, "d_factor": 2}, 30.0),
    5: ({"primes": (3, 5, 7)}, None),
    6: ({"primes": (3, 5)}, None),
    7: ({"primes": (3, 5, 7), "seed": 0}, 5.0),
    8: ({"primes": (3, 5, 7)}, None),
    9: ({"primes": (3, 5), "samples": 10, "seed": 0}, None),
    10: ({"primes": (3, 5, 7), "d_max": 5}, None),
    11: ({"primes": (3, 5, 7), "seed": 0, "cases": 100}, None),
}


@pytest.mark.parametrize("n", sorted(ACCEPTANCE))
def test_criterion(n, capsys):
    check = REGISTRY[ACCEPTANCE[n]]
    kwargs, bound = PARAMS[n]
    t0 = time.perf_counter()
    report = check.fn(**kwargs)
    elapsed = time.perf_counter() - t0
    in_time = bound is None or elapsed < bound
    ok = report.ok and in_time
    with capsys.disabled():
        extra = "" if in_time else f" over {bound}s budget"
        print(f"\ncriterion {n:>2} {'PASS' if ok else 'FAIL'} {check.check_id}: {report.detail}{extra}")
    assert report.ok, f"criterion {n} ({check.anchor}) failed: {report.defect}"
    assert in_time, f"criterion {n} took {elapsed:.1f}s, budget {bound}s"


def test_verify_all_budget():
    from qsteenrod.harness import run_all

    t0 = time.perf_counter()
    reports = run_all(primes=(3, 5))
    assert time.perf_counter() - t0 < 60
    assert len(reports) == len(REGISTRY.ids())
