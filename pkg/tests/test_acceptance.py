"""Acceptance criteria 1-12.

Each criterion is a function returning ``(passed, detail)``.  Under pytest
every criterion is one test and its status line is printed in the terminal
summary; ``python3 tests/test_acceptance.py`` prints the same lines directly.
"""

import math
import time

import numpy as np
import pytest

from rmpborrow.borrowing import ElicitationSpec, elicit_prior_weight, level_set
from rmpborrow.montecarlo import McConfig, mc_estimate
from rmpborrow.oc import estimation_metrics, type_one_error
from rmpborrow.rmp import NormalComponent, RobustMixturePrior, SamplingModel, posterior_weight
from rmpborrow.scenarios import ILLUSTRATIVE, TABLE1_N0, make_design, table1, table1_pairs
from rmpborrow import theorems

B_ANCHOR = 5.8310
INFORMATIVE = NormalComponent(0.0, 0.01)
SAMPLING = SamplingModel(1 / 50)

# Reference table, no-borrowing row first.
OMEGA = [0.500, 0.415, 0.335, 0.263, 0.201, 0.151, 0.112]
ALPHA_50 = [0.9914, 0.6478, 0.2643, 0.1278, 0.0822, 0.0645, 0.0569]
ALPHA_MAX = [0.168, 0.167, 0.166, 0.166, 0.166, 0.165, 0.165]
ALPHA_INF = [0.0394, 0.0397, 0.0399, 0.0399, 0.0400, 0.0400, 0.0400]
ALPHA_RMP = [0.0492, 0.0496, 0.0498, 0.0499, 0.0499, 0.0500, 0.0500]

_TABLE = {}


def _table():
    if "rows" not in _TABLE:
        _TABLE["rows"] = table1(ILLUSTRATIVE, workers=4)
    return _TABLE["rows"]


def _worst(got, want):
    return float(np.max(np.abs(np.asarray(got) - np.asarray(want))))


def criterion_1():
    t0 = time.perf_counter()
    pairs = level_set(B_ANCHOR, TABLE1_N0, INFORMATIVE, SAMPLING)
    dt = time.perf_counter() - t0
    err = _worst([w for w, _ in pairs], OMEGA)
    return err <= 1e-3 and dt < 1.0, f"max|omega-ref|={err:.2e} runtime={dt:.3f}s"


def criterion_2():
    t0 = time.perf_counter()
    pairs = table1_pairs()
    a = [float(type_one_error(make_design(w, 1 / n0), 50.0)) for w, n0 in pairs]
    dt = time.perf_counter() - t0
    err = _worst(a[1:], ALPHA_50)
    flat = abs(a[0] - 0.05)
    return err <= 5e-3 and flat <= 5e-4 and dt < 30, f"max|alpha50-ref|={err:.2e} |flat-0.05|={flat:.1e} runtime={dt:.2f}s"


def criterion_3():
    err = _worst([r.alpha_max for r in _table()[1:]], ALPHA_MAX)
    return err <= 3e-3, f"max|alpha_max-ref|={err:.2e}"


def criterion_4():
    rows = _table()
    p = [r.pow_0 for r in rows[1:]]
    lo, hi = min(p), max(p)
    ok = 0.802 - 5e-3 <= lo and hi <= 0.803 + 5e-3 and abs(rows[0].pow_0 - 0.600) <= 5e-3
    return ok, f"borrowing Pow(0) in [{lo:.4f}, {hi:.4f}] flat Pow(0)={rows[0].pow_0:.4f}"


def criterion_5():
    rows = _table()[1:]
    inf = [r.alpha_avg_inf for r in rows]
    rmp = [r.alpha_avg_rmp for r in rows]
    e1, e2 = _worst(inf, ALPHA_INF), _worst(rmp, ALPHA_RMP)
    in_range = all(0.0394 - 2e-3 <= v <= 0.0400 + 2e-3 for v in inf) and all(0.0492 - 2e-3 <= v <= 0.0500 + 2e-3 for v in rmp)
    return in_range and e1 <= 2e-3 and e2 <= 2e-3, f"max|INF-ref|={e1:.1e} max|RMP-ref|={e2:.1e}"


def criterion_6():
    rows = _table()
    widths = [r.sweet_spot_width for r in rows[1:]]
    err = _worst(widths, [0.207] * len(widths))
    return err <= 0.01 and rows[0].sweet_spot_width == 0.0, f"max|width-0.207|={err:.1e} flat width={rows[0].sweet_spot_width}"


def criterion_7():
    res = theorems.theorem1()
    far = [r for r in res if "alpha(1e3)" in r.name]
    uip = [r for r in res if "alpha(50)" in r.name]
    ok = all(r.passed for r in far + uip)
    return ok, "; ".join(f"{r.name}: {r.value:.2e}" for r in far + uip)


def criterion_8():
    gap = theorems.location_cdf_gap()
    agap = theorems.location_alpha_gap(n0=1 / 32)
    return gap <= 1e-8 and agap <= 0.01, f"CDF sup gap={gap:.1e} alpha sup gap={agap:.4f}"


def criterion_9():
    wmin = theorems.lindley_min_weight(0.5, 1e100, 10.0)
    prof = theorems.strength_profiles(5.831)
    spread = float(np.ptp(prof, axis=0).max())
    cap_excess = float(prof.max() - 1 / (1 + 1 / 5.831))
    ok_a = wmin > 1 - 1e-10
    # the cap is attained at x = mu_inf, so allow rounding only
    ok_b = spread <= 1e-6 and cap_excess <= 1e-12
    return ok_a and ok_b, (f"(a) min weight on |x|<=10 is {wmin:.3g} {'ok' if ok_a else 'FAILS'}; "
                           f"(b) profile spread={spread:.1e}, max-cap={cap_excess:.1e} {'ok' if ok_b else 'FAILS'}")


def criterion_10():
    t0 = time.perf_counter()
    worst, n = 0.0, 0
    for i, (w, n0) in enumerate(table1_pairs()):
        d = make_design(w, 1 / n0)
        for j, D in enumerate((0.0, 2.0, 50.0)):
            seed = int(np.random.SeedSequence([20240601, i, j]).generate_state(1, np.uint64)[0])
            est = mc_estimate(d, D, cfg=McConfig(1_000_000, seed), workers=4)
            q = float(type_one_error(d, D))
            se = est.se if est.se > 0 else math.sqrt(q * (1 - q) / est.n_reps)
            worst = max(worst, abs(est.estimate - q) / se)
            n += 1
    dt = time.perf_counter() - t0
    return worst <= 3 and n >= 12 and dt < 600, f"{n} scenarios, max|z|={worst:.2f}, runtime={dt:.0f}s"


def criterion_11():
    ws, worst = [], 0.0
    for d in (0.1, 0.3, 0.5, 1.0):
        w, _ = elicit_prior_weight(ElicitationSpec(d, 1000.0), INFORMATIVE, SAMPLING)
        rmp = RobustMixturePrior(w, INFORMATIVE, NormalComponent(0.0, 1e6))
        worst = max(worst, abs(posterior_weight(rmp, d, SAMPLING) - 0.5))
        ws.append(w)
    inc = bool(np.all(np.diff(ws) > 0))
    return worst <= 1e-10 and inc, f"max|weight-0.5|={worst:.1e} increasing={inc}"


def criterion_12():
    ident = 0.0
    bias0 = 0.0
    for w, n0 in table1_pairs():
        d = make_design(w, 1 / n0)
        for D in (-1.0, 0.0, 1.0):
            m = estimation_metrics(d, D)
            ident = max(ident, abs(m.mse - m.bias ** 2 - m.variance))
            if D == 0.0:
                bias0 = max(bias0, abs(m.bias))
    flat = estimation_metrics(make_design(0.0, 1e100), 0.0)
    var_err = abs(flat.variance - (1 / 50 + 1 / 150))
    ok = ident <= 2e-8 and var_err <= 1e-6 and bias0 <= 1e-6
    return ok, f"max|MSE-bias^2-var|={ident:.1e} |flat var-ref|={var_err:.1e} max|bias(0)|={bias0:.1e}"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def status_line(i, passed, detail):
    return f"{'PASS' if passed else 'FAIL'} criterion {i:>2}: {detail}"


@pytest.mark.parametrize("i", sorted(CRITERIA))
def test_criterion(i):
    import conftest

    passed, detail = CRITERIA[i]()
    line = status_line(i, passed, detail)
    conftest.ACCEPTANCE_LINES[i] = line
    print(line)
    assert passed, line


if __name__ == "__main__":
    fails = 0
    for i, fn in CRITERIA.items():
        passed, detail = fn()
        fails += not passed
        print(status_line(i, passed, detail), flush=True)
    raise SystemExit(1 if fails else 0)
