"""End-to-end acceptance criteria.

Each test records one PASS/FAIL line, printed in the "acceptance criteria"
section of the pytest summary.  The exact-model data come from a single CLI
sweep over the default d = 8 model.
"""

import csv
import time
from contextlib import contextmanager

import numpy as np
import pytest

import conftest
from conftest import MODEL_SEED
from oseledets import (
    CocycleWindow,
    angle,
    build_intersection_system,
    build_system,
    compute,
    equivariance_defect,
    estimate_shifts,
    exact_vector,
    expansion_rate_series,
    min_norm_impulse_solve,
    push_forward_qr,
    qr_lyapunov,
    random_window,
    scaled_product,
)
from oseledets.cli import main
from oseledets.exact_model import log_ladder
from oseledets.methods import STUDY_METHODS

SWEEP_BUDGET_S = 600.0


@contextmanager
def criterion(number, title):
    """Record PASS/FAIL for one criterion; the detail dict is filled in by the body."""
    detail = {}
    try:
        yield detail
    except BaseException:
        conftest.ACCEPTANCE_LINES.append(f"[{number}] FAIL  {title}  {_fmt(detail)}")
        raise
    conftest.ACCEPTANCE_LINES.append(f"[{number}] PASS  {title}  {_fmt(detail)}")


def _fmt(detail):
    return " ".join(f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}" for k, v in detail.items())


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    """Full CLI sweep N = 10..350 step 5, all methods, j = 2."""
    d = tmp_path_factory.mktemp("sweep")
    model, truth, out = d / "model.oslc", d / "truth.csv", d / "sweep.csv"
    assert main(["gen-exact", "--seed", str(MODEL_SEED), "--out", str(model), "--truth-out", str(truth)]) == 0
    t0 = time.perf_counter()
    assert main(["sweep", "--in", str(model), "--truth", str(truth), "--jobs", "4", "--out", str(out)]) == 0
    elapsed = time.perf_counter() - t0
    errors = {}
    with open(out, newline="") as fh:
        for row in csv.DictReader(fh):
            errors[(row["method"], int(row["N"]))] = float(row["error"])
    return errors, elapsed


def test_1_exact_model_convergence(sweep):
    errors, elapsed = sweep
    with criterion(1, "exact-model convergence + sweep runtime") as det:
        for m in ("svd2", "ginelli2", "wolfe"):
            det[f"{m}@100"], det[f"{m}@200"] = errors[(m, 100)], errors[(m, 200)]
        for m in ("dich-intersect", "dich-project"):
            det[f"{m}@300"] = errors[(m, 300)]
        det["sweep_s"] = elapsed
        for m in ("svd2", "ginelli2", "wolfe"):
            assert errors[(m, 200)] <= 1e-6
            assert errors[(m, 100)] <= 1e-4
        for m in ("dich-intersect", "dich-project"):
            assert errors[(m, 300)] <= 1e-3
        assert elapsed < SWEEP_BUDGET_S


def test_2_svd_instability(sweep):
    errors, _ = sweep
    with criterion(2, "svd2 beats raw svd 100x at N=250") as det:
        det["svd"], det["svd2"] = errors[("svd", 250)], errors[("svd2", 250)]
        assert errors[("svd2", 250)] * 100 <= errors[("svd", 250)]


def test_3_exponent_recovery(ref_model):
    win, _ = ref_model
    with criterion(3, "QR exponents log 8, log 7, log 6 within 0.02") as det:
        assert win.length >= 600
        est = qr_lyapunov(win, 3)
        dev = np.abs(est.lambdas - log_ladder(8)[:3])
        det["max_dev"] = float(dev.max())
        assert dev.max() <= 0.02


def test_4_equivariance(ref_model):
    win, truth = ref_model
    with criterion(4, "equivariance defects, N=150, m<=30") as det:
        worst = {}
        for m in ("svd2", "ginelli2", "wolfe"):
            s = equivariance_defect(win, lambda t, m=m: compute(m, win, 150, 2, at=t), 30)
            assert len(s.points) == 31, s.note
            worst[m] = det[m] = float(s.values.max())
        s = equivariance_defect(win, lambda t: exact_vector(truth, t, 2), 30)
        det["truth"] = float(s.values.max())
        assert all(v <= 1e-6 for v in worst.values())
        assert s.values.max() <= 1e-10


def test_5_expansion_rate(ref_model):
    win, _ = ref_model
    shifts = estimate_shifts(win)
    with criterion(5, "expansion rate -> log 7, no takeover by log 8") as det:
        off7, near8 = 0.0, np.inf
        for m in STUDY_METHODS:
            w = compute(m, win, 150, 2, shifts=shifts)
            v = expansion_rate_series(win, w, 200).values
            off7 = max(off7, abs(v[99] - np.log(7)))
            near8 = min(near8, np.abs(v[49:200] - np.log(8)).min())
        det["max|r100-log7|"], det["min|r-log8|"] = off7, float(near8)
        assert off7 <= 0.05
        assert near8 > 0.05


def test_6_dichotomy_error_shape(sweep):
    errors, _ = sweep
    with criterion(6, "dich-project log(err/N) linear decay on [50,250]") as det:
        ns = np.arange(50, 251, 5)
        y = np.log(np.array([errors[("dich-project", int(n))] for n in ns]) / ns)
        slope, icpt = np.polyfit(ns, y, 1)
        r2 = 1 - np.sum((y - (slope * ns + icpt)) ** 2) / np.sum((y - y.mean()) ** 2)
        det["slope"], det["R2"] = float(slope), float(r2)
        assert slope < 0
        assert r2 >= 0.8


def test_7_structural_oracles(ref_model):
    with criterion(7, "structural oracles (a)-(e)") as det:
        rng = np.random.default_rng(7)
        # (a) scaled products compose
        worst = 0.0
        for seed in range(20):
            w = CocycleWindow(np.random.default_rng(seed).standard_normal((12, 4, 4)), 0)
            a, b = rng.integers(1, 7, 2)
            whole = scaled_product(w, 0, a + b)
            parts = scaled_product(w, 0, a).then(scaled_product(w, a, b))
            diff = np.exp(parts.log_scale - whole.log_scale) * parts.matrix - whole.matrix
            worst = max(worst, np.abs(diff).max() / np.abs(whole.matrix).max())
        det["a"] = worst
        assert worst <= 1e-12

        # (b) R factors form a cocycle
        w = CocycleWindow(rng.standard_normal((16, 4, 4)), 0)
        _, rc = push_forward_qr(w, 0, 16, np.linalg.qr(rng.standard_normal((4, 2)))[0])
        def prod(fs):
            p = np.eye(2)
            for f in fs:
                p = f @ p
            return p

        whole = prod(rc.factors)
        worst = max(np.abs(prod(rc.factors[n:]) @ prod(rc.factors[:n]) - whole).max() for n in range(1, 16))
        det["b"] = float(worst / np.abs(whole).max())
        assert det["b"] <= 1e-10

        # (c) D = G^T G equals the double sum
        s, _ = np.linalg.qr(rng.standard_normal((6, 3)))
        u, _ = np.linalg.qr(rng.standard_normal((6, 2)))
        D = build_intersection_system(s, u).D
        ref = np.array([[sum((s[:, k] @ u[:, h]) * (u[:, h] @ s[:, i]) for h in range(2))
                         for i in range(3)] for k in range(3)])
        det["c"] = float(np.abs(D - ref).max())
        assert det["c"] <= 1e-14

        # (d) banded normal-equation solve equals a dense pseudoinverse solve
        worst = 0.0
        for N in (1, 5, 20):
            w = CocycleWindow(rng.standard_normal((2 * N, 3, 3)), -N)
            system = build_system(w, N, 0.3)
            r = rng.standard_normal(3)
            rhs = np.zeros(system.matrix.shape[0])
            k = system.row_block(-1)
            rhs[3 * k : 3 * k + 3] = r
            ref = np.linalg.pinv(system.matrix.toarray()) @ rhs
            got = min_norm_impulse_solve(system, -1, r).ravel()
            worst = max(worst, np.abs(got - ref).max() / np.abs(ref).max())
        det["d"] = worst
        assert worst <= 1e-10

        # (e) A_n S_{n-1} = S_n R on the exact model
        win, truth = ref_model
        r = np.diag(np.exp(log_ladder(8)))
        worst = max(np.abs(win[n] @ truth.basis_at(n) - truth.basis_at(n + 1) @ r).max()
                    / np.abs(truth.basis_at(n + 1) @ r).max() for n in range(win.start, win.stop + 1))
        det["e"] = float(worst)
        assert worst <= 1e-12


def test_8_cross_method_agreement():
    win = random_window(3, 400, seed=0)
    shifts = estimate_shifts(win)
    with criterion(8, "five j=2 methods agree on a random d=3 cocycle, N=80") as det:
        vs = {m: compute(m, win, 80, 2, shifts=shifts) for m in STUDY_METHODS}
        worst = max(angle(vs[a], vs[b]) for a in STUDY_METHODS for b in STUDY_METHODS)
        det["max_angle"] = worst
        assert worst <= 1e-3


def test_9_determinism(tmp_path):
    with criterion(9, "byte-identical CLI outputs, incl. --jobs > 1") as det:
        outs = []
        for tag in ("a", "b"):
            d = tmp_path / tag
            d.mkdir()
            model, truth = str(d / "m.oslc"), str(d / "t.csv")
            assert main(["gen-exact", "--half-width", "120", "--seed", "3", "--out", model,
                         "--truth-out", truth]) == 0
            assert main(["compute", "--in", model, "--method", "dich-intersect", "--n", "60",
                         "--out", str(d / "c.csv")]) == 0
            assert main(["validate", "--in", model, "--method", "svd2", "--n", "60",
                         "--equivariance", "10", "--expansion", "50", "--out", str(d / "v.csv")]) == 0
            assert main(["lyap", "--in", model, "--out", str(d / "l.csv")]) == 0
            jobs = "1" if tag == "a" else "4"
            assert main(["sweep", "--in", model, "--truth", truth, "--n-min", "10", "--n-max", "100",
                         "--jobs", jobs, "--out", str(d / "s.csv")]) == 0
            outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
        det["files"] = len(outs[0])
        assert outs[0] == outs[1]
