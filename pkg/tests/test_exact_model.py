import numpy as np
import pytest

from oseledets import ExactModelSpec, exact_vector, generate, reference_spec, qr_lyapunov
from oseledets.core import OseledetsError
from oseledets.exact_model import log_ladder


def test_spec_validation():
    with pytest.raises(ValueError):
        ExactModelSpec((1.0, 1.0))
    with pytest.raises(ValueError):
        ExactModelSpec((2.0, 1.0), epsilon=-0.1)
    assert reference_spec().dim == 8
    np.testing.assert_allclose(np.exp(log_ladder(4)), [4, 3, 2, 1])


def test_reference_configuration_shape(ref_model):
    win, truth = ref_model
    assert (win.start, win.stop, win.dim) == (-350, 349, 8)
    assert (truth.first, truth.last) == (-350, 350)


def test_unperturbed_structure():
    spec = ExactModelSpec(log_ladder(3), epsilon=0.0, half_width=5, seed=4)
    win, truth = generate(spec)
    r = np.diag([3.0, 2.0, 1.0])
    for n in range(-5, 5):
        if n not in (-1, 0):
            np.testing.assert_allclose(win[n], r, atol=1e-15)
    s_m1 = truth.basis_at(0)
    assert np.allclose(np.triu(s_m1, 1), 0) and np.allclose(np.tril(s_m1, -2), 0)
    np.testing.assert_array_equal(np.diag(s_m1), 1.0)
    # w2(0) = e2 + z3 e3, normalized
    v = np.array([0.0, 1.0, s_m1[2, 1]])
    np.testing.assert_allclose(exact_vector(truth, 0, 2), v / np.linalg.norm(v), atol=1e-15)


def test_first_vector_away_from_zero():
    spec = ExactModelSpec(log_ladder(4), epsilon=0.1, half_width=6, seed=2)
    _, truth = generate(spec)
    for n in (-3, 2, 5):
        v = exact_vector(truth, n, 1)
        col = truth.basis_at(n)[:, 0]
        np.testing.assert_allclose(v, col / np.linalg.norm(col))
        assert np.argmax(np.abs(v)) == 0 and abs(v[0]) > 0.95


def test_defining_identity(ref_model):
    win, truth = ref_model
    r = np.diag(np.exp(log_ladder(8)))
    for n in range(win.start, win.stop + 1):
        lhs = win[n] @ truth.basis_at(n)
        rhs = truth.basis_at(n + 1) @ r
        assert np.abs(lhs - rhs).max() <= 1e-12 * np.abs(rhs).max()


def test_ground_truth_equivariance(ref_model):
    win, truth = ref_model
    worst = 0.0
    for n in range(win.start, win.stop + 1):
        for j in range(1, 9):
            img = win[n] @ exact_vector(truth, n, j)
            img /= np.linalg.norm(img)
            nxt = exact_vector(truth, n + 1, j)
            worst = max(worst, min(np.linalg.norm(img - nxt), np.linalg.norm(img + nxt)))
    assert worst <= 1e-12


def test_deterministic():
    a, ta = generate(reference_spec(40, seed=9))
    b, tb = generate(reference_spec(40, seed=9))
    assert a.matrices.tobytes() == b.matrices.tobytes()
    np.testing.assert_array_equal(ta.bases, tb.bases)
    c, _ = generate(reference_spec(40, seed=10))
    assert not np.array_equal(a.matrices, c.matrices)


def test_stream_order():
    spec = ExactModelSpec(log_ladder(3), epsilon=0.1, half_width=2, seed=5)
    _, truth = generate(spec)
    rng = np.random.default_rng(5)
    expect = {n: np.eye(3) + 0.1 * rng.random((3, 3)) for n in (-3, -2, 0, 1)}
    z = rng.random(2)
    for n, s in expect.items():
        np.testing.assert_array_equal(truth.basis_at(n + 1), s)
    np.testing.assert_array_equal(np.diag(truth.basis_at(0), -1), z)


def test_fixed_z():
    spec = ExactModelSpec(log_ladder(3), epsilon=0.1, half_width=4, seed=1, fresh_z=False)
    win, truth = generate(spec)
    np.testing.assert_array_equal(truth.basis_at(-3), truth.basis_at(3))
    np.testing.assert_array_equal(win[-4], win[3])


def test_condition_guard_gives_up(monkeypatch):
    import oseledets.exact_model as em

    monkeypatch.setattr(em, "COND_LIMIT", 1.0)
    with pytest.raises(OseledetsError):
        generate(ExactModelSpec(log_ladder(2), epsilon=0.1, half_width=3, seed=0))


def test_condition_guard_redraws(monkeypatch):
    import oseledets.exact_model as em

    def draws(seed):
        rng = np.random.default_rng(seed)
        return [np.eye(2) + 0.5 * rng.random((2, 2)) for _ in range(2)]

    seed = next(s for s in range(100) if np.linalg.cond(draws(s)[0]) > np.linalg.cond(draws(s)[1]))
    first, second = draws(seed)
    monkeypatch.setattr(em, "COND_LIMIT", (np.linalg.cond(first) + np.linalg.cond(second)) / 2)
    _, truth = generate(ExactModelSpec(log_ladder(2), epsilon=0.5, half_width=1, seed=seed))
    # S_{-2} is the first matrix drawn; the rejected draw is skipped
    np.testing.assert_array_equal(truth.basis_at(-1), second)


def test_recovers_spectrum(ref_model):
    win, _ = ref_model
    est = qr_lyapunov(win.sub(-300, 299), 8)
    np.testing.assert_allclose(est.lambdas, log_ladder(8), atol=0.02)
