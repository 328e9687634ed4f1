import numpy as np
import pytest

from spiked_pca import (
    DegenerateColumnError,
    DomainError,
    FitOptions,
    MaskedMatrix,
    apply_mcar_mask,
    covariance_eigenvalues,
    extract_directions,
    fit_ppca,
    make_ground_truth,
    r_squared,
    sample_dataset,
    top_eigvec_complete,
)


def spiked(d, n, snr, sigma2=0.1, k=1, seed=0):
    norms = np.sqrt(sigma2 * snr * np.linspace(1.0, 0.4, k))
    gt = make_ground_truth(d, norms, sigma2, seed=seed)
    return gt, sample_dataset(gt, n, seed=seed + 1)


def subspace_r2(u, v):
    # squared cosine of the worst principal angle between equal-rank subspaces
    return float(np.linalg.svd(u.T @ v, compute_uv=False).min() ** 2)


def test_complete_data_matches_top_eigenvector():
    gt, data = spiked(d=80, n=240, snr=15.0, seed=10)
    model = fit_ppca(MaskedMatrix.complete(data), FitOptions(k=1, seed=3))
    u = extract_directions(model)
    v = top_eigvec_complete(data, 1)
    assert r_squared(u[:, 0], v[:, 0]) >= 0.999


def test_complete_data_sigma2_matches_trailing_eigenvalue_mean():
    gt, data = spiked(d=60, n=300, snr=12.0, seed=20)
    opts = FitOptions(k=1, seed=3, rel_tolerance=1e-10, max_iterations=10_000)
    model = fit_ppca(MaskedMatrix.complete(data), opts)
    trailing = covariance_eigenvalues(data)[1:].mean()
    assert abs(model.noise_variance - trailing) / trailing <= 1e-6


def test_rejects_fully_missing_column():
    values = np.random.default_rng(0).normal(size=(20, 5))
    mask = np.ones((20, 5), dtype=bool)
    mask[:, 3] = False
    with pytest.raises(DegenerateColumnError) as err:
        fit_ppca(MaskedMatrix(values, mask), FitOptions(k=1))
    assert err.value.column == 3


def test_rejects_k_not_below_d():
    data = np.random.default_rng(0).normal(size=(20, 4))
    with pytest.raises(DomainError):
        fit_ppca(MaskedMatrix.complete(data), FitOptions(k=4))


def test_fit_options_validation():
    for bad in (
        dict(k=0),
        dict(k=1, max_iterations=0),
        dict(k=1, rel_tolerance=0.0),
        dict(k=1, tolerance_streak=0),
    ):
        with pytest.raises(DomainError):
            FitOptions(**bad)


def test_fit_deterministic():
    gt, data = spiked(d=40, n=100, snr=10.0, seed=30)
    x = apply_mcar_mask(data, 0.3, seed=5)
    a = fit_ppca(x, FitOptions(k=1, seed=7))
    b = fit_ppca(x, FitOptions(k=1, seed=7))
    assert np.array_equal(a.loadings, b.loadings)
    assert a.noise_variance == b.noise_variance
    assert a.log_likelihood == b.log_likelihood
    assert a.n_iterations == b.n_iterations


def test_loglik_nondecreasing_on_masked_data():
    gt, data = spiked(d=50, n=150, snr=10.0, k=2, seed=40)
    x = apply_mcar_mask(data, 0.4, seed=6)
    model = fit_ppca(x, FitOptions(k=2, seed=8))
    h = model.loglik_history
    drops = np.diff(h) / np.abs(h[:-1])
    assert drops.min() >= -1e-8


def test_masked_fit_recovers_direction_above_threshold():
    gt, data = spiked(d=150, n=300, snr=20.0, sigma2=0.05, seed=50)
    x = apply_mcar_mask(data, 0.3, seed=9)
    model = fit_ppca(x, FitOptions(k=1, seed=2))
    u = extract_directions(model)
    assert r_squared(u[:, 0], gt.directions[:, 0]) >= 0.8


def test_sigma2_floor_respected():
    gt = make_ground_truth(10, [1.0], 1e-30, seed=60)
    data = sample_dataset(gt, 50, seed=61)
    model = fit_ppca(MaskedMatrix.complete(data), FitOptions(k=1, seed=1))
    assert model.noise_variance >= 1e-12


def test_fully_missing_rows_are_skipped_and_counted():
    gt, data = spiked(d=30, n=80, snr=10.0, seed=70)
    mask = np.ones((80, 30), dtype=bool)
    mask[[4, 17]] = False
    x = MaskedMatrix(data, mask)
    model = fit_ppca(x, FitOptions(k=1, seed=4))
    assert model.n_skipped_rows == 2
    # dropping those rows outright gives the same fit
    kept = np.ones(80, dtype=bool)
    kept[[4, 17]] = False
    model_dropped = fit_ppca(MaskedMatrix(data[kept], mask[kept]), FitOptions(k=1, seed=4))
    assert model.noise_variance == pytest.approx(model_dropped.noise_variance, rel=1e-9)
    assert r_squared(
        extract_directions(model)[:, 0], extract_directions(model_dropped)[:, 0]
    ) >= 1.0 - 1e-9


def test_extract_directions_diagonal_case():
    a = np.zeros((5, 2))
    a[0, 0] = 2.0
    a[1, 1] = 1.0
    u = extract_directions(a)
    assert abs(u[0, 0]) == pytest.approx(1.0, abs=1e-12)
    assert abs(u[1, 1]) == pytest.approx(1.0, abs=1e-12)


def test_extract_directions_rotation_invariant():
    rng = np.random.default_rng(80)
    a = rng.normal(size=(30, 2)) @ np.diag([3.0, 1.0])
    theta = 0.7
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    u1 = extract_directions(a)
    u2 = extract_directions(a @ rot)
    for i in range(2):
        assert r_squared(u1[:, i], u2[:, i]) >= 1.0 - 1e-10


def test_extract_directions_k1_normalizes():
    a = np.array([[3.0], [4.0]])
    u = extract_directions(a)
    assert np.allclose(np.abs(u[:, 0]), [0.6, 0.8])


def test_extract_directions_rank_deficient_warns():
    a = np.zeros((6, 2))
    a[:, 0] = np.arange(6.0)
    with pytest.warns(RuntimeWarning):
        u = extract_directions(a)
    assert u.shape == (6, 1)


def test_top_eigvec_rank_one_rows():
    a = np.array([1.0, 2.0, 2.0])
    signs = np.array([1, -1, 1, -1, 1.0])
    data = np.outer(signs, a)
    v = top_eigvec_complete(data, 1)
    assert r_squared(v[:, 0], a) >= 1.0 - 1e-12


def test_top_eigvec_pure_noise_is_unaligned():
    # expected alignment with any fixed direction is 1/D = 0.005
    rng = np.random.default_rng(90)
    fixed = np.zeros(200)
    fixed[0] = 1.0
    vals = []
    for trial in range(20):
        data = rng.normal(size=(100, 200))
        v = top_eigvec_complete(data, 1)
        vals.append(r_squared(v[:, 0], fixed))
    assert np.mean(vals) <= 0.05


def test_top_eigvec_agrees_with_em_on_spiked_data():
    gt, data = spiked(d=100, n=400, snr=12.0, k=2, seed=100)
    model = fit_ppca(MaskedMatrix.complete(data), FitOptions(k=2, seed=5))
    u = extract_directions(model)
    v = top_eigvec_complete(data, 2)
    assert subspace_r2(u, v) >= 0.999


def test_top_eigvec_rejects_masked_input():
    data = np.random.default_rng(1).normal(size=(10, 4))
    x = apply_mcar_mask(data, 0.5, seed=2)
    with pytest.raises(DomainError):
        top_eigvec_complete(x, 1)
    # a fully observed MaskedMatrix is fine
    v = top_eigvec_complete(MaskedMatrix.complete(data), 1)
    assert v.shape == (4, 1)
