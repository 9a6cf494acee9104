import numpy as np
import pytest

from supdens import EPANECHNIKOV, GAUSSIAN, DataError, eval_K, eval_W, get_kernel
from supdens.errors import ConfigError
from supdens.quadrature import composite_simpson


def test_epanechnikov_values():
    assert eval_K(EPANECHNIKOV, 0.0) == pytest.approx(0.75, abs=0)
    assert eval_K(EPANECHNIKOV, 1.5) == 0.0
    assert eval_W(EPANECHNIKOV, 0.0) == pytest.approx(0.5, abs=0)
    assert eval_W(EPANECHNIKOV, -1.0) == 0.0
    assert eval_W(EPANECHNIKOV, 1.0) == 1.0


def test_epanechnikov_w_at_half_matches_quadrature():
    # numeric integration of K up to 0.5
    expected = composite_simpson(EPANECHNIKOV.pdf, -1.0, 0.5, 20001)
    assert eval_W(EPANECHNIKOV, 0.5) == pytest.approx(0.84375, abs=1e-12)
    assert eval_W(EPANECHNIKOV, 0.5) == pytest.approx(expected, abs=1e-9)


def test_gaussian_values():
    assert eval_K(GAUSSIAN, 0.0) == pytest.approx(1.0 / np.sqrt(2 * np.pi), rel=1e-15)
    assert eval_W(GAUSSIAN, 0.0) == pytest.approx(0.5, abs=1e-15)
    assert eval_W(GAUSSIAN, np.inf) == 1.0
    assert eval_W(GAUSSIAN, -np.inf) == 0.0


@pytest.mark.parametrize("kernel", [EPANECHNIKOV, GAUSSIAN])
def test_kernel_integrates_to_one(kernel):
    r = kernel.support_radius if kernel.compact else 10.0
    total = composite_simpson(kernel.pdf, -r, r, 40001)
    assert total == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("kernel", [EPANECHNIKOV, GAUSSIAN])
def test_w_symmetry_thousand_points(kernel):
    rng = np.random.default_rng(101)
    z = rng.uniform(-3, 3, 1000)
    s = np.asarray(eval_W(kernel, z)) + np.asarray(eval_W(kernel, -z))
    assert np.max(np.abs(s - 1.0)) < 1e-12


@pytest.mark.parametrize("kernel", [EPANECHNIKOV, GAUSSIAN])
def test_w_matches_quadrature_of_k(kernel):
    rng = np.random.default_rng(102)
    lo = -kernel.support_radius if kernel.compact else -9.0
    for z in rng.uniform(-1.5, 1.5, 12):
        quad = composite_simpson(kernel.pdf, lo, float(z), 40001)
        assert eval_W(kernel, float(z)) == pytest.approx(quad, abs=1e-9)


@pytest.mark.parametrize("kernel", [EPANECHNIKOV, GAUSSIAN])
def test_k_is_derivative_of_w(kernel):
    # central difference, step 1e-5, away from support edges
    rng = np.random.default_rng(103)
    z = rng.uniform(-0.9, 0.9, 200)
    step = 1e-5
    fd = (np.asarray(eval_W(kernel, z + step)) - np.asarray(eval_W(kernel, z - step))) / (2 * step)
    assert np.max(np.abs(fd - np.asarray(eval_K(kernel, z)))) < 1e-6


def test_kernel_symmetry_and_nonnegativity():
    rng = np.random.default_rng(104)
    z = rng.uniform(-4, 4, 500)
    for kernel in (EPANECHNIKOV, GAUSSIAN):
        k = np.asarray(eval_K(kernel, z))
        assert np.all(k >= 0)
        assert np.max(np.abs(k - np.asarray(eval_K(kernel, -z)))) < 1e-15


def test_lookup_and_errors():
    assert get_kernel("epanechnikov") is EPANECHNIKOV
    assert get_kernel("Gaussian") is GAUSSIAN
    with pytest.raises(ConfigError):
        get_kernel("triangular")
    with pytest.raises(DataError):
        eval_K(EPANECHNIKOV, np.inf)
    with pytest.raises(DataError):
        eval_W(GAUSSIAN, np.nan)
