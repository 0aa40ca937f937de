import os
import subprocess
import sys

import numpy as np
import pytest

from oacqam import _kernels as k

needs_numba = pytest.mark.skipif(not k.HAVE_NUMBA, reason="numba not installed")


def test_uniforms_open_interval_and_deterministic():
    keys = k.trial_keys(11, np.arange(10_000))
    u = k.uniforms(keys, range(5))
    assert u.shape == (10_000, 5)
    assert np.all((u > 0) & (u < 1))
    assert np.array_equal(u, k.uniforms(k.trial_keys(11, np.arange(10_000)), range(5)))
    assert abs(u.mean() - 0.5) < 0.005


def test_keys_do_not_depend_on_batching():
    whole = k.trial_keys(3, np.arange(1000))
    parts = np.concatenate([k.trial_keys(3, np.arange(0, 400)), k.trial_keys(3, np.arange(400, 1000))])
    assert np.array_equal(whole, parts)
    assert not np.array_equal(whole, k.trial_keys(4, np.arange(1000)))


def test_counter_stream_is_cauchy():
    u = k.uniforms(k.trial_keys(2, np.arange(1_000_000)), [k.NOISE_RE])[:, 0]
    z = 0.8 * np.tan(np.pi * (u - 0.5))
    q1, med, q3 = np.quantile(z, [0.25, 0.5, 0.75])
    assert abs(med) < 0.01 * 0.8
    assert q1 == pytest.approx(-0.8, rel=0.02)
    assert q3 == pytest.approx(0.8, rel=0.02)


@needs_numba
@pytest.mark.parametrize("uniform_grid", [False, True])
@pytest.mark.parametrize("K,q,gamma", [(1, 2, 0.5), (10, 4, 0.1), (100, 8, 1.0), (3, 3, 1e-300)])
def test_backends_agree(uniform_grid, K, q, gamma):
    args = (np.uint64(2 ** 63 + 5), 1234, 20_000, K, q, 0.37, 0.91, gamma, uniform_grid)
    a = k.squared_errors_numpy(*args)
    b = k.squared_errors_numba(*args)
    assert a.dtype == b.dtype == np.int64
    assert np.array_equal(a, b)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, OACQAM_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from oacqam import _kernels as k; print(k.backend_name())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
