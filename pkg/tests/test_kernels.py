import numpy as np
import pytest

from muellerkit import kernels


def test_python_and_compiled_paths_agree():
    if not kernels.HAS_NUMBA:
        pytest.skip("numba disabled or unavailable")
    rng = np.random.default_rng(0)
    for _ in range(50):
        kre = rng.normal(size=4)
        kim = rng.normal(size=4)
        Lp, imp = kernels.mueller_product_py(kre, kim)
        Lj, imj = kernels.mueller_product_jit(kre, kim)
        assert np.all(Lp == Lj) and imp == imj
        Ap = kernels.factor_matrix_py(kre, kim)
        Aj = kernels.factor_matrix_jit(kre, kim)
        assert np.all(Ap == Aj)
    rows = rng.normal(size=(4, 6))
    e = rng.normal(size=4)
    assert np.all(kernels.quad_residual_py(rows, e)
                  == kernels.quad_residual_jit(rows, e))
    assert np.all(kernels.quad_jacobian_py(rows, e)
                  == kernels.quad_jacobian_jit(rows, e))


def test_newton_multistart_paths_agree():
    if not kernels.HAS_NUMBA:
        pytest.skip("numba disabled or unavailable")
    rng = np.random.default_rng(1)
    rows = rng.normal(size=(4, 6))
    starts = rng.uniform(-2, 2, size=(16, 4))
    rp, npn, fp = kernels.newton_multistart_py(rows, starts, 1e-10, 60)
    rj, nj, fj = kernels.newton_multistart_jit(rows, starts, 1e-10, 60)
    assert np.all(fp == fj)
    assert np.allclose(rp[fp == 1], rj[fj == 1], atol=1e-12)


def test_disable_flag_selects_python_path(monkeypatch):
    import importlib
    import subprocess
    import sys
    code = ("import os; os.environ['MUELLERKIT_DISABLE_NUMBA']='1'; "
            "from muellerkit import kernels; "
            "assert kernels.mueller_product is kernels.mueller_product_py; "
            "assert not kernels.HAS_NUMBA; print('ok')")
    out = subprocess.run([sys.executable, "-c", code],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "ok" in out.stdout
