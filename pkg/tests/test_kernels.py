from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wgcalc import _kernels_py, kernels

P = 2147483629  # largest prime below 2^31

try:
    from wgcalc import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")

square = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.integers(-(2**40), 2**40), min_size=n * n, max_size=n * n).map(
        lambda xs: np.array(xs, dtype=np.int64).reshape(n, n)
    )
)
rect = st.tuples(st.integers(1, 6), st.integers(1, 7)).flatmap(
    lambda rc: st.lists(st.integers(-3, 3), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
        lambda xs: np.array(xs, dtype=np.int64).reshape(rc)
    )
)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    forced = os.environ.get("WGCALC_PURE_PYTHON", "") in ("1", "true", "yes")
    if compiled is not None:
        assert kernels.BACKEND == ("python" if forced else "cython")


def test_env_forces_fallback():
    env = dict(os.environ, WGCALC_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from wgcalc import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@given(square)
@settings(max_examples=100)
def test_fallback_inverse(a):
    inv = _kernels_py.inverse_mod_p(a, P)
    am = np.mod(a, P).astype(object)
    if inv is None:
        return
    prod = am.dot(inv.astype(object)) % P
    assert (prod == np.eye(a.shape[0], dtype=object)).all()


def test_singular_returns_none():
    a = np.array([[1, 2], [2, 4]], dtype=np.int64)
    assert _kernels_py.inverse_mod_p(a, P) is None
    if compiled is not None:
        assert compiled.inverse_mod_p(a, P) is None


@needs_compiled
@given(square)
@settings(max_examples=100)
def test_compiled_matches_fallback_inverse(a):
    x = compiled.inverse_mod_p(a, P)
    y = _kernels_py.inverse_mod_p(a, P)
    assert (x is None) == (y is None)
    if x is not None:
        assert np.array_equal(np.asarray(x), y)


@needs_compiled
@given(rect)
@settings(max_examples=100)
def test_compiled_matches_fallback_pivots(a):
    assert list(compiled.pivot_columns_mod_p(a, P)) == list(_kernels_py.pivot_columns_mod_p(a, P))


def test_pivots_example():
    a = np.array([[1, 1, 2], [1, 1, 3]], dtype=np.int64)
    assert list(_kernels_py.pivot_columns_mod_p(a, P)) == [0, 2]
