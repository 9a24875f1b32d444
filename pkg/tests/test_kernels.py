"""Compiled kernels against the pure-Python fallback on identical inputs."""
from __future__ import annotations

import numpy as np
import pytest

from conftest import random_problem
from qselect import _pykernels as py
from qselect import kernels

ck = pytest.importorskip("qselect._ckernels", reason="compiled extension not built")


def arrays(p):
    return np.ascontiguousarray(p.coupling_matrix), np.ascontiguousarray(p.linear_vector)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("seed", range(5))
def test_enumerate_candidates(seed):
    rng = np.random.default_rng(seed)
    p = random_problem(rng, 9, integer=True, scale=3)
    Q, a = arrays(p)
    for got, want in zip(ck.enumerate_candidates(Q, a, 1e-9), py.enumerate_candidates(Q, a, 1e-9)):
        assert sorted(got.tolist()) == sorted(want.tolist())


@pytest.mark.parametrize("seed", range(5))
def test_anneal_sa(seed):
    rng = np.random.default_rng(seed)
    p = random_problem(rng, 8)
    Q, a = arrays(p)
    x0 = rng.integers(0, 2, 8).astype(np.int8)
    betas = np.geomspace(0.1, 10, 30)
    u = rng.random((30, 8))
    xc, ec = ck.anneal_sa(Q, a, x0.copy(), betas, u)
    xp, ep = py.anneal_sa(Q, a, x0.copy(), betas, u)
    assert np.array_equal(np.asarray(xc), np.asarray(xp))
    assert ec == pytest.approx(ep, abs=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_anneal_sqa(seed):
    rng = np.random.default_rng(seed)
    p = random_problem(rng, 6)
    Q, a = arrays(p)
    P, S = 4, 20
    x0 = rng.integers(0, 2, (P, 6)).astype(np.int8)
    jperp = np.linspace(0.0, 2.0, S)
    u = rng.random((S, P, 6))
    xc, ec = ck.anneal_sqa(Q, a, x0.copy(), 0.5, jperp, u)
    xp, ep = py.anneal_sqa(Q, a, x0.copy(), 0.5, jperp, u)
    assert np.array_equal(np.asarray(xc), np.asarray(xp))
    assert ec == pytest.approx(ep, abs=1e-12)


def test_layers():
    rng = np.random.default_rng(1)
    n = 5
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    thetas = rng.uniform(-3, 3, n)
    for name, extra in (("rx_layer", (0.7,)), ("ry_layer", (thetas,)), ("cx_chain", ())):
        a, b = psi.copy(), psi.copy()
        getattr(ck, name)(a, n, *extra)
        getattr(py, name)(b, n, *extra)
        assert np.allclose(a, b, atol=1e-13), name
