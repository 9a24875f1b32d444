"""Pure-Python implementations of the hot loops (fallback for ``_ckernels``).

Both modules consume identical pre-drawn random arrays and make the same
accept/reject decisions, so returned assignments agree; running energies may
differ in the last few ulps.
"""
from __future__ import annotations

import math

import numpy as np


def enumerate_candidates(Q, a, slack):
    n = a.shape[0]
    idx = np.arange(1 << n, dtype=np.int64)
    vals = np.zeros(1 << n)
    bits = [((idx >> i) & 1).astype(bool) for i in range(n)]
    for i in range(n):
        if a[i] != 0.0:
            vals[bits[i]] += a[i]
        for j in range(i + 1, n):
            if Q[i, j] != 0.0:
                vals[bits[i] & bits[j]] += Q[i, j]
    lo, hi = vals.min(), vals.max()
    return (
        np.flatnonzero(vals <= lo + slack).astype(np.int64),
        np.flatnonzero(vals >= hi - slack).astype(np.int64),
    )


def anneal_sa(Q, a, x0, betas, uniforms):
    n = a.shape[0]
    q = Q.tolist()
    x = [int(v) for v in x0]
    field = [a[i] + sum(q[i][j] for j in range(n) if x[j]) for i in range(n)]
    energy = 0.0
    for i in range(n):
        if x[i]:
            energy += a[i]
            for j in range(i + 1, n):
                if x[j]:
                    energy += q[i][j]
    best = energy
    best_x = list(x)
    exp = math.exp
    for s in range(betas.shape[0]):
        beta = betas[s]
        u = uniforms[s].tolist()
        for i in range(n):
            d = field[i] if x[i] == 0 else -field[i]
            if d <= 0.0 or u[i] < exp(-beta * d):
                sign = 1.0 if x[i] == 0 else -1.0
                x[i] ^= 1
                energy += d
                qi = q[i]
                for j in range(n):
                    field[j] += sign * qi[j]
                if energy < best:
                    best = energy
                    best_x = list(x)
    return np.array(best_x, dtype=np.int8), float(best)


def anneal_sqa(Q, a, x0, beta_slice, jperp, uniforms):
    P, n = x0.shape
    q = Q.tolist()
    x = [[int(v) for v in row] for row in x0]
    field = [[a[i] + sum(q[i][j] for j in range(n) if x[k][j]) for i in range(n)] for k in range(P)]
    energies = []
    for k in range(P):
        e = 0.0
        for i in range(n):
            if x[k][i]:
                e += a[i]
                for j in range(i + 1, n):
                    if x[k][j]:
                        e += q[i][j]
        energies.append(e)
    best = energies[0]
    best_x = list(x[0])
    for k in range(1, P):
        if energies[k] < best:
            best = energies[k]
            best_x = list(x[k])
    exp = math.exp
    for s in range(jperp.shape[0]):
        jp = jperp[s]
        us = uniforms[s].tolist()
        for k in range(P):
            xk = x[k]
            xu = x[k - 1]
            xd = x[(k + 1) % P]
            fk = field[k]
            u = us[k]
            for i in range(n):
                d = fk[i] if xk[i] == 0 else -fk[i]
                spin = 1.0 - 2.0 * xk[i]
                nb = (1.0 - 2.0 * xu[i]) + (1.0 - 2.0 * xd[i])
                dw = -beta_slice * d - 2.0 * jp * spin * nb
                if dw >= 0.0 or u[i] < exp(dw):
                    sign = 1.0 if xk[i] == 0 else -1.0
                    xk[i] ^= 1
                    energies[k] += d
                    qi = q[i]
                    for j in range(n):
                        fk[j] += sign * qi[j]
                    if energies[k] < best:
                        best = energies[k]
                        best_x = list(xk)
    return np.array(best_x, dtype=np.int8), float(best)


def _apply_1q(amps, n, q, u00, u01, u10, u11):
    view = amps.reshape(1 << (n - q - 1), 2, 1 << q)
    a0 = view[:, 0, :]
    a1 = view[:, 1, :]
    tmp = a0.copy()
    a0 *= u00
    a0 += u01 * a1
    a1 *= u11
    a1 += u10 * tmp


def rx_layer(amps, n, theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    for q in range(n):
        _apply_1q(amps, n, q, c, -1j * s, -1j * s, c)


def ry_layer(amps, n, thetas):
    for q in range(n):
        c, s = math.cos(thetas[q] / 2), math.sin(thetas[q] / 2)
        _apply_1q(amps, n, q, c, -s, s, c)


def cx_chain(amps, n):
    for q in range(n - 1):
        view = amps.reshape(1 << (n - q - 2), 2, 2, 1 << q)
        tmp = view[:, 0, 1, :].copy()
        view[:, 0, 1, :] = view[:, 1, 1, :]
        view[:, 1, 1, :] = tmp
