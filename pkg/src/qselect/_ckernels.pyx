# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: Gray-code enumeration, Metropolis sweeps for SA / SQA, statevector layers."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin

cnp.import_array()


def enumerate_candidates(const double[:, ::1] Q, const double[::1] a, double slack):
    cdef Py_ssize_t n = a.shape[0]
    cdef long long total = 1LL << n
    cdef double[::1] field = np.array(a, dtype=np.float64)
    cdef signed char[::1] x = np.zeros(n, dtype=np.int8)
    cdef double val = 0.0, lo = 0.0, hi = 0.0, d, sign
    cdef long long t, gray = 0
    cdef Py_ssize_t i, j
    cdef int p
    for p in range(2):
        for i in range(n):
            field[i] = a[i]
            x[i] = 0
        val = 0.0
        gray = 0
        if p == 0:
            lo = 0.0
            hi = 0.0
        else:
            lo_out = [0] if val <= lo + slack else []
            hi_out = [0] if val >= hi - slack else []
        for t in range(1, total):
            i = 0
            while not ((t >> i) & 1):
                i += 1
            if x[i] == 0:
                d = field[i]
                sign = 1.0
            else:
                d = -field[i]
                sign = -1.0
            x[i] ^= 1
            gray ^= (1LL << i)
            val += d
            for j in range(n):
                field[j] += sign * Q[i, j]
            if p == 0:
                if val < lo:
                    lo = val
                if val > hi:
                    hi = val
            else:
                if val <= lo + slack:
                    lo_out.append(gray)
                if val >= hi - slack:
                    hi_out.append(gray)
    return np.array(lo_out, dtype=np.int64), np.array(hi_out, dtype=np.int64)


def anneal_sa(const double[:, ::1] Q, const double[::1] a, x0,
              const double[::1] betas, const double[:, ::1] uniforms):
    cdef Py_ssize_t n = a.shape[0], s, i, j
    cdef signed char[::1] x = np.array(x0, dtype=np.int8)
    cdef double[::1] field = np.empty(n)
    best_arr = np.array(x0, dtype=np.int8)
    cdef signed char[::1] best_x = best_arr
    cdef double energy = 0.0, best, d, sign, beta
    for i in range(n):
        field[i] = a[i]
        for j in range(n):
            if x[j]:
                field[i] += Q[i, j]
    for i in range(n):
        if x[i]:
            energy += a[i]
            for j in range(i + 1, n):
                if x[j]:
                    energy += Q[i, j]
    best = energy
    for s in range(betas.shape[0]):
        beta = betas[s]
        for i in range(n):
            d = field[i] if x[i] == 0 else -field[i]
            if d <= 0.0 or uniforms[s, i] < exp(-beta * d):
                sign = 1.0 if x[i] == 0 else -1.0
                x[i] ^= 1
                energy += d
                for j in range(n):
                    field[j] += sign * Q[i, j]
                if energy < best:
                    best = energy
                    best_x[:] = x
    return best_arr, best


def anneal_sqa(const double[:, ::1] Q, const double[::1] a, x0, double beta_slice,
               const double[::1] jperp, const double[:, :, ::1] uniforms):
    cdef Py_ssize_t P = x0.shape[0], n = x0.shape[1], s, k, i, j, ku, kd
    cdef signed char[:, ::1] x = np.array(x0, dtype=np.int8)
    cdef double[:, ::1] field = np.empty((P, n))
    cdef double[::1] energies = np.zeros(P)
    best_arr = np.array(x0[0], dtype=np.int8)
    cdef signed char[::1] best_x = best_arr
    cdef double best, d, sign, spin, nb, dw, jp
    for k in range(P):
        for i in range(n):
            field[k, i] = a[i]
            for j in range(n):
                if x[k, j]:
                    field[k, i] += Q[i, j]
        for i in range(n):
            if x[k, i]:
                energies[k] += a[i]
                for j in range(i + 1, n):
                    if x[k, j]:
                        energies[k] += Q[i, j]
    best = energies[0]
    for k in range(1, P):
        if energies[k] < best:
            best = energies[k]
            best_x[:] = x[k]
    for s in range(jperp.shape[0]):
        jp = jperp[s]
        for k in range(P):
            ku = k - 1 if k > 0 else P - 1
            kd = k + 1 if k < P - 1 else 0
            for i in range(n):
                d = field[k, i] if x[k, i] == 0 else -field[k, i]
                spin = 1.0 - 2.0 * x[k, i]
                nb = (1.0 - 2.0 * x[ku, i]) + (1.0 - 2.0 * x[kd, i])
                dw = -beta_slice * d - 2.0 * jp * spin * nb
                if dw >= 0.0 or uniforms[s, k, i] < exp(dw):
                    sign = 1.0 if x[k, i] == 0 else -1.0
                    x[k, i] ^= 1
                    energies[k] += d
                    for j in range(n):
                        field[k, j] += sign * Q[i, j]
                    if energies[k] < best:
                        best = energies[k]
                        best_x[:] = x[k]
    return best_arr, best


cdef inline void _rot_pairs(double* v, Py_ssize_t size, Py_ssize_t stride,
                            double c, double s, bint is_rx) noexcept nogil:
    # v holds interleaved (re, im) pairs; updates the (k, k + stride) amplitude pairs
    cdef Py_ssize_t base, k, i0, i1
    cdef double r0, m0, r1, m1
    base = 0
    while base < size:
        for k in range(base, base + stride):
            i0 = 2 * k
            i1 = 2 * (k + stride)
            r0 = v[i0]; m0 = v[i0 + 1]
            r1 = v[i1]; m1 = v[i1 + 1]
            if is_rx:
                # [[c, -i s], [-i s, c]]
                v[i0] = c * r0 + s * m1
                v[i0 + 1] = c * m0 - s * r1
                v[i1] = c * r1 + s * m0
                v[i1 + 1] = c * m1 - s * r0
            else:
                # [[c, -s], [s, c]]
                v[i0] = c * r0 - s * r1
                v[i0 + 1] = c * m0 - s * m1
                v[i1] = s * r0 + c * r1
                v[i1 + 1] = s * m0 + c * m1
        base += 2 * stride


def rx_layer(double complex[::1] amps, int n, double theta):
    """RX(theta) on every qubit, in place."""
    cdef double c = cos(theta / 2), s = sin(theta / 2)
    cdef Py_ssize_t size = amps.shape[0], q
    cdef double* v = <double*> &amps[0]
    with nogil:
        for q in range(n):
            _rot_pairs(v, size, 1 << q, c, s, True)


def ry_layer(double complex[::1] amps, int n, const double[::1] thetas):
    """RY(thetas[q]) on qubit q for every q, in place."""
    cdef Py_ssize_t size = amps.shape[0], q
    cdef double* v = <double*> &amps[0]
    with nogil:
        for q in range(n):
            _rot_pairs(v, size, 1 << q, cos(thetas[q] / 2), sin(thetas[q] / 2), False)


def cx_chain(double complex[::1] amps, int n):
    """CX(q, q+1) for q = 0 .. n-2 in order, in place."""
    cdef Py_ssize_t size = amps.shape[0], q, hi, lo, k, cbit, tbit
    cdef double* v = <double*> &amps[0]
    cdef double tr, ti
    with nogil:
        for q in range(n - 1):
            cbit = 1 << q
            tbit = 1 << (q + 1)
            # k runs over indices with control set and target clear
            hi = 0
            while hi < size:
                lo = cbit
                while lo < tbit:
                    for k in range(hi + lo, hi + lo + cbit):
                        tr = v[2 * k]; ti = v[2 * k + 1]
                        v[2 * k] = v[2 * (k | tbit)]; v[2 * k + 1] = v[2 * (k | tbit) + 1]
                        v[2 * (k | tbit)] = tr; v[2 * (k | tbit) + 1] = ti
                    lo += 2 * cbit
                hi += 2 * tbit
