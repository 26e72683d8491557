# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Must stay in lockstep with ``core_py``: same signatures, same update rules,
and the Metropolis sweeps consume the same pre-generated random arrays so
both backends walk identical trajectories.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, log, log1p, sin

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex clog(double complex)
    double creal(double complex)


cdef inline double complex _log2cosh(double complex z) nogil:
    if creal(z) < 0:
        z = -z
    return z + clog(1.0 + cexp(-2.0 * z))


# ---------------------------------------------------------------------------
# matrix-free spin Hamiltonian application over the full 2^n basis
# ---------------------------------------------------------------------------

def spin_apply(double complex[::1] out, double complex[::1] vec, int n_sites,
               long[::1] zz_i, long[::1] zz_j, double[::1] zz_w,
               long[::1] ex_i, long[::1] ex_j, double[::1] ex_w,
               double[::1] x_w):
    cdef Py_ssize_t dim = vec.shape[0]
    cdef Py_ssize_t a, b
    cdef int k, i, j
    cdef long mask
    cdef double diag, w
    with nogil:
        for a in range(dim):
            diag = 0.0
            for k in range(zz_w.shape[0]):
                if ((a >> zz_i[k]) ^ (a >> zz_j[k])) & 1:
                    diag -= zz_w[k]
                else:
                    diag += zz_w[k]
            out[a] = diag * vec[a]
        for k in range(ex_w.shape[0]):
            mask = (1 << ex_i[k]) | (1 << ex_j[k])
            w = 2.0 * ex_w[k]
            for a in range(dim):
                if ((a >> ex_i[k]) ^ (a >> ex_j[k])) & 1:
                    out[a] = out[a] + w * vec[a ^ mask]
        for i in range(x_w.shape[0]):
            w = x_w[i]
            if w != 0.0:
                mask = 1 << i
                for a in range(dim):
                    out[a] = out[a] + w * vec[a ^ mask]


# ---------------------------------------------------------------------------
# batched statevector gates; states is (batch, 2**n_qubits), updated in place
# ---------------------------------------------------------------------------

def ry_batch(double complex[:, ::1] states, int n_qubits, int qubit,
             double[::1] angles):
    cdef Py_ssize_t nb = states.shape[0], dim = states.shape[1]
    cdef Py_ssize_t inner = 1 << qubit
    cdef Py_ssize_t stride = inner << 1
    cdef Py_ssize_t b, base, p, lo, hi
    cdef double c, s
    cdef double complex a0, a1
    with nogil:
        for b in range(nb):
            c = cos(0.5 * angles[b])
            s = sin(0.5 * angles[b])
            base = 0
            while base < dim:
                for p in range(inner):
                    lo = base + p
                    hi = lo + inner
                    a0 = states[b, lo]
                    a1 = states[b, hi]
                    states[b, lo] = c * a0 - s * a1
                    states[b, hi] = s * a0 + c * a1
                base += stride


def rxexp_batch(double complex[:, ::1] states, int n_qubits, int qubit,
                double[::1] angles):
    cdef Py_ssize_t nb = states.shape[0], dim = states.shape[1]
    cdef Py_ssize_t inner = 1 << qubit
    cdef Py_ssize_t stride = inner << 1
    cdef Py_ssize_t b, base, p, lo, hi
    cdef double c
    cdef double complex s, a0, a1
    with nogil:
        for b in range(nb):
            c = cos(angles[b])
            s = 1.0j * sin(angles[b])
            base = 0
            while base < dim:
                for p in range(inner):
                    lo = base + p
                    hi = lo + inner
                    a0 = states[b, lo]
                    a1 = states[b, hi]
                    states[b, lo] = c * a0 + s * a1
                    states[b, hi] = s * a0 + c * a1
                base += stride


def cnot_batch(double complex[:, ::1] states, int n_qubits, int control,
               int target):
    cdef Py_ssize_t nb = states.shape[0], dim = states.shape[1]
    cdef Py_ssize_t b, a, other
    cdef long tmask = 1 << target
    cdef double complex tmp
    with nogil:
        for b in range(nb):
            for a in range(dim):
                if ((a >> control) & 1) and not ((a >> target) & 1):
                    other = a ^ tmask
                    tmp = states[b, a]
                    states[b, a] = states[b, other]
                    states[b, other] = tmp


# ---------------------------------------------------------------------------
# Metropolis sweeps; spins is (chains, n_sites) of +-1 floats, mutated in place
# together with the per-chain caches. Proposals and uniforms are pre-generated
# with shape (steps, chains).
# ---------------------------------------------------------------------------

def rbm_sweep_flip(double[:, ::1] spins, double complex[:, ::1] thetas,
                   double complex[::1] a, double complex[:, ::1] w,
                   long[:, ::1] sites, double[:, ::1] urand):
    cdef Py_ssize_t n_steps = sites.shape[0], n_chains = spins.shape[0]
    cdef Py_ssize_t n_hidden = thetas.shape[1]
    cdef Py_ssize_t t, c, m
    cdef long i
    cdef double s_cur, p
    cdef double complex dlog, nt
    cdef long n_acc = 0
    with nogil:
        for t in range(n_steps):
            for c in range(n_chains):
                i = sites[t, c]
                s_cur = spins[c, i]
                dlog = -2.0 * s_cur * a[i]
                for m in range(n_hidden):
                    nt = thetas[c, m] - 2.0 * s_cur * w[m, i]
                    dlog = dlog + _log2cosh(nt) - _log2cosh(thetas[c, m])
                p = exp(2.0 * creal(dlog))
                if urand[t, c] < p:
                    for m in range(n_hidden):
                        thetas[c, m] = thetas[c, m] - 2.0 * s_cur * w[m, i]
                    spins[c, i] = -s_cur
                    n_acc += 1
    return n_acc


def rbm_sweep_exchange(double[:, ::1] spins, double complex[:, ::1] thetas,
                       double complex[::1] a, double complex[:, ::1] w,
                       long[:, ::1] prop_i, long[:, ::1] prop_j,
                       double[:, ::1] urand):
    cdef Py_ssize_t n_steps = prop_i.shape[0], n_chains = spins.shape[0]
    cdef Py_ssize_t n_hidden = thetas.shape[1]
    cdef Py_ssize_t t, c, m
    cdef long i, j
    cdef double s_i, s_j, d_i, p
    cdef double complex dlog, nt
    cdef long n_acc = 0
    with nogil:
        for t in range(n_steps):
            for c in range(n_chains):
                i = prop_i[t, c]
                j = prop_j[t, c]
                s_i = spins[c, i]
                s_j = spins[c, j]
                d_i = s_j - s_i
                if d_i == 0.0:
                    continue
                dlog = d_i * (a[i] - a[j])
                for m in range(n_hidden):
                    nt = thetas[c, m] + d_i * (w[m, i] - w[m, j])
                    dlog = dlog + _log2cosh(nt) - _log2cosh(thetas[c, m])
                p = exp(2.0 * creal(dlog))
                if urand[t, c] < p:
                    for m in range(n_hidden):
                        thetas[c, m] = thetas[c, m] + d_i * (w[m, i] - w[m, j])
                    spins[c, i] = s_j
                    spins[c, j] = s_i
                    n_acc += 1
    return n_acc


def jastrow_sweep_flip(double[:, ::1] spins, double[:, ::1] fields,
                       double[:, ::1] jmat, long[:, ::1] sites,
                       double[:, ::1] urand):
    cdef Py_ssize_t n_steps = sites.shape[0], n_chains = spins.shape[0]
    cdef Py_ssize_t n_sites = spins.shape[1]
    cdef Py_ssize_t t, c, m
    cdef long i
    cdef double s_cur, dlog, p
    cdef long n_acc = 0
    with nogil:
        for t in range(n_steps):
            for c in range(n_chains):
                i = sites[t, c]
                s_cur = spins[c, i]
                dlog = -2.0 * s_cur * fields[c, i]
                p = exp(2.0 * dlog)
                if urand[t, c] < p:
                    for m in range(n_sites):
                        fields[c, m] = fields[c, m] - 2.0 * s_cur * jmat[i, m]
                    spins[c, i] = -s_cur
                    n_acc += 1
    return n_acc


def jastrow_sweep_exchange(double[:, ::1] spins, double[:, ::1] fields,
                           double[:, ::1] jmat, long[:, ::1] prop_i,
                           long[:, ::1] prop_j, double[:, ::1] urand):
    cdef Py_ssize_t n_steps = prop_i.shape[0], n_chains = spins.shape[0]
    cdef Py_ssize_t n_sites = spins.shape[1]
    cdef Py_ssize_t t, c, m
    cdef long i, j
    cdef double s_i, s_j, d_i, dlog, p
    cdef long n_acc = 0
    with nogil:
        for t in range(n_steps):
            for c in range(n_chains):
                i = prop_i[t, c]
                j = prop_j[t, c]
                s_i = spins[c, i]
                s_j = spins[c, j]
                d_i = s_j - s_i
                if d_i == 0.0:
                    continue
                dlog = d_i * (fields[c, i] - fields[c, j]) - d_i * d_i * jmat[i, j]
                p = exp(2.0 * dlog)
                if urand[t, c] < p:
                    for m in range(n_sites):
                        fields[c, m] = fields[c, m] + d_i * (jmat[i, m] - jmat[j, m])
                    spins[c, i] = s_j
                    spins[c, j] = s_i
                    n_acc += 1
    return n_acc
