# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Lindblad kernels.

Operators are converted to row-compressed form once, so one right-hand-side
evaluation costs O(nnz * d) instead of the O(d^3) of dense products.  The
Fock-space operators used here have O(d) non-zeros.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

BACKEND = "cython"

ctypedef double complex cplx


cdef class _CSR:
    cdef public cnp.ndarray indptr, indices, data

    def __init__(self, a):
        a = np.asarray(a, dtype=complex)
        rows, cols = np.nonzero(a)
        self.indptr = np.zeros(a.shape[0] + 1, dtype=np.intp)
        np.add.at(self.indptr, rows + 1, 1)
        self.indptr = np.cumsum(self.indptr).astype(np.intp)
        self.indices = cols.astype(np.intp)
        self.data = np.ascontiguousarray(a[rows, cols], dtype=complex)


cdef void _rhs(Py_ssize_t d,
               Py_ssize_t[::1] hp, Py_ssize_t[::1] hi, cplx[::1] hv,
               Py_ssize_t nj, Py_ssize_t[:, ::1] jp, Py_ssize_t[::1] ji, cplx[::1] jv,
               const double[::1] rates,
               const cplx[:, ::1] rho, cplx[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, p, q, k, l, kk
    cdef cplx acc, h, oik
    cdef double r2
    # -i Heff rho
    for i in range(d):
        for j in range(d):
            out[i, j] = 0
        for p in range(hp[i], hp[i + 1]):
            k = hi[p]
            h = -1j * hv[p]
            for j in range(d):
                out[i, j] = out[i, j] + h * rho[k, j]
    # + i rho Heff^dag : (rho Heff^dag)_ij = sum_k rho_ik conj(H_jk)
    for j in range(d):
        for p in range(hp[j], hp[j + 1]):
            k = hi[p]
            h = 1j * hv[p].conjugate()
            for i in range(d):
                out[i, j] = out[i, j] + rho[i, k] * h
    # jumps: 2 r o rho o^dag
    for kk in range(nj):
        r2 = 2.0 * rates[kk]
        for i in range(d):
            for p in range(jp[kk, i], jp[kk, i + 1]):
                k = ji[p]
                oik = r2 * jv[p]
                for j in range(d):
                    for q in range(jp[kk, j], jp[kk, j + 1]):
                        l = ji[q]
                        out[i, j] = out[i, j] + oik * rho[k, l] * jv[q].conjugate()


def _pack_jumps(jumps, Py_ssize_t d):
    nj = len(jumps)
    jp = np.zeros((max(nj, 1), d + 1), dtype=np.intp)
    ji_parts, jv_parts = [], []
    offset = 0
    for kk in range(nj):
        c = _CSR(jumps[kk])
        jp[kk] = c.indptr + offset
        ji_parts.append(c.indices)
        jv_parts.append(c.data)
        offset += len(c.indices)
    ji = np.concatenate(ji_parts) if ji_parts else np.zeros(1, dtype=np.intp)
    jv = np.concatenate(jv_parts) if jv_parts else np.zeros(1, dtype=complex)
    if len(ji) == 0:
        ji = np.zeros(1, dtype=np.intp)
        jv = np.zeros(1, dtype=complex)
    return nj, jp, np.ascontiguousarray(ji, dtype=np.intp), np.ascontiguousarray(jv, dtype=complex)


def lindblad_rhs(heff, jumps, rates, rho):
    cdef Py_ssize_t d = np.asarray(heff).shape[0]
    hc = _CSR(heff)
    nj, jp, ji, jv = _pack_jumps(jumps, d)
    r = np.ascontiguousarray(rates, dtype=float)
    if r.size == 0:
        r = np.zeros(1)
    rr = np.ascontiguousarray(rho, dtype=complex)
    out = np.empty((d, d), dtype=complex)
    _rhs(d, hc.indptr, hc.indices, hc.data, nj, jp, ji, jv, r, rr, out)
    return out


def rk4_propagate(heff, jumps, rates, rho0, double dt, Py_ssize_t nsteps, double blowup=1e6):
    """Fixed-step RK4.  Returns (rho, steps_taken, status); status 1 = diverged."""
    cdef Py_ssize_t d = np.asarray(heff).shape[0]
    hc = _CSR(heff)
    nj, jp, ji, jv = _pack_jumps(jumps, d)
    r = np.ascontiguousarray(rates, dtype=float)
    if r.size == 0:
        r = np.zeros(1)
    rho_a = np.array(rho0, dtype=complex, order="C", copy=True)
    cdef cplx[:, ::1] rho = rho_a
    cdef cplx[:, ::1] k1 = np.empty((d, d), dtype=complex)
    cdef cplx[:, ::1] k2 = np.empty((d, d), dtype=complex)
    cdef cplx[:, ::1] k3 = np.empty((d, d), dtype=complex)
    cdef cplx[:, ::1] k4 = np.empty((d, d), dtype=complex)
    cdef cplx[:, ::1] tmp = np.empty((d, d), dtype=complex)
    cdef Py_ssize_t[::1] hp = hc.indptr
    cdef Py_ssize_t[::1] hi = hc.indices
    cdef cplx[::1] hv = hc.data
    cdef Py_ssize_t[:, ::1] jpv = jp
    cdef Py_ssize_t[::1] jiv = ji
    cdef cplx[::1] jvv = jv
    cdef const double[::1] rv = r
    cdef Py_ssize_t step, i, j, njc = nj
    cdef cplx tr0 = 0, tr
    cdef double big, a, h2 = 0.5 * dt, h6 = dt / 6.0
    cdef int status = 0
    for i in range(d):
        tr0 = tr0 + rho[i, i]
    with nogil:
        for step in range(nsteps):
            _rhs(d, hp, hi, hv, njc, jpv, jiv, jvv, rv, rho, k1)
            for i in range(d):
                for j in range(d):
                    tmp[i, j] = rho[i, j] + h2 * k1[i, j]
            _rhs(d, hp, hi, hv, njc, jpv, jiv, jvv, rv, tmp, k2)
            for i in range(d):
                for j in range(d):
                    tmp[i, j] = rho[i, j] + h2 * k2[i, j]
            _rhs(d, hp, hi, hv, njc, jpv, jiv, jvv, rv, tmp, k3)
            for i in range(d):
                for j in range(d):
                    tmp[i, j] = rho[i, j] + dt * k3[i, j]
            _rhs(d, hp, hi, hv, njc, jpv, jiv, jvv, rv, tmp, k4)
            big = 0.0
            tr = 0
            for i in range(d):
                for j in range(d):
                    rho[i, j] = rho[i, j] + h6 * (k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
                    a = rho[i, j].real * rho[i, j].real + rho[i, j].imag * rho[i, j].imag
                    if not (a <= big):
                        big = a
                tr = tr + rho[i, i]
            big = sqrt(big)
            if not (big <= blowup) or fabs((tr - tr0).real) + fabs((tr - tr0).imag) > 1e-6:
                status = 1
                break
    return rho_a, (step + 1 if nsteps > 0 else 0), status


def assemble_liouvillian(heff, jumps, rates):
    """Dense superoperator on column-stacked vec(rho) (index i + j*d)."""
    cdef Py_ssize_t d = np.asarray(heff).shape[0]
    hc = _CSR(heff)
    nj, jp, ji, jv = _pack_jumps(jumps, d)
    r = np.ascontiguousarray(rates, dtype=float)
    if r.size == 0:
        r = np.zeros(1)
    L_a = np.zeros((d * d, d * d), dtype=complex)
    cdef cplx[:, ::1] L = L_a
    cdef Py_ssize_t[::1] hp = hc.indptr
    cdef Py_ssize_t[::1] hi = hc.indices
    cdef cplx[::1] hv = hc.data
    cdef Py_ssize_t[:, ::1] jpv = jp
    cdef Py_ssize_t[::1] jiv = ji
    cdef cplx[::1] jvv = jv
    cdef const double[::1] rv = r
    cdef Py_ssize_t i, j, k, l, p, q, kk, njc = nj
    cdef cplx h, c
    with nogil:
        for i in range(d):
            for p in range(hp[i], hp[i + 1]):
                k = hi[p]
                h = -1j * hv[p]
                for j in range(d):
                    L[i + j * d, k + j * d] = L[i + j * d, k + j * d] + h
        for j in range(d):
            for p in range(hp[j], hp[j + 1]):
                k = hi[p]
                h = 1j * hv[p].conjugate()
                for i in range(d):
                    L[i + j * d, i + k * d] = L[i + j * d, i + k * d] + h
        for kk in range(njc):
            for i in range(d):
                for p in range(jpv[kk, i], jpv[kk, i + 1]):
                    k = jiv[p]
                    c = 2.0 * rv[kk] * jvv[p]
                    for j in range(d):
                        for q in range(jpv[kk, j], jpv[kk, j + 1]):
                            l = jiv[q]
                            L[i + j * d, k + l * d] = L[i + j * d, k + l * d] + c * jvv[q].conjugate()
    return L_a
