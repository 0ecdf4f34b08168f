# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled fiber kernels for dense gate application."""

from libc.stdlib cimport free, malloc

ctypedef double complex cplx


def apply_fibers(cplx[::1] state, const cplx[:, ::1] mat,
                 const Py_ssize_t[::1] bases, const Py_ssize_t[::1] offsets):
    """In place: for every base, state[base + offsets] = mat @ state[base + offsets]."""
    cdef Py_ssize_t k = offsets.shape[0]
    cdef Py_ssize_t nb = bases.shape[0]
    cdef Py_ssize_t b, i, j, n, p, base, nnz = 0
    cdef double xr, xi, ar, ai
    if mat.shape[0] != k or mat.shape[1] != k:
        raise ValueError("matrix shape does not match fiber length")
    for i in range(k):
        for j in range(k):
            if mat[i, j] != 0:
                nnz += 1
    # row-compressed nonzeros, split into real and imaginary parts: complex
    # multiplication in C goes through a slow NaN-aware helper
    cdef double* buf = <double*> malloc(2 * k * sizeof(double))
    cdef double* vre = <double*> malloc((nnz + 1) * sizeof(double))
    cdef double* vim = <double*> malloc((nnz + 1) * sizeof(double))
    cdef Py_ssize_t* col = <Py_ssize_t*> malloc((nnz + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* start = <Py_ssize_t*> malloc((k + 1) * sizeof(Py_ssize_t))
    cdef double* st = <double*> &state[0]
    if buf == NULL or vre == NULL or vim == NULL or col == NULL or start == NULL:
        free(buf); free(vre); free(vim); free(col); free(start)
        raise MemoryError()
    n = 0
    for i in range(k):
        start[i] = n
        for j in range(k):
            if mat[i, j] != 0:
                vre[n] = mat[i, j].real
                vim[n] = mat[i, j].imag
                col[n] = j
                n += 1
    start[k] = n
    try:
        with nogil:
            for b in range(nb):
                base = bases[b]
                for i in range(k):
                    p = 2 * (base + offsets[i])
                    buf[2 * i] = st[p]
                    buf[2 * i + 1] = st[p + 1]
                for i in range(k):
                    ar = 0.0
                    ai = 0.0
                    for n in range(start[i], start[i + 1]):
                        j = col[n]
                        xr = buf[2 * j]
                        xi = buf[2 * j + 1]
                        ar = ar + vre[n] * xr - vim[n] * xi
                        ai = ai + vre[n] * xi + vim[n] * xr
                    p = 2 * (base + offsets[i])
                    st[p] = ar
                    st[p + 1] = ai
    finally:
        free(buf); free(vre); free(vim); free(col); free(start)


def apply_diagonal(cplx[::1] state, const cplx[::1] diag,
                   const Py_ssize_t[::1] bases, const Py_ssize_t[::1] offsets):
    """In place: state[base + offsets[i]] *= diag[i]."""
    cdef Py_ssize_t k = offsets.shape[0]
    cdef Py_ssize_t nb = bases.shape[0]
    cdef Py_ssize_t b, i, p
    cdef double xr, xi, dr, di
    if diag.shape[0] != k:
        raise ValueError("diagonal length does not match fiber length")
    cdef double* st = <double*> &state[0]
    cdef const double* dg = <const double*> &diag[0]
    with nogil:
        for b in range(nb):
            for i in range(k):
                p = 2 * (bases[b] + offsets[i])
                xr = st[p]
                xi = st[p + 1]
                dr = dg[2 * i]
                di = dg[2 * i + 1]
                st[p] = dr * xr - di * xi
                st[p + 1] = dr * xi + di * xr
