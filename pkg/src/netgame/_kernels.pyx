# Compiled hot loops.  Mirrors netgame._pykernels exactly; see that module
# for the contract of each function.

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy
from scipy.linalg.cython_lapack cimport dsyevr

import numpy as np

cdef double CLAMP_TOL = 1e-10


cdef struct EigWork:
    int n
    double* a
    double* w
    double* z
    int* isuppz
    double* work
    int* iwork
    int lwork
    int liwork


cdef int eigwork_init(EigWork* ew, int n) except -1:
    ew.n = n
    ew.lwork = 26 * n + 64
    ew.liwork = 10 * n + 16
    ew.a = <double*> malloc(n * n * sizeof(double))
    ew.w = <double*> malloc(n * sizeof(double))
    ew.z = <double*> malloc(n * sizeof(double))
    ew.isuppz = <int*> malloc(2 * n * sizeof(int))
    ew.work = <double*> malloc(ew.lwork * sizeof(double))
    ew.iwork = <int*> malloc(ew.liwork * sizeof(int))
    if not (ew.a and ew.w and ew.z and ew.isuppz and ew.work and ew.iwork):
        raise MemoryError()
    return 0


cdef void eigwork_free(EigWork* ew) noexcept:
    free(ew.a); free(ew.w); free(ew.z); free(ew.isuppz); free(ew.work); free(ew.iwork)


cdef double second_eigenvalue(EigWork* ew, double* L, int* info) noexcept nogil:
    cdef char jobz = b'N'
    cdef char rng = b'I'
    cdef char uplo = b'L'
    cdef int n = ew.n
    cdef int il = 2
    cdef int iu = 2
    cdef int m = 0
    cdef int ldz = 1
    cdef double vl = 0.0
    cdef double vu = 0.0
    cdef double abstol = 0.0
    cdef double lam
    memcpy(ew.a, L, n * n * sizeof(double))
    dsyevr(&jobz, &rng, &uplo, &n, ew.a, &n, &vl, &vu, &il, &iu, &abstol,
           &m, ew.w, ew.z, &ldz, ew.isuppz, ew.work, &ew.lwork,
           ew.iwork, &ew.liwork, info)
    lam = ew.w[0]
    if lam < 0.0 and lam > -CLAMP_TOL:
        lam = 0.0
    return lam


cdef inline void add_edge(double* L, int n, int u, int w, double x) noexcept nogil:
    L[u * n + u] += x
    L[w * n + w] += x
    L[u * n + w] -= x
    L[w * n + u] -= x


cdef struct Search:
    int n
    int nb
    double* L
    const int* us
    const int* ws
    const double* costs
    const int* starts
    const int* quotas
    const double* limits
    int* chosen
    int* best
    int total_q
    double best_val
    long long count
    double tie_tol
    int info


cdef void search(Search* s, EigWork* ew, int b, int pos, int r, int depth, double cost) noexcept nogil:
    cdef int j, end, k
    cdef double c, lam
    if r == 0:
        if b + 1 < s.nb:
            search(s, ew, b + 1, s.starts[b + 1], s.quotas[b + 1], depth, 0.0)
            return
        lam = second_eigenvalue(ew, s.L, &s.info)
        if s.info != 0:
            return
        s.count += 1
        if lam > s.best_val + s.tie_tol:
            s.best_val = lam
            for k in range(s.total_q):
                s.best[k] = s.chosen[k]
        return
    end = s.starts[b + 1]
    for j in range(pos, end - r + 1):
        if s.info != 0:
            return
        c = cost + s.costs[j]
        if c > s.limits[b]:
            continue
        s.chosen[depth] = j
        if s.us[j] != s.ws[j]:
            add_edge(s.L, s.n, s.us[j], s.ws[j], 1.0)
        search(s, ew, b, j + 1, r - 1, depth + 1, c)
        if s.us[j] != s.ws[j]:
            add_edge(s.L, s.n, s.us[j], s.ws[j], -1.0)


def best_selection(const double[:, ::1] fixed, const int[::1] us, const int[::1] ws, const double[::1] costs,
                   const int[::1] starts, const int[::1] quotas, const double[::1] limits, double tie_tol):
    cdef Search s
    cdef EigWork ew
    cdef int n = fixed.shape[0]
    cdef int nb = quotas.shape[0]
    cdef int k
    cdef double[:, ::1] L = np.array(fixed, dtype=np.float64, order="C")
    cdef int[::1] chosen
    cdef int[::1] best
    s.total_q = 0
    for k in range(nb):
        s.total_q += quotas[k]
    chosen = np.zeros(max(s.total_q, 1), dtype=np.intc)
    best = np.full(max(s.total_q, 1), -1, dtype=np.intc)
    s.n = n
    s.nb = nb
    s.L = &L[0, 0]
    s.us = &us[0] if us.shape[0] else NULL
    s.ws = &ws[0] if ws.shape[0] else NULL
    s.costs = &costs[0] if costs.shape[0] else NULL
    s.starts = &starts[0]
    s.quotas = &quotas[0]
    s.limits = &limits[0]
    s.chosen = &chosen[0]
    s.best = &best[0]
    s.best_val = -1.0
    s.count = 0
    s.tie_tol = tie_tol
    s.info = 0
    eigwork_init(&ew, n)
    try:
        with nogil:
            search(&s, &ew, 0, starts[0], quotas[0], 0, 0.0)
    finally:
        eigwork_free(&ew)
    if s.info != 0:
        raise ArithmeticError(f"dsyevr failed with info={s.info}")
    if s.count == 0:
        return None, float("nan"), 0
    return tuple(int(best[k]) for k in range(s.total_q)), s.best_val, int(s.count)


def weighted_lambda2(const double[:, ::1] fixed, const int[::1] us, const int[::1] ws, const double[::1] weights):
    cdef EigWork ew
    cdef int n = fixed.shape[0]
    cdef int j, info = 0
    cdef double lam
    cdef double[:, ::1] L = np.array(fixed, dtype=np.float64, order="C")
    for j in range(us.shape[0]):
        if us[j] != ws[j] and weights[j] != 0.0:
            add_edge(&L[0, 0], n, us[j], ws[j], weights[j])
    eigwork_init(&ew, n)
    try:
        lam = second_eigenvalue(&ew, &L[0, 0], &info)
    finally:
        eigwork_free(&ew)
    if info != 0:
        raise ArithmeticError(f"dsyevr failed with info={info}")
    return lam


cdef double _golden_phi(EigWork* ew, const double* fixed, double* L, int n, const int* us,
                        const int* ws, const double* w, const double* d, int m, double t,
                        int* info) noexcept nogil:
    cdef int j
    cdef double x
    memcpy(L, fixed, n * n * sizeof(double))
    for j in range(m):
        x = w[j] + t * d[j]
        if us[j] != ws[j] and x != 0.0:
            add_edge(L, n, us[j], ws[j], x)
    return second_eigenvalue(ew, L, info)


def golden_line_search(const double[:, ::1] fixed, const int[::1] us, const int[::1] ws,
                       const double[::1] w, const double[::1] d, double tmax, double f0, double tol):
    cdef EigWork ew
    cdef int n = fixed.shape[0]
    cdef int m = us.shape[0]
    cdef int info = 0
    cdef double g = 0.6180339887498949
    cdef double a = 0.0, b = tmax, x1, x2, p1, p2, f1, best_t, best_f
    cdef double[:, ::1] L = np.empty((n, n), dtype=np.float64)
    if m == 0:
        return 0.0, f0
    eigwork_init(&ew, n)
    try:
        with nogil:
            f1 = _golden_phi(&ew, &fixed[0, 0], &L[0, 0], n, &us[0], &ws[0], &w[0], &d[0], m, tmax, &info)
            if f1 > f0:
                best_t = tmax
                best_f = f1
            else:
                best_t = 0.0
                best_f = f0
            x1 = b - g * (b - a)
            x2 = a + g * (b - a)
            p1 = _golden_phi(&ew, &fixed[0, 0], &L[0, 0], n, &us[0], &ws[0], &w[0], &d[0], m, x1, &info)
            p2 = _golden_phi(&ew, &fixed[0, 0], &L[0, 0], n, &us[0], &ws[0], &w[0], &d[0], m, x2, &info)
            while b - a > tol * tmax and info == 0:
                if p1 < p2:
                    a = x1
                    x1 = x2
                    p1 = p2
                    x2 = a + g * (b - a)
                    p2 = _golden_phi(&ew, &fixed[0, 0], &L[0, 0], n, &us[0], &ws[0], &w[0], &d[0], m, x2, &info)
                else:
                    b = x2
                    x2 = x1
                    p2 = p1
                    x1 = b - g * (b - a)
                    p1 = _golden_phi(&ew, &fixed[0, 0], &L[0, 0], n, &us[0], &ws[0], &w[0], &d[0], m, x1, &info)
            if p1 > best_f:
                best_t = x1
                best_f = p1
            if p2 > best_f:
                best_t = x2
                best_f = p2
    finally:
        eigwork_free(&ew)
    if info != 0:
        raise ArithmeticError(f"dsyevr failed with info={info}")
    return best_t, best_f
