# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled pivot loop for the bounded revised simplex.

Same contract and pivoting rules (including ratio-test tie handling) as
``_kernel_py.run_pivots``. Bland pricing stops at the first eligible column,
so it only touches a prefix of ``A``.
"""

import numpy as np
from libc.math cimport fabs, INFINITY

cdef int OPTIMAL = 0
cdef int UNBOUNDED = 1
cdef int BUDGET = 2
cdef int BLAND = 0
cdef long long DEGENERATE_LIMIT = 50
cdef double TIE_TOL = 1e-12
cdef double TIE_PIVOT_FRAC = 1e-3


def run_pivots(double[::1, :] A, double[::1] cost, double[::1] upper,
               long long[::1] basis, signed char[::1] state,
               double[:, ::1] binv, double[::1] xb, long long[::1] ctl,
               long long max_pivots, double opt_tol, double piv_tol, int rule):
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t n = A.shape[1]
    cdef long long pivots = 0
    cdef int code = BUDGET
    cdef double[::1] y = np.empty(m)
    cdef double[::1] alpha = np.empty(m)
    cdef double[::1] lims = np.empty(m)
    cdef signed char[::1] up = np.zeros(m, dtype=np.int8)
    cdef Py_ssize_t i, j, r, q, leave
    cdef double dj, best, s, sgn, tol, amax, tmin, t, piv, ubr, f, tie_max
    cdef bint bland
    cdef long long p

    with nogil:
        while pivots < max_pivots:
            # duals y = c_B^T binv
            for i in range(m):
                y[i] = 0.0
            for r in range(m):
                f = cost[basis[r]]
                if f != 0.0:
                    for i in range(m):
                        y[i] += f * binv[r, i]

            bland = rule == BLAND or ctl[0] >= DEGENERATE_LIMIT
            q = -1
            best = 0.0
            for j in range(n):
                if state[j] == 0 or (state[j] == 1 and upper[j] <= 0.0):
                    continue
                s = 0.0
                for i in range(m):
                    s += y[i] * A[i, j]
                dj = cost[j] - s
                if (state[j] == 1 and dj < -opt_tol) or (state[j] == 2 and dj > opt_tol):
                    if bland:
                        q = j
                        break
                    if fabs(dj) > best:
                        best = fabs(dj)
                        q = j
            if q < 0:
                code = OPTIMAL
                break
            sgn = 1.0 if state[q] == 1 else -1.0

            amax = 0.0
            for r in range(m):
                s = 0.0
                for i in range(m):
                    s += binv[r, i] * A[i, q]
                alpha[r] = s
                if fabs(s) > amax:
                    amax = fabs(s)
            tol = piv_tol * (amax if amax > 1.0 else 1.0)

            tmin = INFINITY
            for r in range(m):
                s = sgn * alpha[r]
                lims[r] = INFINITY
                up[r] = 0
                if s > tol:
                    lims[r] = (xb[r] if xb[r] > 0.0 else 0.0) / s
                elif s < -tol:
                    ubr = upper[basis[r]]
                    if ubr != INFINITY:
                        lims[r] = ((ubr - xb[r]) if ubr > xb[r] else 0.0) / -s
                        up[r] = 1
                if lims[r] < tmin:
                    tmin = lims[r]
            if tmin == INFINITY and upper[q] == INFINITY:
                code = UNBOUNDED
                break
            if tmin >= upper[q] - TIE_TOL:
                leave = -1
                t = upper[q]
            else:
                tie_max = 0.0
                for r in range(m):
                    if lims[r] <= tmin + TIE_TOL and fabs(alpha[r]) > tie_max:
                        tie_max = fabs(alpha[r])
                if bland:
                    tie_max *= TIE_PIVOT_FRAC
                leave = -1
                for r in range(m):
                    if lims[r] <= tmin + TIE_TOL and fabs(alpha[r]) >= tie_max:
                        if leave < 0 or basis[r] < basis[leave]:
                            leave = r
                t = lims[leave]

            if t <= TIE_TOL:
                ctl[0] += 1
            else:
                ctl[0] = 0
            for r in range(m):
                xb[r] -= t * sgn * alpha[r]
            if leave < 0:
                state[q] = 3 - state[q]
            else:
                p = basis[leave]
                state[p] = 2 if up[leave] else 1
                xb[leave] = t if sgn > 0 else upper[q] - t
                basis[leave] = q
                state[q] = 0
                piv = alpha[leave]
                for i in range(m):
                    binv[leave, i] /= piv
                for r in range(m):
                    if r == leave:
                        continue
                    f = alpha[r]
                    if f != 0.0:
                        for i in range(m):
                            binv[r, i] -= f * binv[leave, i]
            pivots += 1
    return code, pivots
