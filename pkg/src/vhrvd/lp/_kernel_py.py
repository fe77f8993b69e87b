"""Pure numpy pivot loop for the bounded revised simplex.

Mirrors ``_kernel.pyx``; used when the compiled extension is not available
or ``VHRVD_PURE_PYTHON`` is set.

State shared by both kernels (arrays are updated in place):

* ``A``      (m, n) float64 standard-form matrix, ``A x = b``
* ``cost``   (n,) objective
* ``upper``  (n,) upper bounds; lower bounds are zero; ``inf`` allowed
* ``basis``  (m,) int64 basic variable of each row
* ``state``  (n,) int8: 0 basic, 1 nonbasic at lower, 2 nonbasic at upper
* ``binv``   (m, m) explicit basis inverse
* ``xb``     (m,) basic variable values
* ``ctl``    (1,) int64 length of the current run of degenerate pivots

Pricing rules: ``BLAND`` takes the smallest eligible index. ``DANTZIG``
takes the largest reduced cost but falls back to Bland while a run of
``DEGENERATE_LIMIT`` or more degenerate pivots is in progress, which keeps
termination finite.

Ratio-test ties: Dantzig mode takes the largest pivot. Bland mode takes the
smallest basic index among tied rows whose pivot is at least
``TIE_PIVOT_FRAC`` of the largest tied pivot; the filter keeps degenerate
runs from walking into a near-singular basis.
"""

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
BUDGET = 2

BLAND = 0
DANTZIG = 1

DEGENERATE_LIMIT = 50
# ratio ties closer than this are broken by pivot size and variable index
TIE_TOL = 1e-12
# tied rows whose pivot is below this fraction of the largest tied pivot are skipped
TIE_PIVOT_FRAC = 1e-3


def run_pivots(A, cost, upper, basis, state, binv, xb, ctl, max_pivots,
               opt_tol, piv_tol, rule):
    m = A.shape[0]
    pivots = 0
    while pivots < max_pivots:
        y = cost[basis] @ binv
        d = cost - y @ A
        cand = ((state == 1) & (d < -opt_tol) & (upper > 0)) | ((state == 2) & (d > opt_tol))
        idx = np.flatnonzero(cand)
        if idx.size == 0:
            return OPTIMAL, pivots
        bland = rule == BLAND or ctl[0] >= DEGENERATE_LIMIT
        if bland:
            q = int(idx[0])
        else:
            q = int(idx[np.argmax(np.abs(d[idx]))])
        sgn = 1.0 if state[q] == 1 else -1.0

        alpha = binv @ A[:, q]
        delta = sgn * alpha
        tol = piv_tol * max(1.0, float(np.max(np.abs(alpha)))) if m else piv_tol

        lims = np.full(m, np.inf)
        up = np.zeros(m, dtype=bool)
        ub_basic = upper[basis]
        dec = delta > tol
        inc = (delta < -tol) & (ub_basic != np.inf)
        lims[dec] = np.maximum(xb[dec], 0.0) / delta[dec]
        lims[inc] = np.maximum(ub_basic[inc] - xb[inc], 0.0) / -delta[inc]
        up[inc] = True
        tmin = lims.min() if m else np.inf
        if tmin == np.inf and upper[q] == np.inf:
            return UNBOUNDED, pivots
        if tmin >= upper[q] - TIE_TOL:
            leave = -1
            t = upper[q]
        else:
            ties = np.flatnonzero(lims <= tmin + TIE_TOL)
            size = np.abs(alpha[ties])
            if bland:
                ties = ties[size >= TIE_PIVOT_FRAC * size.max()]
            else:
                ties = ties[size == size.max()]
            leave = int(ties[np.argmin(basis[ties])])
            t = lims[leave]
            to_upper = up[leave]

        ctl[0] = ctl[0] + 1 if t <= TIE_TOL else 0
        xb -= t * delta
        if leave < 0:
            state[q] = 3 - state[q]
        else:
            p = basis[leave]
            state[p] = 2 if to_upper else 1
            xb[leave] = t if sgn > 0 else upper[q] - t
            basis[leave] = q
            state[q] = 0
            row = binv[leave] / alpha[leave]
            binv -= np.outer(alpha, row)
            binv[leave] = row
        pivots += 1
    return BUDGET, pivots
