"""Pure-Python cyclic Jacobi kernel (fallback for the compiled extension)."""
import math

import numpy as np


def _off_norm(a):
    # sequential row-major sum, matching the compiled kernel bit for bit
    s = 0.0
    for x in a[np.triu_indices(a.shape[0], 1)].tolist():
        s += x * x
    return math.sqrt(2.0 * s)


def jacobi_diagonalize(a, v, tol, max_sweeps):
    """Diagonalize symmetric ``a`` in place, accumulating rotations into ``v``.

    Same contract as the compiled kernel: returns ``(sweeps, off)``.
    """
    n = a.shape[0]
    sweep = 0
    off = _off_norm(a)
    while off > tol and sweep < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                x = a[:, p].copy()
                y = a[:, q].copy()
                a[:, p] = c * x - s * y
                a[:, q] = s * x + c * y
                x = a[p, :].copy()
                y = a[q, :].copy()
                a[p, :] = c * x - s * y
                a[q, :] = s * x + c * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                x = v[:, p].copy()
                y = v[:, q].copy()
                v[:, p] = c * x - s * y
                v[:, q] = s * x + c * y
        sweep += 1
        off = _off_norm(a)
    return sweep, off
