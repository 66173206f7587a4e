"""Compiled pivot recursion for symmetric tridiagonal pencils."""

import numba


@numba.njit(cache=True, nogil=True)
def negative_pivots(diag, off, weight, shift):
    """Number of negative pivots of T - shift*W, or -1 on an exact zero pivot.

    T is symmetric tridiagonal (diag, off) and W = diag(weight). The pivots
    are the diagonal of the LDL^T factorisation, d_1 = t_11 - shift w_1,
    d_i = t_ii - shift w_i - off_{i-1}^2 / d_{i-1}.
    """
    n = diag.shape[0]
    count = 0
    d = diag[0] - shift * weight[0]
    if d == 0.0:
        return -1
    if d < 0.0:
        count += 1
    for i in range(1, n):
        d = (diag[i] - shift * weight[i]) - off[i - 1] * off[i - 1] / d
        if d == 0.0:
            return -1
        if d < 0.0:
            count += 1
    return count

