"""Numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable. Both modules
expose the same functions and perform the same floating-point operations in
the same order, so the solver returns bit-identical results on either.
"""

import numpy as np

NAME = "numpy"


def signed_sums(beta, others):
    """xi values for every canonical sign pattern over ``others``.

    Entry ``c`` corresponds to the compact mask ``c``: bit ``p`` set means
    ``others[p]`` is in J+ (contributes ``-beta``), clear means J-. The last
    element of ``others`` is always in J- and is not part of the mask.
    """
    t = np.zeros(1)
    for j in others[:-1]:
        b = beta[j]
        t = np.concatenate((t + b, t - b))
    return t + beta[others[-1]]


def best_per_h(beta, slack, eps):
    """For each free index h, the canonical config with the largest feasible |xi_h|.

    Returns ``(compact_masks, xis, found)``. Among patterns whose ``|xi_h|``
    is within ``eps`` of the best feasible one, the smallest mask wins.
    """
    beta = np.ascontiguousarray(beta, dtype=float)
    k = beta.shape[0]
    masks = np.full(k, -1, dtype=np.int64)
    xis = np.zeros(k)
    found = np.zeros(k, dtype=bool)
    for h in range(k):
        others = [i for i in range(k) if i != h]
        t = signed_sums(beta, others)
        a = np.abs(t)
        feas = a <= beta[h] + slack
        if not feas.any():
            continue
        amax = a[feas].max()
        c = int(np.flatnonzero(feas & (a >= amax - eps))[0])
        masks[h] = c
        xis[h] = t[c]
        found[h] = True
    return masks, xis, found


def reduced_values(r, beta, pts, slack):
    """Max of G over the last two coordinates for each row of ``pts``.

    ``pts`` holds the first ``k-2`` coordinates. The remaining pair must sum
    to ``-sum(row)``; G is convex along that segment, so only its two
    endpoints are evaluated. Infeasible rows get ``-inf``.
    """
    k = r.shape[0]
    a, b = k - 2, k - 1
    pts = np.atleast_2d(pts)
    n = pts.shape[0]
    s = np.zeros(n)
    gp = np.zeros(n)
    for j in range(k - 2):
        col = pts[:, j]
        s = s + col
        gp = gp + np.sqrt(r[j] + col * col)
    s = -s
    lo = np.maximum(-beta[a], s - beta[b])
    hi = np.minimum(beta[a], s + beta[b])
    ok = lo <= hi + slack
    hi = np.maximum(hi, lo)
    best = np.full(n, -np.inf)
    for end in (lo, hi):
        xa = np.clip(end, -beta[a], beta[a])
        xb = np.clip(s - xa, -beta[b], beta[b])
        g = np.sqrt(r[a] + xa * xa) + np.sqrt(r[b] + xb * xb)
        best = np.maximum(best, g)
    out = (gp + best) / k
    out[~ok] = -np.inf
    return out


def grid_values(r, beta, coords, slack, chunk=1 << 18):
    """Reduced objective on the full tensor grid ``coords[0] x coords[1] x ...``.

    Returns a flat array in C order (last axis fastest).
    """
    r = np.asarray(r, dtype=float)
    beta = np.asarray(beta, dtype=float)
    n_axes = r.shape[0] - 2
    if n_axes == 0:
        return reduced_values(r, beta, np.zeros((1, 0)), slack)
    coords = np.asarray(coords, dtype=float)
    res = coords.shape[1]
    total = res**n_axes
    out = np.empty(total)
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        digits = np.empty((flat.shape[0], n_axes), dtype=np.int64)
        rem = flat
        for ax in range(n_axes - 1, -1, -1):
            digits[:, ax] = rem % res
            rem = rem // res
        pts = coords[np.arange(n_axes), digits]
        out[start : start + flat.shape[0]] = reduced_values(r, beta, pts, slack)
    return out
