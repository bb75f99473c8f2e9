"""Pure-numpy fallback for the Monte Carlo accumulation kernel.

Same contract as the compiled extension ``xicse._mc_core``: given a batch of
proposal samples, sum the importance weights of the samples that land in the
sublevel region.  Selected at import time by ``xicse._backend`` when the
compiled module is unavailable.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def accumulate(x, phi_pieces, t_eff, psi_pieces, tilt):
    """Accumulate importance weights over one sample batch.

    x           : (m, n) nonnegative samples in log coordinates
    phi_pieces  : (p, n) gauge pieces of the singular weight
    t_eff       : sublevel threshold; a sample counts when min_j <piece_j, x> > t_eff
    psi_pieces  : (q, n) gauge pieces of the fixed weight, or None for psi = 0
    tilt        : (n,) proposal tilt; weights are exp(g_psi(x) - <tilt, x>) <= 1

    Returns (sum of weights, sum of squared weights, accepted count).
    """
    inside = (x @ phi_pieces.T).min(axis=1) > t_eff
    count = int(inside.sum())
    if psi_pieces is None:
        return float(count), float(count), count
    xs = x[inside]
    logw = (xs @ psi_pieces.T).min(axis=1) - xs @ tilt
    w = np.exp(logw)
    return float(w.sum()), float((w * w).sum()), count
