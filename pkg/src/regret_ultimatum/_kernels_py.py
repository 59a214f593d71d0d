"""Pure numpy endpoint scan; used when the compiled extension is unavailable."""
import numpy as np


def endpoint_max(pi, gp, gn, gr, gd):
    """Maximize the regret gap over responder endpoint strategies.

    ``pi`` is an ``(m, n + 1)`` batch of proposer strategies.  The tables
    hold precomputed (possibly rescaled) regret values: ``gp[i]`` for the
    proposer's shortfall at offer ``i``, ``gn`` for the sure offer itself,
    ``gr[k]`` for the responder's share at ``k`` and ``gd[i, j]`` for the
    responder's pairwise comparisons.  Endpoint ``k`` rejects offers
    ``0..k-1``; ``k = 0`` (accept everything) is scanned last and only
    replaces a strictly smaller maximum.  Returns ``(values, k)``; other ties
    resolve to the lowest k.
    """
    pi = np.asarray(pi, dtype=float)
    size = pi.shape[1]
    acc_r = pi @ np.asarray(gr)
    best = np.full(pi.shape[0], -np.inf)
    bestk = np.zeros(pi.shape[0], dtype=np.int64)
    for k in list(range(1, size)) + [0]:
        tail = pi[:, k:]
        s = tail.sum(axis=1)
        lin = tail @ np.asarray(gp)[k:]
        cross = np.einsum("ri,ij,rj->r", pi[:, :k], np.asarray(gd)[:k, k:], tail)
        val = lin + (1.0 - s) * (gn - acc_r) - cross
        better = val > best
        best = np.where(better, val, best)
        bestk = np.where(better, k, bestk)
    return best, bestk
