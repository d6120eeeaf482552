"""Central-difference verification of analytic gradients."""

from __future__ import annotations

import numpy as np


def grad_check(net, batch, rng: np.random.Generator | None = None,
               max_entries: int = 400, h: float = 1e-5) -> float:
    """Max relative error between analytic and central-difference gradients.

    ``net`` must expose ``loss_and_grad(batch)`` (populates net.store.grad),
    ``loss(batch)`` (forward only) and ``store``. All parameters are checked
    when the network is small; otherwise a random subsample of at least
    ``max_entries`` entries is used.
    """
    store = net.store
    store.zero_grad()
    net.loss_and_grad(batch)
    analytic = store.grad.copy()
    store.zero_grad()

    n = store.value.size
    if n <= max_entries or rng is None:
        indices = np.arange(n)
    else:
        indices = rng.choice(n, size=max_entries, replace=False)

    # Central differences carry ~|loss| * eps / h of roundoff noise; entries far
    # below the gradient's overall scale are compared against this floor rather
    # than against their own magnitude.
    floor = max(1e-10, 1e-6 * float(np.abs(analytic).max()))

    flat = store.value
    worst = 0.0
    for idx in indices:
        saved = flat[idx]
        flat[idx] = saved + h
        plus = net.loss(batch)
        flat[idx] = saved - h
        minus = net.loss(batch)
        flat[idx] = saved
        fd = (plus - minus) / (2.0 * h)
        scale = max(abs(fd), abs(analytic[idx]), floor)
        worst = max(worst, abs(fd - analytic[idx]) / scale)
    return worst
