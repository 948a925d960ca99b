"""Brute-force grid oracle for the lattice exponential-sum supremum.

Rebuilds the signed lattice weights from the Fejer coefficient definition and
evaluates |sum_j u_j exp(-2 pi i <nu_j, x>)|^2 directly on the polar grid with
radii R i / (res - 1), angles 2 pi a / res and R = 1 / (pi sigma). Prints the
values pinned in acceptance.cpp for ell = 6, r = 1, 2, 3 at res = 512.
"""

import numpy as np

GAMMA_LOWER = np.sqrt(4.0 / 3.0)


def fejer_power(ell, r):
    base = np.array([(ell - abs(j)) / ell**2 for j in range(-ell + 1, ell)], dtype=float)
    out = np.array([1.0])
    for _ in range(r):
        out = np.convolve(out, base)
    # Zero-pad to half width r * ell.
    return np.pad(out, r)


def lattice(ell, r, m=5, eps=None):
    eps = min(4.0 / ell, 0.9) if eps is None else eps
    alpha = fejer_power(ell, r)
    h = r * ell
    assert alpha.size == 2 * h + 1
    sep = 2.0 / m
    sigma = 2.0 / ((1.0 - eps) * GAMMA_LOWER * np.pi * m)
    j = np.arange(-h, h + 1)
    j1, j2 = np.meshgrid(j, j, indexing="ij")
    mag = np.outer(alpha, alpha)
    even = (j1 + j2) % 2 == 0
    u = np.where(even, mag / mag[even].sum(), -mag / mag[~even].sum())
    nodes = np.stack([(sep / 2) * j1, np.sqrt(3.0) * (sep / 2) * j2], axis=-1).reshape(-1, 2)
    return u.reshape(-1), nodes, sigma


def sup(ell, r, res=512):
    u, nodes, sigma = lattice(ell, r)
    radius = 1.0 / (np.pi * sigma)
    best = 0.0
    theta = 2.0 * np.pi * np.arange(res) / res
    for i in range(res):
        rho = radius * i / (res - 1.0)
        x = np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=-1)
        s = np.exp(-2j * np.pi * (x @ nodes.T)) @ u
        best = max(best, float(np.max(np.abs(s) ** 2)))
    return best


if __name__ == "__main__":
    for r in (1, 2, 3):
        print(f"PIN_R{r}={sup(6, r)!r}")
