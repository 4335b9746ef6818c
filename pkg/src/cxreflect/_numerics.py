"""Cubic roots and small linear-algebra helpers used across modules."""

import cmath

import numpy as np

OMEGA = cmath.exp(2j * cmath.pi / 3)
OMEGAS = (1.0 + 0j, OMEGA, OMEGA * OMEGA)


def _cbrt(z):
    if z == 0:
        return 0j
    return cmath.exp(cmath.log(z) / 3)


def _polish(coef, r, steps=3):
    b, c, d = coef
    for _ in range(steps):
        p = ((r + b) * r + c) * r + d
        dp = (3 * r + 2 * b) * r + c
        if abs(dp) < 1e-300:
            break
        step = p / dp
        r_new = r - step
        p_new = ((r_new + b) * r_new + c) * r_new + d
        if abs(p_new) > abs(p):
            break
        r = r_new
    return r


def cubic_roots(b, c, d):
    """Roots of x^3 + b x^2 + c x + d by Cardano's formula and a Newton polish."""
    b, c, d = complex(b), complex(c), complex(d)
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    disc = cmath.sqrt(q * q / 4 + p ** 3 / 27)
    w1, w2 = -q / 2 + disc, -q / 2 - disc
    u = _cbrt(w1 if abs(w1) >= abs(w2) else w2)
    roots = []
    for k in range(3):
        uk = u * OMEGAS[k]
        vk = -p / (3 * uk) if uk != 0 else 0j
        roots.append(uk + vk - b / 3)
    return [_polish((b, c, d), r) for r in roots]


def su21_eigenvalues(tau):
    """Eigenvalues of any element of SU(2,1) with trace tau: x^3 - tau x^2 + conj(tau) x - 1."""
    tau = complex(tau)
    return cubic_roots(-tau, tau.conjugate(), -1.0)


def double_root(tau):
    """Repeated eigenvalue for a trace on the deltoid, in closed form."""
    tau = complex(tau)
    den = 6 * tau.conjugate() - 2 * tau * tau
    if abs(den) < 1e-12:
        return None
    lam = (9 - abs(tau) ** 2) / den
    return lam / abs(lam) if lam != 0 else None


def null_space(A, dim=1):
    """Orthonormal basis (columns) of the approximate null space of dimension dim."""
    _, s, vh = np.linalg.svd(A)
    return vh[3 - dim:].conj().T, s


def image_vector(A):
    """Dominant column-space direction of A."""
    u, s, _ = np.linalg.svd(A)
    return u[:, 0], s


def cluster(values, tol):
    """Group nearly equal complex numbers; returns list of (mean, count)."""
    groups = []
    for v in values:
        for g in groups:
            if abs(g[0] - v) <= tol:
                g[1].append(v)
                break
        else:
            groups.append([v, [v]])
    return [(sum(g[1]) / len(g[1]), len(g[1])) for g in groups]
