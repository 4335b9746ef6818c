"""Projective geometry over the Hermitian form diag(1, 1, -1)."""

from dataclasses import dataclass, field

import numpy as np

from .errors import (CoincidentPoints, DegenerateOrthogonal, IsotropicPoint,
                     PointNotOnLine, Unrealizable)

J = np.diag([1.0, 1.0, -1.0]).astype(complex)
ISO_TOL = 1e-9
EUCLID_TOL = 1e-9


def _coords(x):
    if isinstance(x, ProjectivePoint):
        return x.coords
    return np.asarray(x, dtype=complex).reshape(3)


def herm(x, y):
    """<x, y> = x1 conj(y1) + x2 conj(y2) - x3 conj(y3) on the stored representatives."""
    a, b = _coords(x), _coords(y)
    return complex(a[0] * np.conj(b[0]) + a[1] * np.conj(b[1]) - a[2] * np.conj(b[2]))


def signature(x, tol=ISO_TOL):
    """Sign of <x, x>, with the isotropy band |<x,x>| <= tol * max|coord|^2."""
    c = _coords(x)
    n = herm(c, c).real
    scale = float(np.max(np.abs(c))) ** 2
    if scale == 0.0:
        raise ValueError("zero vector is not a projective point")
    if abs(n) <= tol * scale:
        return 0
    return 1 if n > 0 else -1


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    coords: np.ndarray
    sig: int = field(default=None)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex).reshape(3).copy()
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "sig", signature(c))

    def __repr__(self):
        return f"ProjectivePoint({np.round(self.coords, 6).tolist()}, sig={self.sig:+d})"

    def normalized(self):
        """Representative with |<p,p>| = 1 (or unit Euclidean norm when isotropic)."""
        n = herm(self.coords, self.coords).real
        if self.sig == 0:
            return self.coords / np.linalg.norm(self.coords)
        return self.coords / np.sqrt(abs(n))

    def same_as(self, other, tol=1e-9):
        a, b = _coords(self), _coords(other)
        a = a / np.linalg.norm(a)
        b = b / np.linalg.norm(b)
        return abs(abs(np.vdot(a, b)) - 1.0) <= tol


def point(x):
    if isinstance(x, ProjectivePoint):
        return x
    return ProjectivePoint(np.asarray(x, dtype=complex))


def tance(p1, p2):
    p1, p2 = point(p1), point(p2)
    if p1.sig == 0 or p2.sig == 0:
        raise IsotropicPoint("tance needs nonisotropic points")
    a = herm(p1, p2)
    return (a * np.conj(a) / (herm(p1, p1) * herm(p2, p2))).real


def form_orthogonal(x, y):
    """A vector orthogonal to both x and y with respect to the form."""
    return np.conj(np.cross(J @ _coords(x), J @ _coords(y)))


@dataclass(frozen=True, eq=False)
class ComplexLine:
    polar: ProjectivePoint
    kind: str

    def contains(self, p, tol=1e-9):
        c = _coords(p)
        q = self.polar.coords
        return abs(herm(c, q)) <= tol * np.linalg.norm(c) * np.linalg.norm(q)


def _kind_from_sig(sig):
    return {1: "hyperbolic", -1: "spherical", 0: "euclidean"}[sig]


def line_through(p1, p2):
    p1, p2 = point(p1), point(p2)
    c = form_orthogonal(p1, p2)
    if np.linalg.norm(c) <= 1e-12 * np.linalg.norm(p1.coords) * np.linalg.norm(p2.coords):
        raise CoincidentPoints("points coincide projectively")
    polar = ProjectivePoint(c)
    return ComplexLine(polar, _kind_from_sig(polar.sig))


def kind_from_tance(t, tol=EUCLID_TOL):
    if abs(t - 1.0) <= tol:
        return "euclidean"
    if t > 1.0 or t < 0.0:
        return "hyperbolic"
    return "spherical"


def orthogonal_in_line(L, p):
    p = point(p)
    if not L.contains(p):
        raise PointNotOnLine("point is not on the line")
    q = ProjectivePoint(form_orthogonal(L.polar, p))
    if q.sig == 0:
        raise DegenerateOrthogonal("orthogonal complement in the line is isotropic")
    return q


_E1 = np.array([1, 0, 0], dtype=complex)
_E2 = np.array([0, 1, 0], dtype=complex)
_E3 = np.array([0, 0, 1], dtype=complex)


def pair_with_tance(t, s1, s2, tol=1e-12):
    """Two points of signatures s1, s2 with the prescribed tance.

    Realizable cases: (+,+) for t >= 0, (-,-) for t >= 1, mixed signs for t <= 0.
    t = 1 with (+,+) gives distinct points on a Euclidean line; with (-,-) it gives
    the same point twice.
    """
    t = float(t)
    if s1 == 1 and s2 == 1:
        if t < -tol:
            raise Unrealizable("two positive points have tance >= 0")
        t = max(t, 0.0)
        if abs(t - 1.0) <= tol:
            return point(_E1), point(_E1 + np.array([0, 1, 1], dtype=complex))
        if t < 1.0:
            return point(_E1), point(np.sqrt(t) * _E1 + np.sqrt(1 - t) * _E2)
        return point(_E1), point(np.sqrt(t) * _E1 + np.sqrt(t - 1) * _E3)
    if s1 == -1 and s2 == -1:
        if t < 1.0 - tol:
            raise Unrealizable("two negative points have tance >= 1")
        if abs(t - 1.0) <= tol:
            return point(_E3), point(_E3)
        return point(_E3), point(np.sqrt(t - 1) * _E1 + np.sqrt(t) * _E3)
    if t > tol:
        raise Unrealizable("points of opposite signature have tance <= 0")
    t = min(t, 0.0)
    if s1 == 1:
        return point(_E1), point(np.sqrt(-t) * _E1 + np.sqrt(1 - t) * _E3)
    return point(_E3), point(np.sqrt(1 - t) * _E1 + np.sqrt(-t) * _E3)


def gram_to_points(G, tol=1e-10):
    """Columns p_i with <p_i, p_j> = G[i, j], for Hermitian G embeddable in signature ++-."""
    G = np.asarray(G, dtype=complex)
    H = G.T
    w, U = np.linalg.eigh(H)
    scale = max(1.0, float(np.max(np.abs(w))))
    pos = [i for i in range(3) if w[i] > tol * scale]
    neg = [i for i in range(3) if w[i] < -tol * scale]
    if len(pos) > 2 or len(neg) > 1:
        raise Unrealizable(f"Gram matrix has signature ({len(pos)},{len(neg)})")
    zero = [i for i in range(3) if i not in pos and i not in neg]
    slots = [None, None, None]
    pos_slots = [0, 1]
    for i in sorted(pos, key=lambda i: -w[i]):
        slots[pos_slots.pop(0)] = i
    if neg:
        slots[2] = neg[0]
    for i in zero:
        slots[slots.index(None)] = i
    P = np.zeros((3, 3), dtype=complex)
    for row, i in enumerate(slots):
        P[row, :] = np.sqrt(abs(w[i])) * U[:, i].conj()
    return P


def triple_from_gram(t1, t2, t, signs, imag=0.0, t13=0.0):
    """Three points with tance(p1,p2)=t1, tance(p2,p3)=t2 and real triple ratio t.

    `imag` is the imaginary part of the triple ratio, the free phase left by (t1, t2, t).
    `t13` is only used when p2 is orthogonal to p1 or p3, where the triple ratio vanishes.
    """
    s1, s2, s3 = signs
    g12sq, g23sq = t1 * s1 * s2, t2 * s2 * s3
    if g12sq < -1e-12 or g23sq < -1e-12:
        raise Unrealizable("tance incompatible with the signatures")
    g12, g23 = np.sqrt(max(g12sq, 0.0)), np.sqrt(max(g23sq, 0.0))
    z = complex(t, imag)
    if g12 * g23 > 1e-14:
        g31 = z * s1 * s2 * s3 / (g12 * g23)
    else:
        if abs(z) > 1e-12:
            raise Unrealizable("triple ratio must vanish when p2 is orthogonal to a neighbour")
        g13sq = t13 * s1 * s3
        if g13sq < -1e-12:
            raise Unrealizable("t13 incompatible with the signatures")
        g31 = np.sqrt(max(g13sq, 0.0))
    G = np.array([[s1, g12, np.conj(g31)],
                  [g12, s2, g23],
                  [g31, g23, s3]], dtype=complex)
    P = gram_to_points(G)
    return tuple(point(P[:, i]) for i in range(3))


def triple_invariants(p1, p2, p3):
    """(tance(p1,p2), tance(p2,p3), Re and Im of the normalized triple product)."""
    z = herm(p1, p2) * herm(p2, p3) * herm(p3, p1) / (
        herm(p1, p1) * herm(p2, p2) * herm(p3, p3))
    return tance(p1, p2), tance(p2, p3), z.real, z.imag
