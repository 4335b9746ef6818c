"""The triangle T of angle pairs, the unfolded trace and the wall segments.

Angles in this module are stored in units of pi: a TrianglePoint (x, y) stands for
(theta1, theta2) = (x*pi, y*pi).  Exact inputs use fractions.Fraction, matrix-derived
ones use floats.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from ._numerics import OMEGAS, double_root, su21_eigenvalues
from .errors import DegenerateInput, OutOfTriangle, OutsideDeltoid

TWO = Fraction(2)
T_TOL = 1e-12


def _is_exact(v):
    return isinstance(v, (int, Fraction))


@dataclass(frozen=True)
class TrianglePoint:
    """Angle pair (x*pi, y*pi) in the closed triangle 0 <= y <= x <= 2."""

    x: object
    y: object

    @property
    def theta1(self):
        return float(self.x) * math.pi

    @property
    def theta2(self):
        return float(self.y) * math.pi

    @property
    def exact(self):
        return _is_exact(self.x) and _is_exact(self.y)

    @classmethod
    def from_radians(cls, t1, t2):
        return cls(t1 / math.pi, t2 / math.pi)

    def radians(self):
        return self.theta1, self.theta2

    def in_triangle(self, tol=T_TOL):
        x, y = self.x, self.y
        if self.exact:
            return 0 <= y <= x <= 2
        x, y = float(x), float(y)
        return -tol <= y <= x + tol and x <= 2 + tol

    def twin(self):
        """The other representative of the identified side, or None."""
        two, zero = (TWO, Fraction(0)) if self.exact else (2.0, 0.0)
        if self.y == 0 and self.x != 0:
            return TrianglePoint(two, self.x)
        if self.x == 2 and self.y != 2:
            return TrianglePoint(self.y, zero)
        return None

    def __str__(self):
        return f"({_fmt(self.x)}pi, {_fmt(self.y)}pi)"


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    return f"{float(v):.12g}"


def _mod2(v):
    if _is_exact(v):
        return Fraction(v) % 2
    r = math.fmod(float(v), 2.0)
    if r < 0:
        r += 2.0
    if r > 2.0 - 1e-12:
        r = 0.0
    return r


def canonicalize_pi(x, y):
    """Canonical representative in T of the unordered pair {x, y} (pi units) mod 2.

    On the identified side the representative (t, 0) is preferred over (2, t).
    """
    a, b = _mod2(x), _mod2(y)
    if a < b:
        a, b = b, a
    return TrianglePoint(a, b)


def canonicalize(theta1, theta2):
    """Canonical representative in T of an unordered angle pair given in radians."""
    return canonicalize_pi(theta1 / math.pi, theta2 / math.pi)


def _eigs_pi(x, y):
    """The three eigenvalue angles of E_{x,y} in pi units; the last is negative type."""
    return ((2 * x - y) / 3, (2 * y - x) / 3, -(x + y) / 3)


def unfolded_trace(p, check=True):
    """Trace of E_{theta1,theta2} = diag of the three eigenvalues above."""
    if not isinstance(p, TrianglePoint):
        p = TrianglePoint.from_radians(*p)
    if check and not p.in_triangle(1e-9):
        raise OutOfTriangle(f"{p} is not in T")
    x, y = float(p.x), float(p.y)
    return sum(cmath.exp(1j * math.pi * e) for e in _eigs_pi(x, y))


def _trace_jacobian(x, y):
    e = [cmath.exp(1j * math.pi * v) for v in _eigs_pi(x, y)]
    d1 = 1j * math.pi * (2 * e[0] - e[1] - e[2]) / 3
    d2 = 1j * math.pi * (-e[0] + 2 * e[1] - e[2]) / 3
    return d1, d2


def _candidates(eigs):
    out = []
    for k in range(3):
        ph = [cmath.phase(l) / math.pi for l in eigs]
        others = [ph[i] - ph[k] for i in range(3) if i != k]
        c = canonicalize_pi(*others)
        out.append(c)
        if abs(c.y) < 1e-9:
            out.append(TrianglePoint(2.0, float(c.x)))
            if abs(c.x) < 1e-9:
                out.append(TrianglePoint(2.0, 2.0))
    return out


def _clamp(p):
    x = min(max(float(p.x), 0.0), 2.0)
    y = min(max(float(p.y), 0.0), x)
    return TrianglePoint(x, y)


def unfolded_inverse(tau, tol=1e-8):
    """The unique point of T whose unfolded trace is tau."""
    tau = complex(tau)
    from .isometry import deltoid_f
    if deltoid_f(tau) > tol * (1 + abs(tau) ** 4):
        raise OutsideDeltoid(f"trace {tau} lies outside the deltoid")
    for k, d in enumerate(OMEGAS):
        if abs(tau - 3 * d) <= 1e-7:
            return [TrianglePoint(0.0, 0.0), TrianglePoint(2.0, 2.0), TrianglePoint(2.0, 0.0)][k]
    eigs = su21_eigenvalues(tau)
    gaps = [abs(eigs[i] - eigs[j]) for i in range(3) for j in range(i + 1, 3)]
    boundary = min(gaps) < 1e-5
    if boundary:
        lam = double_root(tau)
        if lam is not None:
            eigs = [lam, lam, lam ** -2]
    else:
        eigs = [l / abs(l) for l in eigs]
    best = min(_candidates(eigs), key=lambda c: abs(unfolded_trace(c, check=False) - tau))
    best = _clamp(best)
    if not boundary:
        best = _newton(best, tau)
    return best


def _newton(p, tau, steps=3):
    x, y = float(p.x), float(p.y)
    r = unfolded_trace(TrianglePoint(x, y), check=False) - tau
    for _ in range(steps):
        if abs(r) < 1e-15:
            break
        d1, d2 = _trace_jacobian(x, y)
        det = d1.real * d2.imag - d2.real * d1.imag
        if abs(det) < 1e-14:
            break
        dx = (-r.real * d2.imag + d2.real * r.imag) / det
        dy = (-d1.real * r.imag + d1.imag * r.real) / det
        q = _clamp(TrianglePoint(x + dx, y + dy))
        r2 = unfolded_trace(q, check=False) - tau
        if abs(r2) >= abs(r):
            break
        x, y, r = float(q.x), float(q.y), r2
    return TrianglePoint(x, y)


@dataclass(frozen=True)
class WallSegment:
    """Segment of the inverse image of a tangent line, in exact pi units."""

    start: TrianglePoint
    end: TrianglePoint
    slope: object
    label: int
    chain: int

    def midpoint(self):
        return TrianglePoint((self.start.x + self.end.x) / 2, (self.start.y + self.end.y) / 2)

    def as_tuple(self):
        return (self.start.x, self.start.y, self.end.x, self.end.y)


def _chains(b):
    """Tables of three two-segment chains for a line label b = 3a (pi units) in [0, 6)."""
    h = b / 2
    P = TrianglePoint
    if b < 2:
        return [
            [P(h, 0), P(b, b), P(2, 1 + h)],
            [P(2 - h, 2 - h), P(2, 2 - b), P(1 + h, 0)],
            [P(1 - h, 1 - h), P(2 - b, 0), P(2, h)],
        ]
    if b < 4:
        return [
            [P(3 - h, 3 - h), P(2, 4 - b), P(h, 0)],
            [P(2, h - 1), P(4 - b, 0), P(2 - h, 2 - h)],
            [P(h - 1, 0), P(b - 2, b - 2), P(2, h)],
        ]
    return [
        [P(2, h - 2), P(6 - b, 0), P(3 - h, 3 - h)],
        [P(h - 2, 0), P(b - 4, b - 4), P(2, h - 1)],
        [P(4 - h, 4 - h), P(2, 6 - b), P(h - 1, 0)],
    ]


def eigen_labels(p, a):
    """All j such that exp(i*pi*(a + 2j/3)) is an eigenvalue of E at p (exact)."""
    out = set()
    for e in _eigs_pi(Fraction(p.x), Fraction(p.y)):
        r = (e - a) % 2
        for j in range(3):
            if r == Fraction(2 * j, 3):
                out.add(j)
    return out


def eigen_label(p, a):
    """Smallest j such that exp(i*pi*(a + 2j/3)) is an eigenvalue of E at p, else None."""
    labels = eigen_labels(p, a)
    return min(labels) if labels else None


def walls(a):
    """Segments of the inverse image of l_alpha, l_{w alpha}, l_{w^2 alpha}, alpha = e^{i a pi}.

    `a` is an exact rational in pi units.  Each segment carries the index j of the line
    l_{w^j alpha} it lies on and the index of its two-segment chain.
    """
    a = Fraction(a) % 2
    if a in (0, Fraction(2, 3), Fraction(4, 3)):
        raise DegenerateInput("inverse image is a median of T")
    out = []
    for ci, pts in enumerate(_chains(3 * a)):
        for s, e in zip(pts, pts[1:]):
            # the midpoint can be a crossing with another line, so also use a generic point
            third = TrianglePoint((2 * s.x + e.x) / 3, (2 * s.y + e.y) / 3)
            common = eigen_labels(third, a) & eigen_labels(s, a) & eigen_labels(e, a)
            j = min(common) if common else None
            dx = e.x - s.x
            slope = (e.y - s.y) / dx if dx != 0 else None
            out.append(WallSegment(s, e, slope, j, ci))
    return out
