"""Tangent lines to the deltoid, the length-2 trace parametrization and related values."""

import cmath
import math
from dataclasses import dataclass

from ._numerics import double_root, su21_eigenvalues
from .isometry import Parameter, deltoid_f

LINE_TOL = 1e-8


def _val(a):
    return a.value if isinstance(a, Parameter) else complex(a)


def tau_param(a1, a2, t):
    """a1 a2 + a1^-2 a2 + a1 a2^-2 + (a1^-2 - a1)(a2^-2 - a2) t."""
    x, y = _val(a1), _val(a2)
    return x * y + x ** -2 * y + x * y ** -2 + (x ** -2 - x) * (y ** -2 - y) * t


@dataclass(frozen=True)
class TangentLine:
    """The line l_alpha of traces having alpha as an eigenvalue."""

    alpha: complex

    @property
    def tangency(self):
        a = self.alpha
        return 2 * a + a ** -2

    @property
    def direction(self):
        """Unit direction e^{-i arg(alpha)/2} (defined up to sign)."""
        return cmath.exp(-0.5j * cmath.phase(self.alpha))

    def distance(self, tau):
        return abs(((complex(tau) - self.tangency) * self.direction.conjugate()).imag)

    def contains(self, tau, tol=LINE_TOL):
        return self.distance(tau) <= tol * (1 + abs(tau))

    def coordinate(self, tau):
        """Real coordinate of the projection of tau along the direction."""
        return ((complex(tau) - self.tangency) * self.direction.conjugate()).real


def line_contains(tau, alpha, tol=LINE_TOL):
    return TangentLine(_val(alpha)).contains(tau, tol)


def lines_through(tau, tol=1e-6):
    """Labels alpha (unit complex) of the tangent lines through tau."""
    tau = complex(tau)
    roots = su21_eigenvalues(tau)
    if abs(deltoid_f(tau)) <= 1e-7 * (1 + abs(tau) ** 4):
        gaps = sorted(abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3))
        if gaps[0] <= 1e-5:
            lam = double_root(tau)
            if lam is not None:
                roots = [lam, lam ** -2]
    units = [r / abs(r) for r in roots if abs(abs(r) - 1) <= tol]
    out = []
    for u in units:
        if all(abs(u - v) > tol for v in out):
            out.append(u)
    return out


def kappa(alpha, tau):
    a = _val(alpha)
    return (complex(tau) - 3) / (a ** -2 - a) ** 3


def chi(alpha):
    a = _val(alpha)
    return (a / (a ** -2 - a)).imag


def t_plus_minus(a1, a2):
    c1, c2 = chi(a1), chi(a2)
    root = math.sqrt((1 + 4 * c1 * c1) * (1 + 4 * c2 * c2))
    return (1 + 4 * c1 * c2 - root) / 2, (1 + 4 * c1 * c2 + root) / 2


def boundary_traces(a1, a2):
    """Closed forms of tau_{a1,a2} at t-, 0, 1 and t+ (the j = 1 values)."""
    s = cmath.phase(_val(a1)) % (2 * math.pi) + cmath.phase(_val(a2)) % (2 * math.pi)
    x = cmath.phase(_val(a1)) % (2 * math.pi)
    y = cmath.phase(_val(a2)) % (2 * math.pi)
    e = lambda v: cmath.exp(1j * v)
    A = 2 * e(-s / 2) + e(s)
    B = e(s) + e(-2 * x + y) + e(x - 2 * y)
    C = 2 * e(s) + e(-2 * s)
    D = -2 * e(-s / 2) + e(s)
    return A, B, C, D
