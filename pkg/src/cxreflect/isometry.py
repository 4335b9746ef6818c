"""Elements of SU(2,1): special elliptic generators, classification and conjugators."""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ._numerics import OMEGAS, cluster, double_root, image_vector, null_space, su21_eigenvalues
from .errors import (IllConditioned, IsotropicCenter, NotConjugate, NotElliptic,
                     NotFormPreserving, NotUnitary, NumericallyAmbiguous, ParameterOutOfRange)
from .hermitian import J, herm, point, form_orthogonal
from .unfolded import canonicalize

FORM_TOL = 1e-9
OMEGA_TOL = 1e-9
RANK_TOL = 1e-6
CUSP_TOL = 1e-8

KINDS = ("identity", "regular-elliptic", "special-elliptic-neg-center",
         "special-elliptic-pos-center", "ellipto-parabolic", "2-step-unipotent-A",
         "2-step-unipotent-B", "3-step-unipotent", "loxodromic")
ELLIPTIC_KINDS = ("identity", "regular-elliptic", "special-elliptic-neg-center",
                  "special-elliptic-pos-center")
NONREGULAR_KINDS = ("identity", "special-elliptic-neg-center", "special-elliptic-pos-center",
                    "2-step-unipotent-A", "2-step-unipotent-B")


def in_omega(z, tol=OMEGA_TOL):
    return any(abs(z - d) <= tol for d in OMEGAS)


def nearest_omega(z):
    return min(OMEGAS, key=lambda d: abs(z - d))


@dataclass(frozen=True)
class Parameter:
    """Unit complex number alpha = e^{i angle} with alpha^3 != 1.

    `frac` keeps the angle as an exact multiple of pi when known.
    """

    value: complex
    angle: float
    frac: Fraction = None

    def __post_init__(self):
        if abs(abs(self.value) - 1) > 1e-12:
            raise ParameterOutOfRange("parameter must have modulus 1")
        if in_omega(self.value):
            raise ParameterOutOfRange("parameter must not be a cube root of unity")

    @classmethod
    def from_pi(cls, frac):
        frac = Fraction(frac) % 2
        ang = float(frac) * math.pi
        return cls(cmath.exp(1j * ang), ang, frac)

    @classmethod
    def from_angle(cls, angle):
        angle = math.fmod(angle, 2 * math.pi)
        if angle < 0:
            angle += 2 * math.pi
        return cls(cmath.exp(1j * angle), angle)

    @classmethod
    def from_value(cls, z):
        if isinstance(z, Parameter):
            return z
        z = complex(z)
        return cls.from_angle(cmath.phase(z)) if abs(abs(z) - 1) <= 1e-12 else cls(z, 0.0)

    def times(self, z):
        """Parameter for z * alpha, keeping exactness when z is in Omega."""
        if self.frac is not None:
            for k, d in enumerate(OMEGAS):
                if abs(z - d) <= 1e-14:
                    return Parameter.from_pi(self.frac + Fraction(2 * k, 3))
            if abs(z + 1) <= 1e-14:
                return Parameter.from_pi(self.frac + 1)
        return Parameter.from_value(z * self.value)

    def conj(self):
        if self.frac is not None:
            return Parameter.from_pi(-self.frac)
        return Parameter.from_value(self.value.conjugate())

    def normalized(self):
        """The Omega-multiple with angle in (0, 2pi/3), and the multiplier used."""
        for d in OMEGAS:
            p = self.times(d)
            ang = float(p.frac) * math.pi if p.frac is not None else p.angle
            if 0 < ang < 2 * math.pi / 3 + 1e-15:
                return p, d
        raise ParameterOutOfRange("parameter cannot be normalized")

    def __str__(self):
        if self.frac is not None:
            return f"e^(i {self.frac} pi)"
        return f"e^(i {self.angle:.12g})"


def as_parameter(a):
    """Parameter from a Parameter, an exact multiple of pi (int or Fraction), a unit complex
    number or an angle in radians (float)."""
    if isinstance(a, Parameter):
        return a
    if isinstance(a, (int, Fraction)):
        return Parameter.from_pi(a)
    if isinstance(a, complex):
        return Parameter.from_value(a)
    return Parameter.from_angle(float(a))


def _as_param(alpha):
    if isinstance(alpha, Parameter):
        return alpha.value
    return complex(alpha)


def form_defect(m):
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ J @ m - J))), abs(np.linalg.det(m) - 1)


class Isometry:
    """A matrix of SU(2,1): m* J m = J and det m = 1."""

    def __init__(self, m, check=True):
        m = np.array(m, dtype=complex).reshape(3, 3)
        if check:
            scale = max(1.0, float(np.linalg.norm(m, 2)) ** 2)
            d_form, d_det = form_defect(m)
            if d_form > FORM_TOL * scale:
                raise NotUnitary(f"matrix does not preserve the form (defect {d_form:.3g})")
            if d_det > FORM_TOL * scale:
                raise NotUnitary(f"determinant differs from 1 by {d_det:.3g}")
        m.flags.writeable = False
        self.m = m

    def __matmul__(self, other):
        if isinstance(other, Isometry):
            return Isometry(self.m @ other.m, check=False)
        return self.m @ other

    def __repr__(self):
        return f"Isometry({np.round(self.m, 6).tolist()})"

    def scaled(self, d):
        return Isometry(d * self.m, check=False)

    def inverse(self):
        return Isometry(J @ self.m.conj().T @ J, check=False)

    @cached_property
    def trace(self):
        return complex(np.trace(self.m))

    @cached_property
    def eigenvalues(self):
        return su21_eigenvalues(self.trace)

    @cached_property
    def key(self):
        return classify(self)

    @cached_property
    def scale(self):
        return max(1.0, float(np.linalg.norm(self.m, 2)))


def as_isometry(F):
    return F if isinstance(F, Isometry) else Isometry(F)


def special_elliptic(alpha, p):
    """R_alpha^p: x -> (alpha^-2 - alpha) <x,p>/<p,p> p + alpha x."""
    a = _as_param(alpha)
    p = point(p)
    if p.sig == 0:
        raise IsotropicCenter("center must be nonisotropic")
    c = p.coords
    m = a * np.eye(3, dtype=complex) + (a ** -2 - a) * np.outer(c, c.conj() @ J) / herm(c, c)
    return Isometry(m, check=False)


def deltoid_f(z):
    z = complex(z)
    r2 = abs(z) ** 2
    return r2 * r2 - 8 * (z ** 3).real + 18 * r2 - 27


@dataclass(frozen=True)
class ClassKey:
    """PU(2,1) conjugacy class descriptor.

    angles: canonical angle pair in radians for elliptic and ellipto-parabolic kinds.
    trace: trace representative with argument in [0, 2pi/3) for loxodromic kinds.
    neg_eig: negative-type eigenvalue of the classified lift (informative, SU level).
    chirality: +1/-1 orientation sign of parabolic kinds, see `parabolic_sign`.
    """

    kind: str
    angles: tuple = None
    trace: complex = None
    neg_eig: complex = None
    chirality: int = None

    def same_class(self, other, tol=1e-6):
        if self.kind != other.kind or self.chirality != other.chirality:
            return False
        if self.angles is not None:
            return angle_pair_distance(self.angles, other.angles) <= tol
        if self.trace is not None:
            return min(abs(self.trace - d * other.trace) for d in OMEGAS) <= tol * (1 + abs(self.trace))
        return True

    def to_dict(self):
        d = {"kind": self.kind}
        if self.angles is not None:
            d["angle_pair"] = [self.angles[0], self.angles[1]]
        if self.trace is not None:
            d["trace_rep"] = [self.trace.real, self.trace.imag]
        if self.neg_eig is not None:
            d["negative_type_eigenvalue"] = [self.neg_eig.real, self.neg_eig.imag]
        if self.chirality is not None:
            d["chirality"] = self.chirality
        return d


def _circ(a, b):
    d = math.fmod(abs(a - b), 2 * math.pi)
    return min(d, 2 * math.pi - d)


def angle_pair_distance(p, q):
    """Distance between unordered angle pairs on the torus R^2 / (2 pi Z)^2."""
    return min(max(_circ(p[0], q[0]), _circ(p[1], q[1])),
               max(_circ(p[0], q[1]), _circ(p[1], q[0])))


def _pair_key(lams, neg_index):
    ph = [cmath.phase(l) for l in lams]
    others = [ph[i] - ph[neg_index] for i in range(3) if i != neg_index]
    c = canonicalize(*others)
    return (c.theta1, c.theta2)


def _rank(A, scale):
    s = np.linalg.svd(A, compute_uv=False) / scale
    return int(np.sum(s > RANK_TOL)), s


def parabolic_sign(N, x):
    """Sign of Im <N x, x> for the nilpotent part N and a negative vector x."""
    v = herm(N @ x, x).imag
    if abs(v) <= 1e-12 * max(1.0, float(np.linalg.norm(N))) * float(np.linalg.norm(x)) ** 2:
        raise NumericallyAmbiguous("parabolic orientation is numerically zero")
    return 1 if v > 0 else -1


def _lox_rep(tau):
    for d in OMEGAS:
        t = d * tau
        ang = cmath.phase(t) % (2 * math.pi)
        if ang < 2 * math.pi / 3 - 1e-15 or ang >= 2 * math.pi - 1e-15:
            return t
    return tau


_E3 = np.array([0, 0, 1], dtype=complex)


def classify(F):
    """Full conjugacy-class descriptor of F."""
    F = as_isometry(F)
    m, tau, scale = F.m, F.trace, F.scale
    eigs = F.eigenvalues
    f = deltoid_f(tau)
    band = 1e-7 * (1 + abs(tau) ** 4)
    gap_tol = 1e-5 * math.sqrt(scale)
    pairs = [(abs(eigs[i] - eigs[j]), i, j) for i in range(3) for j in range(i + 1, 3)]
    min_gap = min(p[0] for p in pairs)
    max_gap = max(p[0] for p in pairs)
    if min(abs(tau - 3 * d) for d in OMEGAS) <= CUSP_TOL * scale:
        return _classify_cusp(m, tau, scale)
    if abs(f) <= band and min_gap <= gap_tol:
        return _classify_boundary(m, tau, scale, eigs, pairs)
    if max(abs(abs(l) - 1) for l in eigs) > 1e-7 and (f > 0 or abs(f) <= band):
        return ClassKey("loxodromic", trace=_lox_rep(tau))
    if f > band:
        raise NumericallyAmbiguous("trace outside the deltoid but eigenvalues are unitary")
    lams = [l / abs(l) for l in eigs]
    norms = []
    for l in lams:
        v = null_space(m - l * np.eye(3), 1)[0][:, 0]
        norms.append(herm(v, v).real)
    k = int(np.argmin(norms))
    if norms[k] >= 0:
        raise NumericallyAmbiguous("no negative eigenvector found")
    return ClassKey("regular-elliptic", angles=_pair_key(lams, k), neg_eig=lams[k])


def _classify_cusp(m, tau, scale):
    d = nearest_omega(tau / 3)
    N = m / d - np.eye(3)
    r, _ = _rank(N, scale)
    if r == 0:
        return ClassKey("identity", angles=(0.0, 0.0), neg_eig=d)
    if r == 1:
        s = parabolic_sign(N, _E3)
        return ClassKey("2-step-unipotent-A" if s > 0 else "2-step-unipotent-B",
                        neg_eig=d, chirality=s)
    return ClassKey("3-step-unipotent", neg_eig=d)


def _double_eig(tau, eigs, pairs):
    lam = double_root(tau)
    if lam is None:
        _, i, j = min(pairs)
        lam = (eigs[i] + eigs[j]) / 2
        lam /= abs(lam)
    return lam


def _classify_boundary(m, tau, scale, eigs, pairs):
    lam = _double_eig(tau, eigs, pairs)
    mu = lam ** -2
    r, s = _rank(m - lam * np.eye(3), scale)
    p = null_space(m - mu * np.eye(3), 1)[0][:, 0]
    psig = herm(p, p).real
    if r == 1:
        if abs(psig) <= 1e-9 * float(np.vdot(p, p).real):
            raise NumericallyAmbiguous("special elliptic center looks isotropic")
        if psig < 0:
            c = canonicalize(cmath.phase(lam) - cmath.phase(mu), cmath.phase(lam) - cmath.phase(mu))
            return ClassKey("special-elliptic-neg-center", angles=(c.theta1, c.theta2), neg_eig=mu)
        c = canonicalize(cmath.phase(mu) - cmath.phase(lam), 0.0)
        return ClassKey("special-elliptic-pos-center", angles=(c.theta1, c.theta2), neg_eig=lam)
    if r == 2:
        if psig <= 0:
            raise NumericallyAmbiguous("ellipto-parabolic with nonpositive fixed point")
        x = _E3 - herm(_E3, p) / psig * p
        sgn = parabolic_sign(m / lam - np.eye(3), x)
        c = canonicalize(cmath.phase(mu) - cmath.phase(lam), 0.0)
        return ClassKey("ellipto-parabolic", angles=(c.theta1, c.theta2), neg_eig=lam,
                        chirality=sgn)
    raise NumericallyAmbiguous("trace on the deltoid but eigenvalues look simple")


def is_regular(F):
    return classify(F).kind not in NONREGULAR_KINDS


def angle_pair(F):
    key = classify(F)
    if key.angles is None:
        raise NotElliptic(f"{key.kind} isometries have no angle pair")
    return key.angles


def normalize_lift(M, all_lifts=False):
    """Rescale M with M* J M = lambda J (lambda > 0) into SU(2,1).

    Returns the canonical lift (trace argument in [0, 2pi/3)) and the index k with
    canonical = w^k * (det-normalized M).  With all_lifts=True the three lifts are returned.
    """
    M = np.asarray(M, dtype=complex)
    G = M.conj().T @ J @ M
    lam = float(np.real(np.trace(J @ G))) / 3
    if not lam > 0 or np.max(np.abs(G - lam * J)) > 1e-9 * max(1.0, lam):
        raise NotFormPreserving("matrix does not preserve the form up to a positive scalar")
    M1 = M / math.sqrt(lam)
    d = np.linalg.det(M1)
    M1 = M1 / cmath.exp(cmath.log(d) / 3)
    tau = complex(np.trace(M1))
    k = 0
    if abs(tau) > 1e-12:
        for k, w in enumerate(OMEGAS):
            ang = cmath.phase(w * tau) % (2 * math.pi)
            if ang < 2 * math.pi / 3 - 1e-12 or ang > 2 * math.pi - 1e-12:
                break
    F = Isometry(OMEGAS[k] * M1)
    if all_lifts:
        return [Isometry(w * F.m, check=False) for w in OMEGAS]
    return F, k


def lifts(F):
    F = as_isometry(F)
    return [Isometry(w * F.m, check=False) for w in OMEGAS]


def _jinv(B):
    return J @ B.conj().T @ J


def _jnormal_basis(V):
    """J-orthonormal basis of the (nondegenerate) span of the columns of V."""
    G = V.conj().T @ J @ V
    w, U = np.linalg.eigh(G)
    out = []
    for i in range(len(w)):
        if abs(w[i]) <= 1e-12:
            raise IllConditioned("degenerate eigenspace")
        out.append((V @ U[:, i] / math.sqrt(abs(w[i])), 1 if w[i] > 0 else -1))
    return out


def _elliptic_frame(F):
    m = F.m
    eigs = [l / abs(l) for l in F.eigenvalues]
    if F.key.kind in ("special-elliptic-neg-center", "special-elliptic-pos-center"):
        lam = double_root(F.trace) or eigs[0]
        groups = [(lam, 2), (lam ** -2, 1)]
    elif F.key.kind == "identity":
        groups = [(F.key.neg_eig, 3)]
    else:
        groups = cluster(eigs, 1e-6)
    pos, neg = [], []
    for lam, k in groups:
        V = null_space(m - lam * np.eye(3), k)[0]
        for v, s in _jnormal_basis(V):
            (pos if s > 0 else neg).append((v, lam))
    if len(pos) != 2 or len(neg) != 1:
        raise IllConditioned("eigenbasis does not have signature (2,1)")
    cols = pos + neg
    B = np.column_stack([c[0] for c in cols])
    return B, [c[1] for c in cols]


def _null_pair(v, y):
    """Isotropic w with <v, w> = 1 built from y, for isotropic v."""
    c = -herm(y, y) / (2 * herm(v, y))
    w = y + c * v
    return w / np.conj(herm(v, w))


def _unit(p):
    return p / math.sqrt(abs(herm(p, p).real))


def _frame_from(p, v, w):
    return np.column_stack([_unit(p), (v + w) / math.sqrt(2), (v - w) / math.sqrt(2)])


def _parabolic_frame(F):
    m, key = F.m, F.key
    if key.kind == "ellipto-parabolic":
        lam = key.neg_eig
        p = null_space(m - lam ** -2 * np.eye(3), 1)[0][:, 0]
        v = null_space(m - lam * np.eye(3), 1)[0][:, 0]
        y = _E3 - herm(_E3, p) / herm(p, p) * p
        w = _null_pair(v, y)
    else:
        lam = key.neg_eig
        N = m / lam - np.eye(3)
        if key.kind == "3-step-unipotent":
            return _three_step_frame(m, lam, N)
        v = image_vector(N)[0]
        w = _null_pair(v, _E3)
        p = form_orthogonal(v, w)
    cF = herm(m @ w - lam * w, w)
    s = (cF / lam).imag
    r = math.sqrt(abs(s))
    v, w = r * v, w / r
    return _frame_from(p, v, w)


def _three_step_frame(m, lam, N):
    v = image_vector(N @ N)[0]
    w = _null_pair(v, _E3)
    e = _unit(form_orthogonal(v, w))
    c = herm(N @ w, e)
    e = e * c / abs(c)
    r = abs(c)
    v, w = r * v, w / r
    b = herm(N @ w, w)
    a = herm(N @ e, w)
    c = herm(N @ w, e)
    t = -b.imag / (a - c).real
    z = 1j * t
    w = w + z * e - abs(z) ** 2 / 2 * v
    e = e - np.conj(z) * v
    return np.column_stack([e, (v + w) / math.sqrt(2), (v - w) / math.sqrt(2)])


def _lox_frame(F):
    m = F.m
    eigs = F.eigenvalues
    mods = [abs(l) for l in eigs]
    order = sorted(range(3), key=lambda i: mods[i])
    lm, mu, lp = (eigs[i] for i in order)
    p = null_space(m - mu * np.eye(3), 1)[0][:, 0]
    vp = null_space(m - lp * np.eye(3), 1)[0][:, 0]
    vm = null_space(m - lm * np.eye(3), 1)[0][:, 0]
    vm = vm / np.conj(herm(vp, vm))
    return np.column_stack([_unit(p), (vp + vm) / math.sqrt(2), (vp - vm) / math.sqrt(2)])


def _frame(F):
    kind = F.key.kind
    if kind in ELLIPTIC_KINDS:
        return _elliptic_frame(F)[0], True
    if kind == "loxodromic":
        return _lox_frame(F), False
    return _parabolic_frame(F), False


_SWAP = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)


def conjugator(F1, F2, tol=1e-8):
    """C in SU(2,1) with C F1 C^-1 = delta F2 for some delta in Omega."""
    F1, F2 = as_isometry(F1), as_isometry(F2)
    if not F1.key.same_class(F2.key):
        raise NotConjugate(f"classes differ: {F1.key.kind} vs {F2.key.kind}")
    B1, perm = _frame(F1)
    B2, _ = _frame(F2)
    cond = float(np.linalg.cond(B1) * np.linalg.cond(B2))
    best = None
    for P in ([np.eye(3), _SWAP] if perm else [np.eye(3)]):
        C = B2 @ P @ _jinv(B1)
        C = C / cmath.exp(cmath.log(np.linalg.det(C)) / 3)
        R = C @ F1.m @ _jinv(C)
        for d in OMEGAS:
            res = float(np.linalg.norm(R - d * F2.m)) / (F1.scale * F2.scale)
            if best is None or res < best[0]:
                best = (res, C)
    if best[0] > tol:
        raise IllConditioned(f"conjugator residual {best[0]:.3g}", condition=cond)
    return Isometry(best[1], check=False)
