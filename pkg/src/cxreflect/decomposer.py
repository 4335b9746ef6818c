"""Explicit products of special elliptic isometries with residual certificates.

A decomposition with centers (p1, ..., pn) stands for F = delta R^{pn} ... R^{p1}, so the
first center acts first.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, least_squares, root

from ._numerics import OMEGAS, double_root, image_vector, null_space, su21_eigenvalues
from .atlas import (NEG, POS, REALIZABLE_SIGNS, TWO_THIRDS, chambers, e_sigma_segments,
                    length2_test, lift_parameters, model_pairs, model_products,
                    segment_intersections, twin_xy, on_segment)
from .errors import (CxReflectError, IllConditioned, NoSolution, NotDecomposable,
                     NotHyperbolicLine, SearchExhausted, TransitionParameter, Unknown)
from .hermitian import (herm, form_orthogonal, line_through, orthogonal_in_line, point,
                        triple_from_gram)
from .isometry import (Isometry, Parameter, as_isometry, as_parameter, conjugator, deltoid_f,
                       in_omega, special_elliptic)
from .trace_geometry import TangentLine, chi, kappa, t_plus_minus
from .unfolded import TrianglePoint, _eigs_pi, unfolded_trace

RES_TOL = 1e-8
UNKNOWN = "unknown"
SIGN_TRIPLES = ((-1, 1, -1), (1, -1, -1), (-1, -1, 1), (-1, -1, -1))
ALL_SIGN_TRIPLES = SIGN_TRIPLES + ((1, 1, -1), (1, -1, 1), (-1, 1, 1), (1, 1, 1))
_E = np.eye(3, dtype=complex)


# ---------------------------------------------------------------- certificates

def product(params, centers):
    """R^{pn}_{an} ... R^{p1}_{a1} for per-factor parameters and centers."""
    M = Isometry(_E, check=False)
    for a, c in zip(params, centers):
        M = special_elliptic(a, c) @ M
    return M


def certify(F, params, centers):
    """(residual, delta): min over Omega of |F - delta prod|_F / max(1, |F|_F)."""
    Fm = as_isometry(F).m
    P = product(params, centers).m
    scale = max(1.0, float(np.linalg.norm(Fm)))
    return min(((float(np.linalg.norm(Fm - d * P)) / scale, d) for d in OMEGAS), key=lambda r: r[0])


@dataclass(frozen=True)
class Decomposition:
    """F = delta * R^{pn}_{an} ... R^{p1}_{a1}; centers listed in order of application."""

    delta: complex
    params: tuple
    centers: tuple
    residual: float

    @property
    def alpha(self):
        return self.params[0]

    @property
    def length(self):
        return len(self.centers)

    def product(self):
        return product(self.params, self.centers)

    def to_dict(self):
        return {
            "n": self.length,
            "delta": [self.delta.real, self.delta.imag],
            "centers": [[[complex(z).real, complex(z).imag] for z in c.coords] for c in self.centers],
            "residual": self.residual,
        }


def _finish(F, params, centers, tol=RES_TOL):
    centers = tuple(point(c) for c in centers)
    if any(c.sig == 0 for c in centers):
        raise IllConditioned("a center is numerically isotropic")
    res, d = certify(F, params, centers)
    # the margin keeps rounding in an independent rebuild below tol
    bound = tol * MARGIN
    if bound < res < POLISH_MAX:
        centers = _polish(F, params, centers, d)
        res, d = certify(F, params, centers)
    if res > bound:
        raise IllConditioned(f"residual {res:.3g} above {bound:.1g}")
    return Decomposition(d, tuple(params), centers, res)


MARGIN = 0.1
POLISH_MAX = 1e-2


def _polish(F, params, centers, d):
    """Least-squares refinement of nearly correct centers, for ill-conditioned conjugators."""
    Fm = as_isometry(F).m
    n = len(centers)
    vals = [as_parameter(a).value for a in params]
    jd = np.array([1.0, 1.0, -1.0])
    x0 = np.concatenate([np.concatenate([c.coords.real, c.coords.imag]) for c in centers])

    def unpack(x):
        return [x[6 * k:6 * k + 3] + 1j * x[6 * k + 3:6 * k + 6] for k in range(n)]

    def f(x):
        P = _E
        for a, c in zip(vals, unpack(x)):
            cj = c.conj() * jd
            P = (a * _E + (a ** -2 - a) * np.outer(c, cj) / (cj @ c)) @ P
        r = (Fm - d * P).ravel()
        return np.concatenate([r.real, r.imag])

    try:
        sol = least_squares(f, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        out = tuple(point(c) for c in unpack(sol.x))
    except (CxReflectError, ValueError, ZeroDivisionError):
        return centers
    return centers if any(c.sig == 0 for c in out) else out


def _transport(F, model, centers, params, tol):
    """Conjugate a model product onto F and move its centers along."""
    C = conjugator(model, F, tol=tol)
    return _finish(F, params, [C.m @ point(c).coords for c in centers], tol)


# ---------------------------------------------------------------- length 1 and 2

def _special_data(F):
    """(beta, center) with F = R_beta^center for a special elliptic lift F."""
    lam = double_root(F.trace)
    if lam is None:
        raise IllConditioned("double eigenvalue not resolved")
    q = null_space(F.m - lam ** -2 * _E, 1)[0][:, 0]
    return lam, point(q)


def decompose1(F, alpha, tol=RES_TOL):
    F, alpha = as_isometry(F), as_parameter(alpha)
    if F.key.kind not in (NEG, POS):
        raise NotDecomposable(f"{F.key.kind} is not a special elliptic isometry")
    beta, q = _special_data(F)
    if not in_omega(beta / alpha.value):
        raise NotDecomposable("special elliptic with a different parameter")
    return _finish(F, (alpha,), (q,), tol)


def decompose2(F, a1, a2, tol=RES_TOL):
    """(a1, a2)-decomposition of F, or NotDecomposable."""
    F, a1, a2 = as_isometry(F), as_parameter(a1), as_parameter(a2)
    key = F.key
    test = length2_test(key, a1, a2)
    if not test:
        raise NotDecomposable(test.reason)
    if key.kind == "identity":
        e1 = np.array([1, 0, 0], dtype=complex)
        return _finish(F, (a1, a2), (e1, e1), tol)
    failures = 0
    for _, t in lift_parameters(a1, a2, F.trace):
        for _, R, pair in model_products(a1, a2, t):
            try:
                if not R.key.same_class(key):
                    continue
                return _transport(F, R, pair, (a1, a2), tol)
            except CxReflectError:
                failures += 1
    raise SearchExhausted("length-2 test passed but no model product could be transported",
                          {"failures": failures, "sigma": test.sigma, "t": test.t})


# ---------------------------------------------------------------- surface equation

@dataclass(frozen=True)
class SurfaceInstance:
    """Triples of centers with parameter alpha, signs sigma and product trace tau."""

    alpha: Parameter
    tau: complex
    sigma: tuple

    @property
    def kappa(self):
        return kappa(self.alpha, self.tau)

    @property
    def chi(self):
        return chi(self.alpha)

    @property
    def m(self):
        k = self.kappa
        return 2 * self.chi * k.real + k.imag

    @property
    def d1(self):
        return 1 + 4 * self.chi ** 2

    @property
    def d2(self):
        return -4 * self.chi * self.m

    @property
    def d3(self):
        return self.m ** 2

    @property
    def det_sign(self):
        s1, s2, s3 = self.sigma
        return s1 * s2 * s3 * (2 * self.kappa.real + 1)

    def equation(self, t1, t2, t):
        return (t1 * t1 * t2 + t1 * t2 * t2 - 2 * t1 * t2 * t + 2 * t1 * t2 * self.kappa.real
                + self.d1 * t * t + self.d2 * t + self.d3)

    def imag_part(self, t):
        """Imaginary part of the triple ratio forced by the real part t."""
        return self.m - 2 * self.chi * t

    def tance_ok(self, t1, t2):
        s1, s2, s3 = self.sigma
        return _side_ok(s1, s2, t1) and _side_ok(s2, s3, t2)

    def roots(self, t1, t2):
        b = self.d2 - 2 * t1 * t2
        c = t1 * t1 * t2 + t1 * t2 * t2 + 2 * t1 * t2 * self.kappa.real + self.d3
        disc = b * b - 4 * self.d1 * c
        if disc < 0:
            return []
        r = math.sqrt(disc)
        return [(-b + r) / (2 * self.d1), (-b - r) / (2 * self.d1)]

    def points(self, t1, t2, t):
        return triple_from_gram(t1, t2, t, self.sigma, imag=self.imag_part(t))


def _side_ok(s1, s2, t):
    if s1 != s2:
        return t < 0
    return t > 1 if s1 < 0 else (t > 0 and t != 1)


DET_TOL = 1e-10


def _det_ok(inst, relax):
    # 2 Re kappa + 1 loses digits to cancellation when kappa is large
    v, tol = inst.det_sign, DET_TOL * (1 + abs(inst.kappa))
    return v <= tol if relax else v < -tol


def _axis(s1, s2, lo=-2.0, hi=3.0, n=16):
    mags = np.logspace(lo, hi, n)
    if s1 != s2:
        return list(-mags)
    if s1 < 0:
        return list(1 + mags)
    inner = list(np.linspace(0, 1, n // 2 + 2)[1:-1])
    return inner + list(1 + mags[::2])


def _grid(sigma, n=16):
    s1, s2, s3 = sigma
    xs, ys = _axis(s1, s2, n=n), _axis(s2, s3, n=n)
    pairs = [(x, y) for x in xs for y in ys]
    pairs.sort(key=lambda p: (abs(p[0]) + abs(p[1])))
    return pairs


def surface_solve(inst, relax_last=False, bound=1e3, eps=1e-6, max_bound=1e6):
    """A point (t1, t2, t) of the surface satisfying the sign constraints."""
    if not _det_ok(inst, relax_last):
        raise NoSolution("sign of the Gram determinant excludes these signs", bounds=(eps, bound))
    s1, s2, s3 = inst.sigma
    B = bound
    while B <= max_bound:
        n = 24
        xs = _axis(s1, s2, math.log10(eps), math.log10(B), n)
        ys = _axis(s2, s3, math.log10(eps), math.log10(B), n)
        best = None
        for x in xs:
            for y in ys:
                for t in inst.roots(x, y):
                    scale = max(1.0, abs(x) * abs(y) * max(abs(x), abs(y), abs(t)), inst.d1 * t * t)
                    err = abs(inst.equation(x, y, t)) / scale
                    cand = (abs(x) + abs(y) + abs(t), x, y, t, err)
                    if err <= 1e-12 and (best is None or cand < best):
                        best = cand
        if best is not None:
            _, x, y, t = best[:4]
            return x, y, t
        B *= 2
    raise NoSolution("empty discriminant region", bounds=(eps, max_bound))


def _neg_type_eig(m, eigs):
    best = None
    for lam in eigs:
        A = m - lam * _E
        cands = [np.cross(A[i], A[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
        v = max(cands, key=lambda c: float(np.linalg.norm(c)))
        n = float(np.linalg.norm(v))
        if n == 0:
            continue
        v = v / n
        s = herm(v, v).real
        if best is None or s < best[0]:
            best = (s, lam)
    return best[1] if best and best[0] < 0 else None


def _surface_route(F, alpha, budget, seed, tol, relax=True, triples=ALL_SIGN_TRIPLES):
    key = F.key
    regular = key.kind == "regular-elliptic"
    rng = np.random.default_rng(seed)
    insts = []
    for d in OMEGAS:
        for sigma in triples:
            inst = SurfaceInstance(alpha, d * F.trace, sigma)
            if _det_ok(inst, relax):
                insts.append((d, inst, [d * l for l in F.eigenvalues]))
    if not insts:
        raise SearchExhausted("no sign triple is compatible with any lift", {"kind": key.kind})
    tried = failures = 0
    grids = [iter(_grid(inst.sigma)) for _, inst, _ in insts]

    def samples():
        while True:
            for k, (d, inst, eigs) in enumerate(insts):
                pair = next(grids[k], None)
                if pair is None:
                    s1, s2, s3 = inst.sigma
                    pair = (_rand_side(rng, s1, s2), _rand_side(rng, s2, s3))
                yield d, inst, eigs, pair

    for d, inst, eigs, (t1, t2) in samples():
        for t in inst.roots(t1, t2):
            tried += 1
            if tried > budget:
                raise SearchExhausted("surface search budget exhausted",
                                      {"kind": key.kind, "samples": tried - 1, "failures": failures})
            try:
                pts = inst.points(t1, t2, t)
                P = product((alpha,) * 3, pts)
                if abs(P.trace - inst.tau) > 1e-7 * (1 + abs(inst.tau)):
                    continue
                if regular:
                    lam = _neg_type_eig(P.m, eigs)
                    if lam is None or abs(lam - d * key.neg_eig) > 1e-6:
                        continue
                if not P.key.same_class(key):
                    continue
                return _transport(F, P, pts, (alpha,) * 3, tol)
            except CxReflectError:
                failures += 1


def _rand_side(rng, s1, s2):
    m = 10 ** rng.uniform(-3, 4)
    if s1 != s2:
        return -m
    if s1 < 0:
        return 1 + m
    return rng.uniform(0, 1) if rng.uniform() < 0.5 else 1 + m


# ---------------------------------------------------------------- special elliptic and 2-step

def _peel_search(F, alpha, budget, seed, tol, rng=None):
    """q with R_{conj alpha}^q F of (alpha, alpha)-length 2; F = R_alpha^q (R_{conj alpha}^q F)."""
    rng = rng or np.random.default_rng(seed)
    abar = alpha.conj()
    line = TangentLine(alpha.value ** 2)
    Fm = F.m

    def G_of(q):
        return special_elliptic(abar, q) @ F

    def h(q, d):
        tau = d * G_of(q).trace
        return ((tau - line.tangency) * line.direction.conjugate()).imag

    tried = 0
    n = 33
    while tried < budget:
        q0 = rng.normal(size=3) + 1j * rng.normal(size=3)
        q1 = rng.normal(size=3) + 1j * rng.normal(size=3)
        path = lambda s: math.cos(s) * q0 + math.sin(s) * q1
        ss = np.linspace(0, math.pi, n)
        sig = [herm(path(s), path(s)).real for s in ss]
        for d in OMEGAS:
            vals = [h(path(s), d) if abs(sig[i]) > 1e-3 else None for i, s in enumerate(ss)]
            for i in range(n - 1):
                tried += 1
                a, b = vals[i], vals[i + 1]
                if a is None or b is None or sig[i] * sig[i + 1] <= 0 or a * b > 0:
                    continue
                try:
                    s0 = brentq(lambda s: h(path(s), d), ss[i], ss[i + 1], xtol=1e-15)
                    q = path(s0)
                    G = G_of(q)
                    dec = decompose2(G, alpha, alpha, tol)
                    return _finish(F, (alpha,) * 3, dec.centers + (point(q),), tol)
                except CxReflectError:
                    continue
    raise SearchExhausted("no center found reducing to length 2", {"samples": tried})


def _isotropic_on_line(M, rng, tries=8):
    """Nonisotropic q with q* M q = 0, searched on random complex lines."""
    for _ in range(tries):
        u, v = (rng.normal(size=3) + 1j * rng.normal(size=3) for _ in range(2))
        a, b, c, e = (x.conj() @ M @ y for x, y in ((u, u), (u, v), (v, u), (v, v)))

        def f(xy):
            z = complex(xy[0], xy[1])
            w = a + b * z + c * z.conjugate() + e * abs(z) ** 2
            return [w.real, w.imag]

        sol = root(f, rng.normal(size=2), method="hybr")
        if not sol.success:
            continue
        q = u + complex(sol.x[0], sol.x[1]) * v
        return q
    return None


def _eigen_frame(F):
    """Eigenvectors scaled to <v, v> = +-1 and their signs, for distinct eigenvalues."""
    vs, signs = [], []
    for lam in F.eigenvalues:
        v = null_space(F.m - lam * _E, 1)[0][:, 0]
        h = herm(v, v).real
        if abs(h) < 1e-9:
            return None
        vs.append(v / math.sqrt(abs(h)))
        signs.append(1.0 if h > 0 else -1.0)
    return F.eigenvalues, vs, signs


def _frame_weights(frame, w):
    """Weights c with sum c_i lam_i = w and sum c_i = 1."""
    lams = frame[0]
    A = np.array([[l.real for l in lams], [l.imag for l in lams], [1.0, 1.0, 1.0]])
    return np.linalg.solve(A, [w.real, w.imag, 1.0])


def _q_from_frame(frame, w, rng):
    """q = sum r_i v_i with <Fq, q>/<q, q> = w, where c_i = s_i r_i^2 / <q, q>."""
    _, vs, signs = frame
    r2 = _frame_weights(frame, w) * np.array(signs)
    if not (np.all(r2 >= 0) or np.all(r2 <= 0)):
        return None
    phases = np.exp(2j * math.pi * rng.random(3))
    return sum(math.sqrt(abs(x)) * ph * v for x, ph, v in zip(r2, phases, vs))


def _feasible_s(frame, w0, w1):
    """Intervals of s for which w0 + s w1 is a value <Fq, q>/<q, q>."""
    signs = np.array(frame[2])
    c0 = _frame_weights(frame, w0) * signs
    c1 = _frame_weights(frame, w0 + w1) * signs - c0
    out = []
    for sgn in (1, -1):
        lo, hi = -math.inf, math.inf
        for x0, x1 in zip(sgn * c0, sgn * c1):
            if abs(x1) < 1e-300:
                if x0 < 0:
                    lo, hi = 1.0, 0.0
                continue
            r = -x0 / x1
            lo, hi = (max(lo, r), hi) if x1 > 0 else (lo, min(hi, r))
        if lo < hi:
            out.append((lo, hi))
    return out


def _s_samples(intervals, rng, n=24):
    out = []
    for lo, hi in intervals:
        if math.isinf(lo) and math.isinf(hi):
            lo, hi = -4.0, 4.0
        elif math.isinf(lo):
            lo = hi - 4 * max(1.0, abs(hi))
        elif math.isinf(hi):
            hi = lo + 4 * max(1.0, abs(lo))
        out.extend(lo + (hi - lo) * (k + 0.5 + 0.4 * (rng.random() - 0.5)) / n for k in range(n))
    return out


def _targeted_peel(F, alpha, seed, tol, tries=96):
    """q with R_{conj alpha}^q F of (alpha, alpha)-length 2, aiming the trace at l_{alpha^2}.

    tr(R_{conj alpha}^q F) = conj(alpha) tr F + (alpha^2 - conj(alpha)) <Fq, q>/<q, q>, so a
    chosen trace is reached by solving for q. Loxodromic remainders are tried first.
    """
    rng = np.random.default_rng(seed)
    abar = alpha.conj()
    a, ab = alpha.value, abar.value
    line = TangentLine(a ** 2)
    J = np.diag([1.0, 1.0, -1.0])
    frame = _eigen_frame(F) if F.key.kind == "regular-elliptic" else None
    cands = []
    for d in OMEGAS:
        w0 = (line.tangency / d - ab * F.trace) / (a ** 2 - ab)
        w1 = line.direction / d / (a ** 2 - ab)
        if frame:
            ss = _s_samples(_feasible_s(frame, w0, w1), rng)
        else:
            ss = [(1 + rng.random()) * 2.0 ** (k // 2) * (1 if k % 2 else -1) for k in range(tries // 3)]
        cands.extend((deltoid_f(line.tangency + x * line.direction) <= 0, abs(x), w0 + x * w1)
                     for x in ss)
    cands.sort(key=lambda c: c[:2])
    for _, _, w in cands[:tries]:
        q = _q_from_frame(frame, w, rng) if frame else _isotropic_on_line(J @ (F.m - w * _E), rng)
        if q is None or abs(herm(q, q).real) < 1e-6 * float(np.vdot(q, q).real):
            continue
        try:
            G = special_elliptic(abar, q) @ F
            dec = decompose2(G, alpha, alpha, tol)
            return _finish(F, (alpha,) * 3, dec.centers + (point(q),), tol)
        except CxReflectError:
            continue
    return None


def _special_candidates(beta, abar, alpha, s):
    """Tance values for (beta, conj alpha) model pairs meeting the length-2 sets of (alpha, alpha)."""
    a = _norm_pi(alpha)
    b = _norm_pi(beta)
    c = _norm_pi(abar)
    S1 = [((float(p.x), float(p.y)), (float(q.x), float(q.y)))
          for sig in ((-1, -1), (1, 1)) for p, q in e_sigma_segments(a, a, sig).segments]
    sigs = ((1, -1), (1, 1)) if s > 0 else ((-1, -1), (-1, 1))
    S2 = [((float(p.x), float(p.y)), (float(q.x), float(q.y)))
          for sig in sigs for p, q in e_sigma_segments(b, c, sig).segments]
    pts = []
    for u in S1:
        for v in S2:
            pts.extend(segment_intersections(u, v))
        for end in u:
            tw = twin_xy(end) if (abs(end[1]) < 1e-12 or abs(end[0] - 2) < 1e-12) else None
            if tw is not None and any(on_segment(tw, v, 1e-12) for v in S2):
                pts.append(end)
    ts = []
    for x, y in pts:
        tr = unfolded_trace(TrianglePoint(min(max(x, 0.0), 2.0), min(max(y, 0.0), 2.0)), check=False)
        ts.extend(t for _, t in lift_parameters(beta, abar, tr))
    tm, tp = t_plus_minus(beta, abar)
    ts.extend([tm, 0.0, 1.0, tp])
    return ts


def _norm_pi(p):
    q, _ = p.normalized()
    return q.frac if q.frac is not None else q.angle / math.pi


def _special_route(F, alpha, budget, seed, tol):
    beta_v, q = _special_data(F)
    if in_omega(beta_v / alpha.value ** 3):
        return _finish(F, (alpha,) * 3, (q, q, q), tol)
    beta = Parameter.from_value(beta_v)
    abar = alpha.conj()
    s = q.sig
    target = special_elliptic(beta, q)
    for t in _special_candidates(beta, abar, alpha, s):
        for sigma in REALIZABLE_SIGNS:
            if sigma[0] != s:
                continue
            for p1, p2 in model_pairs(t, sigma):
                try:
                    G = special_elliptic(abar, p2) @ special_elliptic(beta, p1)
                    if not length2_test(G.key, alpha, alpha):
                        continue
                    dec = decompose2(G, alpha, alpha, tol)
                    model = special_elliptic(beta, p1)
                    centers = dec.centers + (p2,)
                    C = conjugator(model, F, tol=tol)
                    return _finish(F, (alpha,) * 3, [C.m @ c.coords for c in centers], tol)
                except CxReflectError:
                    continue
    return _peel_search(F, alpha, budget, seed, tol)


def _fixed_isotropic(F):
    lam = F.key.neg_eig
    return image_vector(F.m / lam - _E)[0]


def _two_step(F, alpha, budget, seed, tol):
    a3 = alpha.value ** 3
    if in_omega(a3):
        try:
            return _polar_peel(F, alpha, seed, tol)
        except SearchExhausted:
            return _peel_search(F, alpha, budget, seed, tol)
    if in_omega(-a3):
        return _peel_search(F, alpha, budget, seed, tol)
    raise Unknown("2-step unipotent with alpha^3 outside Omega and -Omega is an open case")


def _polar_peel(F, alpha, seed, tol):
    """Centers p in the polar line of the fixed point; the remainder is ellipto-parabolic.

    The factor R_alpha^p is peeled on the left or on the right, which reaches both
    orientations of the 2-step class.
    """
    v = _fixed_isotropic(F)
    rng = np.random.default_rng(seed)
    abar = alpha.conj()
    for _ in range(20):
        p = point(form_orthogonal(v, rng.normal(size=3) + 1j * rng.normal(size=3)))
        if p.sig <= 0:
            continue
        R = special_elliptic(abar, p)
        for side in ("left", "right"):
            G = R @ F if side == "left" else F @ R
            try:
                dec = decompose2(G, alpha, alpha, tol)
            except CxReflectError:
                continue
            centers = dec.centers + (p,) if side == "left" else (p,) + dec.centers
            return _finish(F, (alpha,) * 3, centers, tol)
    raise SearchExhausted("polar construction failed", {"case": "alpha^3 in Omega"})


# ---------------------------------------------------------------- elliptic status

@lru_cache(maxsize=512)
def _atlas(a):
    return chambers(Parameter.from_pi(a), synthesize=False)


def exact_pi(alpha):
    """Exact angle of the Omega-normalized parameter, in pi units."""
    q, _ = as_parameter(alpha).normalized()
    return q.frac if q.frac is not None else Fraction(q.angle / math.pi)


def elliptic_status(key, alpha):
    """'full', 'empty' or 'unknown' for the chambers whose closure holds the angle pair."""
    try:
        at = _atlas(exact_pi(alpha))
    except TransitionParameter:
        return "unknown"
    x, y = key.angles[0] / math.pi, key.angles[1] / math.pi
    found = at.chamber_of((x, y), tol=1e-9)
    if abs(y) < 1e-9:
        found += at.chamber_of((2.0, x), tol=1e-9)
    st = {c.status for c in found}
    if "full" in st:
        return "full"
    if st == {"empty"}:
        return "empty"
    return "unknown"


def elliptic_from_angles(x, y):
    """diag of the eigenvalues of the angle pair (x pi, y pi); e3 is the negative eigenvector."""
    return Isometry(np.diag([cmath.exp(1j * math.pi * e) for e in _eigs_pi(float(x), float(y))]))


def synthesize_at(angles_pi, alpha, budget=2000, seed=0):
    """Whether a decomposition of the elliptic class at the angle pair is found."""
    try:
        F = elliptic_from_angles(*angles_pi)
        _elliptic_route(F, as_parameter(alpha), budget, seed, RES_TOL)
        return True
    except CxReflectError:
        return False


# ---------------------------------------------------------------- length 3 and 4

def decompose3(F, alpha, budget=10000, seed=0, tol=RES_TOL):
    """alpha^(3)-decomposition, NotDecomposable for empty chambers, Unknown for the open case."""
    F, alpha = as_isometry(F), as_parameter(alpha)
    kind = F.key.kind
    if kind == "identity":
        return _finish(F, (alpha,) * 3, tuple(np.eye(3, dtype=complex)), tol)
    if kind in ("loxodromic", "3-step-unipotent"):
        return _surface_route(F, alpha, budget, seed, tol)
    if kind == "ellipto-parabolic":
        # the surface samples rarely land on the parabolic class when alpha is small
        return _peel_then_surface(F, alpha, budget, seed, tol)
    if kind.startswith("2-step"):
        return _two_step(F, alpha, budget, seed, tol)
    if kind == POS:
        return _special_route(F, alpha, budget, seed, tol)
    status = elliptic_status(F.key, alpha)
    if status == "empty":
        raise NotDecomposable("angle pair lies in an empty chamber")
    if kind == NEG:
        return _special_route(F, alpha, budget, seed, tol)
    return _elliptic_route(F, alpha, budget, seed, tol)


def _wall_route(F, alpha, seed, tol, tries=200):
    """Classes with an eigenvalue in Omega alpha^3: peel centers on the stable complex line."""
    a3 = alpha.value ** 3
    c = None
    for lam in F.eigenvalues:
        if in_omega(lam / a3, 1e-9):
            c = null_space(F.m - lam * _E, 1)[0][:, 0]
    if c is None:
        return None
    rng = np.random.default_rng(seed)
    abar = alpha.conj()
    basis = null_space(np.outer(np.ones(1), c.conj() @ np.diag([1.0, 1.0, -1.0])), 2)[0]
    for _ in range(tries):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        q = point(basis @ z)
        if abs(herm(q, q).real) < 0.05 * float(np.vdot(q.coords, q.coords).real):
            continue
        G = special_elliptic(abar, q) @ F
        try:
            dec = decompose2(G, alpha, alpha, tol)
            return _finish(F, (alpha,) * 3, dec.centers + (q,), tol)
        except CxReflectError:
            continue
    return None


def _elliptic_route(F, alpha, budget, seed, tol):
    """Wall construction when it applies, then the peel searches, then the surface search."""
    dec = _wall_route(F, alpha, seed, tol)
    if dec is not None:
        return dec
    return _peel_then_surface(F, alpha, budget, seed, tol)


def _peel_then_surface(F, alpha, budget, seed, tol):
    dec = _targeted_peel(F, alpha, seed, tol)
    if dec is not None:
        return dec
    try:
        return _peel_search(F, alpha, budget // 2, seed, tol)
    except SearchExhausted as e:
        first = e.diagnostics
    try:
        return _surface_route(F, alpha, budget - budget // 2, seed, tol)
    except SearchExhausted as e:
        raise SearchExhausted("peel and surface searches both exhausted",
                              {"peel": first, "surface": e.diagnostics}) from None


def decompose4(F, alpha, budget=10000, seed=0, tol=RES_TOL):
    """Four factors: peel one center so that the rest is loxodromic, then decompose3."""
    F, alpha = as_isometry(F), as_parameter(alpha)
    rng = np.random.default_rng(seed)
    abar = alpha.conj()
    tried = 0
    while tried < 200:
        tried += 1
        p = point(rng.normal(size=3) + 1j * rng.normal(size=3))
        if abs(herm(p, p).real) < 0.1 * float(np.vdot(p.coords, p.coords).real):
            continue
        G = special_elliptic(abar, p) @ F
        if deltoid_f(G.trace) < 1e-2:
            continue
        try:
            dec = decompose3(G, alpha, budget, seed, tol)
            return _finish(F, (alpha,) * 4, dec.centers + (p,), tol)
        except CxReflectError:
            continue
    raise SearchExhausted("no center made the remainder loxodromic", {"tries": tried})


def alpha_length(F, alpha, budget=10000, seed=0, tol=RES_TOL):
    """(n, Decomposition) with n the alpha-length, or (UNKNOWN, 4-factor decomposition)."""
    F, alpha = as_isometry(F), as_parameter(alpha)
    try:
        return 1, decompose1(F, alpha, tol)
    except NotDecomposable:
        pass
    try:
        return 2, decompose2(F, alpha, alpha, tol)
    except NotDecomposable:
        pass
    unknown = False
    try:
        return 3, decompose3(F, alpha, budget, seed, tol)
    except NotDecomposable:
        pass
    except Unknown:
        unknown = True
    dec = decompose4(F, alpha, budget, seed, tol)
    return (UNKNOWN if unknown else 4), dec


# ---------------------------------------------------------------- simultaneous change of signs

@dataclass(frozen=True)
class SignChange:
    q1: object
    q2: object
    same_class: bool
    kind: str


def change_signs(p1, p2, a1, a2):
    """Replace both centers by their orthogonal points inside the hyperbolic line they span."""
    p1, p2 = point(p1), point(p2)
    a1, a2 = as_parameter(a1), as_parameter(a2)
    L = line_through(p1, p2)
    if L.kind != "hyperbolic":
        raise NotHyperbolicLine(f"the line through the centers is {L.kind}")
    q1, q2 = orthogonal_in_line(L, p1), orthogonal_in_line(L, p2)
    R = special_elliptic(a2, p2) @ special_elliptic(a1, p1)
    S = special_elliptic(a2, q2) @ special_elliptic(a1, q1)
    same = R.key.same_class(S.key)
    if same and R.key.kind in ("loxodromic", "ellipto-parabolic"):
        conjugator(S, R)
    return SignChange(q1, q2, same, R.key.kind)
