"""Length-2 class sets, the chamber arrangement of T and full/empty chamber status.

Angles are exact rationals in units of pi unless stated otherwise.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

import numpy as np

from ._numerics import OMEGAS
from .errors import (CxReflectError, OnWall, ParameterOutOfRange, TransitionParameter)
from .hermitian import pair_with_tance
from .isometry import Parameter, as_parameter, in_omega, special_elliptic
from .trace_geometry import TangentLine, tau_param
from .unfolded import TrianglePoint, unfolded_trace, walls

TWO_THIRDS = Fraction(2, 3)
TRACE_ZERO = (Fraction(4, 3), Fraction(2, 3))

NEG = "special-elliptic-neg-center"
POS = "special-elliptic-pos-center"
EP = "ellipto-parabolic"
ID = "identity"
U3 = "3-step-unipotent"
REG = "regular-elliptic"


def pi_units(a):
    """Angle of a Parameter (or a number already in pi units) as a multiple of pi."""
    if isinstance(a, Parameter):
        return a.frac if a.frac is not None else a.angle / math.pi
    return a


def _param(a):
    return as_parameter(a)


def _normalized_pi(a):
    """Omega-multiple of the parameter with angle in (0, 2/3), in pi units."""
    p, _ = _param(a).normalized()
    return pi_units(p)


@dataclass(frozen=True)
class ESigmaSet:
    """Segments (pairs of TrianglePoints) with the class kinds annotated at endpoints."""

    sigma: tuple
    segments: tuple
    annotations: tuple = field(default=())

    def endpoints(self):
        return [(pt, kinds) for pt, kinds in self.annotations]


def _P(x, y):
    return TrianglePoint(x, y)


def e_sigma_segments(a1, a2, sigma):
    """The set E^{s1 s2}_{a1,a2} for 0 < a1, a2 < 2/3 (pi units)."""
    x, y = pi_units(a1), pi_units(a2)
    if not (0 < x < TWO_THIRDS and 0 < y < TWO_THIRDS):
        raise ParameterOutOfRange("parameters must satisfy 0 < a < 2pi/3")
    s = x + y
    sigma = tuple(sigma)
    if sigma == (-1, -1):
        if s <= TWO_THIRDS:
            d, e = _P(3 * s, 3 * s), _P(2, 1 + 3 * s / 2)
        else:
            d, e = _P(3 * s - 2, 3 * s - 2), _P(3 * s / 2 - 1, 0)
        if d == e:
            ann = ((d, (ID,)),)
        else:
            ann = ((d, (NEG,)), (e, (EP,)))
        return ESigmaSet(sigma, ((d, e),), ann)
    if sigma == (1, 1):
        lo = _P(2 - 3 * x, 2 - 3 * y) if x <= y else _P(2 - 3 * y, 2 - 3 * x)
        if s <= TWO_THIRDS:
            common, other = _P(2, 2 - 3 * s), _P(1 + 3 * s / 2, 0)
            segs = ((lo, common), (common, other))
        else:
            common, other = _P(4 - 3 * s, 0), _P(2, 3 * s / 2 - 1)
            segs = ((other, common), (common, lo))
        lo_kind = NEG if lo.x == lo.y else REG
        if common == other:
            ann = ((lo, (lo_kind,)), (common, (ID, U3)))
        else:
            ann = ((lo, (lo_kind,)), (common, (POS, EP)), (other, (EP,)))
        return ESigmaSet(sigma, segs, ann)
    if sigma == (1, -1):
        if x <= y:
            r, b = _P(3 * y, 3 * y - 3 * x), _P(3 * s / 2, 0)
        else:
            r, b = _P(2 + 3 * y - 3 * x, 3 * y), _P(2, 3 * s / 2)
        return _mixed(sigma, r, b, x == y)
    if sigma == (-1, 1):
        if x <= y:
            r, b = _P(2 + 3 * x - 3 * y, 3 * x), _P(2, 3 * s / 2)
        else:
            r, b = _P(3 * x, 3 * x - 3 * y), _P(3 * s / 2, 0)
        return _mixed(sigma, r, b, x == y)
    raise ValueError("sigma must be a pair of +1/-1")


def _mixed(sigma, r, b, equal):
    if equal:
        return ESigmaSet(sigma, ((b, b),), ((b, (POS,)),))
    return ESigmaSet(sigma, ((r, b),), ((r, (REG,)), (b, (EP,))))


# ---------------------------------------------------------------- exact segment geometry

def _xy(p):
    return (p.x, p.y) if isinstance(p, TrianglePoint) else p


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def on_segment(p, seg, tol=0):
    a, b = _xy(seg[0]), _xy(seg[1])
    p = _xy(p)
    d = _sub(b, a)
    w = _sub(p, a)
    if d == (0, 0):
        return abs(w[0]) <= tol and abs(w[1]) <= tol
    scale = math.hypot(float(d[0]), float(d[1])) if tol else 1
    if abs(_cross(d, w)) > tol * scale:
        return False
    t = _dot(w, d)
    n = _dot(d, d)
    return -tol * scale <= t <= n + tol * scale


def segment_intersections(s, t):
    """Intersection points of two closed segments (endpoints of the overlap if collinear)."""
    p, p2 = _xy(s[0]), _xy(s[1])
    q, q2 = _xy(t[0]), _xy(t[1])
    r, u = _sub(p2, p), _sub(q2, q)
    den = _cross(r, u)
    if den == 0:
        if r == (0, 0) and u == (0, 0):
            return [p] if p == q else []
        if r == (0, 0):
            return [p] if on_segment(p, t) else []
        if u == (0, 0):
            return [q] if on_segment(q, s) else []
        if _cross(_sub(q, p), r) != 0:
            return []
        out = [x for x in (q, q2) if on_segment(x, s)] + [x for x in (p, p2) if on_segment(x, t)]
        return list(dict.fromkeys(out))
    w = _sub(q, p)
    a = _cross(w, u) / den
    b = _cross(w, r) / den
    if 0 <= a <= 1 and 0 <= b <= 1:
        return [(p[0] + a * r[0], p[1] + a * r[1])]
    return []


def twin_xy(p):
    x, y = p
    if y == 0 and x != 0:
        return (Fraction(2) if isinstance(x, (int, Fraction)) else 2.0, x)
    if x == 2 and y != 2:
        return (y, Fraction(0) if isinstance(y, (int, Fraction)) else 0.0)
    return None


def sets_intersect(segs1, segs2):
    """Whether two unions of segments meet in T modulo the side identification."""
    for s in segs1:
        for t in segs2:
            if segment_intersections(s, t):
                return True
    for s in segs1:
        for end in (_xy(s[0]), _xy(s[1])):
            tw = twin_xy(end)
            if tw is not None and any(on_segment(tw, t) for t in segs2):
                return True
    return False


# ---------------------------------------------------------------- length-2 membership

@dataclass(frozen=True)
class Length2Result:
    ok: bool
    sigma: tuple = None
    t: float = None
    delta: complex = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _line_param(a1, a2, tau):
    """Real t with tau_param(a1, a2, t) = tau, or None when tau is off the line."""
    base = tau_param(a1, a2, 0.0)
    slope = tau_param(a1, a2, 1.0) - base
    t = ((tau - base) * slope.conjugate()).real / abs(slope) ** 2
    if abs(tau_param(a1, a2, t) - tau) <= 1e-8 * (1 + abs(tau)):
        return t
    return None


REALIZABLE_SIGNS = ((1, 1), (-1, -1), (1, -1), (-1, 1))


def model_pairs(t, sigma):
    """Center pairs with tance t and signs sigma; at t = 1 both a repeated center and,
    for positive signs, two distinct points of a Euclidean line."""
    if abs(t - 1) <= 1e-9:
        if sigma == (1, 1):
            p1, p2 = pair_with_tance(1.0, 1, 1)
            return [(p1, p2), (p1, p1)]
        if sigma == (-1, -1):
            return [pair_with_tance(1.0, -1, -1)]
    try:
        return [pair_with_tance(t, *sigma)]
    except CxReflectError:
        return []


def model_products(a1, a2, t):
    """All model products R_{a2}^{p2} R_{a1}^{p1} with tance t, with their sign pairs and centers."""
    out = []
    for sigma in REALIZABLE_SIGNS:
        for p1, p2 in model_pairs(t, sigma):
            out.append((sigma, special_elliptic(a2, p2) @ special_elliptic(a1, p1), (p1, p2)))
    return out


def lift_parameters(a1, a2, trace_rep, skip_zero=False):
    """(delta, t) with tau_{a1,a2}(t) = delta * trace_rep for delta in Omega."""
    out = []
    for d in OMEGAS:
        t = _line_param(a1, a2, d * trace_rep)
        if t is None:
            continue
        if abs(t) <= 1e-9:
            if skip_zero:
                continue
            t = 0.0
        if abs(t - 1) <= 1e-9:
            t = 1.0
        out.append((d, t))
    return out


def _model_search(key, a1, a2, trace_rep, skip_zero):
    """Try each Omega-lift of a trace on l_{a1 a2}, each realizable sign pair, and compare classes."""
    p1, p2 = _param(a1), _param(a2)
    for d, t in lift_parameters(p1, p2, trace_rep, skip_zero):
        for sigma, R, _ in model_products(p1, p2, t):
            try:
                if R.key.same_class(key):
                    return Length2Result(True, sigma, t, d, "model product matches")
            except CxReflectError:
                continue
    return None


def _elliptic_member(key, x1, x2, tol=1e-9):
    """Segment membership of the class angle pair; returns (sigma, reason) or None."""
    q = (key.angles[0] / math.pi, key.angles[1] / math.pi)
    boundary = key.kind != REG
    candidates = [q]
    tw = twin_xy(q) if (abs(q[1]) <= tol or abs(q[0] - 2) <= tol) else None
    if abs(q[1]) <= tol:
        candidates.append((2.0, q[0]))
    if tw is not None and tw not in candidates:
        candidates.append(tw)
    for sigma in REALIZABLE_SIGNS:
        E = e_sigma_segments(x1, x2, sigma)
        if boundary:
            for pt, kinds in E.annotations:
                if key.kind in kinds and any(_close((float(pt.x), float(pt.y)), c, 1e-7)
                                             for c in candidates):
                    return sigma
        else:
            segs = [((float(a.x), float(a.y)), (float(b.x), float(b.y))) for a, b in E.segments]
            if any(on_segment(q, s, tol) for s in segs):
                return sigma
    return None


def _close(p, q, tol):
    return abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol


def length2_test(key, a1, a2):
    """Whether the class `key` admits an (a1, a2)-decomposition, with witness data."""
    p1, p2 = _param(a1), _param(a2)
    prod = p1.value * p2.value
    kind = key.kind
    if kind == ID:
        ok = in_omega(prod)
        return Length2Result(ok, (1, 1) if ok else None, 0.0 if ok else None,
                             reason="same center with product in Omega" if ok else
                             "identity needs a1 a2 in Omega")
    if kind.startswith("2-step"):
        return Length2Result(False, reason="2-step unipotent isometries have no length-2 decomposition")
    if kind == U3:
        if not in_omega(prod):
            return Length2Result(False, reason="3-step unipotent needs a1 a2 in Omega")
        return Length2Result(True, (1, 1), 1.0, reason="Euclidean line")
    if kind == "loxodromic":
        r = _model_search(key, p1, p2, key.trace, skip_zero=False)
        return r or Length2Result(False, reason="no lift of the trace lies on the line")
    if kind == EP:
        lam = key.neg_eig
        tr = 2 * lam + lam ** -2
        r = _model_search(key, p1, p2, tr, skip_zero=True)
        return r or Length2Result(False, reason="no matching parabolic model")
    x1, x2 = _normalized_pi(p1), _normalized_pi(p2)
    sigma = _elliptic_member(key, x1, x2)
    if sigma is None:
        return Length2Result(False, reason="angle pair outside the length-2 segments")
    tr = unfolded_trace(TrianglePoint(key.angles[0] / math.pi, key.angles[1] / math.pi), check=False)
    for d in OMEGAS:
        t = _line_param(p1, p2, d * tr)
        if t is not None:
            return Length2Result(True, sigma, t, d, "angle pair on a length-2 segment")
    return Length2Result(True, sigma, None, None, "angle pair on a length-2 segment")


# ---------------------------------------------------------------- chamber arrangement

T_SIDES = (
    ((Fraction(0), Fraction(0)), (Fraction(2), Fraction(0))),
    ((Fraction(2), Fraction(0)), (Fraction(2), Fraction(2))),
    ((Fraction(0), Fraction(0)), (Fraction(2), Fraction(2))),
)


def _angle_cmp(d1, d2):
    h1 = 0 if (d1[1] > 0 or (d1[1] == 0 and d1[0] > 0)) else 1
    h2 = 0 if (d2[1] > 0 or (d2[1] == 0 and d2[0] > 0)) else 1
    if h1 != h2:
        return h1 - h2
    c = _cross(d1, d2)
    return -1 if c > 0 else (1 if c < 0 else 0)


def arrangement_faces(segments):
    """Bounded faces (CCW vertex lists) of the planar subdivision cut out by the segments."""
    pts_on = [set([_xy(s[0]), _xy(s[1])]) for s in segments]
    for i in range(len(segments)):
        for j in range(i + 1, len(segments)):
            for p in segment_intersections(segments[i], segments[j]):
                pts_on[i].add(p)
                pts_on[j].add(p)
    edges = set()
    for s, pts in zip(segments, pts_on):
        a = _xy(s[0])
        d = _sub(_xy(s[1]), a)
        order = sorted(pts, key=lambda p: _dot(_sub(p, a), d))
        for u, v in zip(order, order[1:]):
            if u != v:
                edges.add((u, v))
                edges.add((v, u))
    nbrs = {}
    for u, v in edges:
        nbrs.setdefault(u, []).append(v)
    for u in nbrs:
        nbrs[u].sort(key=cmp_to_key(lambda a, b, u=u: _angle_cmp(_sub(a, u), _sub(b, u))))
    seen = set()
    faces = []
    for start in sorted(edges):
        if start in seen:
            continue
        face = []
        e = start
        while e not in seen:
            seen.add(e)
            u, v = e
            face.append(u)
            ring = nbrs[v]
            i = ring.index(u)
            w = ring[(i - 1) % len(ring)]
            e = (v, w)
        if polygon_area(face) > 0:
            faces.append(_drop_collinear(face))
    return faces


def _drop_collinear(face):
    out = []
    n = len(face)
    for i in range(n):
        a, b, c = face[i - 1], face[i], face[(i + 1) % n]
        if _cross(_sub(b, a), _sub(c, b)) != 0:
            out.append(b)
    return out


def polygon_area(poly):
    n = len(poly)
    s = sum(poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1] for i in range(n))
    return s / 2


def point_in_polygon(p, poly):
    """1 strictly inside, 0 on the boundary, -1 outside (convex CCW polygon)."""
    n = len(poly)
    sign = 1
    for i in range(n):
        c = _cross(_sub(poly[(i + 1) % n], poly[i]), _sub(p, poly[i]))
        if c < 0:
            return -1
        if c == 0:
            sign = 0
    return sign


def centroid(poly):
    n = len(poly)
    return (sum(p[0] for p in poly) / n, sum(p[1] for p in poly) / n)


@dataclass
class Chamber:
    polygon: list
    status: str = "unknown"
    witness: tuple = None
    reason: str = ""

    @property
    def area(self):
        return polygon_area(self.polygon)

    def edges(self):
        n = len(self.polygon)
        return [(self.polygon[i], self.polygon[(i + 1) % n]) for i in range(n)]

    def sort_key(self):
        c = centroid(self.polygon)
        return (c[0], c[1])


@dataclass
class Atlas:
    alpha: Parameter
    chambers: list
    walls: list

    def counts(self):
        out = {"full": 0, "empty": 0, "unknown": 0}
        for c in self.chambers:
            out[c.status] += 1
        return out

    def fingerprint(self):
        return tuple(c.status for c in self.chambers)

    def chamber_of(self, angles_pi, tol=1e-12):
        """Chambers whose closure contains the point (pi units, floats allowed)."""
        out = []
        for c in self.chambers:
            poly = [(float(x), float(y)) for x, y in c.polygon]
            n = len(poly)
            if all(_cross(_sub(poly[(i + 1) % n], poly[i]), _sub(angles_pi, poly[i])) >= -tol
                   for i in range(n)):
                out.append(c)
        return out


def is_transition(a):
    """a (pi units, exact) is a multiple of 2/27."""
    return (Fraction(a) * Fraction(27, 2)).denominator == 1


def _edge_kind(u, v):
    if u[1] == 0 and v[1] == 0:
        return "bottom"
    if u[0] == 2 and v[0] == 2:
        return "right"
    if u[0] == u[1] and v[0] == v[1]:
        return "diagonal"
    return "wall"


def diag_chamber_full(theta, alpha):
    """Full/empty criterion at the diagonal point (theta, theta), theta in pi units."""
    a = _normalized_pi(alpha)
    theta = Fraction(theta)
    if not 0 < theta < 2:
        raise ParameterOutOfRange("theta must lie in (0, 2)")
    p = (theta, theta)
    for w in walls(3 * a):
        if on_segment(p, (w.start, w.end)):
            raise OnWall(f"({theta}, {theta}) lies on a wall")
    b = theta / 3
    abar = TWO_THIRDS - a
    s1 = list(e_sigma_segments(a, a, (-1, -1)).segments) + list(e_sigma_segments(a, a, (1, 1)).segments)
    s2 = list(e_sigma_segments(b, abar, (-1, -1)).segments) + \
        list(e_sigma_segments(b, abar, (-1, 1)).segments)
    return sets_intersect(s1, s2)


def chambers(alpha, synthesize=True, budget=2000, seed=0):
    """Chamber arrangement of T for the parameter alpha and the status of each chamber."""
    alpha = _param(alpha)
    a = pi_units(alpha)
    if not isinstance(a, Fraction):
        a = Fraction(a)
    if not 0 < a < TWO_THIRDS:
        raise ParameterOutOfRange("parameter must satisfy 0 < a < 2pi/3")
    if is_transition(a):
        raise TransitionParameter(f"a = {a} pi is a multiple of 2pi/27; perturb it")
    ws = walls(3 * a)
    segs = [((w.start.x, w.start.y), (w.end.x, w.end.y)) for w in ws] + list(T_SIDES)
    faces = arrangement_faces(segs)
    result = [Chamber(f) for f in faces]
    result.sort(key=Chamber.sort_key)
    for c in result:
        _decide(c, alpha, a, synthesize, budget, seed)
    return Atlas(alpha, result, ws)


def _decide(c, alpha, a, synthesize, budget, seed):
    for u, v in c.edges():
        k = _edge_kind(u, v)
        if k in ("bottom", "right"):
            c.status, c.reason = "full", "touches the nondiagonal side"
            c.witness = ((u[0] + v[0]) / 2, (u[1] + v[1]) / 2)
            return
    if point_in_polygon(TRACE_ZERO, c.polygon) == 1:
        c.status, c.reason, c.witness = "full", "contains the trace-zero class", TRACE_ZERO
        return
    for u, v in c.edges():
        if _edge_kind(u, v) == "diagonal":
            theta = (u[0] + v[0]) / 2
            full = diag_chamber_full(theta, alpha)
            c.status = "full" if full else "empty"
            c.reason = "diagonal criterion"
            c.witness = (theta, theta)
            return
    if synthesize:
        from .decomposer import synthesize_at
        w = centroid(c.polygon)
        if synthesize_at((float(w[0]), float(w[1])), alpha, budget=budget, seed=seed):
            c.status, c.reason, c.witness = "full", "certified interior decomposition", w
            return
    c.status, c.reason = "unknown", "no criterion applies"


@dataclass(frozen=True)
class SweepPoint:
    a: Fraction
    counts: dict
    fingerprint: tuple
    transition: bool = False


def sweep(a_from, a_to, steps, synthesize=False):
    """Atlases on a regular grid of parameters and the detected status transitions."""
    a_from, a_to = Fraction(a_from), Fraction(a_to)
    if not 0 <= a_from < a_to <= TWO_THIRDS:
        raise ParameterOutOfRange("sweep range must lie in [0, 2/3]")
    steps = max(int(steps), 1)
    h = (a_to - a_from) / steps
    points = []
    for k in range(steps + 1):
        a = a_from + k * h
        if not 0 < a < TWO_THIRDS:
            continue
        if is_transition(a):
            points.append(SweepPoint(a, {}, None, True))
            continue
        at = chambers(Parameter.from_pi(a), synthesize=synthesize)
        points.append(SweepPoint(a, at.counts(), _pattern(at)))
    transitions = []
    regular = [p for p in points if not p.transition]
    for p, q in zip(regular, regular[1:]):
        if p.fingerprint != q.fingerprint:
            transitions.append((p.a, q.a))
    return points, transitions


def _pattern(atlas):
    c = atlas.counts()
    return (len(atlas.chambers), c["full"], c["empty"], c["unknown"])


def nearest_transition(a):
    k = round(float(a) * 27 / 2)
    return Fraction(2 * k, 27)
