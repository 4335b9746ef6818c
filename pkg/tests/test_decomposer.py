import cmath
import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import targets
from cxreflect.decomposer import (ALL_SIGN_TRIPLES, RES_TOL, UNKNOWN, SurfaceInstance, alpha_length,
                                  certify, change_signs, decompose1, decompose2, decompose3,
                                  decompose4, elliptic_from_angles, product, surface_solve)
from cxreflect.errors import NoSolution, NotDecomposable, NotHyperbolicLine, Unknown
from cxreflect.hermitian import herm, pair_with_tance, tance
from cxreflect.isometry import Parameter, classify, special_elliptic
from cxreflect.trace_geometry import TangentLine, line_contains, tau_param

PI3 = Parameter.from_pi(Fr(1, 3))
OMEGAS = [1, cmath.exp(2j * math.pi / 3), cmath.exp(-2j * math.pi / 3)]


def _check(F, dec):
    assert dec.residual <= RES_TOL
    assert all(c.sig != 0 for c in dec.centers)
    res, _ = certify(F, dec.params, dec.centers)
    assert res <= RES_TOL


def test_decompose1(rng):
    a = targets.random_parameter(rng)
    F = special_elliptic(a, targets.random_point(rng, 1))
    assert alpha_length(F, a)[0] == 1
    with pytest.raises(NotDecomposable):
        decompose1(targets.loxodromic(rng), a)


def test_decompose2_same_center(rng):
    a1, a2 = Parameter.from_pi(Fr(1, 5)), Parameter.from_pi(Fr(2, 7))
    p = targets.random_point(rng, -1)
    F = special_elliptic(a1.value * a2.value, p)
    dec = decompose2(F, a1, a2)
    _check(F, dec)
    assert dec.centers[0].same_as(dec.centers[1], 1e-6)


def test_decompose2_loxodromic_on_line(rng):
    a1, a2 = targets.random_parameter(rng), targets.random_parameter(rng)
    p1, p2 = pair_with_tance(-2.0, 1, -1)
    F = targets.conj_by(targets.random_su21(rng), (special_elliptic(a2, p2) @ special_elliptic(a1, p1)).m)
    assert classify(F).kind == "loxodromic"
    _check(F, decompose2(F, a1, a2))


def test_decompose2_two_step(rng):
    with pytest.raises(NotDecomposable):
        decompose2(targets.two_step(rng), PI3, PI3)


def test_decompose3_identity():
    a = Parameter.from_pi(Fr(1, 7))
    dec = decompose3(np.eye(3), a)
    _check(np.eye(3), dec)
    assert all(abs(herm(dec.centers[i], dec.centers[j])) < 1e-12
               for i in range(3) for j in range(i + 1, 3))


@pytest.mark.parametrize("k", [1, 3, 5, 9, 13, 17])
def test_decompose3_trace_zero(k):
    F = elliptic_from_angles(4 / 3, 2 / 3)
    assert abs(F.trace) < 1e-14
    _check(F, decompose3(F, Parameter.from_pi(Fr(k, 27))))


def test_decompose3_empty_chamber():
    F = elliptic_from_angles(0.7, 0.6)
    with pytest.raises(NotDecomposable):
        decompose3(F, PI3)
    n, dec = alpha_length(F, PI3)
    assert n == 4
    _check(F, dec)


def test_decompose4_empty_chamber(rng):
    F = targets.regular_elliptic(rng, 1.3, 1.25)
    dec = decompose4(F, PI3)
    assert dec.length == 4
    _check(F, dec)


def test_two_step_open_case(rng):
    a = Parameter.from_pi(Fr(1, 7))
    F = targets.two_step(rng)
    with pytest.raises(Unknown):
        decompose3(F, a)
    n, dec = alpha_length(F, a)
    assert n == UNKNOWN and dec.length == 4
    _check(F, dec)


@pytest.mark.parametrize("sign", [1, -1])
def test_two_step_involution_parameter(sign, rng):
    F = targets.two_step(rng, sign)
    n, dec = alpha_length(F, PI3)
    assert n == 3
    _check(F, dec)


def test_loxodromic_length_three(rng):
    a = Parameter.from_pi(Fr(1, 7))
    for _ in range(5):
        F = targets.loxodromic(rng)
        on_line = any(line_contains(d * F.trace, a.value ** 2) for d in OMEGAS)
        n, dec = alpha_length(F, a)
        assert n == (2 if on_line else 3)
        _check(F, dec)


def test_surface_trace_four_example():
    # the Gram factor rules out (-,+,-) and (+,-,-) at trace 4; other signs solve it
    for k in (1, 3):
        a = Parameter.from_pi(Fr(1, 7) * k)
        for sigma in [(-1, 1, -1), (1, -1, -1)]:
            with pytest.raises(NoSolution):
                surface_solve(SurfaceInstance(a, 4, sigma), relax_last=True)
        inst = SurfaceInstance(a, 4, (-1, -1, -1))
        t1, t2, t = surface_solve(inst)
        assert abs(inst.equation(t1, t2, t)) < 1e-10 * max(1, t1 * t2 * t)
        P = product((a,) * 3, inst.points(t1, t2, t))
        assert abs(P.trace - 4) < 1e-8


def test_surface_trace_zero():
    a = Parameter.from_pi(Fr(1, 5))
    for sigma in ALL_SIGN_TRIPLES:
        try:
            inst = SurfaceInstance(a, 0, sigma)
            t1, t2, t = surface_solve(inst)
        except NoSolution:
            continue
        assert abs(product((a,) * 3, inst.points(t1, t2, t)).trace) < 1e-8
        return
    pytest.fail("no sign triple solves trace 0")


def test_surface_coefficients():
    inst = SurfaceInstance(Parameter.from_value(1j), 0.3 + 0.2j, (-1, -1, -1))
    assert inst.chi == pytest.approx(-0.5)
    assert inst.d1 == pytest.approx(2.0)
    k = inst.kappa
    assert inst.d2 == pytest.approx(-4 * inst.chi * (2 * inst.chi * k.real + k.imag))


angles = st.floats(0.05, 2.05)


@given(angles, st.floats(-8, 8), st.sampled_from(ALL_SIGN_TRIPLES))
def test_no_solution_on_alpha_cubed_line(a, s, sigma):
    al = Parameter.from_angle(a)
    L = TangentLine(al.value ** 3)
    tau = L.tangency + s * L.direction
    with pytest.raises(NoSolution):
        surface_solve(SurfaceInstance(al, tau, sigma), relax_last=False)


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.sampled_from(ALL_SIGN_TRIPLES))
def test_surface_solutions_faithful(seed, sigma):
    rng = np.random.default_rng(seed)
    al = targets.random_parameter(rng)
    tau = complex(*rng.normal(scale=3, size=2))
    inst = SurfaceInstance(al, tau, sigma)
    try:
        t1, t2, t = surface_solve(inst, relax_last=True)
    except NoSolution:
        return
    P = product((al,) * 3, inst.points(t1, t2, t))
    assert abs(P.trace - tau) <= 1e-8 * max(1, abs(tau))


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6), st.sampled_from(["loxodromic", "ellipto-parabolic",
                                                  "special-elliptic-pos-center", "3-step-unipotent"]))
def test_length_invariances(seed, kind):
    rng = np.random.default_rng(seed)
    F = targets.KINDS[kind](rng)
    a = targets.random_parameter(rng)
    n, dec = alpha_length(F, a)
    _check(F, dec)
    G = targets.conj_by(targets.random_su21(rng, 0.4), F.m)
    assert alpha_length(G, a)[0] == n
    assert alpha_length(F, Parameter.from_value(a.value * OMEGAS[1]))[0] == n


def test_change_signs_frozen():
    a1, a2 = Parameter.from_pi(Fr(1, 5)), Parameter.from_pi(Fr(2, 7))
    r = change_signs((1, 0, 0), (2, 0, 1), a1, a2)
    assert r.q1.same_as((0, 0, 1))
    assert r.q1.sig == -1 and r.q2.sig == -1
    assert tance(r.q1, r.q2) == pytest.approx(4 / 3)


@given(st.integers(0, 10 ** 6), st.floats(-6, 6).filter(lambda t: t < -0.05 or t > 1.05),
       st.sampled_from([(1, 1), (-1, -1), (1, -1)]))
def test_change_signs_trace(seed, t, signs):
    if signs == (1, -1) and t > 0 or signs != (1, -1) and t < 1:
        return
    rng = np.random.default_rng(seed)
    a1, a2 = targets.random_parameter(rng), targets.random_parameter(rng)
    p1, p2 = pair_with_tance(t, *signs)
    r = change_signs(p1, p2, a1, a2)
    R = special_elliptic(a2, p2) @ special_elliptic(a1, p1)
    S = special_elliptic(a2, r.q2) @ special_elliptic(a1, r.q1)
    assert abs(R.trace - S.trace) < 1e-9 * max(1, abs(R.trace))
    assert (r.q1.sig, r.q2.sig) == (-p1.sig, -p2.sig)
    if r.kind == "loxodromic":
        assert r.same_class


def test_change_signs_needs_hyperbolic():
    with pytest.raises(NotHyperbolicLine):
        change_signs((1, 0, 0), (0, 1, 0), PI3, PI3)


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.floats(-3, 3), st.floats(-3, 3))
def test_q_from_frame_hits_ratio(seed, x, y):
    from cxreflect.decomposer import _eigen_frame, _q_from_frame
    rng = np.random.default_rng(seed)
    F = targets.regular_elliptic(rng, 0.7, 0.6)
    frame = _eigen_frame(F)
    w = complex(x, y)
    q = _q_from_frame(frame, w, rng)
    if q is None:
        return
    J = np.diag([1.0, 1.0, -1.0])
    ratio = (q.conj() @ J @ F.m @ q) / (q.conj() @ J @ q)
    assert abs(ratio - w) <= 1e-9 * (1 + abs(w))


@pytest.mark.parametrize("kind", ["regular-elliptic", "special-elliptic-pos-center",
                                  "ellipto-parabolic"])
def test_small_parameter(kind, rng):
    al = Parameter.from_pi(Fr(1, 250))
    for _ in range(5):
        F = targets.KINDS[kind](rng)
        _check(F, decompose3(F, al))


def test_special_near_minus_omega_small_parameter(rng):
    # nearly repeated eigenvalues in the length-2 remainder need the polish
    al = Parameter.from_pi(Fr(1, 250))
    beta = Parameter.from_value(cmath.exp(1j * (math.pi + 0.009)))
    F = special_elliptic(beta, targets.random_point(rng, 1))
    _check(F, decompose3(F, al))
