import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lattice_asym.asymptotics import asym_uL
from lattice_asym.transforms import (
    LoadSpec,
    SingularEvaluationError,
    SpectralPoint,
    decaying_root,
    dispersion_sq,
    full_transform,
    half_inverted_transform,
    numeric_qy_inversion,
    resonant_limit_integrand,
    uL_exact,
    uL_numeric,
)

UNIT = LoadSpec(1.0, 2.0)


@pytest.mark.parametrize("qx, qy, expected", [(0, 0, 0.0), (np.pi, np.pi, 8.0), (np.pi, 0, 4.0)])
def test_dispersion_points(qx, qy, expected):
    assert dispersion_sq(qx, qy) == pytest.approx(expected, abs=1e-15)


def test_dispersion_range_and_resonant_curve():
    q = np.linspace(-np.pi, np.pi, 401)
    w2 = dispersion_sq(q[:, None], q[None, :])
    assert w2.min() >= 0 and w2.max() <= 8
    # cos qx + cos qy = 0  <=>  qy = pi - qx
    qx = np.linspace(0, np.pi, 101)
    assert np.allclose(dispersion_sq(qx, np.pi - qx), 4.0, atol=1e-14)


def test_full_transform_examples():
    assert full_transform(SpectralPoint(1, 0, 0), UNIT) == pytest.approx(0.4)
    assert full_transform(SpectralPoint(1, np.pi, np.pi), UNIT) == pytest.approx(2 / 45)
    assert full_transform(SpectralPoint(1, 0.3, -1.1), LoadSpec(0.0, 2.0)) == 0


def test_full_transform_pole():
    # p^2 + 2(2 - cos qx - cos qy) = 0 needs Re p = 0; use a point that rounds onto it
    with pytest.raises(ValueError):
        SpectralPoint(2j, 0, 0)
    with pytest.raises(SingularEvaluationError):
        full_transform(SpectralPoint(1e-320 + 2j, 0, 0), UNIT)


@settings(max_examples=50, deadline=None)
@given(re=st.floats(0.1, 3), im=st.floats(-3, 3), qx=st.floats(-np.pi, np.pi),
       qy=st.floats(-np.pi, np.pi))
def test_conjugate_symmetry(re, im, qx, qy):
    p = complex(re, im)
    a = full_transform(SpectralPoint(p, qx, qy), UNIT)
    b = full_transform(SpectralPoint(p.conjugate(), qx, qy), UNIT)
    assert b == pytest.approx(np.conj(a), rel=1e-14)


def test_half_inverted_n0():
    assert half_inverted_transform(1, 0, 0, UNIT) == pytest.approx(2 / (2 * 5 * math.sqrt(1.25)))


def test_branch_selection_by_magnitude():
    p, qx = 1.0, 0.5
    B = p * p / 2 + 2 - math.cos(qx)
    r = cmath.sqrt(B * B - 1)
    roots = [B - r, B + r]
    small = [z for z in roots if abs(z) <= 1]
    assert len(small) == 1
    z, root = decaying_root(B)
    assert z == pytest.approx(small[0])
    assert root == pytest.approx(B - small[0])


def test_branch_point_error():
    with pytest.raises(SingularEvaluationError):
        decaying_root(1.0)


def test_numeric_inversion_example():
    p, qx, n = 1 + 0.5j, 0.7, 2
    closed = half_inverted_transform(p, qx, n, UNIT)
    numeric = numeric_qy_inversion(p, qx, n, UNIT)
    assert abs(closed - numeric) / abs(numeric) < 1e-8


@settings(max_examples=40, deadline=None)
@given(re=st.floats(0.5, 3), im=st.floats(-3, 3), qx=st.floats(-np.pi, np.pi),
       n=st.integers(-4, 4))
def test_half_inverted_matches_numeric_inversion(re, im, qx, n):
    p = complex(re, im)
    closed = half_inverted_transform(p, qx, n, UNIT)
    numeric = numeric_qy_inversion(p, qx, n, UNIT)
    assert abs(closed - numeric) <= 1e-8 * abs(numeric)


@settings(max_examples=50, deadline=None)
@given(re=st.floats(0.01, 3), im=st.floats(-3, 3), qx=st.floats(-np.pi, np.pi),
       n=st.integers(0, 8))
def test_decay_in_n(re, im, qx, n):
    p = complex(re, im)
    a = abs(half_inverted_transform(p, qx, n, UNIT))
    b = abs(half_inverted_transform(p, qx, n + 1, UNIT))
    assert b <= a * (1 + 1e-12)


def test_resonant_limit_midpoint():
    for s in (1e-3, 0.5):
        assert resonant_limit_integrand(np.pi / 2, 0, s, UNIT) == pytest.approx(-0.25, abs=1e-15)


def test_resonant_limit_sign():
    q = 0.4
    for n in range(6):
        v = resonant_limit_integrand(q, n, 1e-9, UNIT)
        phase = v / (np.exp(1j * q * n) / (4 * np.sqrt(np.sin(q) ** 2 + 4j * 1e-9 * np.cos(q))))
        assert phase == pytest.approx((-1) ** (n + 1))


def test_resonant_limit_consistency_example():
    s, qx, n = 1e-6, 0.9, 1
    exact = s * half_inverted_transform(s + 2j, qx, n, UNIT)
    limit = resonant_limit_integrand(qx, n, s, UNIT)
    assert abs(exact - limit) / abs(limit) < 1e-3


def test_uL_origin_tracks_closed_form():
    diffs = [abs(uL_numeric(s, 0, 0, UNIT) - asym_uL(0, 0, s).value) * s for s in (1e-3, 1e-4, 1e-5)]
    assert diffs[0] > diffs[1] > diffs[2]
    assert diffs[2] < 1e-9


def test_uL_odd_magnitude():
    # |Im uL| 16 s / Q0 at s = 1e-5; mpmath reference at 30 digits: 1.99984849442764
    v = uL_numeric(1e-5, 1, 0, UNIT)
    assert abs(v.imag) * 16e-5 == pytest.approx(1.99984849442764, rel=1e-9)
    assert abs(v.real) < 1e-8 * abs(v.imag)


def test_uL_linear_in_load():
    a = uL_numeric(1e-4, 2, 1, LoadSpec(1.0, 2.0))
    b = uL_numeric(1e-4, 2, 1, LoadSpec(2.0, 2.0))
    assert b == 2 * a


def test_small_s_site_integral_matches_exact_transform():
    # small-s representation vs qx inversion of the exact row transform; the
    # dropped terms are O(sqrt s) relative (z^|n| inside the boundary layers)
    for mn in [(0, 0), (2, 0), (1, 1), (1, 0)]:
        rel = []
        for s in (1e-3, 1e-5):
            approx = uL_numeric(s, *mn, UNIT)
            exact = uL_exact(s + 2j, *mn, UNIT)
            rel.append(abs(approx - exact) / abs(exact))
            assert rel[-1] < math.sqrt(s)
        assert rel[1] < rel[0]


def test_uL_rejects_nonpositive_s():
    with pytest.raises(ValueError):
        uL_numeric(0.0, 0, 0)


def test_load_validation():
    with pytest.raises(ValueError):
        LoadSpec(1.0, 0.0)
    with pytest.raises(ValueError):
        LoadSpec(float("nan"), 2.0)
    assert LoadSpec().force(-1.0) == 0.0
    assert LoadSpec(3.0, 2.0).force(np.pi / 4) == pytest.approx(3.0)
