import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lattice_asym.asymptotics import (
    EULER_GAMMA,
    ParityClass,
    asym_basic_integral,
    asym_u_time,
    asym_uL,
    boundary_layer_pieces,
    classify,
    h_complex,
    h_split,
    piece_limits,
    substitutions,
)
from lattice_asym.quadrature import integrate

HALF_PI = 0.5 * math.pi


def test_euler_gamma():
    assert EULER_GAMMA == pytest.approx(0.5772156649015329, abs=1e-16)


@pytest.mark.parametrize("m, n, tag", [
    (0, 0, ParityClass.ORIGIN),
    (1, 1, ParityClass.DIAGONAL), (-2, 2, ParityClass.DIAGONAL), (3, -3, ParityClass.DIAGONAL),
    (2, 0, ParityClass.OFF_DIAGONAL_EVEN), (3, 1, ParityClass.OFF_DIAGONAL_EVEN),
    (1, 0, ParityClass.ODD), (2, -1, ParityClass.ODD), (0, 5, ParityClass.ODD),
])
def test_classify(m, n, tag):
    assert classify(m, n) is tag


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_classify_partition(m, n):
    tag = classify(m, n)
    conditions = {
        ParityClass.ORIGIN: m == n == 0,
        ParityClass.DIAGONAL: abs(m) == abs(n) != 0,
        ParityClass.OFF_DIAGONAL_EVEN: abs(m) != abs(n) and (m + n) % 2 == 0,
        ParityClass.ODD: (m + n) % 2 == 1,
    }
    assert sum(conditions.values()) == 1
    assert conditions[tag]


def test_asym_uL_examples():
    assert asym_uL(0, 0, 0.01).value.real == pytest.approx(-1 / (0.04 * math.pi) * math.log(400))
    assert asym_uL(0, 0, 0.01).value.real == pytest.approx(-47.68, abs=5e-3)
    assert asym_uL(1, 1, 0.01).value.real == pytest.approx(32.05, abs=1e-2)
    assert asym_uL(1, 0, 0.01).value == pytest.approx(-6.25j)
    v = asym_uL(2, 0, 0.01)
    assert v.parity is ParityClass.OFF_DIAGONAL_EVEN and v.domain_var == "laplace_s"
    assert v.value.real == pytest.approx((math.log(0.04) + 2 * EULER_GAMMA) / (0.04 * math.pi))


def test_asym_u_time_examples():
    assert asym_u_time(0, 0, 100).value.real == pytest.approx(0.5228, abs=1e-4)
    assert asym_u_time(1, 1, 100).value.real == pytest.approx(math.log(100) / (4 * math.pi))
    assert asym_u_time(1, 1, 100).value.real == pytest.approx(0.3665, abs=1e-4)
    for t in (10.0, 1e4):
        assert asym_u_time(1, 0, t).value == pytest.approx(-1j / 16)
    assert asym_u_time(2, 0, 100).value.real == pytest.approx(
        -(math.log(25) - EULER_GAMMA) / (4 * math.pi))
    assert asym_u_time(0, 0, 1.0, Q0=2.0).value == 2 * asym_u_time(0, 0, 1.0).value


def test_asym_uL_growth_by_parity():
    grid = [10.0**-k for k in range(2, 9)]
    odd = [abs(asym_uL(1, 0, s).value) * s for s in grid]
    assert odd == pytest.approx([1 / 16] * len(odd), rel=1e-14)
    for mn in [(0, 0), (1, 1), (2, 0)]:
        # |uL| s / |ln s| -> 1/(4 pi), with an O(1/|ln s|) approach
        gap = [abs(abs(asym_uL(*mn, s).value) * s / abs(math.log(s)) - 1 / (4 * math.pi))
               for s in grid]
        assert all(b < a for a, b in zip(gap, gap[1:]))
        assert gap[-1] < 0.02


def test_h_split_examples():
    assert h_split(HALF_PI, 0.0) == pytest.approx((1.0, 0.0), abs=1e-15)
    assert h_split(0.0, 0.02) == pytest.approx((5.0, 5.0), rel=1e-14)
    # mpmath, 40 digits
    h1, h2 = h_split(HALF_PI, 0.01)
    assert h1 == pytest.approx(0.9999625027341494337, rel=1e-15)
    assert h2 == pytest.approx(0.0049996875246072804589, rel=1e-13)


def test_h_split_singular():
    with pytest.raises(ZeroDivisionError):
        h_split(0.0, 0.0)


@settings(max_examples=200)
@given(q=st.floats(0, math.pi), s=st.floats(1e-8, 1.0))
def test_h_envelope_identities(q, s):
    h1, h2 = h_split(q, s)
    assert h1 >= 0 and h2 >= 0
    D = math.sin(q) ** 4 + s * s
    assert h1 * h1 + h2 * h2 == pytest.approx(1 / math.sqrt(D), rel=1e-12)
    assert 2 * h1 * h2 == pytest.approx(s / D, rel=1e-12)
    assert h1 * h1 - h2 * h2 == pytest.approx(math.sin(q) ** 2 / D, rel=1e-12, abs=1e-12 / math.sqrt(D))


@settings(max_examples=100)
@given(q=st.floats(0, HALF_PI), s=st.floats(1e-8, 1.0))
def test_h_symmetric_about_half_pi(q, s):
    a = h_split(HALF_PI + q, s)
    b = h_split(HALF_PI - q, s)
    assert a == pytest.approx(b, rel=1e-12)


@settings(max_examples=100)
@given(q=st.floats(0, math.pi), s=st.floats(1e-8, 1.0))
def test_h_is_conjugate_of_principal_root(q, s):
    principal = 1 / np.sqrt(np.sin(q) ** 2 + 1j * s)
    assert h_complex(q, s) == pytest.approx(np.conj(principal), rel=1e-12)
    assert principal.imag <= 0


def test_substitution_examples():
    assert substitutions(0.0) == (1.0, 1.0)
    phi, psi = substitutions(1.0)
    assert phi == pytest.approx(math.sqrt(2) + 1)
    assert psi == pytest.approx(math.sqrt(2) - 1)
    phi, psi = substitutions(1.7)
    assert phi * psi == pytest.approx(1.0, abs=2e-16)
    with pytest.raises(ValueError):
        substitutions(-1.0)


@given(st.floats(0, 1e6))
def test_substitution_properties(y):
    phi, psi = substitutions(y)
    assert phi >= 1 and 0 < psi <= 1
    assert phi * psi == pytest.approx(1.0, rel=1e-15)
    phi2, psi2 = substitutions(y * 1.01 + 1e-3)
    assert phi2 >= phi and psi2 <= psi


def test_substitutions_invert_the_integrands():
    # the boxed steps: d(arccosh phi)/dy = 2 * sqrt((sqrt(y^4+1)+y^2)/(2(y^4+1)))
    y = np.linspace(0.01, 20, 50)
    h = 1e-6
    f_real = lambda y: np.arccosh(substitutions(y)[0])  # noqa: E731
    f_imag = lambda y: -np.arcsin(substitutions(y)[1])  # noqa: E731
    dr = (f_real(y + h) - f_real(y - h)) / (2 * h)
    di = (f_imag(y + h) - f_imag(y - h)) / (2 * h)
    r = np.sqrt(y**4 + 1)
    assert np.allclose(dr, 2 * np.sqrt((r + y * y) / (2 * (y**4 + 1))), rtol=1e-7)
    assert np.allclose(di, 2 * np.sqrt((r - y * y) / (2 * (y**4 + 1))), rtol=1e-6)


def test_piece_examples():
    P = boundary_layer_pieces(1e-4, 0.1)
    assert P.outer_real == pytest.approx(2 * math.log(1 / math.tan(0.05)))
    assert P.outer_real == pytest.approx(5.98981, abs=2e-5)  # 5.989797 displayed to 5 d.p.
    tiny = boundary_layer_pieces(1e-14, 0.1)
    assert tiny.inner_imag == pytest.approx(HALF_PI, abs=1e-12)
    assert tiny.outer_imag == pytest.approx(0.0, abs=1e-12)
    for eps in (0.05, 0.1, 0.2):
        L = piece_limits(1e-6, eps)
        assert L.outer_real + L.inner_real == pytest.approx(math.log(16 / 1e-6), rel=1e-15)


def test_piece_inner_real_tends_to_limit_form():
    for eps in (0.05, 0.1, 0.2):
        gaps = [boundary_layer_pieces(s, eps).inner_real - math.log(4 * eps**2 / s)
                for s in (1e-4, 1e-6, 1e-8)]
        assert abs(gaps[2]) < abs(gaps[1]) < abs(gaps[0])
        assert abs(gaps[2]) < 1e-7


def test_piece_preconditions():
    with pytest.raises(ValueError):
        boundary_layer_pieces(0.02, 0.1)
    with pytest.raises(ValueError):
        boundary_layer_pieces(-1e-6, 0.1)


def _h1(s):
    return lambda q: h_split(q, s)[0]


def _h2(s):
    return lambda q: h_split(q, s)[1]


def _quad(f, a, b, s):
    bp = (math.sqrt(s),) if a < math.sqrt(s) < b else ()
    return 2 * integrate(f, a, b, rel_tol=1e-11, abs_tol=1e-15, breakpoints=bp).require().real


def test_piece_convergence():
    eps = 0.1
    rows = []
    for s in (1e-3, 1e-4, 1e-5, 1e-6):
        P = boundary_layer_pieces(s, eps)
        rows.append((
            abs(_quad(_h1(s), eps, HALF_PI, s) - P.outer_real),
            _quad(_h1(s), 0, eps, s) - P.inner_real,
            abs(_quad(_h2(s), eps, HALF_PI, s) - P.outer_imag),
            abs(_quad(_h2(s), 0, eps, s) - P.inner_imag),
        ))
    rows = np.array(rows)
    for col in (0, 2, 3):
        assert np.all(np.diff(rows[:, col]) < 0)
    assert rows[-1, 0] < 1e-8 and rows[-1, 2] < 1e-12 and rows[-1, 3] < 1e-5
    # inner real piece: the sin q ~ q replacement leaves an eps-dependent gap
    # 2 ln(2 tan(eps/2)/eps) ~ eps^2/6 that survives s -> 0
    floor = 2 * math.log(2 * math.tan(eps / 2) / eps)
    assert rows[-1, 1] == pytest.approx(floor, abs=1e-5)
    assert floor < eps**2 / 5


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.2])
def test_split_identity(eps):
    for s in (1e-2, 1e-4, 1e-6):
        f = lambda q: h_complex(q, s)  # noqa: E731
        bp = (math.sqrt(s), math.pi - math.sqrt(s))
        full = integrate(f, 0, math.pi, rel_tol=1e-11, breakpoints=bp + (HALF_PI,))
        half = integrate(f, 0, HALF_PI, rel_tol=1e-11, breakpoints=bp)
        inner = integrate(f, 0, eps, rel_tol=1e-11, breakpoints=bp)
        outer = integrate(f, eps, HALF_PI, rel_tol=1e-11)
        tol = 1e-9 * abs(full.value)
        assert abs(full.value - 2 * half.value) < tol
        assert abs(full.value - 2 * (inner.value + outer.value)) < tol


def test_eps_independence():
    s = 1e-6
    real, imag = [], []
    for eps in (0.05, 0.1, 0.2):
        P = boundary_layer_pieces(s, eps)
        real.append(P.outer_real + P.inner_real)
        imag.append(P.outer_imag + P.inner_imag)
    assert max(real) - min(real) < 1e-2
    assert max(imag) - min(imag) < 1e-2


def test_basic_integral_examples():
    assert asym_basic_integral(1.0) == pytest.approx(complex(2.77259, 1.57080), abs=1e-5)
    assert asym_basic_integral(0.01) == pytest.approx(complex(7.37776, 1.57080), abs=1e-5)


# mpmath, 40 digits: integral over [0, pi] of h1 + i h2
MP_BASIC = {
    1e-2: complex(7.3737611371830852928, 1.5842181563466819329),
    1e-3: complex(9.6799502691207763892, 1.5727161911976258413),
    1e-4: complex(11.982889810738203531, 1.571045897812390373),
    1e-5: complex(14.285510260051115281, 1.5708270405582741667),
}


def test_basic_integral_against_quadrature():
    errs = []
    for s, ref in MP_BASIC.items():
        q = integrate(lambda q: h_complex(q, s), 0, math.pi, rel_tol=1e-11,
                      breakpoints=(HALF_PI,))
        assert abs(q.value - ref) < 1e-9 * abs(ref)
        errs.append(abs(q.value - asym_basic_integral(s)))
    assert all(b < a for a, b in zip(errs, errs[1:]))
