"""Closed-form small-s / large-t behaviour of the resonant lattice response.

Two groups of functions live here:

* leading-order forms of the Laplace image ``uL(m, n; s)`` and of the
  time-domain amplitude ``u(m, n; t)``, dispatched on the parity class of
  the site;
* the inner/outer splitting machinery for the model integral
  ``I(s) = integral over [0, pi] of dq / sqrt(sin^2 q + i s)``: the real and
  imaginary parts of the integrand, the substitutions ``phi(y)`` and
  ``psi(y)``, and the four boundary-layer pieces whose sum yields
  ``ln(16/s) + i pi/2``.

The integrand ``h = h1 + i h2`` is built from the explicit real formulas with
``h1, h2 >= 0``.  It is the complex conjugate of ``1/sqrt(sin^2 q + i s)``
taken on the principal branch.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "EULER_GAMMA",
    "AsymptoticValue",
    "BoundaryPieces",
    "ParityClass",
    "asym_basic_integral",
    "asym_u_time",
    "asym_uL",
    "boundary_layer_pieces",
    "classify",
    "h_complex",
    "h_split",
    "piece_limits",
    "substitutions",
]

EULER_GAMMA = 0.57721566490153286060651209008240243


class ParityClass(str, enum.Enum):
    ORIGIN = "origin"
    DIAGONAL = "diagonal"
    OFF_DIAGONAL_EVEN = "off_diagonal_even"
    ODD = "odd"


def classify(m: int, n: int) -> ParityClass:
    m, n = abs(int(m)), abs(int(n))
    if (m + n) % 2:
        return ParityClass.ODD
    if m == n == 0:
        return ParityClass.ORIGIN
    if m == n:
        return ParityClass.DIAGONAL
    return ParityClass.OFF_DIAGONAL_EVEN


@dataclass(frozen=True)
class AsymptoticValue:
    value: complex
    parity: ParityClass
    domain_var: str  # "laplace_s" or "time_t"

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)


def asym_uL(m: int, n: int, s: float, Q0: float = 1.0) -> AsymptoticValue:
    """Leading small-s form of the Laplace image at site (m, n)."""
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    parity = classify(m, n)
    pole = Q0 / (4.0 * np.pi * s)
    if parity is ParityClass.ORIGIN:
        value = -pole * np.log(4.0 / s)
    elif parity is ParityClass.DIAGONAL:
        value = pole * (-1) ** abs(m) * (np.log(s * abs(m)) + EULER_GAMMA)
    elif parity is ParityClass.OFF_DIAGONAL_EVEN:
        value = pole * (-1) ** abs(n) * (np.log(s * abs(m * m - n * n)) + 2 * EULER_GAMMA)
    else:
        value = 1j * Q0 * (-1) ** (abs(n) + 1) / (16.0 * s)
    return AsymptoticValue(complex(value), parity, "laplace_s")


def asym_u_time(m: int, n: int, t: float, Q0: float = 1.0) -> AsymptoticValue:
    """Large-t amplitude at site (m, n), in the sign convention of the closed forms.

    Even sites grow like ln t; odd sites saturate at a constant.  No carrier
    oscillation is included (see :mod:`lattice_asym.lattice_sim` for the
    measured relation to the displacement itself).
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    parity = classify(m, n)
    scale = Q0 / (4.0 * np.pi)
    if parity is ParityClass.ORIGIN:
        value = scale * (np.log(4.0 * t) + EULER_GAMMA)
    elif parity is ParityClass.DIAGONAL:
        value = scale * (-1) ** (abs(m) + 1) * np.log(t / abs(m))
    elif parity is ParityClass.OFF_DIAGONAL_EVEN:
        value = scale * (-1) ** (abs(n) + 1) * (np.log(t / abs(m * m - n * n)) - EULER_GAMMA)
    else:
        value = 1j * Q0 * (-1) ** (abs(n) + 1) / 16.0
    return AsymptoticValue(complex(value), parity, "time_t")


def h_split(q, s):
    """Real and imaginary parts ``(h1, h2)`` of the model integrand, both >= 0.

    Uses ``sqrt(D) - sin^2 q = s^2 / (sqrt(D) + sin^2 q)`` with
    ``D = sin^4 q + s^2`` so ``h2`` keeps full precision when s << sin^2 q.
    """
    q = np.asarray(q, dtype=float)
    s = np.asarray(s, dtype=float)
    sig = np.sin(q) ** 2
    D = sig * sig + s * s
    if np.any(D == 0.0):
        raise ZeroDivisionError("h is singular where s = 0 and sin q = 0")
    R = np.sqrt(D)
    plus = R + sig
    minus = s * s / plus
    h1 = np.sqrt(plus / (2.0 * D))
    h2 = np.sqrt(minus / (2.0 * D))
    if h1.ndim == 0:
        return float(h1), float(h2)
    return h1, h2


def h_complex(q, s):
    """``h1 + i h2`` as a single complex value (vectorised)."""
    h1, h2 = h_split(q, s)
    return np.asarray(h1) + 1j * np.asarray(h2)


def substitutions(y):
    """``phi(y) = sqrt(y^4 + 1) + y^2`` and ``psi(y) = 1/phi(y)``."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("substitutions are defined for y >= 0")
    phi = np.sqrt(y**4 + 1.0) + y * y
    psi = 1.0 / phi
    if phi.ndim == 0:
        return float(phi), float(psi)
    return phi, psi


class BoundaryPieces(NamedTuple):
    outer_real: float  # 2 ln(1/tan(eps/2))
    inner_real: float  # ln(sqrt(phi^2 - 1) + phi) at y = eps/sqrt(s)
    outer_imag: float  # s * integral over [eps, pi/2] of dq / sin^3 q
    inner_imag: float  # arcsin(1) - arcsin(psi) at y = eps/sqrt(s)

    @property
    def total(self) -> complex:
        return complex(self.outer_real + self.inner_real, self.outer_imag + self.inner_imag)


def boundary_layer_pieces(s: float, eps: float = 0.1) -> BoundaryPieces:
    """The four pieces of ``2 * integral over [0, pi/2] of h``, split at ``q = eps``.

    The inner pieces are evaluated from the substituted integrals themselves,
    not only from their s -> 0 limits.
    """
    if not (s > 0 and 0 < eps < 0.5 * np.pi):
        raise ValueError(f"need s > 0 and 0 < eps < pi/2, got s={s}, eps={eps}")
    if not s < eps * eps:
        raise ValueError(f"boundary layer must be thin: need s < eps^2, got s={s}, eps={eps}")
    phi, psi = substitutions(eps / np.sqrt(s))
    outer_real = 2.0 * np.log(1.0 / np.tan(0.5 * eps))
    inner_real = np.log(np.sqrt((phi - 1.0) * (phi + 1.0)) + phi)
    # antiderivative of csc^3: -csc cot / 2 + ln tan(q/2) / 2, vanishing at pi/2
    csc3 = 0.5 / (np.sin(eps) * np.tan(eps)) - 0.5 * np.log(np.tan(0.5 * eps))
    outer_imag = s * csc3
    inner_imag = np.arcsin(1.0) - np.arcsin(psi)
    return BoundaryPieces(float(outer_real), float(inner_real), float(outer_imag),
                          float(inner_imag))


def piece_limits(s: float, eps: float = 0.1) -> BoundaryPieces:
    """The pieces with inner and outer terms replaced by their leading forms.

    ``ln(4/eps^2)``, ``ln(4 eps^2/s)``, ``0``, ``pi/2``; eps cancels in the sum.
    """
    return BoundaryPieces(float(np.log(4.0 / eps**2)), float(np.log(4.0 * eps**2 / s)),
                          0.0, 0.5 * np.pi)


def asym_basic_integral(s: float) -> complex:
    """``ln(16/s) + i pi/2``."""
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    return complex(np.log(16.0 / s), 0.5 * np.pi)
