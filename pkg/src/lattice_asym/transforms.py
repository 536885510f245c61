"""Laplace-Fourier images of the point-driven lattice response.

With unit mass, spacing and stiffness, and a load ``Q0 sin(w t)`` switched on
at t = 0 at site (0, 0), the doubly Fourier- and Laplace-transformed
displacement is::

    U(p, qx, qy) = Q0 w / ((p^2 + w^2) (p^2 + 2 (2 - cos qx - cos qy)))

Inverting the qy transform gives a power of the decaying root of
``z^2 - 2 B z + 1 = 0`` with ``B = p^2/2 + 2 - cos qx``.  Near the resonant
point p = 2i, write p = s + 2i.  The response then carries a 1/s pole times
an integral over qx whose integrand is nearly singular at qx = 0 and qx = pi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import DEFAULT_ABS_TOL, integrate

__all__ = [
    "RESONANT_OMEGA",
    "SINGULAR_FLOOR",
    "LoadSpec",
    "SingularEvaluationError",
    "SpectralPoint",
    "decaying_root",
    "dispersion_sq",
    "site_integrand",
    "full_transform",
    "half_inverted_transform",
    "numeric_qy_inversion",
    "resonant_limit_integrand",
    "uL_exact",
    "uL_numeric",
]

RESONANT_OMEGA = 2.0
SINGULAR_FLOOR = 1e-30
SITE_BREAKPOINTS = (0.0, 0.5 * np.pi, np.pi)


class SingularEvaluationError(ZeroDivisionError):
    """Evaluation at (or within roundoff of) a pole or branch point."""


@dataclass(frozen=True)
class LoadSpec:
    Q0: float = 1.0
    omega_star: float = RESONANT_OMEGA

    def __post_init__(self):
        if not np.isfinite(self.Q0):
            raise ValueError(f"Q0 must be finite, got {self.Q0}")
        if not (np.isfinite(self.omega_star) and self.omega_star > 0):
            raise ValueError(f"omega_star must be positive, got {self.omega_star}")

    def force(self, t):
        """Load history Q0 sin(w t) H(t); vectorised over ``t``."""
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0.0, self.Q0 * np.sin(self.omega_star * t), 0.0)

    def laplace(self, p):
        return self.Q0 * self.omega_star / (p * p + self.omega_star**2)


@dataclass(frozen=True)
class SpectralPoint:
    """Laplace parameter ``p`` and wavenumbers; ``qx``/``qy`` may be arrays."""

    p: complex
    qx: float | np.ndarray = 0.0
    qy: float | np.ndarray = 0.0

    def __post_init__(self):
        if not complex(self.p).real > 0:
            raise ValueError(f"Re p must be positive (region of convergence), got p = {self.p}")
        for name in ("qx", "qy"):
            q = np.asarray(getattr(self, name))
            if np.any(np.abs(q) > np.pi * (1 + 1e-12)):
                raise ValueError(f"|{name}| must not exceed pi")

    @classmethod
    def resonant(cls, s: float, qx=0.0, qy=0.0) -> "SpectralPoint":
        return cls(complex(s) + 2j, qx, qy)

    @property
    def s(self) -> complex:
        """Detuning from the resonant point, ``p - 2i``."""
        return complex(self.p) - 2j


def dispersion_sq(qx, qy):
    """Squared lattice frequency ``2 (2 - cos qx - cos qy)``, in [0, 8]."""
    return 2.0 * (2.0 - np.cos(qx) - np.cos(qy))


def full_transform(pt: SpectralPoint, load: LoadSpec = LoadSpec()):
    p = complex(pt.p)
    drive = p * p + load.omega_star**2
    lattice = p * p + dispersion_sq(pt.qx, pt.qy)
    denom = drive * lattice
    if np.any(np.abs(denom) < SINGULAR_FLOOR):
        raise SingularEvaluationError(f"pole of the transform at p = {p}")
    return load.Q0 * load.omega_star / denom


def decaying_root(B):
    """Root of ``z^2 - 2 B z + 1`` with ``|z| <= 1`` and the matching ``sqrt(B^2 - 1)``.

    The roots are ``B -/+ r`` for ``r`` the principal square root; they
    multiply to one, so picking by magnitude is independent of where the
    branch cut of ``r`` falls.  Returns ``(z, B - z)``.
    """
    B = np.asarray(B, dtype=complex)
    disc = B * B - 1.0
    if np.any(np.abs(disc) < SINGULAR_FLOOR):
        raise SingularEvaluationError("branch point B^2 = 1")
    r = np.sqrt(disc)
    z_minus = B - r
    z_plus = B + r
    z = np.where(np.abs(z_minus) <= np.abs(z_plus), z_minus, z_plus)
    return z, B - z


def half_inverted_transform(p: complex, qx, n: int, load: LoadSpec = LoadSpec()):
    """Transform with the qy direction inverted back to row ``n``."""
    p = complex(p)
    if not p.real > 0:
        raise ValueError(f"Re p must be positive, got p = {p}")
    drive = p * p + load.omega_star**2
    if abs(drive) < SINGULAR_FLOOR:
        raise SingularEvaluationError(f"load pole at p = {p}")
    B = 0.5 * p * p + 2.0 - np.cos(qx)
    z, root = decaying_root(B)
    value = load.Q0 * load.omega_star * z ** abs(int(n)) / (2.0 * drive * root)
    return value[()] if np.ndim(value) == 0 else value


def numeric_qy_inversion(p: complex, qx: float, n: int, load: LoadSpec = LoadSpec(),
                         rel_tol: float = 1e-11):
    """``(1/2pi) * integral over [-pi, pi] of U(p, qx, qy) exp(i qy n) dqy`` by quadrature."""
    def integrand(qy):
        return full_transform(SpectralPoint(p, qx, qy), load) * np.exp(1j * n * qy)

    # for large n the result is many orders below the integrand, so the error
    # target is floored at roundoff relative to the integrand's own size
    scale = np.abs(integrand(np.linspace(-np.pi, np.pi, 33))).max()
    result = integrate(integrand, -np.pi, np.pi, rel_tol=rel_tol,
                       abs_tol=max(1e-15 * scale, 1e-300), breakpoints=(0.0,))
    return result.require() / (2.0 * np.pi)


def resonant_limit_integrand(qx, n: int, s: float, load: LoadSpec = LoadSpec()):
    """Leading small-s form of ``s * half_inverted_transform(s + 2i, qx, n)``.

    ``Q0 (-1)^(n+1) exp(i |qx n|) / (4 sqrt(sin^2 qx + 4 i s cos qx))`` with
    the principal square root.
    """
    qx = np.asarray(qx, dtype=float)
    sign = -1.0 if n % 2 == 0 else 1.0
    root = np.sqrt(np.sin(qx) ** 2 + 4j * s * np.cos(qx))
    value = load.Q0 * sign * np.exp(1j * np.abs(qx * n)) / (4.0 * root)
    return value[()] if value.ndim == 0 else value


def site_integrand(m: int, n: int, s: float):
    """``cos(m q) exp(i |n| q) / sqrt(sin^2 q + 4 i s cos q)`` as a vectorised callable."""
    def f(q):
        return np.cos(m * q) * np.exp(1j * abs(n) * q) / np.sqrt(
            np.sin(q) ** 2 + 4j * s * np.cos(q))
    return f


def uL_numeric(s: float, m: int, n: int, load: LoadSpec = LoadSpec(), tol: float = 1e-10):
    """Small-s Laplace image of the displacement at site (m, n).

    The 1/s pole stays outside the quadrature so the integrand is only
    O(s^-1/2) in the boundary layers at q = 0 and q = pi.
    """
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    sign = -1.0 if n % 2 == 0 else 1.0
    result = integrate(site_integrand(m, n, s), 0.0, np.pi, rel_tol=tol,
                       abs_tol=DEFAULT_ABS_TOL, breakpoints=SITE_BREAKPOINTS)
    return load.Q0 * sign / (4.0 * np.pi * s) * result.require()


def uL_exact(p: complex, m: int, n: int, load: LoadSpec = LoadSpec(), tol: float = 1e-10):
    """Laplace image at site (m, n) without the small-s approximation.

    Inverts the qx transform of :func:`half_inverted_transform` numerically;
    the integrand is even in qx, so only [0, pi] is integrated.
    """
    def f(qx):
        return half_inverted_transform(p, qx, n, load) * np.cos(m * qx)

    result = integrate(f, 0.0, np.pi, rel_tol=tol, abs_tol=1e-300,
                       breakpoints=SITE_BREAKPOINTS)
    return result.require() / np.pi
