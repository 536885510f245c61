"""Time-domain simulation of the antiplane square mass lattice.

Equations of motion (unit mass, spacing and stiffness)::

    u''[m, n] = u[m+1, n] + u[m-1, n] + u[m, n+1] + u[m, n-1] - 4 u[m, n]
                + Q0 sin(w t) H(t) delta(m) delta(n)

integrated with central differences on ``|m|, |n| <= N`` with a zero
exterior.  N is sized so that nothing reflected off the boundary can reach
a probe before ``t_max``.

Two storage layouts are supported.  ``"full"`` keeps every site.
``"octant"`` keeps only ``m >= n >= 0`` and folds neighbour reads through the
lattice symmetries, which the point load at the origin preserves.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .transforms import LoadSpec

__all__ = [
    "DT_STABILITY_LIMIT",
    "InstabilityError",
    "LatticeConfig",
    "LogFit",
    "TimeSeries",
    "WaveField",
    "carrier_phase",
    "extract_envelope",
    "fit_log_growth",
    "initial_field",
    "min_half_extent",
    "read_csv_columns",
    "simulate",
    "step",
    "time_correlation",
    "write_envelope_csv",
    "write_series_csv",
]

# leapfrog bound 2/sqrt(rho) for the coupling's spectral radius rho = 8
DT_STABILITY_LIMIT = 1.0 / math.sqrt(2.0)
FRONT_SPEED_BOUND = 1.5
MIN_SAMPLES_PER_PERIOD = 20


class InstabilityError(FloatingPointError):
    def __init__(self, step_index: int):
        super().__init__(f"non-finite displacement produced at step {step_index}")
        self.step_index = step_index


def min_half_extent(t_max: float) -> int:
    return math.ceil(FRONT_SPEED_BOUND * t_max) + 10


@dataclass
class LatticeConfig:
    t_max: float = 400.0
    dt: float = 0.05
    load: LoadSpec = field(default_factory=LoadSpec)
    probes: Sequence[tuple[int, int]] = ((0, 0),)
    half_extent: int | None = None
    sample_stride: int = 1
    symmetry: str = "octant"
    workers: int = 1

    def __post_init__(self):
        self.probes = tuple((int(m), int(n)) for m, n in self.probes)
        if self.half_extent is None:
            self.half_extent = min_half_extent(self.t_max)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))

    def validate(self) -> "LatticeConfig":
        """Raise ``ValueError`` naming the first violated constraint."""
        if not 0 < self.dt < DT_STABILITY_LIMIT:
            raise ValueError(f"dt must satisfy 0 < dt < 1/sqrt(2) ~ {DT_STABILITY_LIMIT:.6f}, "
                             f"got dt={self.dt}")
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        need = min_half_extent(self.t_max)
        if self.half_extent < need:
            raise ValueError(f"half_extent N={self.half_extent} too small for t_max={self.t_max}: "
                             f"need N >= ceil(1.5 t_max) + 10 = {need}")
        for m, n in self.probes:
            if 4 * max(abs(m), abs(n)) > self.half_extent:
                raise ValueError(f"probe ({m}, {n}) outside |m|, |n| <= N/4 = "
                                 f"{self.half_extent / 4:g}")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")
        if self.symmetry not in ("full", "octant"):
            raise ValueError(f"symmetry must be 'full' or 'octant', got {self.symmetry!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        return self


@dataclass
class WaveField:
    """Two consecutive displacement snapshots in the kernel storage layout.

    Full layout: shape (2N+3, 2N+3) with a zero border, site (m, n) at
    ``[m + N + 1, n + N + 1]``.  Octant layout: shape (N+2, N+2), site
    (m, n) folded to ``[max(|m|,|n|), min(|m|,|n|)]``.
    """

    u_curr: np.ndarray
    u_prev: np.ndarray
    step_index: int
    layout: str = "full"

    @property
    def half_extent(self) -> int:
        if self.layout == "full":
            return (self.u_curr.shape[0] - 3) // 2
        return self.u_curr.shape[0] - 2

    def index(self, m: int, n: int) -> tuple[int, int]:
        N = self.half_extent
        if self.layout == "full":
            return m + N + 1, n + N + 1
        a, b = abs(m), abs(n)
        return max(a, b), min(a, b)

    def at(self, m: int, n: int) -> float:
        return float(self.u_curr[self.index(m, n)])

    def grid(self) -> np.ndarray:
        """Current displacement on ``[-N, N]^2`` (unfolded for the octant layout)."""
        N = self.half_extent
        if self.layout == "full":
            return self.u_curr[1:-1, 1:-1].copy()
        r = np.abs(np.arange(-N, N + 1))
        hi = np.maximum.outer(r, r)
        lo = np.minimum.outer(r, r)
        return self.u_curr[hi, lo]


def _alloc(cfg: LatticeConfig) -> np.ndarray:
    N = cfg.half_extent
    if cfg.symmetry == "full":
        return np.zeros((2 * N + 3, 2 * N + 3))
    return np.zeros((N + 2, N + 2))


def initial_field(cfg: LatticeConfig) -> WaveField:
    """Field at step 1 from rest: ``u^1 = dt^2/2 * Q(0+)`` at the origin."""
    u0 = _alloc(cfg)
    u1 = _alloc(cfg)
    f = WaveField(u1, u0, 1, cfg.symmetry)
    u1[f.index(0, 0)] = 0.5 * cfg.dt**2 * float(cfg.load.force(0.0))
    return f


class _Stepper:
    """Row-block dispatcher shared by :func:`step` and :func:`simulate`."""

    def __init__(self, cfg: LatticeConfig, pool: ThreadPoolExecutor | None = None):
        self.cfg = cfg
        self.dt2 = cfg.dt * cfg.dt
        N = cfg.half_extent
        if cfg.symmetry == "full":
            lo, hi = 1, 2 * N + 2
        else:
            lo, hi = 0, N + 1
        cuts = np.linspace(lo, hi, min(cfg.workers, hi - lo) + 1).round().astype(int)
        self.blocks = [(int(a), int(b)) for a, b in zip(cuts[:-1], cuts[1:]) if b > a]
        self.center = N + 1
        self.pool = pool

    def advance(self, u, u_prev, u_next, k: int) -> None:
        force = float(self.cfg.load.force(k * self.cfg.dt))
        if self.cfg.symmetry == "full":
            def run(block):
                return _kernels.full_rows(u, u_prev, u_next, block[0], block[1],
                                          self.dt2, force, self.center)
        else:
            def run(block):
                return _kernels.octant_rows(u, u_prev, u_next, block[0], block[1],
                                            self.dt2, force)
        if self.pool is None or len(self.blocks) == 1:
            ok = all([run(b) for b in self.blocks])
        else:
            ok = all(self.pool.map(run, self.blocks))
        if not ok:
            raise InstabilityError(k + 1)


def step(field: WaveField, cfg: LatticeConfig) -> WaveField:
    """One leapfrog step; returns a new field and leaves ``field`` untouched.

    Does not call :meth:`LatticeConfig.validate`, so an unstable ``dt`` can be
    stepped deliberately; non-finite output raises :class:`InstabilityError`.
    """
    if field.layout != cfg.symmetry:
        raise ValueError(f"field layout {field.layout!r} does not match config {cfg.symmetry!r}")
    u_next = np.zeros_like(field.u_curr)
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            _Stepper(cfg, pool).advance(field.u_curr, field.u_prev, u_next, field.step_index)
    else:
        _Stepper(cfg).advance(field.u_curr, field.u_prev, u_next, field.step_index)
    return WaveField(u_next, field.u_curr.copy(), field.step_index + 1, field.layout)


@dataclass
class TimeSeries:
    probe: tuple[int, int]
    times: np.ndarray
    values: np.ndarray
    envelope: np.ndarray | None = None  # shape (k, 2): t_peak, amplitude

    @property
    def envelope_times(self) -> np.ndarray:
        return self.envelope[:, 0]

    @property
    def envelope_values(self) -> np.ndarray:
        return self.envelope[:, 1]

    def envelope_at(self, t: float) -> float:
        """Amplitude of the envelope entry whose peak time is closest to ``t``."""
        k = int(np.argmin(np.abs(self.envelope[:, 0] - t)))
        return float(self.envelope[k, 1])


def simulate(cfg: LatticeConfig, return_field: bool = False):
    """Run from rest to ``t_max`` and sample every probe.

    Returns a list of :class:`TimeSeries` (one per probe, in probe order),
    plus the final :class:`WaveField` when ``return_field`` is set.
    """
    cfg.validate()
    fld = initial_field(cfg)
    u_prev, u = fld.u_prev, fld.u_curr
    u_next = np.zeros_like(u)
    sites = [fld.index(m, n) for m, n in cfg.probes]
    n_steps = cfg.n_steps
    sample_steps = np.arange(0, n_steps + 1, cfg.sample_stride)
    samples = np.zeros((len(sample_steps), len(sites)))
    row = 0
    for k in (0, 1):
        if row < len(sample_steps) and sample_steps[row] == k:
            src = u_prev if k == 0 else u
            samples[row] = [src[ij] for ij in sites]
            row += 1

    pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        stepper = _Stepper(cfg, pool)
        for k in range(1, n_steps):
            stepper.advance(u, u_prev, u_next, k)
            u_prev, u, u_next = u, u_next, u_prev
            if row < len(sample_steps) and sample_steps[row] == k + 1:
                samples[row] = [u[ij] for ij in sites]
                row += 1
    finally:
        if pool is not None:
            pool.shutdown()

    times = sample_steps * cfg.dt
    series = [TimeSeries(probe, times.copy(), samples[:, i].copy())
              for i, probe in enumerate(cfg.probes)]
    if return_field:
        return series, WaveField(u, u_prev, n_steps, cfg.symmetry)
    return series


def extract_envelope(series: TimeSeries, omega_star: float = 2.0) -> TimeSeries:
    """Per-period maximum of ``|u|`` over consecutive windows of length 2 pi / omega_star.

    Only complete windows are kept.  Each entry records the time of the peak
    sample and its magnitude.
    """
    t = np.asarray(series.times, dtype=float)
    u = np.abs(np.asarray(series.values, dtype=float))
    if len(t) < 2:
        raise ValueError("series too short for envelope extraction")
    period = 2.0 * np.pi / omega_star
    dt = float(np.median(np.diff(t)))
    if period / dt < MIN_SAMPLES_PER_PERIOD:
        raise ValueError(f"sampling too coarse: {period / dt:.1f} samples per period, "
                         f"need at least {MIN_SAMPLES_PER_PERIOD}")
    n_windows = int(np.floor((t[-1] - t[0]) / period + 0.5 * dt / period))
    edges = np.searchsorted(t, t[0] + period * np.arange(n_windows + 1) - 0.5 * dt)
    env = np.empty((n_windows, 2))
    for w in range(n_windows):
        a, b = edges[w], edges[w + 1]
        k = a + int(np.argmax(u[a:b]))
        env[w] = t[k], u[k]
    return replace(series, envelope=env)


class LogFit(NamedTuple):
    slope: float
    intercept: float
    residual: float


def fit_log_growth(envelope: TimeSeries | np.ndarray, t_lo: float | None = None,
                   t_hi: float | None = None) -> LogFit:
    """Least-squares fit of ``amplitude = slope * ln t + intercept`` on [t_lo, t_hi].

    The default window is ``[t_end/4, t_end]``.  ``residual`` is the RMS misfit.
    """
    env = envelope.envelope if isinstance(envelope, TimeSeries) else np.asarray(envelope)
    if env is None:
        raise ValueError("series has no envelope; call extract_envelope first")
    t, a = env[:, 0], env[:, 1]
    if t_hi is None:
        t_hi = float(t[-1])
    if t_lo is None:
        t_lo = 0.25 * t_hi
    sel = (t >= t_lo) & (t <= t_hi) & (t > 0)
    if sel.sum() < 10:
        raise ValueError(f"need at least 10 envelope points in [{t_lo}, {t_hi}], got {sel.sum()}")
    x = np.log(t[sel])
    if np.ptp(x) == 0:
        raise ValueError("degenerate fit window")
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, a[sel], rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([slope, intercept]) - a[sel]) ** 2)))
    return LogFit(float(slope), float(intercept), resid)


def time_correlation(a: TimeSeries, b: TimeSeries, t_lo: float, t_hi: float) -> float:
    """Normalised zero-lag correlation of two probe series over [t_lo, t_hi]."""
    sel = (a.times >= t_lo) & (a.times <= t_hi)
    x, y = a.values[sel], b.values[sel]
    return float(np.dot(x, y) / np.sqrt(np.dot(x, x) * np.dot(y, y)))


def carrier_phase(series: TimeSeries, omega: float, t_lo: float, t_hi: float) -> float:
    """Phase ``phi`` of the best fit ``A cos(omega t - phi)`` over [t_lo, t_hi], A >= 0.

    The amplitude is allowed to drift linearly in ln t; only the phase is returned.
    """
    sel = (series.times >= t_lo) & (series.times <= t_hi)
    t, u = series.times[sel], series.values[sel]
    L = np.log(t)
    c, s = np.cos(omega * t), np.sin(omega * t)
    A = np.column_stack([c, s, c * L, s * L])
    coef, *_ = np.linalg.lstsq(A, u, rcond=None)
    Lm = np.log(t_hi)
    ca, sa = coef[0] + coef[2] * Lm, coef[1] + coef[3] * Lm
    return float(np.arctan2(sa, ca))


def write_series_csv(series: TimeSeries, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "u"])
        for t, u in zip(series.times, series.values):
            w.writerow([repr(float(t)), repr(float(u))])
    return path


def write_envelope_csv(series: TimeSeries, path: str | Path) -> Path:
    if series.envelope is None:
        raise ValueError("series has no envelope")
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t_peak", "amplitude"])
        for t, a in series.envelope:
            w.writerow([repr(float(t)), repr(float(a))])
    return path


def read_csv_columns(path: str | Path) -> dict[str, np.ndarray]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}
