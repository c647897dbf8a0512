"""Feature extraction on correlation time series.

Detects sudden-death intervals and flat plateaus, estimates the revival
period, and classifies whether concurrence and discord envelopes move
together or oppositely over whole periods.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import NoPeriodError, ZeroCouplingError

__all__ = [
    "TimeSeries",
    "DeathInterval",
    "Plateau",
    "SyncResult",
    "AnalysisReport",
    "detect_death_intervals",
    "detect_plateaus",
    "period_theory",
    "period_empirical",
    "sync_classify",
    "plateau_death_overlap",
]

DEATH_EPS = 1e-6
PLATEAU_WINDOW = 64
PLATEAU_SLOPE_EPS = 1e-3
PLATEAU_LEVEL_EPS = 1e-3
UNIFORM_TOL = 1e-12
PEAK_MIN_CORR = 0.9
SYNC_THRESHOLD = 0.5


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled scalar series.

    Spacing must be uniform to 1e-12 of the mean step; at least two
    samples are required.
    """

    t: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if t.ndim != 1 or t.shape != y.shape or t.size < 2:
            raise ValueError("need matching 1-d arrays with >= 2 samples")
        steps = np.diff(t)
        dt = steps.mean()
        if dt <= 0 or np.max(np.abs(steps - dt)) > UNIFORM_TOL * max(1.0, abs(dt)):
            raise ValueError("time grid is not uniform")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0])

    def __len__(self) -> int:
        return int(self.t.size)


@dataclass(frozen=True)
class DeathInterval:
    t_start: float
    t_end: float

    @property
    def length(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class Plateau:
    t_start: float
    t_end: float
    level: float

    @property
    def length(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class SyncResult:
    label: str
    r: float
    degenerate: bool = False


@dataclass(frozen=True)
class AnalysisReport:
    period_theory: float
    period_empirical: float | None
    death_intervals_C: list = field(default_factory=list)
    death_intervals_D: list = field(default_factory=list)
    plateaus_D: list = field(default_factory=list)
    sync: SyncResult | None = None


def _runs(mask: np.ndarray):
    """(start, stop) index pairs of maximal True runs; stop is inclusive."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return []
    brk = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([idx[0]], idx[brk + 1]))
    stops = np.concatenate((idx[brk], [idx[-1]]))
    return list(zip(starts.tolist(), stops.tolist()))


def _cross(t0, y0, t1, y1, eps):
    # linear interpolation of the eps crossing between two samples
    if y1 == y0:
        return t0
    return t0 + (eps - y0) * (t1 - t0) / (y1 - y0)


def detect_death_intervals(series: TimeSeries, eps: float = DEATH_EPS) -> list[DeathInterval]:
    """Maximal intervals where the series stays at or below eps.

    Runs shorter than two samples are ignored. Interval endpoints are
    refined by linear interpolation against the neighbouring samples, so
    they need not coincide with grid points.
    """
    t, y = series.t, series.y
    out = []
    for a, b in _runs(y <= eps):
        if b - a + 1 < 2:
            continue
        lo = t[a] if a == 0 else _cross(t[a - 1], y[a - 1], t[a], y[a], eps)
        hi = t[b] if b == len(series) - 1 else _cross(t[b], y[b], t[b + 1], y[b + 1], eps)
        out.append(DeathInterval(float(lo), float(hi)))
    return out


def detect_plateaus(
    series: TimeSeries,
    window: int = PLATEAU_WINDOW,
    slope_eps: float = PLATEAU_SLOPE_EPS,
    level_eps: float = PLATEAU_LEVEL_EPS,
) -> list[Plateau]:
    """Flat stretches: windows with small fitted slope and small range.

    A sliding window of ``window`` samples is flat when its least-squares
    slope magnitude is at most slope_eps and its value range is at most
    level_eps. Overlapping flat windows merge into maximal plateaus; the
    reported level is the sample at the plateau midpoint.
    """
    if window < 3:
        raise ValueError("window must be >= 3")
    t, y = series.t, series.y
    n = len(series)
    if n < window:
        return []
    yw = sliding_window_view(y, window)
    x = (np.arange(window) - (window - 1) / 2.0) * series.dt
    slopes = yw @ x / float(x @ x)
    ranges = yw.max(axis=1) - yw.min(axis=1)
    flat = (np.abs(slopes) <= slope_eps) & (ranges <= level_eps)
    covered = np.zeros(n, dtype=bool)
    for i in np.flatnonzero(flat):
        covered[i : i + window] = True
    out = []
    for a, b in _runs(covered):
        mid = (a + b) // 2
        out.append(Plateau(float(t[a]), float(t[b]), float(y[mid])))
    return out


def period_theory(g: float, delta: float) -> float:
    """Revival period pi * delta / (2 g^2) of the corner coherence."""
    if g == 0:
        raise ZeroCouplingError("coupling g = 0 has no finite revival period")
    return float(np.pi * delta / (2.0 * g * g))


def period_empirical(series: TimeSeries, min_corr: float = PEAK_MIN_CORR) -> float:
    """Period from the first strong autocorrelation peak.

    For each candidate lag k the Pearson correlation between y[:-k] and
    y[k:] is computed (each window normalized by its own mean/variance;
    the usual single-sigma estimator is badly biased once the overlap is
    dominated by long dead stretches). Lags run to half the series; the
    first interior local maximum above ``min_corr`` wins and is refined
    by a quadratic fit through its neighbours.
    """
    y = series.y
    n = len(series)
    kmax = n // 2
    if kmax < 3:
        raise NoPeriodError("series too short for a period estimate")
    if np.ptp(y) == 0:
        raise NoPeriodError("constant series has no period")
    # one lag past kmax so a peak sitting exactly at kmax still has a
    # right neighbour for the local-max and vertex checks
    klast = min(kmax + 1, n - 2)
    r = np.full(klast + 1, -np.inf)
    for k in range(1, klast + 1):
        a, b = y[:-k], y[k:]
        sa, sb = a.std(), b.std()
        if sa == 0 or sb == 0:
            r[k] = 0.0
            continue
        r[k] = float(np.mean((a - a.mean()) * (b - b.mean())) / (sa * sb))
    for k in range(2, min(kmax, klast - 1) + 1):
        if r[k] >= min_corr and r[k] >= r[k - 1] and r[k] >= r[k + 1]:
            # quadratic vertex through (k-1, k, k+1)
            denom = r[k - 1] - 2 * r[k] + r[k + 1]
            shift = 0.0 if denom == 0 else 0.5 * (r[k - 1] - r[k + 1]) / denom
            shift = float(np.clip(shift, -0.5, 0.5))
            return (k + shift) * series.dt
    raise NoPeriodError(f"no autocorrelation peak above {min_corr}")


def _whole_period_slice(n: int, dt: float, period: float | None):
    # endpoint-exclusive grids: n samples span n*dt
    if period is None:
        return n
    m = int(np.floor(n * dt / period + 1e-9))
    if m < 1:
        return n
    return min(n, int(round(m * period / dt)))


def sync_classify(
    C: TimeSeries,
    D: TimeSeries,
    period: float | None = None,
    threshold: float = SYNC_THRESHOLD,
) -> SyncResult:
    """Pearson correlation between the two series over whole periods.

    r >= +threshold: "synchronized"; r <= -threshold: "anti_synchronized";
    otherwise "mixed". If a period is given the comparison window is
    truncated to an integer number of periods so partial cycles cannot
    skew the estimate. A constant series (zero variance) yields the
    degenerate result ("mixed", r = 0) instead of an error.
    """
    if len(C) != len(D) or abs(C.dt - D.dt) > UNIFORM_TOL:
        raise ValueError("series grids do not match")
    n = _whole_period_slice(len(C), C.dt, period)
    a, b = C.y[:n], D.y[:n]
    sa, sb = a.std(), b.std()
    if sa == 0 or sb == 0:
        return SyncResult("mixed", 0.0, degenerate=True)
    r = float(np.mean((a - a.mean()) * (b - b.mean())) / (sa * sb))
    if r >= threshold:
        return SyncResult("synchronized", r)
    if r <= -threshold:
        return SyncResult("anti_synchronized", r)
    return SyncResult("mixed", r)


def plateau_death_overlap(plateaus, deaths) -> float:
    """Total overlap length between plateau and death intervals."""
    total = 0.0
    for p in plateaus:
        for d in deaths:
            total += max(0.0, min(p.t_end, d.t_end) - max(p.t_start, d.t_start))
    return total
