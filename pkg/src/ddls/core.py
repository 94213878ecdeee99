"""Domain types and discrete-time load synthesis for deferrable loads.

Appliances are grouped into service queues; every appliance in queue q
draws the same power pulse g_q once started.  The controllable part of
the aggregate demand is therefore determined entirely by the per-queue
cumulative departure (start) counts d_q(l): each unit increment of
d_q contributes one copy of g_q.

Two start conventions exist in the wild and both are supported through
``start_lag``: with ``start_lag=0`` (the default) a departure at epoch
k draws its first pulse sample at epoch k; with ``start_lag=1`` the
first sample lands at epoch k+1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class Epoch:
    """One discrete scheduling interval.

    Attributes
    ----------
    index : int
        Nonnegative position on the scheduling grid.
    interval_s : float
        Interval length in seconds (default 900, i.e. 15 minutes).
    """

    index: int
    interval_s: float = 900.0

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"epoch index must be >= 0, got {self.index}")
        if not self.interval_s > 0:
            raise ValueError(f"interval_s must be positive, got {self.interval_s}")

    @property
    def wall_time_s(self) -> float:
        return self.index * self.interval_s


@dataclass(frozen=True)
class RawRequest:
    """An appliance's un-quantized service request.

    ``params`` is the request vector; in this library it is
    ``(rate_kw, duration_epochs)`` for a constant-rate draw, where the
    duration may be fractional.
    """

    params: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if not self.params:
            raise ValueError("request vector is empty")
        for p in self.params:
            if not np.isfinite(p) or p < 0:
                raise ValueError(f"request parameters must be finite and >= 0, got {self.params}")

    @property
    def rate_kw(self) -> float:
        return self.params[0]

    @property
    def duration_epochs(self) -> float:
        return self.params[1]


@dataclass(frozen=True)
class ChargeCode:
    """One quantization cell: a queue id and the power pulse its members draw.

    Ids are 1-based and unique within a codebook; row/column positions in
    matrices are ``id - 1``.
    """

    id: int
    pulse: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "pulse", tuple(float(g) for g in self.pulse))
        if self.id < 1:
            raise ValueError(f"code id must be >= 1, got {self.id}")
        if not self.pulse:
            raise ValueError("pulse is empty")
        for g in self.pulse:
            if not np.isfinite(g) or g < 0:
                raise ValueError(f"pulse samples must be finite and >= 0, got {self.pulse}")

    @property
    def duration_epochs(self) -> int:
        return len(self.pulse)

    @property
    def rate_kw(self) -> float:
        return max(self.pulse)

    @property
    def energy(self) -> float:
        """Total pulse energy in kW-epochs."""
        return float(sum(self.pulse))


@dataclass(frozen=True)
class ArrivalEvent:
    """A request arriving at the start of ``arrival_epoch``."""

    arrival_epoch: int
    request: RawRequest

    def __post_init__(self):
        if self.arrival_epoch < 0:
            raise ValueError(f"arrival_epoch must be >= 0, got {self.arrival_epoch}")


@dataclass
class LoadProfile:
    """A kW time series on the epoch grid, starting at epoch ``start``."""

    samples: np.ndarray
    start: int = 0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1:
            raise ValueError(f"samples must be 1-d, got shape {self.samples.shape}")
        if self.samples.size and not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")

    def __len__(self) -> int:
        return self.samples.size

    def power_at(self, epoch: int) -> float:
        """kW drawn at ``epoch`` (0 outside the stored range)."""
        j = epoch - self.start
        if 0 <= j < self.samples.size:
            return float(self.samples[j])
        return 0.0

    def energy(self, interval_s: float = 1.0) -> float:
        """Integral of the profile: sum of samples times the interval length."""
        return float(self.samples.sum()) * interval_s


def square_pulse(rate_kw: float, duration_epochs: int) -> tuple[float, ...]:
    """Constant-rate pulse over an integer number of epochs."""
    if duration_epochs < 1 or duration_epochs != int(duration_epochs):
        raise ValueError(f"duration_epochs must be a positive integer, got {duration_epochs}")
    return (float(rate_kw),) * int(duration_epochs)


def fractional_pulse(rate_kw: float, duration_epochs: float) -> tuple[float, ...]:
    """Constant-rate pulse whose last sample is scaled by the fractional
    remainder of the duration, so the energy is rate * duration exactly."""
    if not duration_epochs > 0:
        raise ValueError(f"duration_epochs must be positive, got {duration_epochs}")
    n = int(np.ceil(duration_epochs))
    pulse = [float(rate_kw)] * n
    frac = duration_epochs - (n - 1)
    pulse[-1] = float(rate_kw) * frac
    return tuple(pulse)


def _increment_matrix(increments, n_queues: int) -> np.ndarray:
    arr = np.asarray(increments, dtype=float)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise ConfigurationError(f"increments must be 2-d (queues x epochs), got shape {arr.shape}")
    if arr.shape[0] != n_queues:
        raise ConfigurationError(
            f"increment rows ({arr.shape[0]}) do not match codebook size ({n_queues})"
        )
    if arr.size and (arr < 0).any():
        raise ConfigurationError("departure increments must be nonnegative")
    return arr


def synthesize_load(
    departure_increments,
    codebook: list[ChargeCode],
    horizon: int,
    start_lag: int = 0,
) -> LoadProfile:
    """Aggregate load implied by per-queue departure increments.

    Parameters
    ----------
    departure_increments : array-like, shape (Q, n)
        Row q holds the number of queue-q starts at each epoch, i.e.
        d_q(l) - d_q(l-1).
    codebook : list of ChargeCode
        One code per queue, in row order.
    horizon : int
        Output length; pulse tails past the horizon are truncated.
    start_lag : {0, 1}
        Start convention, see module docstring.

    Returns
    -------
    LoadProfile starting at epoch 0 with ``horizon`` samples:
    L(l) = sum_q sum_k [d_q(k) - d_q(k-1)] g_q(l - k - start_lag).
    """
    if start_lag not in (0, 1):
        raise ConfigurationError(f"start_lag must be 0 or 1, got {start_lag}")
    if horizon < 0:
        raise ConfigurationError(f"horizon must be >= 0, got {horizon}")
    inc = _increment_matrix(departure_increments, len(codebook))
    out = np.zeros(horizon)
    for q, code in enumerate(codebook):
        row = inc[q]
        if not row.any():
            continue
        conv = np.convolve(row, np.asarray(code.pulse))
        lo = min(horizon, start_lag + conv.size)
        out[start_lag:lo] += conv[: lo - start_lag]
    return LoadProfile(out)


def unscheduled_load(
    arrivals: list[ArrivalEvent],
    codebook: list[ChargeCode],
    quantizer,
    horizon: int | None = None,
    start_lag: int = 0,
) -> LoadProfile:
    """Load when every arrival starts immediately (departures = arrivals).

    Each event's request is mapped to its queue with
    ``quantizer.quantize`` and the queue pulse starts at the arrival
    epoch.  ``horizon`` defaults to the smallest length holding every
    pulse tail.
    """
    max_u = max(code.duration_epochs for code in codebook) if codebook else 0
    if horizon is None:
        last = max((ev.arrival_epoch for ev in arrivals), default=-1)
        horizon = last + start_lag + max_u if last >= 0 else 0
    inc = np.zeros((len(codebook), max((ev.arrival_epoch for ev in arrivals), default=-1) + 1))
    for ev in arrivals:
        code_id = quantizer.quantize(ev.request)
        if not 1 <= code_id <= len(codebook):
            raise ConfigurationError(f"quantizer returned unknown code id {code_id}")
        inc[code_id - 1, ev.arrival_epoch] += 1
    return synthesize_load(inc, codebook, horizon, start_lag=start_lag)


def fold_committed(
    base: LoadProfile,
    committed_increments,
    epoch: int,
    codebook: list[ChargeCode],
    start_lag: int = 0,
) -> LoadProfile:
    """Absorb just-committed starts into a fixed load profile.

    Adds, for each queue q with ``committed_increments[q]`` starts at
    ``epoch``, the pulse contribution falling at epochs strictly after
    ``epoch``; the sample at ``epoch`` itself is already realized and is
    left to the caller's accounting.  Returns a new profile (``base`` is
    not modified), extended if a tail runs past its end.

    With ``start_lag=0`` the contribution at l > epoch is
    g_q(l - epoch); with ``start_lag=1`` it is g_q(l - epoch - 1) and
    the whole pulse lands in the folded profile.
    """
    if start_lag not in (0, 1):
        raise ConfigurationError(f"start_lag must be 0 or 1, got {start_lag}")
    inc = np.asarray(committed_increments, dtype=float)
    if inc.shape != (len(codebook),):
        raise ConfigurationError(
            f"committed increments shape {inc.shape} does not match codebook size {len(codebook)}"
        )
    if inc.size and (inc < 0).any():
        raise ConfigurationError("committed increments must be nonnegative")

    max_u = max(code.duration_epochs for code in codebook) if codebook else 0
    needed = epoch + start_lag + max_u - base.start
    samples = np.copy(base.samples)
    if needed > samples.size:
        samples = np.concatenate([samples, np.zeros(needed - samples.size)])
    for q, code in enumerate(codebook):
        if inc[q] == 0:
            continue
        for j, g in enumerate(code.pulse):
            l = epoch + start_lag + j
            if l <= epoch or l < base.start:
                continue
            samples[l - base.start] += inc[q] * g
    return LoadProfile(samples, start=base.start)
