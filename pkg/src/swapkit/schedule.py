"""Diffusion variance schedule and the closed-form forward (noising) process.

The schedule stores per-step retention factors alpha_t = 1 - beta_t along
with their cumulative products alpha_bar_t.  With z0 a clean latent and
eps ~ N(0, I), the forward process at step t is

    z_t = sqrt(alpha_bar_t) * z0 + sqrt(1 - alpha_bar_t) * eps

and the injected noise can be recovered from the endpoints as

    eps = (z_t - sqrt(alpha_bar_t) * z0) / sqrt(1 - alpha_bar_t).

Indexing convention: t = 0 denotes the clean latent and alpha_bar[0] = 1.
All schedule arithmetic is float64 regardless of the dtype of the tensors
being diffused; cumulative products lose accuracy quickly in float32.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

__all__ = [
    "NoiseSchedule",
    "build_schedule",
    "forward_sample",
    "noise_from_endpoints",
]


@dataclass(frozen=True)
class NoiseSchedule:
    """Immutable variance schedule.

    Attributes:
        T: total number of diffusion steps.
        alpha: shape (T,), per-step retention; alpha[t - 1] is alpha_t.
        alpha_bar: shape (T + 1,), cumulative products with alpha_bar[0] = 1.
    """

    T: int
    alpha: np.ndarray
    alpha_bar: np.ndarray

    def a_bar(self, t: int) -> float:
        """alpha_bar_t as a python float; raises IndexError if t not in [0, T]."""
        if not 0 <= t <= self.T:
            raise IndexError(f"timestep t={t} outside [0, {self.T}]")
        return float(self.alpha_bar[t])


def build_schedule(
    T: int,
    kind: str = "linear",
    beta_min: float = 1e-4,
    beta_max: float = 0.02,
) -> NoiseSchedule:
    """Build a variance schedule with beta_t interpolated from beta_min to beta_max.

    Only the linear interpolation is built in.  Raises ValueError naming the
    offending parameter for out-of-range inputs.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got T={T}")
    if kind != "linear":
        raise ValueError(f"unknown schedule kind={kind!r}; supported: 'linear'")
    if not 0.0 < beta_min <= beta_max:
        raise ValueError(
            f"need 0 < beta_min <= beta_max, got beta_min={beta_min}, beta_max={beta_max}"
        )
    if beta_max >= 1.0:
        raise ValueError(f"beta_max must be < 1, got beta_max={beta_max}")

    beta = np.linspace(beta_min, beta_max, T, dtype=np.float64)
    alpha = 1.0 - beta
    alpha_bar = np.concatenate([[1.0], np.cumprod(alpha)])
    return NoiseSchedule(T=T, alpha=alpha, alpha_bar=alpha_bar)


def _gather_a_bar(schedule: NoiseSchedule, t, lo: int, like: torch.Tensor):
    """alpha_bar at integer timestep(s) t, validated against [lo, T].

    Returns a python float for scalar t, or a float64 tensor broadcastable
    against `like` for a batch of per-sample timesteps.
    """
    if isinstance(t, torch.Tensor) and t.ndim > 0:
        ts = t.detach().cpu().numpy().astype(np.int64)
        if ts.min() < lo or ts.max() > schedule.T:
            raise IndexError(f"timesteps {ts} outside [{lo}, {schedule.T}]")
        vals = schedule.alpha_bar[ts]
        shape = (-1,) + (1,) * (like.ndim - 1)
        return torch.from_numpy(vals).reshape(shape)
    t = int(t)
    if not lo <= t <= schedule.T:
        raise IndexError(f"timestep t={t} outside [{lo}, {schedule.T}]")
    return float(schedule.alpha_bar[t])


def forward_sample(
    z0: torch.Tensor,
    t,
    eps: torch.Tensor,
    schedule: NoiseSchedule,
) -> torch.Tensor:
    """Closed-form forward noising: z_t = sqrt(a_bar)*z0 + sqrt(1-a_bar)*eps.

    `t` may be a scalar int (applied to the whole tensor) or a 1-D tensor of
    per-sample timesteps for a batched z0.  A pure function of its inputs.
    """
    if eps.shape != z0.shape:
        raise ValueError(f"eps shape {tuple(eps.shape)} != z0 shape {tuple(z0.shape)}")
    a_bar = _gather_a_bar(schedule, t, lo=0, like=z0)
    if isinstance(a_bar, torch.Tensor):
        a_bar = a_bar.to(z0.dtype)
        return torch.sqrt(a_bar) * z0 + torch.sqrt(1.0 - a_bar) * eps
    return np.sqrt(a_bar) * z0 + np.sqrt(1.0 - a_bar) * eps


def noise_from_endpoints(
    z0: torch.Tensor,
    zt: torch.Tensor,
    t,
    schedule: NoiseSchedule,
) -> torch.Tensor:
    """Exact algebraic inverse of forward_sample in eps.

    Requires t >= 1 (at t = 0 the denominator sqrt(1 - alpha_bar_0) vanishes).
    """
    if zt.shape != z0.shape:
        raise ValueError(f"zt shape {tuple(zt.shape)} != z0 shape {tuple(z0.shape)}")
    if isinstance(t, torch.Tensor) and t.ndim > 0:
        if int(t.min()) < 1:
            raise ValueError("t=0 is singular: 1 - alpha_bar_0 = 0")
        a_bar = _gather_a_bar(schedule, t, lo=1, like=z0).to(z0.dtype)
        return (zt - torch.sqrt(a_bar) * z0) / torch.sqrt(1.0 - a_bar)
    if int(t) == 0:
        raise ValueError("t=0 is singular: 1 - alpha_bar_0 = 0")
    a_bar = _gather_a_bar(schedule, t, lo=1, like=z0)
    return (zt - np.sqrt(a_bar) * z0) / np.sqrt(1.0 - a_bar)
