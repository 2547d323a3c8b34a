"""Scenario parameters, Alice's controllables, constraints and fading draws."""

from __future__ import annotations

import dataclasses
import json
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# Trials are grouped into fixed-size blocks; block ``k`` always draws from
# substream ``(seed, k)`` so results do not depend on how blocks are scheduled.
BLOCK_SIZE = 4096


@dataclass(frozen=True)
class SystemParams:
    """Static scenario: fading means, noise variances, jamming."""

    lambda_ab: float = 5e-2
    lambda_aw: float = 1e-3
    lambda_wb: float = 1e-3
    sigma_b2: float = 0.1
    sigma_w2: float = 0.1
    phi: float = 1e-4
    P_w: float = 100.0

    def __post_init__(self):
        for name in ("lambda_ab", "lambda_aw", "lambda_wb"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("sigma_b2", "sigma_w2"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError("phi must lie in [0, 1]")
        if not self.P_w >= 0:
            raise ValueError("P_w must be nonnegative")

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class TransmissionConfig:
    P_a: float = 1.0
    R: float = 1.0
    n: int = 100

    def __post_init__(self):
        if not self.P_a >= 0:
            raise ValueError("P_a must be nonnegative")
        if not self.R > 0:
            raise ValueError("R must be positive")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("n must be an integer >= 2")


@dataclass(frozen=True)
class Constraints:
    """Covertness slack, reliability cap, power cap and blocklength window."""

    epsilon: float = 0.1
    kappa: float = 0.1
    P_a_max: float = 5.0
    n_min: int = 50
    n_max: int = 200

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0 < self.kappa < 1:
            raise ValueError("kappa must lie in (0, 1)")
        if not self.P_a_max > 0:
            raise ValueError("P_a_max must be positive")
        if int(self.n_min) != self.n_min or int(self.n_max) != self.n_max:
            raise ValueError("n_min and n_max must be integers")
        if not 2 <= self.n_min <= self.n_max:
            raise ValueError("need 2 <= n_min <= n_max")

    def replace(self, **changes) -> "Constraints":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ChannelRealization:
    """Squared channel magnitudes |h_ab|^2, |h_aw|^2, |h_wb|^2 for one round."""

    g_ab: float
    g_aw: float
    g_wb: float


@dataclass(frozen=True, eq=False)
class ChannelSamples(Sequence):
    """Columnar batch of channel realizations; indexes as ChannelRealization."""

    g_ab: np.ndarray
    g_aw: np.ndarray
    g_wb: np.ndarray

    def __len__(self):
        return len(self.g_ab)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return ChannelSamples(self.g_ab[i], self.g_aw[i], self.g_wb[i])
        return ChannelRealization(float(self.g_ab[i]), float(self.g_aw[i]), float(self.g_wb[i]))


def willie_noise_floor(params: SystemParams) -> float:
    """Noise power seen by Willie's radiometer, residual self-jamming included."""
    return params.phi * params.P_w + params.sigma_w2


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Philox4x64 generator for substream ``block`` of ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(block),))
    return np.random.Generator(np.random.Philox(ss))


def block_sizes(count: int, block_size: int = BLOCK_SIZE):
    full, rest = divmod(count, block_size)
    return [block_size] * full + ([rest] if rest else [])


def sample_channels(params: SystemParams, seed: int, count: int) -> ChannelSamples:
    """Draw ``count`` i.i.d. Rayleigh-fading gain triples (exponential powers)."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    parts = []
    for k, size in enumerate(block_sizes(count)):
        rng = block_rng(seed, k)
        parts.append(rng.standard_exponential((3, size)))
    draws = np.concatenate(parts, axis=1) if parts else np.empty((3, 0))
    return ChannelSamples(
        g_ab=params.lambda_ab * draws[0],
        g_aw=params.lambda_aw * draws[1],
        g_wb=params.lambda_wb * draws[2],
    )


_PARAM_FIELDS = {f.name for f in dataclasses.fields(SystemParams)}
_CONSTRAINT_FIELDS = {f.name for f in dataclasses.fields(Constraints)}


class ScenarioError(ValueError):
    """Malformed scenario file; ``field`` names the offending key when known."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


def scenario_from_dict(data: dict) -> tuple[SystemParams, Constraints]:
    """Split a flat scenario mapping into parameters and constraints.

    Missing keys fall back to the default operating point; unknown keys are
    rejected.
    """
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    for key in data:
        if key not in _PARAM_FIELDS | _CONSTRAINT_FIELDS:
            raise ScenarioError(f"unknown scenario field '{key}'", key)
    for key, value in data.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"field '{key}' must be a number", key)
    p = {k: v for k, v in data.items() if k in _PARAM_FIELDS}
    c = {k: v for k, v in data.items() if k in _CONSTRAINT_FIELDS}
    params = _build(SystemParams, p)
    constraints = _build(Constraints, c)
    return params, constraints


def _build(cls, values):
    try:
        return cls(**values)
    except ValueError as exc:
        field = next((k for k in values if str(exc).startswith(k)), None)
        raise ScenarioError(f"invalid scenario: {exc}", field) from exc


def load_scenario(path: str | Path) -> tuple[SystemParams, Constraints]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc
    return scenario_from_dict(data)


def scenario_to_dict(params: SystemParams, constraints: Constraints | None = None) -> dict:
    out = dataclasses.asdict(params)
    if constraints is not None:
        out.update(dataclasses.asdict(constraints))
    return out
