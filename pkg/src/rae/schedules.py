"""Layer schedules: which Grover depths to run and at what shot budget."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

FORMAT_VERSION = 1


@dataclass(frozen=True)
class LayerSchedule:
    """Sorted, unique Grover layer counts plus a uniform shot budget.

    ``origin`` records which constructor produced the schedule (and, for the
    noise-robust constructor, which branch was taken); it does not affect
    equality.
    """

    layers: tuple[int, ...]
    shots_per_layer: int
    origin: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not self.layers:
            raise ValueError("schedule needs at least one layer")
        if any(l < 0 or l != int(l) for l in self.layers):
            raise ValueError("layers must be non-negative integers")
        if list(self.layers) != sorted(set(self.layers)):
            raise ValueError("layers must be strictly increasing")
        if self.shots_per_layer <= 0:
            raise ValueError("shots_per_layer must be positive")


def lis(i_max: int, n_shots: int) -> LayerSchedule:
    """Linear incremental sequence 0, 1, ..., i_max."""
    if i_max < 0:
        raise ValueError("i_max must be non-negative")
    return LayerSchedule(tuple(range(i_max + 1)), n_shots, origin="lis")


def eis(i_max: int, n_shots: int) -> LayerSchedule:
    """Exponential incremental sequence floor(2^(i-1)), duplicates removed."""
    if i_max < 0:
        raise ValueError("i_max must be non-negative")
    layers: list[int] = []
    for i in range(i_max + 1):
        layer = int(2 ** (i - 1)) if i else 0
        if layer not in layers:
            layers.append(layer)
    return LayerSchedule(tuple(layers), n_shots, origin="eis")


def polynomial(degree: int, i_max: int, n_shots: int) -> LayerSchedule:
    """Polynomial sequence i^degree, duplicates removed."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    if i_max < 0:
        raise ValueError("i_max must be non-negative")
    layers: list[int] = []
    for i in range(i_max + 1):
        layer = i ** degree
        if layer not in layers:
            layers.append(layer)
    return LayerSchedule(tuple(layers), n_shots, origin=f"poly{degree}")


def l_max_fisher(lam: float) -> float:
    """Layer count maximizing the single-circuit Fisher-information envelope.

    The envelope (2L+1)^2 e^{-lam (2L+1)} / (1 - Pi^2) peaks at
    L = 1/lam + 1/2 independent of Pi; beyond it, decoherence outpaces the
    quadratic gain from deeper boosting.
    """
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValueError("lam must be positive (noiseless schedules have no maximum)")
    return 1.0 / lam + 0.5


def query_cost(schedule: LayerSchedule) -> int:
    """Total ansatz queries: an L-layer circuit makes 2L+1 ansatz calls."""
    return schedule.shots_per_layer * sum(2 * l + 1 for l in schedule.layers)


def noise_robust_schedule(pi_prior: float, lam: float, n_shots: int,
                          c: float = 1.0) -> LayerSchedule:
    """Layer selection that avoids Fisher-information minima.

    Keeps the depths L < 1/lam + 1/2 whose boosted signal sits near an
    extremum, sin^2((2L+1) acos Pi) > 1 - c*lam, seeded with the L=0 anchor
    the two-parameter MLE needs.  When the prior expectation is within
    c*lam of 0 or +-1 the condition is uninformative and the exponential
    sequence (capped at the envelope maximum) is used instead.
    """
    if not -1.0 <= pi_prior <= 1.0:
        raise ValueError("pi_prior must lie in [-1, 1]")
    if c <= 0.0:
        raise ValueError("c must be positive")
    cap = l_max_fisher(lam)

    if abs(pi_prior) < c * lam or 1.0 - abs(pi_prior) < c * lam:
        capped = [l for l in eis(64, n_shots).layers if l <= math.floor(cap)]
        return LayerSchedule(tuple(capped), n_shots, origin="nris-eis-edge")

    phi = math.acos(pi_prior)
    selected = [
        l for l in range(int(math.ceil(cap)))
        if l < cap and math.sin((2 * l + 1) * phi) ** 2 > 1.0 - c * lam
    ]
    if not selected:
        fallback = lis(int(math.floor(cap)), n_shots)
        return LayerSchedule(fallback.layers, n_shots, origin="nris-lis-fallback")
    if selected[0] != 0:
        selected.insert(0, 0)
    return LayerSchedule(tuple(selected), n_shots, origin="nris")


def schedule_to_dict(schedule: LayerSchedule) -> dict:
    return {
        "version": FORMAT_VERSION,
        "layers": list(schedule.layers),
        "shots_per_layer": schedule.shots_per_layer,
        "origin": schedule.origin,
    }


def schedule_from_dict(doc: dict) -> LayerSchedule:
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported schedule format version {doc.get('version')!r}")
    return LayerSchedule(
        layers=tuple(int(l) for l in doc["layers"]),
        shots_per_layer=int(doc["shots_per_layer"]),
        origin=str(doc.get("origin", "")),
    )
