"""Indicator functions and their per-eigenimage weights.

A reconstruction method is a weighting of squared eigenimage
projections: the indicator raises the ratio of signal-weighted to
noise-weighted energy to a contrast exponent. Four schemes are
supported, crossing hard/soft subspace splits with flat or
inverse-eigenvalue weighting.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, replace

import numpy as np

from .subspace import BatchDecomposition, ProjectionSet

SCHEMES = ("musical_hard", "ev_hard", "musical_soft", "ev_soft")
HARD_RULES = ("A", "B", "manual")

# smallest positive normal double; keeps ratios finite when both the
# numerator and raw denominator vanish
_TINY = sys.float_info.min


@dataclass(frozen=True)
class IndicatorConfig:
    """Contrast exponent and denominator guard."""

    alpha: float = 4.0
    epsilon_floor: float = 1e-12

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.epsilon_floor < 0:
            raise ValueError("epsilon_floor must be >= 0")


@dataclass(frozen=True)
class ThresholdSpec:
    """How the signal/noise split is made.

    Hard schemes need a cutoff singular value: rule "A" (minimum of the
    second singular values over windows), rule "B" (midpoint of their
    minimum and maximum) or "manual" with sigma0 given. Soft schemes
    ramp between bounds (sigma_min, sigma_max), derived from the same
    statistics when not given. Rules and bounds are resolved against a
    concrete stack by resolve().
    """

    scheme: str
    rule: str | None = None
    sigma0: float | None = None
    sigma_min: float | None = None
    sigma_max: float | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.is_hard:
            rule = self.rule if self.rule is not None else "manual"
            if rule not in HARD_RULES:
                raise ValueError(f"hard rule must be one of {HARD_RULES}, got {rule!r}")
            object.__setattr__(self, "rule", rule)
            # rules A/B leave sigma0 None until resolved against a stack
            if rule == "manual" and self.sigma0 is None:
                raise ValueError("manual hard thresholding needs sigma0")
            if self.sigma0 is not None and self.sigma0 < 0:
                raise ValueError("sigma0 must be >= 0")
            if self.sigma_min is not None or self.sigma_max is not None:
                raise ValueError("sigma_min/sigma_max apply to soft schemes only")
        else:
            if self.rule is not None:
                raise ValueError("rules A/B/manual apply to hard schemes only")
            if self.sigma0 is not None:
                raise ValueError("sigma0 applies to hard schemes only")
            given = (self.sigma_min is None, self.sigma_max is None)
            if given == (False, False):
                if not 0 < self.sigma_min < self.sigma_max:
                    raise ValueError("need 0 < sigma_min < sigma_max")
            elif given != (True, True):
                raise ValueError("give both soft bounds or neither")

    @property
    def is_hard(self) -> bool:
        return self.scheme.endswith("_hard")

    @property
    def family(self) -> str:
        """"musical" (flat weights) or "ev" (inverse-eigenvalue)."""
        return self.scheme.split("_")[0]

    @property
    def resolved(self) -> bool:
        if self.is_hard:
            return self.sigma0 is not None
        return self.sigma_min is not None


@dataclass(frozen=True)
class WeightVector:
    """Signal and noise weights per eigenimage."""

    signal: np.ndarray
    noise: np.ndarray


def second_singular_values(decompositions) -> np.ndarray:
    """Second singular value of each window.

    Accepts a BatchDecomposition or an iterable of per-window
    decompositions; a single window yields a one-element array.
    """
    if isinstance(decompositions, BatchDecomposition):
        if decompositions.n_components < 2:
            raise ValueError("windows have fewer than 2 components")
        return np.asarray(decompositions.second_singular_values, dtype=np.float64)
    out = []
    for dec in decompositions:
        if dec.singular_values.shape[0] < 2:
            raise ValueError("a window has fewer than 2 components")
        out.append(dec.singular_values[1])
    if not out:
        raise ValueError("no decompositions given")
    return np.asarray(out, dtype=np.float64)


def rule_a(second_svs) -> float:
    """Cutoff at the floor of the second singular values."""
    vals = np.asarray(second_svs, dtype=np.float64)
    if vals.size == 0:
        raise ValueError("no second singular values")
    return float(vals.min())


def rule_b(second_svs) -> float:
    """Cutoff midway between the extremes of the second singular values."""
    vals = np.asarray(second_svs, dtype=np.float64)
    if vals.size == 0:
        raise ValueError("no second singular values")
    return float(0.5 * (vals.min() + vals.max()))


def auto_soft_bounds(second_svs) -> tuple:
    """Soft ramp bounds: the extremes of the second singular values."""
    vals = np.asarray(second_svs, dtype=np.float64)
    if vals.size == 0:
        raise ValueError("no second singular values")
    lo = float(vals.min())
    hi = float(vals.max())
    if lo <= 0:
        raise ValueError(
            "soft bounds need positive second singular values; the stack has "
            "a window with a degenerate spectrum"
        )
    if lo == hi:
        raise ValueError("flat second-singular-value range, soft ramp undefined")
    return lo, hi


def resolve(spec: ThresholdSpec, second_svs) -> ThresholdSpec:
    """Fill derived threshold values from per-window statistics."""
    if spec.resolved:
        return spec
    if spec.is_hard:
        if spec.rule == "A":
            return replace(spec, sigma0=rule_a(second_svs))
        return replace(spec, sigma0=rule_b(second_svs))
    lo, hi = auto_soft_bounds(second_svs)
    return replace(spec, sigma_min=lo, sigma_max=hi)


def soft_ramp(sigma, lo: float, hi: float):
    """Log-domain ramp: 0 at lo, 1 at hi, clipped outside, 0 at sigma=0."""
    s = np.asarray(sigma, dtype=np.float64)
    with np.errstate(divide="ignore"):
        t = (np.log10(s) - np.log10(lo)) / (np.log10(hi) - np.log10(lo))
    return np.clip(t, 0.0, 1.0)


def weight_arrays(sigma, spec: ThresholdSpec):
    """Signal/noise weights for singular values of shape (..., M).

    musical schemes: signal weight in [0, 1], noise = 1 - signal.
    ev schemes: the same split scaled by the inverse eigenvalue, with
    zero-eigenvalue components dropped from both sides.
    """
    if not spec.resolved:
        raise ValueError("threshold spec is unresolved; call resolve() first")
    s = np.asarray(sigma, dtype=np.float64)
    if spec.is_hard:
        on = (s >= spec.sigma0).astype(np.float64)
    else:
        on = soft_ramp(s, spec.sigma_min, spec.sigma_max)
    if spec.family == "musical":
        return on, 1.0 - on
    lam = s * s
    inv = np.zeros_like(lam)
    np.divide(1.0, lam, out=inv, where=lam > 0.0)
    a = inv * on
    return a, inv - a


def weights(decomposition, spec: ThresholdSpec) -> WeightVector:
    """Weight vector for one window's decomposition."""
    a, b = weight_arrays(decomposition.singular_values, spec)
    return WeightVector(signal=a, noise=b)


def indicator_value(projections, weight_vector: WeightVector, config=None) -> float:
    """Weighted energy ratio raised to half the contrast exponent.

    The denominator is floored at epsilon_floor * numerator plus the
    smallest normal double, so an empty noise subspace yields a large
    finite value instead of overflowing.
    """
    if config is None:
        config = IndicatorConfig()
    g = (
        projections.values
        if isinstance(projections, ProjectionSet)
        else np.asarray(projections, dtype=np.float64)
    )
    a = np.asarray(weight_vector.signal, dtype=np.float64)
    b = np.asarray(weight_vector.noise, dtype=np.float64)
    if g.shape != a.shape or a.shape != b.shape:
        raise ValueError("projections and weights must have matching length")
    g2 = g * g
    num = float(a @ g2)
    den = float(b @ g2)
    den = max(den, config.epsilon_floor * num + _TINY)
    return (num / den) ** (0.5 * config.alpha)
