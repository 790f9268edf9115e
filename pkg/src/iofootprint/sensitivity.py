"""Numerical instability of the requirements inverse near singularity.

The inverse ``(I - A)^-1`` blows up as the dominant eigenvalue of ``A``
approaches one, so small estimation errors in the coefficients can move
results arbitrarily far. This module makes that concrete three ways: a
spectral radius estimate (how close to the cliff a matrix sits), seeded
perturbation sampling (how far the inverse actually moves under entrywise
noise), and the exact one-sector amplification curve (the blow-up in
closed form).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Divergent, DomainError, SingularSystem
from .leontief import CoefficientKind, CoefficientMatrix, leontief_inverse
from .numerics import spectral_radius_estimate

# Matches the divergence margin used by the series evaluation.
RHO_MARGIN = 1e-12


@dataclass(frozen=True)
class SpectralEstimate:
    """Power-iteration estimate of the dominant eigenvalue."""

    rho: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class PerturbationReport:
    """How far the requirements inverse moves under entrywise perturbation.

    ``max_deviation`` is the largest ``||(I-B)^-1 - (I-A)^-1||_inf`` over
    the non-divergent draws, ``amplification`` that deviation per unit of
    perturbation, and ``diverged_count`` the number of sampled draws whose
    perturbed matrix left the convergent regime. Reports are deterministic
    functions of ``(matrix, epsilon, samples, seed)``.
    """

    epsilon: float
    samples: int
    baseline_norm: float
    max_deviation: float
    amplification: float
    diverged_count: int
    seed: int


def spectral_radius(coefficients: CoefficientMatrix, tol: float = 1e-12,
                    max_iter: int = 1000) -> SpectralEstimate:
    """Estimate the spectral radius of a coefficient matrix (either kind).

    Nonnegativity makes the dominant eigenvalue real and nonnegative, and
    caps it at both the maximum row sum and the maximum column sum; the
    returned estimate respects those bounds. ``converged`` is False when
    the iteration cap was hit, in which case ``rho`` is the last iterate.
    """
    rho, iterations, converged = spectral_radius_estimate(
        coefficients.values, tol=tol, max_iter=max_iter
    )
    return SpectralEstimate(rho, iterations, converged)


def _norm_inf(matrix: np.ndarray) -> float:
    return float(np.abs(matrix).sum(axis=1).max())


def _deviation(base_inverse: np.ndarray, perturbed: np.ndarray,
               kind: CoefficientKind) -> float | None:
    """Inverse deviation for one perturbed matrix, or None if it diverged."""
    rho, _, _ = spectral_radius_estimate(perturbed)
    if rho >= 1.0 - RHO_MARGIN:
        return None
    try:
        inv = leontief_inverse(CoefficientMatrix(kind, perturbed))
    except SingularSystem:
        return None
    return _norm_inf(inv - base_inverse)


def perturb_inverse(coefficients: CoefficientMatrix, epsilon: float,
                    samples: int, seed: int) -> PerturbationReport:
    """Sample entrywise perturbations and measure the inverse's movement.

    Each draw adds independent uniform noise in ``[-epsilon, epsilon]`` to
    every coefficient, clamped to stay nonnegative. Per-sample RNG
    substreams are spawned from the seed and merged by sample index, so the
    report is identical whether samples are evaluated sequentially or
    concurrently. For one-sector matrices the two interval endpoints are
    probed deterministically as well, so the worst case is hit exactly
    rather than approached in distribution.

    Raises :class:`Divergent` when the baseline matrix itself is already
    outside the convergent regime, and :class:`DomainError` for a
    nonpositive ``epsilon`` or negative ``samples``.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    if samples < 0:
        raise DomainError(f"samples must be nonnegative, got {samples!r}")
    base = coefficients.values
    rho, _, _ = spectral_radius_estimate(base)
    if rho >= 1.0 - RHO_MARGIN:
        raise Divergent(
            f"baseline spectral radius estimate {rho:.12g} is not below 1; "
            "the requirements inverse does not exist"
        )
    base_inverse = leontief_inverse(coefficients)
    baseline_norm = _norm_inf(base_inverse)

    deviations = [0.0]
    if coefficients.n == 1:
        for endpoint in (-epsilon, epsilon):
            probe = np.maximum(base + endpoint, 0.0)
            dev = _deviation(base_inverse, probe, coefficients.kind)
            if dev is not None:
                deviations.append(dev)

    diverged = 0
    substreams = np.random.SeedSequence(seed).spawn(samples)
    for stream in substreams:
        rng = np.random.default_rng(stream)
        noise = rng.uniform(-epsilon, epsilon, size=base.shape)
        dev = _deviation(base_inverse, np.maximum(base + noise, 0.0),
                         coefficients.kind)
        if dev is None:
            diverged += 1
        else:
            deviations.append(dev)

    max_deviation = max(deviations)
    return PerturbationReport(
        epsilon=float(epsilon),
        samples=int(samples),
        baseline_norm=baseline_norm,
        max_deviation=max_deviation,
        amplification=max_deviation / epsilon,
        diverged_count=diverged,
        seed=int(seed),
    )


def amplification_curve(a_values, epsilon: float) -> list[tuple[float, float]]:
    """Exact one-sector amplification ``1 / ((1 - a)(1 - a - eps))`` over a grid.

    For a single sector the worst-case deviation of the inverse under a
    perturbation of size ``epsilon`` has a closed form, and dividing it by
    ``epsilon`` gives the amplification factor. The curve grows without
    bound as ``a`` approaches one, which is the whole instability story in
    miniature.

    Raises :class:`DomainError` when any ``a`` is negative or ``a + epsilon``
    reaches one, where the perturbed inverse ceases to exist.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    curve = []
    for a in a_values:
        a = float(a)
        if a < 0:
            raise DomainError(f"coefficient must be nonnegative, got {a!r}")
        if a + epsilon >= 1.0:
            raise DomainError(
                f"a + epsilon must stay below 1, got {a!r} + {epsilon!r}"
            )
        curve.append((a, 1.0 / ((1.0 - a) * (1.0 - a - epsilon))))
    return curve
