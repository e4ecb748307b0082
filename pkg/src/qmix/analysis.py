"""Distinguishability metrics, mixture audits and ensemble reshuffling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import core
from .errors import DimensionError, ValidationError
from .states import (
    DensityMatrix,
    Ensemble,
    PureState,
    SubsystemLabel,
    ensemble_to_density,
    reduce,
)

ISOMETRY_ATOL = 1e-10
_DROP_WEIGHT = 1e-15


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian operator, optionally tagged with the subsystem it acts on."""

    matrix: np.ndarray
    subsystem: SubsystemLabel | None = None

    def __post_init__(self):
        m = core.as_matrix(self.matrix)
        if not core.is_hermitian(m):
            raise ValidationError("observable is not Hermitian")
        if self.subsystem is not None and m.shape[0] != 2**self.subsystem.qubits:
            raise DimensionError(
                f"observable of dim {m.shape[0]} does not fit subsystem {self.subsystem.name!r}"
            )
        object.__setattr__(self, "matrix", core.frozen(m))


@dataclass(frozen=True)
class MonteCarloResult:
    shots: int
    max_z: float
    agree: bool


@dataclass(frozen=True, eq=False)
class AuditResult:
    """Outcome of :func:`proper_improper_audit`.

    ``max_abs_gap`` is the largest expectation-value difference over the
    random observables; ``max_distribution_gap`` the largest outcome
    probability difference over the random projective measurements.
    ``state_distance`` is the trace distance between the two subsystem states.
    """

    trials: int
    max_abs_gap: float
    worst_observable: Observable
    seed: int
    max_distribution_gap: float = 0.0
    state_distance: float = 0.0
    monte_carlo: MonteCarloResult | None = field(default=None)


def _as_state(x) -> DensityMatrix:
    return x if isinstance(x, DensityMatrix) else DensityMatrix(x)


def expectation(obs: Observable | np.ndarray, rho: DensityMatrix) -> float:
    """``Tr(obs rho)``; raises if the result is not real to 1e-10."""
    m = obs.matrix if isinstance(obs, Observable) else core.as_matrix(obs)
    if m.shape != rho.matrix.shape:
        raise DimensionError(f"observable dim {m.shape[0]} does not match state dim {rho.dim}")
    val = core.trace(m @ rho.matrix)
    if abs(val.imag) > 1e-10:
        raise ValidationError(f"expectation has imaginary part {val.imag!r}")
    return float(val.real)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the trace norm of ``rho - sigma``."""
    if rho.matrix.shape != sigma.matrix.shape:
        raise DimensionError(f"cannot compare states of dim {rho.dim} and {sigma.dim}")
    evals = core.hermitian_eigenvalues(rho.matrix - sigma.matrix)
    return float(0.5 * np.sum(np.abs(evals)))


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (m + m.conj().T) / 2


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary via QR with the phase of R's diagonal divided out."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # Each trial is seeded from (seed, trial) so results do not depend on execution order.
    return np.random.default_rng([seed, trial])


def _subsystem_of(joint: DensityMatrix, qubits: int, subsystem) -> DensityMatrix:
    if subsystem is None:
        if joint.qubits <= qubits:
            raise DimensionError("joint state must be larger than the subsystem")
        labels = [SubsystemLabel("S", 0, qubits), SubsystemLabel("O", 1, joint.qubits - qubits)]
        return reduce(joint, ["S"], labels)
    keep, labels = subsystem
    return reduce(joint, keep, labels)


def _sample_frequencies(rng, probs_per_draw, weights, shots: int) -> np.ndarray:
    """Draw a preparation by weight, then an outcome by the Born rule."""
    which = rng.choice(len(weights), size=shots, p=weights)
    counts = np.zeros(probs_per_draw.shape[1])
    for i, p in enumerate(probs_per_draw):
        n_i = int(np.sum(which == i))
        if n_i:
            counts += rng.multinomial(n_i, p / p.sum())
    return counts / shots


def proper_improper_audit(
    e: Ensemble,
    joint: DensityMatrix,
    n_observables: int = 1000,
    seed: int = 0,
    subsystem=None,
    shots: int = 0,
) -> AuditResult:
    """Compare an ignorance ensemble with the reduced state of an entangled joint state.

    Every trial draws one random Hermitian observable and one random
    orthonormal measurement basis on the subsystem and records the gap in
    expectation value and in outcome distribution between the two
    preparations.

    Args:
        e: the proper mixture, as an ensemble over the subsystem.
        joint: the composite state whose reduction is the improper mixture.
        n_observables: number of trials.
        seed: base seed; trial ``k`` uses ``default_rng([seed, k])``.
        subsystem: ``(keep, labels)`` passed to :func:`reduce`. By default
            the subsystem is the leading ``e.qubits`` qubits of ``joint``.
        shots: if positive, also sample outcome frequencies of the first
            trial's projective measurement for both preparations and test
            agreement at 3 sigma.
    """
    if n_observables < 1:
        raise ValidationError("n_observables must be positive")
    proper = ensemble_to_density(e)
    improper = _subsystem_of(joint, e.qubits, subsystem)
    if proper.matrix.shape != improper.matrix.shape:
        raise DimensionError(f"ensemble dim {proper.dim} does not match subsystem dim {improper.dim}")
    dim = proper.dim

    max_gap, worst, max_dist = -1.0, None, 0.0
    for trial in range(n_observables):
        rng = _trial_rng(seed, trial)
        h = random_hermitian(rng, dim)
        gap = abs(expectation(h, proper) - expectation(h, improper))
        if gap > max_gap:
            max_gap, worst = gap, h
        u = random_unitary(rng, dim)
        p_proper = np.real(np.einsum("ki,ij,jk->k", u.conj().T, proper.matrix, u))
        p_improper = np.real(np.einsum("ki,ij,jk->k", u.conj().T, improper.matrix, u))
        max_dist = max(max_dist, float(np.max(np.abs(p_proper - p_improper))))

    mc = None
    if shots > 0:
        mc = _monte_carlo(e, improper, seed, shots)

    return AuditResult(
        trials=n_observables,
        max_abs_gap=float(max_gap),
        worst_observable=Observable(worst),
        seed=seed,
        max_distribution_gap=max_dist,
        state_distance=trace_distance(proper, improper),
        monte_carlo=mc,
    )


def _monte_carlo(e: Ensemble, improper: DensityMatrix, seed: int, shots: int) -> MonteCarloResult:
    u = random_unitary(_trial_rng(seed, 0), improper.dim)
    member_probs = np.array([np.abs(u.conj().T @ s.amplitudes) ** 2 for _, s in e.members])
    improper_probs = np.real(np.diag(u.conj().T @ improper.matrix @ u))[None, :]
    rng = np.random.default_rng([seed, 1 << 30])
    f_proper = _sample_frequencies(rng, member_probs, e.weights, shots)
    f_improper = _sample_frequencies(rng, improper_probs, np.array([1.0]), shots)
    pooled = (f_proper + f_improper) / 2
    sigma = np.sqrt(np.maximum(pooled * (1 - pooled), 1e-300) * 2 / shots)
    z = np.where(pooled > 0, np.abs(f_proper - f_improper) / sigma, 0.0)
    max_z = float(np.max(z))
    return MonteCarloResult(shots=shots, max_z=max_z, agree=max_z <= 3.0)


def _as_effect(h: np.ndarray) -> np.ndarray:
    """Affinely rescale a Hermitian matrix so its spectrum spans [0, 1]."""
    evals = np.linalg.eigvalsh(h)
    lo, hi = evals[0], evals[-1]
    if hi - lo < 1e-15:
        return np.zeros_like(h)
    return (h - lo * np.eye(h.shape[0])) / (hi - lo)


def composite_witness(
    pure_joint: DensityMatrix,
    mixed_joint: DensityMatrix,
    n_random: int = 64,
    seed: int = 0,
) -> tuple[Observable, float]:
    """Find a composite-system observable separating two joint states.

    Candidates are the projector onto the dominant eigenvector of
    ``pure_joint`` followed by ``n_random`` random Hermitians rescaled to
    have spectrum in [0, 1], so every gap is bounded by the trace distance.
    Ties keep the earlier candidate.

    Returns:
        ``(observable, gap)`` with ``gap = |<O>_pure - <O>_mixed|``.
    """
    if pure_joint.matrix.shape != mixed_joint.matrix.shape:
        raise DimensionError(f"cannot compare states of dim {pure_joint.dim} and {mixed_joint.dim}")
    evals, evecs = np.linalg.eigh(pure_joint.matrix)
    top = evecs[:, np.argmax(evals)]
    candidates = [core.outer(top)]
    for k in range(n_random):
        candidates.append(_as_effect(random_hermitian(_trial_rng(seed, k), pure_joint.dim)))

    best, best_gap = None, -1.0
    for c in candidates:
        gap = abs(expectation(c, pure_joint) - expectation(c, mixed_joint))
        if gap > best_gap + 1e-15:
            best, best_gap = c, gap
    return Observable(best), float(best_gap)


def ensemble_mix(e: Ensemble, mixing) -> Ensemble:
    """Re-present an ensemble through an isometric mixing of its members.

    New members satisfy ``sqrt(q_j) |phi_j> = sum_i mixing[j, i] sqrt(p_i) |psi_i>``.
    ``mixing`` has one column per old member and at least as many rows, with
    orthonormal columns. The density matrix is unchanged. Members whose
    weight comes out as zero are dropped.

    Raises:
        ValidationError: if ``mixing`` is not an isometry.
    """
    u = np.asarray(mixing, dtype=complex)
    n = len(e)
    if u.ndim != 2 or u.shape[1] != n or u.shape[0] < n:
        raise DimensionError(f"mixing must have shape (m >= {n}, {n}), got {u.shape}")
    if core.max_abs_deviation(u.conj().T @ u, np.eye(n)) > ISOMETRY_ATOL:
        raise ValidationError("mixing matrix is not an isometry")
    scaled = np.array([math.sqrt(w) * s.amplitudes for w, s in e.members])  # (n, dim)
    new = u @ scaled
    members = []
    for vec in new:
        q = float(np.vdot(vec, vec).real)
        if q > _DROP_WEIGHT:
            members.append((q, PureState(vec / math.sqrt(q))))
    total = sum(q for q, _ in members)
    return Ensemble([(q / total, s) for q, s in members])


def rotated_pair(theta: float) -> tuple[PureState, PureState]:
    """``(cos t|0> + sin t|1>, -sin t|0> + cos t|1>)``."""
    c, s = math.cos(theta), math.sin(theta)
    return PureState.from_amplitudes(c, s), PureState.from_amplitudes(-s, c)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]], dtype=complex)
