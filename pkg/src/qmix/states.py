"""Pure states, density matrices and ensembles.

All three are immutable and validated on construction. A ``DensityMatrix``
carries no record of how it was prepared: a mixture obtained from an
ensemble and one obtained by tracing out part of an entangled state are
the same value.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import core
from .errors import DimensionError, ValidationError

NORM_ATOL = 1e-10


def _qubits_for_dim(dim: int) -> int:
    n = int(round(math.log2(dim))) if dim > 0 else -1
    if n < 1 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not 2**n for n >= 1")
    return n


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over the computational basis."""

    amplitudes: np.ndarray
    qubits: int = field(init=False)

    def __post_init__(self):
        amps = core.as_vector(self.amplitudes)
        qubits = _qubits_for_dim(amps.shape[0])
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise ValidationError(f"state is not normalized (squared norm {norm2!r})")
        object.__setattr__(self, "amplitudes", core.frozen(amps))
        object.__setattr__(self, "qubits", qubits)

    @classmethod
    def from_amplitudes(cls, *amplitudes: complex) -> PureState:
        return cls(np.array(amplitudes, dtype=complex))

    @classmethod
    def basis(cls, bits: str) -> PureState:
        return cls(core.ket(bits))

    def tensor(self, other: PureState) -> PureState:
        return PureState(core.tensor_product(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"PureState(qubits={self.qubits}, amplitudes={np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix on ``qubits`` qubits."""

    matrix: np.ndarray
    qubits: int = field(init=False)

    def __post_init__(self):
        m = core.as_matrix(self.matrix)
        qubits = _qubits_for_dim(m.shape[0])
        if not core.is_hermitian(m, NORM_ATOL):
            raise ValidationError("density matrix is not Hermitian")
        tr = core.trace(m)
        if abs(tr - 1.0) > NORM_ATOL:
            raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
        lowest = core.hermitian_eigenvalues(m, NORM_ATOL)[-1]
        if lowest < -NORM_ATOL:
            raise ValidationError(f"density matrix has negative eigenvalue {lowest!r}")
        object.__setattr__(self, "matrix", core.frozen(m))
        object.__setattr__(self, "qubits", qubits)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def tensor(self, other: DensityMatrix) -> DensityMatrix:
        return DensityMatrix(core.tensor_product(self.matrix, other.matrix))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = other.matrix if isinstance(other, DensityMatrix) else other
        return core.max_abs_deviation(self.matrix, other) <= atol

    def __repr__(self) -> str:
        return f"DensityMatrix(qubits={self.qubits}, matrix=\n{np.array2string(self.matrix, precision=6)})"


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted collection of pure states (members need not be orthogonal).

    Zero-weight members are kept but trigger a ``UserWarning``.
    """

    members: tuple

    def __post_init__(self):
        members = tuple((float(w), s if isinstance(s, PureState) else PureState(s)) for w, s in self.members)
        if not members:
            raise ValidationError("ensemble must have at least one member")
        qubits = {s.qubits for _, s in members}
        if len(qubits) != 1:
            raise DimensionError(f"ensemble members have differing qubit counts {sorted(qubits)}")
        weights = [w for w, _ in members]
        if any(not (0.0 <= w <= 1.0) for w in weights):
            raise ValidationError(f"weights must lie in [0, 1], got {weights}")
        if abs(sum(weights) - 1.0) > NORM_ATOL:
            raise ValidationError(f"weights sum to {sum(weights)!r}, expected 1")
        if any(w == 0.0 for w in weights):
            warnings.warn("ensemble has zero-weight members", UserWarning, stacklevel=3)
        object.__setattr__(self, "members", members)

    @property
    def qubits(self) -> int:
        return self.members[0][1].qubits

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.members])

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SubsystemLabel:
    """Named block of qubits within a composite register.

    ``position`` is the block's index in the register, counting from the most
    significant end.
    """

    name: str
    position: int
    qubits: int = 1

    def __post_init__(self):
        if self.qubits < 1:
            raise ValidationError(f"subsystem {self.name!r} must have at least one qubit")
        if self.position < 0:
            raise ValidationError(f"subsystem {self.name!r} has negative position")


def register(*names_and_sizes) -> tuple[SubsystemLabel, ...]:
    """Build a contiguous register, e.g. ``register("S", ("O", 1))``."""
    labels = []
    for pos, item in enumerate(names_and_sizes):
        name, size = (item, 1) if isinstance(item, str) else item
        labels.append(SubsystemLabel(name, pos, size))
    return tuple(labels)


def _check_register(labels: Sequence[SubsystemLabel]) -> list[SubsystemLabel]:
    ordered = sorted(labels, key=lambda lab: lab.position)
    if [lab.position for lab in ordered] != list(range(len(ordered))):
        raise ValidationError("subsystem positions must be disjoint and contiguous from 0")
    names = [lab.name for lab in ordered]
    if len(set(names)) != len(names):
        raise ValidationError(f"duplicate subsystem names in {names}")
    return ordered


def pure_to_density(s: PureState) -> DensityMatrix:
    """Projector ``|psi><psi|`` onto a normalized state."""
    if not isinstance(s, PureState):
        s = PureState(s)
    return DensityMatrix(core.outer(s.amplitudes))


def ensemble_to_density(e: Ensemble) -> DensityMatrix:
    rho = sum(w * core.outer(s.amplitudes) for w, s in e.members)
    return DensityMatrix(rho)


def purity(rho: DensityMatrix) -> float:
    """``Tr(rho^2)``, between ``1/dim`` and 1."""
    m = rho.matrix
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return float(np.sum(np.abs(m) ** 2))


def reduce(
    rho: DensityMatrix,
    keep: Iterable,
    labels: Sequence[SubsystemLabel] | None = None,
) -> DensityMatrix:
    """Reduced state over the subsystems in ``keep``.

    Args:
        rho: state of the whole register.
        keep: subsystems to retain, given as ``SubsystemLabel`` objects, their
            names, or their positions.
        labels: partition of the register. Defaults to one subsystem per
            qubit, in which case ``keep`` holds qubit positions.

    Raises:
        ValidationError: if the labels do not exactly cover the register or
            ``keep`` names something outside it.
    """
    if labels is None:
        labels = [SubsystemLabel(f"q{i}", i, 1) for i in range(rho.qubits)]
    ordered = _check_register(labels)
    if sum(lab.qubits for lab in ordered) != rho.qubits:
        raise ValidationError(
            f"labels cover {sum(lab.qubits for lab in ordered)} qubits but the state has {rho.qubits}"
        )
    by_name = {lab.name: lab for lab in ordered}
    keep_pos = set()
    for k in keep:
        if isinstance(k, SubsystemLabel):
            if by_name.get(k.name) != k:
                raise ValidationError(f"{k!r} is not part of the register")
            keep_pos.add(k.position)
        elif isinstance(k, str):
            if k not in by_name:
                raise ValidationError(f"unknown subsystem {k!r}")
            keep_pos.add(by_name[k].position)
        else:
            if not 0 <= int(k) < len(ordered):
                raise ValidationError(f"subsystem position {k} out of range")
            keep_pos.add(int(k))
    if not keep_pos:
        raise ValidationError("keep-set is empty")
    traced = [lab.position for lab in ordered if lab.position not in keep_pos]
    if not traced:
        return rho
    dims = [2**lab.qubits for lab in ordered]
    return DensityMatrix(core.partial_trace(rho.matrix, dims, traced))


def bloch_amplitudes(rng: np.random.Generator) -> tuple[complex, complex]:
    """Draw ``(alpha, beta)`` uniformly on the Bloch sphere.

    Uses uniform ``cos(theta)`` and a uniform relative phase; ``alpha`` is
    real and non-negative.
    """
    cos_t = rng.uniform(-1.0, 1.0)
    phase = rng.uniform(0.0, 2 * math.pi)
    alpha = math.sqrt((1 + cos_t) / 2)
    beta = math.sqrt((1 - cos_t) / 2) * complex(math.cos(phase), math.sin(phase))
    return complex(alpha), beta


def random_pure_state(rng: np.random.Generator, qubits: int = 1) -> PureState:
    v = rng.standard_normal(2**qubits) + 1j * rng.standard_normal(2**qubits)
    return PureState(v / np.linalg.norm(v))
