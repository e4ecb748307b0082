"""Gates, register lifting, and measurement updates on density matrices."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import core
from .errors import DimensionError, ValidationError, ZeroProbabilityError
from .states import DensityMatrix, PureState, _qubits_for_dim

UNITARY_ATOL = 1e-10
ZERO_PROBABILITY = 1e-12

SQRT_HALF = 1 / np.sqrt(2)


@dataclass(frozen=True, eq=False)
class Gate:
    """Unitary acting on ``arity`` qubits."""

    matrix: np.ndarray
    name: str = ""
    arity: int = field(init=False)

    def __post_init__(self):
        m = core.as_matrix(self.matrix)
        arity = _qubits_for_dim(m.shape[0])
        if core.max_abs_deviation(m.conj().T @ m, np.eye(m.shape[0])) > UNITARY_ATOL:
            raise ValidationError(f"gate {self.name or '<unnamed>'} is not unitary")
        object.__setattr__(self, "matrix", core.frozen(m))
        object.__setattr__(self, "arity", arity)

    def __matmul__(self, other: Gate) -> Gate:
        return Gate(core.matmul(self.matrix, other.matrix))

    def dagger(self) -> Gate:
        return Gate(core.dagger(self.matrix), f"{self.name}^dag" if self.name else "")


@dataclass(frozen=True, eq=False)
class Projector:
    matrix: np.ndarray

    def __post_init__(self):
        m = core.as_matrix(self.matrix)
        if not core.is_hermitian(m, UNITARY_ATOL):
            raise ValidationError("projector is not Hermitian")
        if core.max_abs_deviation(m @ m, m) > UNITARY_ATOL:
            raise ValidationError("projector is not idempotent")
        object.__setattr__(self, "matrix", core.frozen(m))


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Orthonormal basis of ``2**qubits`` states with one label per outcome."""

    vectors: tuple
    outcome_labels: tuple
    name: str = ""
    qubits: int = field(init=False)

    def __post_init__(self):
        vecs = tuple(v if isinstance(v, PureState) else PureState(v) for v in self.vectors)
        labels = tuple(str(lab) for lab in self.outcome_labels)
        if not vecs:
            raise ValidationError("measurement basis is empty")
        qubits = vecs[0].qubits
        if any(v.qubits != qubits for v in vecs):
            raise DimensionError("basis vectors have differing qubit counts")
        if len(vecs) != 2**qubits:
            raise ValidationError(f"need {2**qubits} basis vectors, got {len(vecs)}")
        if len(labels) != len(vecs) or len(set(labels)) != len(labels):
            raise ValidationError("need one distinct outcome label per basis vector")
        cols = np.column_stack([v.amplitudes for v in vecs])
        if core.max_abs_deviation(cols.conj().T @ cols, np.eye(len(vecs))) > UNITARY_ATOL:
            raise ValidationError("basis vectors are not orthonormal")
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "outcome_labels", labels)
        object.__setattr__(self, "qubits", qubits)

    def change_of_basis(self) -> np.ndarray:
        """Unitary ``B`` with ``B|k> = |b_k>``."""
        return np.column_stack([v.amplitudes for v in self.vectors])

    def projectors(self) -> list[Projector]:
        return [Projector(core.outer(v.amplitudes)) for v in self.vectors]

    def index(self, label) -> int:
        try:
            return self.outcome_labels.index(str(label))
        except ValueError:
            raise ValidationError(
                f"outcome {label!r} not in basis labels {list(self.outcome_labels)}"
            ) from None


def computational_basis(qubits: int = 1) -> MeasurementBasis:
    labels = [format(i, f"0{qubits}b") for i in range(2**qubits)]
    return MeasurementBasis(tuple(core.ket(b) for b in labels), tuple(labels), name="computational")


def plus_minus_basis() -> MeasurementBasis:
    plus = np.array([SQRT_HALF, SQRT_HALF], dtype=complex)
    minus = np.array([SQRT_HALF, -SQRT_HALF], dtype=complex)
    return MeasurementBasis((plus, minus), ("+", "-"), name="plus_minus")


def build_i() -> Gate:
    return Gate(np.eye(2), "I")


def build_x() -> Gate:
    return Gate(np.array([[0, 1], [1, 0]]), "X")


def build_z() -> Gate:
    return Gate(np.array([[1, 0], [0, -1]]), "Z")


def build_h() -> Gate:
    return Gate(SQRT_HALF * np.array([[1, 1], [1, -1]]), "H")


def build_cnot() -> Gate:
    """Control on the first (most significant) qubit, target on the second."""
    m = np.zeros((4, 4), dtype=complex)
    for control in (0, 1):
        for target in (0, 1):
            m[2 * control + (target ^ control), 2 * control + target] = 1
    return Gate(m, "CNOT")


GATES = {"I": build_i, "X": build_x, "Z": build_z, "H": build_h, "CNOT": build_cnot}


def gate_by_name(name: str) -> Gate:
    try:
        return GATES[name.upper()]()
    except KeyError:
        raise ValidationError(f"unknown gate {name!r}; known gates: {sorted(GATES)}") from None


def _lift_matrix(m: np.ndarray, register_qubits: int, targets: Sequence[int]) -> np.ndarray:
    k = len(targets)
    if m.shape != (2**k, 2**k):
        raise DimensionError(f"operator of dim {m.shape[0]} cannot act on {k} targets")
    if len(set(targets)) != k:
        raise ValidationError(f"duplicate targets {list(targets)}")
    if any(not 0 <= t < register_qubits for t in targets):
        raise ValidationError(f"targets {list(targets)} out of range for {register_qubits} qubits")
    n = register_qubits
    dim = 2**n
    # Apply m to every column of the identity: axes 0..n-1 are qubits, axis n indexes columns.
    cols = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    op = m.reshape((2,) * (2 * k))
    out = np.tensordot(op, cols, axes=(list(range(k, 2 * k)), list(targets)))
    out = np.moveaxis(out, list(range(k)), list(targets))
    return out.reshape(dim, dim)


def lift(g: Gate, register_qubits: int, targets: Sequence[int]) -> Gate:
    """Embed ``g`` into an ``register_qubits``-qubit register.

    ``targets[j]`` is the register position that plays the role of the gate's
    ``j``-th qubit, so ``lift(build_cnot(), 3, [0, 2])`` is a CNOT controlled
    by qubit 0 and targeting qubit 2.
    """
    targets = [int(t) for t in targets]
    if len(targets) != g.arity:
        raise DimensionError(f"gate of arity {g.arity} given {len(targets)} targets")
    return Gate(_lift_matrix(g.matrix, register_qubits, targets), g.name)


def apply_unitary(rho: DensityMatrix, g: Gate) -> DensityMatrix:
    """``U rho U^dag``."""
    if g.matrix.shape != rho.matrix.shape:
        raise DimensionError(f"gate dim {g.matrix.shape[0]} does not match state dim {rho.dim}")
    u = g.matrix
    return DensityMatrix(u @ rho.matrix @ u.conj().T)


def _lifted_projectors(rho: DensityMatrix, basis: MeasurementBasis, targets) -> list[np.ndarray]:
    targets = [int(t) for t in targets]
    if len(targets) != basis.qubits:
        raise DimensionError(f"basis on {basis.qubits} qubits given {len(targets)} targets")
    return [_lift_matrix(p.matrix, rho.qubits, targets) for p in basis.projectors()]


def ontic_collapse(rho: DensityMatrix, basis: MeasurementBasis, targets=(0,)) -> DensityMatrix:
    """Nonselective measurement ``sum_m P_m rho P_m`` on the ``targets`` qubits."""
    projs = _lifted_projectors(rho, basis, targets)
    return DensityMatrix(sum(p @ rho.matrix @ p for p in projs))


def epistemic_collapse(
    rho: DensityMatrix, basis: MeasurementBasis, targets, outcome
) -> tuple[DensityMatrix, float]:
    """Selective update on learning ``outcome``.

    Returns:
        ``(P rho P / p, p)`` where ``p = Tr(P rho P)`` is the Born probability.

    Raises:
        ZeroProbabilityError: if ``p`` is below ``1e-12``.
    """
    idx = basis.index(outcome)
    p_op = _lifted_projectors(rho, basis, targets)[idx]
    branch = p_op @ rho.matrix @ p_op
    prob = float(core.trace(branch).real)
    if prob < ZERO_PROBABILITY:
        raise ZeroProbabilityError(f"outcome {outcome!r} has probability {prob:.3g}")
    return DensityMatrix(branch / prob), prob


def born_probabilities(rho: DensityMatrix, basis: MeasurementBasis, targets=(0,)) -> np.ndarray:
    projs = _lifted_projectors(rho, basis, targets)
    return np.array([core.trace(p @ rho.matrix).real for p in projs])


def measurement_circuit(basis: MeasurementBasis) -> Gate:
    """System-apparatus interaction that measures a single qubit in ``basis``.

    Returns ``(B (x) B) . CNOT . (B^dag (x) I)`` with ``B|k> = |b_k>``. With the
    apparatus ready in ``|0>``, it maps ``|b_k>|0>`` to ``|b_k>|b_k>``.
    """
    if basis.qubits != 1:
        raise DimensionError("measurement_circuit needs a single-qubit basis")
    b = basis.change_of_basis()
    m = core.tensor_product(b, b) @ build_cnot().matrix @ core.tensor_product(b.conj().T, np.eye(2))
    return Gate(m, f"measure[{basis.name or 'custom'}]")
