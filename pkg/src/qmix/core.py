"""Small dense complex linear algebra.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
Multi-qubit indices follow the big-endian convention: the leftmost tensor
factor is the most significant bit of the basis index, so ``|10>`` has
index 2.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from functools import reduce as _fold

import numpy as np

from .errors import DimensionError, ValidationError

HERMITIAN_ATOL = 1e-10


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite, square, complex 2-d array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionError(f"expected a nonempty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("matrix has non-finite entries")
    return arr


def as_vector(v) -> np.ndarray:
    """Coerce ``v`` to a finite, nonempty, complex 1-d array."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"expected a nonempty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("vector has non-finite entries")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    """Return a read-only copy of ``arr``."""
    out = np.array(arr, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def tensor_product(a, b, *rest) -> np.ndarray:
    """Kronecker product of vectors or matrices, first operand most significant.

    Both operands must be the same kind (both 1-d or both 2-d). Extra
    operands are folded left to right.
    """
    operands = [np.asarray(x, dtype=complex) for x in (a, b, *rest)]
    ndims = {x.ndim for x in operands}
    if len(ndims) != 1 or ndims.pop() not in (1, 2):
        raise DimensionError("tensor_product operands must all be vectors or all be matrices")
    for x in operands:
        if x.ndim == 2:
            as_matrix(x)
        else:
            as_vector(x)
    return _fold(np.kron, operands)


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(m) -> np.ndarray:
    return as_matrix(m).conj().T


def trace(m) -> complex:
    return complex(np.trace(as_matrix(m)))


def outer(ket, bra=None) -> np.ndarray:
    """``|ket><bra|``; with one argument, the projector ``|ket><ket|``."""
    ket = as_vector(ket)
    bra = ket if bra is None else as_vector(bra)
    return np.outer(ket, bra.conj())


def partial_trace(m, subsystem_dims: Sequence[int], traced_indices: Iterable[int]) -> np.ndarray:
    """Trace out the subsystems at ``traced_indices``.

    Args:
        m: square matrix over the composite space.
        subsystem_dims: dimension of each subsystem, most significant first.
        traced_indices: positions (into ``subsystem_dims``) to sum out.

    Returns:
        The reduced matrix over the kept subsystems, in their original order.
    """
    m = as_matrix(m)
    dims = [int(d) for d in subsystem_dims]
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid subsystem dims {subsystem_dims!r}")
    if int(np.prod(dims)) != m.shape[0]:
        raise DimensionError(f"subsystem dims {dims} do not factor a {m.shape[0]}-dim matrix")
    traced = set(traced_indices)
    if not traced:
        raise DimensionError("nothing to trace out")
    if not traced <= set(range(len(dims))):
        raise DimensionError(f"traced indices {sorted(traced)} out of range for {len(dims)} subsystems")
    keep = [i for i in range(len(dims)) if i not in traced]
    if not keep:
        raise DimensionError("cannot trace out every subsystem")

    n = len(dims)
    t = m.reshape(dims + dims)
    # Trace pairs from the highest index down so earlier axis numbers stay valid.
    for offset, i in enumerate(sorted(traced, reverse=True)):
        remaining = n - offset
        t = np.trace(t, axis1=i, axis2=i + remaining)
    kept_dim = int(np.prod([dims[i] for i in keep]))
    return t.reshape(kept_dim, kept_dim)


def is_hermitian(m, atol: float = HERMITIAN_ATOL) -> bool:
    m = as_matrix(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def hermitian_eigenvalues(m, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order.

    Raises:
        ValidationError: if ``m`` deviates from Hermitian by more than ``atol``
            in any entry.
    """
    m = as_matrix(m)
    if not is_hermitian(m, atol):
        raise ValidationError("matrix is not Hermitian")
    herm = (m + m.conj().T) / 2
    return np.linalg.eigvalsh(herm)[::-1]


def max_abs_deviation(a, b) -> float:
    """Largest entrywise absolute difference between two equal-shape arrays."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def basis_ket(index: int, qubits: int) -> np.ndarray:
    """Computational basis vector ``|index>`` on ``qubits`` qubits."""
    dim = 2**qubits
    if not 0 <= index < dim:
        raise DimensionError(f"basis index {index} out of range for {qubits} qubits")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def ket(bits: str) -> np.ndarray:
    """Basis vector from a bit string, e.g. ``ket("10")`` is index 2."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValidationError(f"not a bit string: {bits!r}")
    return basis_ket(int(bits, 2), len(bits))
