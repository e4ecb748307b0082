import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings

from qmix import core
from qmix.analysis import ensemble_mix, random_unitary
from qmix.errors import DimensionError, ValidationError
from qmix.states import (
    DensityMatrix,
    Ensemble,
    PureState,
    SubsystemLabel,
    bloch_amplitudes,
    ensemble_to_density,
    pure_to_density,
    purity,
    reduce,
    register,
)

from conftest import ATOL, R2, qubit_amplitudes, random_density

PLUS = PureState.from_amplitudes(R2, R2)
MINUS = PureState.from_amplitudes(R2, -R2)
ZERO = PureState.basis("0")
ONE = PureState.basis("1")


def test_pure_state_validation():
    with pytest.raises(ValidationError):
        PureState.from_amplitudes(1, 1)
    with pytest.raises(DimensionError):
        PureState(np.array([1, 0, 0]))
    assert PureState.basis("10").qubits == 2


def test_values_are_read_only():
    s = PureState.basis("0")
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0


def test_density_matrix_validation():
    with pytest.raises(ValidationError):
        DensityMatrix(np.eye(2))  # trace 2
    with pytest.raises(ValidationError):
        DensityMatrix(np.array([[1, 1], [0, 0]]))  # not Hermitian
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([1.5, -0.5]))  # negative eigenvalue


class TestPureToDensity:
    def test_basis(self):
        assert np.array_equal(pure_to_density(ZERO).matrix, np.diag([1, 0]))

    def test_plus(self):
        assert np.allclose(pure_to_density(PLUS).matrix, np.full((2, 2), 0.5), atol=ATOL)

    def test_entangled(self):
        a, b = 0.6, 0.8j
        psi = PureState(np.array([a, 0, 0, b]))
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = abs(a) ** 2
        expected[0, 3] = a * np.conj(b)
        expected[3, 0] = b * np.conj(a)
        expected[3, 3] = abs(b) ** 2
        assert np.allclose(pure_to_density(psi).matrix, expected, atol=ATOL)


class TestEnsembleToDensity:
    def test_singleton(self):
        assert np.allclose(ensemble_to_density(Ensemble([(1.0, ZERO)])).matrix, np.diag([1, 0]))

    @pytest.mark.parametrize("pair", [(ZERO, ONE), (PLUS, MINUS)])
    def test_half_identity(self, pair):
        e = Ensemble([(0.5, pair[0]), (0.5, pair[1])])
        assert np.allclose(ensemble_to_density(e).matrix, np.eye(2) / 2, atol=ATOL)

    def test_weight_sum(self):
        with pytest.raises(ValidationError):
            Ensemble([(0.5, ZERO), (0.6, ONE)])

    def test_mixed_qubit_counts(self):
        with pytest.raises(DimensionError):
            Ensemble([(0.5, ZERO), (0.5, PureState.basis("00"))])

    def test_zero_weight_warns(self):
        with pytest.warns(UserWarning, match="zero-weight"):
            Ensemble([(1.0, PLUS), (0.0, ZERO)])

    def test_non_orthogonal_members(self):
        e = Ensemble([(0.5, ZERO), (0.5, PLUS)])
        rho = ensemble_to_density(e)
        assert np.allclose(rho.matrix, [[0.75, 0.25], [0.25, 0.25]], atol=ATOL)


class TestPurity:
    def test_examples(self):
        assert abs(purity(pure_to_density(ZERO)) - 1) < ATOL
        assert abs(purity(DensityMatrix(np.eye(2) / 2)) - 0.5) < ATOL
        assert abs(purity(DensityMatrix(np.diag([0.3, 0.7]))) - 0.58) < ATOL

    def test_bounds(self, rng):
        for dim in (2, 4, 8):
            p = purity(DensityMatrix(random_density(rng, dim)))
            assert 1 / dim - ATOL <= p <= 1 + ATOL


class TestReduce:
    def test_product(self, rng):
        rs, ro = random_density(rng, 2), random_density(rng, 2)
        out = reduce(DensityMatrix(np.kron(rs, ro)), ["S"], register("S", "O"))
        assert np.allclose(out.matrix, rs, atol=ATOL)

    def test_entangled_keep_first(self):
        a, b = math.sqrt(0.3), math.sqrt(0.7) * 1j
        rho = pure_to_density(PureState(np.array([a, 0, 0, b])))
        assert np.allclose(reduce(rho, [0]).matrix, np.diag([0.3, 0.7]), atol=ATOL)

    def test_ghz_keep_two(self):
        ghz = PureState(R2 * (core.ket("000") + core.ket("111")))
        out = reduce(pure_to_density(ghz), ["S"], register(("S", 2), "A"))
        assert np.allclose(out.matrix, np.diag([0.5, 0, 0, 0.5]), atol=ATOL)
        assert np.allclose(reduce(pure_to_density(ghz), [0, 1]).matrix, out.matrix, atol=ATOL)

    def test_by_label_object(self):
        labels = register("S", "O")
        rho = pure_to_density(PureState.basis("10"))
        assert np.allclose(reduce(rho, [labels[0]], labels).matrix, np.diag([0, 1]))

    def test_coverage_violation(self):
        rho = pure_to_density(PureState.basis("000"))
        with pytest.raises(ValidationError):
            reduce(rho, ["S"], register("S", "O"))

    def test_non_contiguous_positions(self):
        rho = pure_to_density(PureState.basis("00"))
        with pytest.raises(ValidationError):
            reduce(rho, ["S"], [SubsystemLabel("S", 0), SubsystemLabel("O", 2)])

    def test_unknown_and_empty(self):
        rho = pure_to_density(PureState.basis("00"))
        with pytest.raises(ValidationError):
            reduce(rho, ["Q"], register("S", "O"))
        with pytest.raises(ValidationError):
            reduce(rho, [], register("S", "O"))


@settings(max_examples=100, deadline=None)
@given(qubit_amplitudes())
def test_pure_states_have_unit_purity(ab):
    assert abs(purity(pure_to_density(PureState.from_amplitudes(*ab))) - 1) < 1e-10


@settings(max_examples=100, deadline=None)
@given(qubit_amplitudes())
def test_reduced_entangled_purity(ab):
    a, b = ab
    rho = reduce(pure_to_density(PureState(np.array([a, 0, 0, b]))), [0])
    p = purity(rho)
    if abs(a) > 1e-6 and abs(b) > 1e-6:
        assert p < 1
    if abs(a) == 0 or abs(b) == 0:
        assert abs(p - 1) < 1e-12


def test_ensembles_always_valid(rng):
    for _ in range(200):
        n = rng.integers(1, 5)
        w = rng.dirichlet(np.ones(n))
        members = []
        for _ in range(n):
            v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            members.append(PureState(v / np.linalg.norm(v)))
        ensemble_to_density(Ensemble(list(zip(w, members))))  # validates on construction


def test_remixed_ensembles_share_density(rng):
    for _ in range(50):
        n = int(rng.integers(1, 4))
        w = rng.dirichlet(np.ones(n))
        members = [PureState(v / np.linalg.norm(v)) for v in rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))]
        e = Ensemble(list(zip(w, members)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            f = ensemble_mix(e, random_unitary(rng, n))
        assert ensemble_to_density(e).allclose(ensemble_to_density(f), 1e-12)


def test_bloch_sampler_is_normalized_and_seeded():
    a = [bloch_amplitudes(np.random.default_rng(3)) for _ in range(2)]
    assert a[0] == a[1]
    rng = np.random.default_rng(0)
    for _ in range(100):
        alpha, beta = bloch_amplitudes(rng)
        assert abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1) < 1e-12
