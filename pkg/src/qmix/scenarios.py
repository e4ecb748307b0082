"""Runnable measurement-as-interaction scenarios.

Each ``scenario_*`` function builds the relevant circuit, keeps every
intermediate state in a :class:`ScenarioReport` and records numeric checks
against the closed-form expectations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import core
from .analysis import (
    AuditResult,
    composite_witness,
    ensemble_mix,
    proper_improper_audit,
    random_unitary,
    rotated_pair,
    rotation_matrix,
    trace_distance,
)
from .channels import (
    MeasurementBasis,
    apply_unitary,
    build_cnot,
    build_h,
    computational_basis,
    epistemic_collapse,
    lift,
    measurement_circuit,
    ontic_collapse,
    plus_minus_basis,
)
from .errors import ValidationError, ZeroProbabilityError
from .states import (
    NORM_ATOL,
    DensityMatrix,
    Ensemble,
    PureState,
    SubsystemLabel,
    ensemble_to_density,
    pure_to_density,
    purity,
    reduce,
    register,
)

DEFAULT_TOLERANCE = 1e-12

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


@dataclass(frozen=True)
class Check:
    description: str
    expected: Any
    actual: Any
    tolerance: float
    deviation: float
    passed: bool


@dataclass
class ScenarioReport:
    """Inputs, intermediate states, metrics and checks of one scenario run."""

    scenario_id: str
    parameters: dict = field(default_factory=dict)
    stages: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def stage(self, label: str, rho: DensityMatrix) -> DensityMatrix:
        if any(lab == label for lab, _ in self.stages):
            raise ValueError(f"duplicate stage label {label!r}")
        self.stages.append((label, rho))
        return rho

    def get_stage(self, label: str) -> DensityMatrix:
        for lab, rho in self.stages:
            if lab == label:
                return rho
        raise KeyError(label)

    def check(self, description: str, expected, actual, tolerance: float) -> Check:
        exp = expected.matrix if isinstance(expected, DensityMatrix) else expected
        act = actual.matrix if isinstance(actual, DensityMatrix) else actual
        dev = core.max_abs_deviation(np.atleast_1d(exp), np.atleast_1d(act))
        c = Check(description, exp, act, tolerance, dev, dev <= tolerance)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True, eq=False)
class ObserverRecord:
    """What one observer holds as the state of S."""

    observer: SubsystemLabel
    description_of_S: DensityMatrix
    known_outcome: str | None = None
    probability: float | None = None


def _basis_metadata(basis: MeasurementBasis) -> dict:
    return {
        "name": basis.name,
        "labels": list(basis.outcome_labels),
        "vectors": [v.amplitudes for v in basis.vectors],
    }


def _qubit_state(alpha: complex, beta: complex) -> PureState:
    alpha, beta = complex(alpha), complex(beta)
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm2 - 1.0) > NORM_ATOL:
        raise ValidationError(f"|alpha|^2 + |beta|^2 = {norm2!r}, expected 1")
    return PureState.from_amplitudes(alpha, beta)


def _epistemic_branches(report, rho, basis, targets, keep, labels, tolerance, prefix="epistemic"):
    """Add one stage per nonzero-probability outcome and check they recompose the ontic state."""
    recomposed = np.zeros((2 ** sum(lab.qubits for lab in labels if lab.name in keep),) * 2, dtype=complex)
    probs = {}
    for outcome in basis.outcome_labels:
        try:
            branch, p = epistemic_collapse(rho, basis, targets, outcome)
        except ZeroProbabilityError:
            probs[outcome] = 0.0
            continue
        branch_s = reduce(branch, keep, labels)
        report.stage(f"{prefix}_{outcome}", branch_s)
        probs[outcome] = p
        recomposed += p * branch_s.matrix
    report.metrics.update({f"p_{o}": p for o, p in probs.items()})
    report.check("branch probabilities sum to 1", 1.0, sum(probs.values()), tolerance)
    return probs, recomposed


def scenario_fig1(alpha: complex, beta: complex, tolerance: float = DEFAULT_TOLERANCE) -> ScenarioReport:
    """CNOT measurement of S by a one-qubit apparatus O ready in ``|0>``."""
    psi = _qubit_state(alpha, beta)
    a2, b2 = abs(psi.amplitudes[0]) ** 2, abs(psi.amplitudes[1]) ** 2
    labels = register("S", "O")
    report = ScenarioReport(
        "fig1",
        parameters={"alpha": complex(alpha), "beta": complex(beta)},
        metadata={
            "register": ["S", "O"],
            "interaction": "CNOT(S -> O)",
            "interpretation_basis": _basis_metadata(computational_basis()),
            "reduced_S_provenance": "partial trace of entangled S+O",
        },
    )

    rho_s_in = report.stage("input_S", pure_to_density(psi))
    joint_in = report.stage("input", pure_to_density(psi.tensor(PureState(KET0))))
    joint = report.stage("post_cnot", apply_unitary(joint_in, build_cnot()))
    rho_s = report.stage("reduced_S", reduce(joint, ["S"], labels))

    entangled = PureState(psi.amplitudes[0] * core.ket("00") + psi.amplitudes[1] * core.ket("11"))
    expected_s = np.diag([a2, b2]).astype(complex)
    report.check("post-CNOT state is alpha|00> + beta|11>", pure_to_density(entangled), joint, tolerance)
    report.check("reduced S = |alpha|^2|0><0| + |beta|^2|1><1|", expected_s, rho_s, tolerance)
    report.check("joint purity is 1", 1.0, purity(joint), tolerance)
    report.check("reduced S purity = |alpha|^4 + |beta|^4", a2**2 + b2**2, purity(rho_s), tolerance)

    ontic = report.stage("ontic_rule_S", ontic_collapse(rho_s_in, computational_basis(), [0]))
    report.check("reduced S equals textbook sum_m P_m rho P_m", ontic, rho_s, tolerance)

    _, recomposed = _epistemic_branches(
        report, joint, computational_basis(), [1], ["S"], labels, tolerance
    )
    report.check("epistemic branches recompose the ontic mixture", rho_s, recomposed, tolerance)

    report.metrics.update(
        purity_input_S=purity(rho_s_in),
        purity_joint=purity(joint),
        purity_S=purity(rho_s),
    )
    return report


def scenario_mixed_input(e: Ensemble, tolerance: float = DEFAULT_TOLERANCE) -> ScenarioReport:
    """Feed a mixed S state through the CNOT circuit and compare with the projective rule."""
    if e.qubits != 1:
        raise ValidationError("mixed_input needs an ensemble of one-qubit states")
    labels = register("S", "O")
    report = ScenarioReport(
        "mixed_input",
        parameters={"ensemble": [(w, s.amplitudes) for w, s in e.members]},
        metadata={
            "register": ["S", "O"],
            "interaction": "CNOT(S -> O)",
            "interpretation_basis": _basis_metadata(computational_basis()),
        },
    )
    rho1 = report.stage("input_S", ensemble_to_density(e))
    joint_in = report.stage("input", rho1.tensor(pure_to_density(PureState(KET0))))
    joint = report.stage("post_cnot", apply_unitary(joint_in, build_cnot()))
    circuit = report.stage("reduced_S", reduce(joint, ["S"], labels))
    rule = report.stage("ontic_rule_S", ontic_collapse(rho1, computational_basis(), [0]))

    w0 = sum(w * abs(s.amplitudes[0]) ** 2 for w, s in e.members)
    w1 = sum(w * abs(s.amplitudes[1]) ** 2 for w, s in e.members)
    report.check("circuit route equals sum_m P_m rho P_m", rule, circuit, tolerance)
    report.check("circuit route matches closed-form diagonal mixture", np.diag([w0, w1]), circuit, tolerance)

    report.metrics.update(
        purity_input_S=purity(rho1),
        purity_S=purity(circuit),
        purity_drop=purity(rho1) - purity(circuit),
        weight_0=float(w0),
        weight_1=float(w1),
    )
    return report


def scenario_fig2(alpha: complex, beta: complex, tolerance: float = DEFAULT_TOLERANCE) -> ScenarioReport:
    """Measurement of S in the ``|+>, |->`` basis; S starts in ``alpha|+> + beta|->``."""
    coeffs = _qubit_state(alpha, beta)
    basis = plus_minus_basis()
    plus, minus = (v.amplitudes for v in basis.vectors)
    a, b = coeffs.amplitudes
    psi = PureState(a * plus + b * minus)
    labels = register("S", "O")
    report = ScenarioReport(
        "fig2",
        parameters={"alpha": complex(alpha), "beta": complex(beta)},
        metadata={
            "register": ["S", "O"],
            "interaction": "(H x H) CNOT (H x I)",
            "interpretation_basis": _basis_metadata(basis),
        },
    )
    gate = measurement_circuit(basis)
    joint_in = report.stage("input", pure_to_density(psi.tensor(PureState(KET0))))
    joint = report.stage("post_circuit", apply_unitary(joint_in, gate))
    rho_s = report.stage("reduced_S", reduce(joint, ["S"], labels))

    correlated = PureState(a * np.kron(plus, plus) + b * np.kron(minus, minus))
    report.check("post-circuit state is alpha|++> + beta|-->", pure_to_density(correlated), joint, tolerance)
    expected_s = abs(a) ** 2 * core.outer(plus) + abs(b) ** 2 * core.outer(minus)
    report.check("reduced S = |alpha|^2|+><+| + |beta|^2|-><-|", expected_s, rho_s, tolerance)
    report.check(
        "reduced S equals sum_m P_m rho P_m in the +/- basis",
        ontic_collapse(pure_to_density(psi), basis, [0]),
        rho_s,
        tolerance,
    )

    h = build_h().matrix
    in_pm = h @ rho_s.matrix @ h  # reduced state expressed in the +/- basis
    report.metrics.update(
        purity_S=purity(rho_s),
        weight_plus=float(in_pm[0, 0].real),
        weight_minus=float(in_pm[1, 1].real),
    )

    if abs(abs(a) ** 2 - 0.5) <= NORM_ATOL:
        fig1 = scenario_fig1(a, b, tolerance).get_stage("reduced_S")
        report.stage("fig1_reduced_S", fig1)
        report.check("reduced S equals the computational-basis circuit's reduced S", fig1, rho_s, tolerance)
        report.metrics["trace_distance_to_fig1"] = trace_distance(fig1, rho_s)
    return report


def scenario_fig3(tolerance: float = DEFAULT_TOLERANCE, cat: bool = False) -> ScenarioReport:
    """Alice (one qubit, ready in ``|0>``) measures the first qubit of a Bell pair.

    With ``cat=True`` the outcomes are additionally labelled alive/dead; the
    computation is unchanged.
    """
    labels = register(("S", 2), "A")
    report = ScenarioReport(
        "fig3",
        metadata={
            "register": ["S1", "S2", "A"],
            "interaction": "CNOT(S1 -> A)",
            "interpretation_basis": _basis_metadata(computational_basis()),
            "outcome_aliases": {"0": "alive", "1": "dead"} if cat else {},
        },
    )
    bell = PureState(math.sqrt(0.5) * (core.ket("00") + core.ket("11")))
    joint_in = report.stage("input", pure_to_density(bell.tensor(PureState(KET0))))
    joint = report.stage("post_cnot", apply_unitary(joint_in, lift(build_cnot(), 3, [0, 2])))
    rho_s = report.stage("reduced_S", reduce(joint, ["S"], labels))

    ghz = PureState(math.sqrt(0.5) * (core.ket("000") + core.ket("111")))
    report.check("post-CNOT state is (|000> + |111>)/sqrt2", pure_to_density(ghz), joint, tolerance)
    expected_s = 0.5 * core.outer(core.ket("00")) + 0.5 * core.outer(core.ket("11"))
    report.check("reduced S = 1/2|00><00| + 1/2|11><11|", expected_s, rho_s, tolerance)

    probs, recomposed = _epistemic_branches(
        report, joint, computational_basis(), [2], ["S"], labels, tolerance
    )
    report.check("outcome 0 has probability 1/2", 0.5, probs["0"], tolerance)
    report.check("outcome 1 has probability 1/2", 0.5, probs["1"], tolerance)
    report.check("branch 0 is |00><00|", core.outer(core.ket("00")), report.get_stage("epistemic_0"), tolerance)
    report.check("branch 1 is |11><11|", core.outer(core.ket("11")), report.get_stage("epistemic_1"), tolerance)
    report.check("epistemic branches recompose the reduced S", rho_s, recomposed, tolerance)
    report.metrics["purity_S"] = purity(rho_s)
    return report


def scenario_wigner(
    alpha: complex,
    beta: complex,
    friend_outcome: str | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ScenarioReport:
    """Friend F measures S by CNOT inside a lab; Wigner W describes the lab unitarily.

    W's state of S is the partial trace of the lab's joint state. F's ontic
    state of S is the textbook nonselective update. If ``friend_outcome`` is
    given, F also holds the selective update for that outcome.
    """
    psi = _qubit_state(alpha, beta)
    labels = register("S", "F")
    report = ScenarioReport(
        "wigner",
        parameters={"alpha": complex(alpha), "beta": complex(beta), "friend_outcome": friend_outcome},
        metadata={"register": ["S", "F"], "interaction": "CNOT(S -> F)"},
    )
    basis = computational_basis()
    rho_s_in = report.stage("input_S", pure_to_density(psi))
    joint_in = report.stage("input", pure_to_density(psi.tensor(PureState(KET0))))
    joint = report.stage("post_cnot", apply_unitary(joint_in, build_cnot()))

    w_desc = report.stage("wigner_S", reduce(joint, ["S"], labels))
    f_ontic = report.stage("friend_ontic_S", ontic_collapse(rho_s_in, basis, [0]))
    report.check("W and F ontic descriptions of S agree", w_desc, f_ontic, tolerance)

    wigner = ObserverRecord(SubsystemLabel("W", 0, 1), w_desc)
    friend = ObserverRecord(labels[1], f_ontic)
    if friend_outcome is not None:
        f_state, p = epistemic_collapse(f_ontic, basis, [0], friend_outcome)
        report.stage("friend_epistemic_S", f_state)
        k = basis.index(friend_outcome)
        report.check(
            "F's epistemic state is the outcome projector",
            basis.projectors()[k].matrix,
            f_state,
            tolerance,
        )
        report.check("F's outcome has Born probability |amplitude|^2", abs(psi.amplitudes[k]) ** 2, p, tolerance)
        report.check("W's description is unchanged by F's knowledge", w_desc, reduce(joint, ["S"], labels), tolerance)
        friend = ObserverRecord(labels[1], f_state, str(friend_outcome), p)
        report.metrics["friend_outcome_probability"] = p

    probs = [abs(x) ** 2 for x in psi.amplitudes]
    report.check("outcome probabilities sum to 1", 1.0, sum(probs), tolerance)
    report.metrics["purity_S"] = purity(w_desc)
    report.metadata["observers"] = {"W": wigner, "F": friend}
    return report


def bell_state() -> PureState:
    return PureState(math.sqrt(0.5) * (core.ket("00") + core.ket("11")))


def ignorance_ensemble() -> Ensemble:
    return Ensemble([(0.5, PureState(KET0)), (0.5, PureState(KET1))])


def scenario_audit(
    ensemble: Ensemble | None = None,
    joint: DensityMatrix | None = None,
    trials: int = 1000,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    shots: int = 0,
) -> ScenarioReport:
    """Proper vs improper mixture audit on S, plus the composite-system witness.

    Defaults to the ignorance ensemble ``{(1/2, |0>), (1/2, |1>)}`` against
    the Bell state. The composite comparison pits the joint state against
    its nonselective collapse on S.
    """
    canonical = ensemble is None and joint is None
    ensemble = ignorance_ensemble() if ensemble is None else ensemble
    joint = pure_to_density(bell_state()) if joint is None else joint
    report = ScenarioReport(
        "audit",
        parameters={"ensemble": [(w, s.amplitudes) for w, s in ensemble.members], "trials": trials, "seed": seed},
        metadata={"proper_S_provenance": "ensemble", "improper_S_provenance": "partial trace of joint"},
    )
    result: AuditResult = proper_improper_audit(ensemble, joint, trials, seed, shots=shots)
    report.stage("proper_S", ensemble_to_density(ensemble))
    report.stage("joint", joint)
    labels = [SubsystemLabel("S", 0, ensemble.qubits), SubsystemLabel("O", 1, joint.qubits - ensemble.qubits)]
    report.stage("improper_S", reduce(joint, ["S"], labels))
    report.check("max expectation gap over random observables is 0", 0.0, result.max_abs_gap, tolerance)
    report.check("max outcome-distribution gap is 0", 0.0, result.max_distribution_gap, tolerance)

    collapsed = report.stage(
        "collapsed_joint",
        ontic_collapse(joint, computational_basis(ensemble.qubits), list(range(ensemble.qubits))),
    )
    _, witness_gap = composite_witness(joint, collapsed, seed=seed)
    composite_td = trace_distance(joint, collapsed)
    if canonical:
        report.check("composite trace distance is 1/2", 0.5, composite_td, tolerance)
        report.check("Bell-projector witness gap is 1/2", 0.5, witness_gap, tolerance)

    report.metrics.update(
        max_abs_gap=result.max_abs_gap,
        max_distribution_gap=result.max_distribution_gap,
        state_distance=result.state_distance,
        composite_trace_distance=composite_td,
        witness_gap=witness_gap,
    )
    if result.monte_carlo is not None:
        report.metrics.update(mc_shots=result.monte_carlo.shots, mc_max_z=result.monte_carlo.max_z)
    report.metadata["audit"] = result
    return report


def scenario_ambiguity(
    n_angles: int = 50, seed: int = 0, tolerance: float = DEFAULT_TOLERANCE
) -> ScenarioReport:
    """Many ensembles, one density matrix: rotated pairs and unitary remixing."""
    report = ScenarioReport("ambiguity", parameters={"n_angles": n_angles, "seed": seed})
    half_i = DensityMatrix(np.eye(2) / 2)
    report.stage("maximally_mixed", half_i)
    thetas = 2 * math.pi * np.arange(n_angles) / n_angles
    base = ignorance_ensemble()

    pair_gap = mix_gap = 0.0
    for theta in thetas:
        a, b = rotated_pair(theta)
        rho = ensemble_to_density(Ensemble([(0.5, a), (0.5, b)]))
        pair_gap = max(pair_gap, trace_distance(rho, half_i))
        mixed = ensemble_mix(base, rotation_matrix(theta))
        mix_gap = max(mix_gap, trace_distance(ensemble_to_density(mixed), half_i))
    report.check("1/2(|a><a| + |b><b|) = I/2 for every rotated pair", 0.0, pair_gap, tolerance)
    report.check("orthogonally remixed ensembles keep I/2", 0.0, mix_gap, tolerance)

    pm = ensemble_mix(base, build_h().matrix)
    report.stage("hadamard_remix", ensemble_to_density(pm))
    plus, minus = (v.amplitudes for v in plus_minus_basis().vectors)
    report.check(
        "Hadamard remix members are |+>, |-> with weight 1/2",
        np.array([0.5, 0.5, 1.0, 1.0]),
        np.array([pm.weights[0], pm.weights[1],
                  abs(np.vdot(plus, pm.members[0][1].amplitudes)) ** 2,
                  abs(np.vdot(minus, pm.members[1][1].amplitudes)) ** 2]),
        tolerance,
    )

    rng = np.random.default_rng(seed)
    states = [PureState(v / np.linalg.norm(v)) for v in rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))]
    w = rng.dirichlet(np.ones(3))
    generic = Ensemble(list(zip(w, states)))
    remixed = ensemble_mix(generic, random_unitary(rng, 3))
    hjw_gap = trace_distance(ensemble_to_density(generic), ensemble_to_density(remixed))
    report.check("complex unitary remix of a generic ensemble keeps rho", 0.0, hjw_gap, tolerance)

    bell = pure_to_density(bell_state())
    pm_bell = pure_to_density(PureState(math.sqrt(0.5) * (np.kron(plus, plus) + np.kron(minus, minus))))
    report.check("Bell state equals (|++> + |-->)/sqrt2", bell, pm_bell, tolerance)

    report.metrics.update(
        max_rotated_pair_distance=pair_gap,
        max_orthogonal_remix_distance=mix_gap,
        unitary_remix_distance=hjw_gap,
    )
    return report
