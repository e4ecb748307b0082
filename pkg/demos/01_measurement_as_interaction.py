#!/usr/bin/env python
# A qubit S is "measured" by a one-qubit apparatus O through a CNOT.
# The joint state stays pure, but the state of S alone is the mixture
# the projective rule predicts.
import numpy as np

from qmix import (PureState, Ensemble, apply_unitary, build_cnot, computational_basis,
                  ensemble_to_density, ontic_collapse, pure_to_density, purity, reduce, register)

np.set_printoptions(precision=4, suppress=True)

alpha, beta = np.sqrt(0.3), np.sqrt(0.7) * 1j
psi = PureState.from_amplitudes(alpha, beta)
ready = PureState.basis("0")

joint = apply_unitary(pure_to_density(psi.tensor(ready)), build_cnot())
rho_s = reduce(joint, ["S"], register("S", "O"))

print("joint state after CNOT (purity %.3f):" % purity(joint))
print(joint.matrix)
print("state of S alone (purity %.3f):" % purity(rho_s))
print(rho_s.matrix)
print("textbook sum_m P_m rho P_m:")
print(ontic_collapse(pure_to_density(psi), computational_basis(), [0]).matrix)

# Same circuit, mixed input with non-orthogonal members.
a = PureState.from_amplitudes(np.sqrt(0.5), np.sqrt(0.5))
b = PureState.from_amplitudes(np.sqrt(0.3), np.sqrt(0.7))
rho1 = ensemble_to_density(Ensemble([(0.5, a), (0.5, b)]))
circuit = reduce(apply_unitary(rho1.tensor(pure_to_density(ready)), build_cnot()), [0])
rule = ontic_collapse(rho1, computational_basis(), [0])
print("mixed input, circuit route:", np.diag(circuit.matrix).real)
print("mixed input, rule route:   ", np.diag(rule.matrix).real)
print("purity before/after: %.4f -> %.4f" % (purity(rho1), purity(circuit)))
