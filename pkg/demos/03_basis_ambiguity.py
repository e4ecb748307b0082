#!/usr/bin/env python
# One density matrix, many ensembles. The apparatus, not the matrix, fixes
# which basis the mixture is read in.
import numpy as np

from qmix import (DensityMatrix, Ensemble, PureState, ensemble_mix, ensemble_to_density,
                  rotated_pair, scenario_fig1, scenario_fig2, trace_distance)
from qmix.analysis import random_unitary

half = DensityMatrix(np.eye(2) / 2)
for theta in np.linspace(0, np.pi, 5):
    a, b = rotated_pair(theta)
    rho = ensemble_to_density(Ensemble([(0.5, a), (0.5, b)]))
    print(f"theta={theta:.3f}  a={np.round(a.amplitudes.real, 3)}  distance to I/2 = {trace_distance(rho, half):.1e}")

rng = np.random.default_rng(0)
e = Ensemble([(0.2, PureState.basis("0")), (0.8, PureState.from_amplitudes(0.6, 0.8j))])
f = ensemble_mix(e, random_unitary(rng, 2))
print("original weights:", e.weights, " remixed weights:", np.round(f.weights, 4))
print("same density matrix:", ensemble_to_density(e).allclose(ensemble_to_density(f)))

r1 = scenario_fig1(1 / np.sqrt(2), 1 / np.sqrt(2))
r2 = scenario_fig2(1 / np.sqrt(2), 1 / np.sqrt(2))
print("fig1 and fig2 reduced states equal:",
      r1.get_stage("reduced_S").allclose(r2.get_stage("reduced_S")))
print("interpretation bases:", r1.metadata["interpretation_basis"]["labels"],
      r2.metadata["interpretation_basis"]["labels"])
