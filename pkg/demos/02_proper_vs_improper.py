#!/usr/bin/env python
# An ignorance mixture of |0> and |1>, and half of a Bell pair, cannot be told
# apart by any observable on the qubit itself. They can be told apart
# on the pair.
import numpy as np

from qmix import (DensityMatrix, Ensemble, PureState, composite_witness, proper_improper_audit,
                  pure_to_density, trace_distance)

proper = Ensemble([(0.5, PureState.basis("0")), (0.5, PureState.basis("1"))])
bell = pure_to_density(PureState(np.array([1, 0, 0, 1]) / np.sqrt(2)))

res = proper_improper_audit(proper, bell, n_observables=1000, seed=7, shots=50000)
print(f"random observables tried:      {res.trials}")
print(f"largest expectation gap:       {res.max_abs_gap:.2e}")
print(f"largest outcome-probability gap: {res.max_distribution_gap:.2e}")
print(f"sampled frequencies agree (3 sigma): {res.monte_carlo.agree} (max z = {res.monte_carlo.max_z:.2f})")

# On the whole pair, the entangled state and the "one of |00>, |11>" mixture differ.
mixture = DensityMatrix(np.diag([0.5, 0, 0, 0.5]))
obs, gap = composite_witness(bell, mixture)
print(f"pair trace distance:  {trace_distance(bell, mixture):.3f}")
print(f"Bell-projector gap:   {gap:.3f}")
