#!/usr/bin/env python
# The friend F measures S inside the lab; Wigner W treats the lab as unitary.
# Both assign the same mixed state to S. Only F's extra knowledge sharpens it.
import numpy as np

from qmix import scenario_wigner

np.set_printoptions(precision=3, suppress=True)

report = scenario_wigner(np.sqrt(0.25), np.sqrt(0.75), friend_outcome="1")
w, f = report.metadata["observers"]["W"], report.metadata["observers"]["F"]
print("W's state of S:")
print(w.description_of_S.matrix.real)
print("F's ontic state of S:")
print(report.get_stage("friend_ontic_S").matrix.real)
print(f"F knows outcome {f.known_outcome} (p = {f.probability:.2f}):")
print(f.description_of_S.matrix.real)
for c in report.checks:
    print(("ok  " if c.passed else "FAIL"), c.description)
