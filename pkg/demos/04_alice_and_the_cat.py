#!/usr/bin/env python
# Alice interacts with the first qubit of an entangled pair. Tracing her out
# leaves the pair in a mixture of |00> and |11>; reading her pointer picks one.
import numpy as np

from qmix import scenario_fig3

np.set_printoptions(precision=3, suppress=True)

report = scenario_fig3(cat=True)
print("stages:", [label for label, _ in report.stages])
print("reduced state of the pair:")
print(report.get_stage("reduced_S").matrix.real)
aliases = report.metadata["outcome_aliases"]
for outcome in ("0", "1"):
    print(f"Alice reads {outcome} ({aliases[outcome]}): p = {report.metrics['p_' + outcome]:.3f}")
    print(report.get_stage(f"epistemic_{outcome}").matrix.real)
print("all checks pass:", report.passed)
