"""
What the eavesdropper can learn
===============================

Averaging over the unknown Pauli mask leaves the maximally mixed state, so
the Holevo quantity over messages vanishes.  The count of uncorrectable
classes is then traced across code rates and written as CSV.
"""
import sys

import numpy as np

from ueiqc import eavesdropper_state, get_code, holevo_bound
from ueiqc.analysis import acc_info_bound, nu_bound, nu_crossover, nu_curve, write_nu_csv
from ueiqc.statevector import StateVector

spec = get_code("833")
states = [eavesdropper_state(spec, StateVector(np.eye(8)[m].astype(complex), 3)) for m in range(8)]
dev = max(np.abs(s.rho - np.eye(256) / 256).max() for s in states)
print(f"twirled states deviate from I/256 by at most {dev:.1e}")
print(f"Holevo quantity over the 8 messages: {holevo_bound(states):.1e} bits")
print(f"accessible-information bound at eps=0.01, n=102: {acc_info_bound(0.01, 102)} bits")

print(f"\nN_u(102, 1/2) = {nu_bound(102, 0.5):.4e}")
print(f"large-n crossover rate R* = {nu_crossover():.6f}")
for n in (20, 102, 1000):
    print(f"  n={n:<5} N_u switches on at R = {nu_crossover(n):.4f}")

# a small slice of the curve; redirect to a file for plotting elsewhere
write_nu_csv(nu_curve([20, 60, 100], [0.1, 0.2, 0.3, 0.5]), sys.stdout)
