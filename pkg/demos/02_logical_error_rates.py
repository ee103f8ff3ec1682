"""
Logical error rates: Monte Carlo against the binomial tail
==========================================================

Pauli-frame trials under depolarizing noise, compared with the probability
that more than t qubits fail.  The lookup decoder also fixes some heavier
errors, so the empirical rate may sit slightly below the tail.
"""
import numpy as np

from ueiqc import ChannelModel, frame_trials, get_code, logical_error_rate
from ueiqc.analysis import p_L_bound, p_L_candidates, teleport_overhead
from ueiqc.rng import substream

five = get_code("513")
for i, p in enumerate((0.001, 0.01, 0.05, 0.1)):
    stats = frame_trials(five, ChannelModel(p), substream(1, "demo", i), 10**6)
    tail = float(logical_error_rate(5, 1, p))
    print(f"p={p:<6} empirical {stats.rate:.4e} +- {stats.sigma:.1e}   tail {tail:.4e}")

# teleportation cost of a five-node line and the encoded alternative
r = teleport_overhead(2, 2, 2)
print(f"\nteleportation: N_EP={r.N_EP}, O_ES={r.O_ES}, repetitions={r.repetitions}, N_T={r.N_T}")
print(f"encoding {r.N_T} qubits at rate 1/2: p_L = {p_L_bound(r.N_T, 0.01).sci(5)}")

# the same formula over 56..63 qubits under the three t conventions
rows = p_L_candidates(0.01)
vals = np.array([float(c.p_L) for c in rows])
print(f"\n56..63 qubits: p_L spans {vals.min():.3e} .. {vals.max():.3e}")
