"""
One session, end to end
=======================

A single logical qubit is hidden among two dummies in the [[8,3,3]] code,
masked by an uncorrectable error and sent through a relay.  The classical
transcript is printed as it would be written to disk.
"""
from ueiqc import SessionConfig, run_session
from ueiqc.protocol import format_transcript

cfg = SessionConfig(code="833", k_prime=1, hop_p=(0.01, 0.01), seed=42)
report = run_session(cfg)

print(f"outcome   {report.outcome}")
print(f"fidelity  {report.fidelity:.12f}")
print(f"syndromes measured per hop: {report.hop_syndromes}")
print("\ntranscript:")
print(format_transcript(report.transcript), end="")

# forced single-qubit errors on every hop are always repaired
ok = sum(run_session(SessionConfig(hop_p=(0.0,) * 4, seed=s, hop_error_weight=1)).delivered
         for s in range(100))
print(f"\n{ok}/100 sessions delivered with a weight-1 error on each of 4 hops")
