"""
Stabilizer codes, decoders and uncorrectable classes
====================================================

Load the shipped catalog, check each code exhaustively, then count how many
logical classes per syndrome the lookup decoder cannot fix.  The exact count
is compared with the closed-form estimate.
"""
from ueiqc import census_uncorrectable, get_code, load_catalog, validate_code
from ueiqc.analysis import nu_estimate
from ueiqc.codes import build_decoder_table, classify_error
from ueiqc.pauli import from_label, to_label

# every code is checked for commutation, independence and distance
for name, spec in load_catalog().items():
    r = validate_code(spec)
    print(f"{spec}: distance {r.distance}, non-degenerate {r.non_degenerate}, "
          f"{r.correctable_syndromes} syndromes for weight <= t")

# the five-qubit code is perfect: 15 single-qubit errors, 15 nonzero syndromes
five = get_code("513")
table = build_decoder_table(five)
print("\ndecoder entries for [[5,1,3]]:")
for s, rep in enumerate(table.representatives[:6]):
    print(f"  syndrome {s:04b} -> {to_label(rep)}")

# a weight-2 error lands in the wrong class for its syndrome
c = classify_error(five, from_label("XXIII"))
print(f"\nXXIII: syndrome {c.syndrome}, class {c.logical_class}, correctable {c.is_correctable}")

# exact census against the estimate
print()
for name in ("513", "713", "833"):
    spec = get_code(name)
    census = census_uncorrectable(spec)
    est = nu_estimate(spec.n, spec.k, spec.t)
    print(f"{spec}: exact {census.nu_exact:g} per syndrome, estimate {float(est):.4f}")
