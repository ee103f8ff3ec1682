import itertools

import numpy as np
import pytest

from ueiqc.codes import (
    CensusSizeError, CodeValidationError, build_decoder_table, census_uncorrectable,
    classify_error, get_code, logical_label, logical_operator, make_code, parse_catalog,
    random_syndrome_consistent, residual_after_correction, sample_uncorrectable,
    stabilizer_element, in_stabilizer_group, syndrome_index, validate_code,
)
from ueiqc.pauli import Pauli, commutes, from_label, syndrome_of, to_label


def brute_distance(spec):
    """Minimum weight of a normalizer element outside the stabilizer group."""
    best = spec.n + 1
    for labels in itertools.product("IXYZ", repeat=spec.n):
        e = from_label("".join(labels))
        if e.weight == 0 or e.weight >= best:
            continue
        if any(syndrome_of(e, spec.generators)):
            continue
        if not in_stabilizer_group(spec, e):
            best = e.weight
    return best


class TestCatalog:
    def test_shipped_codes(self):
        for name, (n, k, d) in {"513": (5, 1, 3), "713": (7, 1, 3), "833": (8, 3, 3)}.items():
            spec = get_code(name)
            assert (spec.n, spec.k, spec.d) == (n, k, d)
            assert spec.t == 1 and spec.m == n - k

    def test_unknown(self):
        with pytest.raises(KeyError):
            get_code("nope")

    def test_alias(self):
        assert get_code("steane").name == "713"

    def test_parse_record(self):
        text = """
        # repetition-free toy
        [code]
        name: toy
        n: 2
        k: 1
        d: 1
        stabilizer: ZZ
        logical_x: XX
        logical_z: ZI
        """
        (spec,) = parse_catalog(text)
        assert spec.name == "toy" and len(spec.generators) == 1


class TestValidate:
    def test_five_qubit(self, five):
        r = validate_code(five)
        assert r.ok and r.distance == 3 and r.non_degenerate

    def test_steane_syndromes(self, steane):
        r = validate_code(steane)
        assert r.correctable_syndromes == 22

    @pytest.mark.parametrize("name", ["513", "713"])
    def test_distance_oracle(self, name):
        spec = get_code(name)
        assert brute_distance(spec) == validate_code(spec).distance

    def test_logical_relations(self, eight):
        for i, (lx, lz) in enumerate(zip(eight.logical_x, eight.logical_z)):
            assert not commutes(lx, lz)
            for j in range(eight.k):
                if j != i:
                    assert commutes(lx, eight.logical_z[j])
                    assert commutes(lx, eight.logical_x[j])

    def test_corrupted(self, five):
        gens = list(five.generators)
        gens[1] = from_label("ZIIII")
        bad = make_code("bad", gens, five.logical_x, five.logical_z, 3)
        with pytest.raises(CodeValidationError, match="anticommut"):
            validate_code(bad)


class TestDecoder:
    def test_perfect_code(self, five):
        table = build_decoder_table(five)
        assert len(table.representatives) == 16
        assert table.lookup((0, 0, 0, 0)).is_identity()
        weights = sorted(p.weight for p in table.representatives)
        assert weights == [0] + [1] * 15
        assert not table.beyond_t

    def test_steane(self, steane):
        table = build_decoder_table(steane)
        reps = table.representatives
        assert sum(p.weight == 1 for p in reps) == 21
        assert len(table.beyond_t) == 64 - 22
        assert all(table.representatives[s].weight == 2 for s in table.beyond_t)

    def test_representatives_have_their_syndrome(self, eight):
        table = build_decoder_table(eight)
        for s, rep in enumerate(table.representatives):
            assert syndrome_index(eight, rep) == s


class TestClassify:
    def test_generator(self, five):
        for g in five.generators:
            c = classify_error(five, g)
            assert c.syndrome == (0,) * 4 and c.logical_class == 0 and c.is_correctable

    def test_logical(self, five):
        c = classify_error(five, five.logical_x[0])
        assert not any(c.syndrome) and c.logical_class != 0 and not c.is_correctable

    def test_weight_two(self, five):
        assert not classify_error(five, from_label("XXIII")).is_correctable

    def test_label_round_trip(self, eight):
        for label in range(1 << (2 * eight.k)):
            assert logical_label(eight, logical_operator(eight, label)) == label

    def test_stabilizer_invariance(self, eight, rng):
        e = from_label("XIYZIIZX")
        for idx in rng.integers(0, 1 << eight.m, 20):
            s = stabilizer_element(eight, int(idx))
            assert classify_error(eight, e * s) == classify_error(eight, e)

    def test_residual(self, five):
        assert residual_after_correction(five, from_label("IIYII")) == 0
        assert residual_after_correction(five, five.logical_z[0]) != 0


class TestCensus:
    def test_five_qubit(self, five):
        census = census_uncorrectable(five)
        assert len(census.per_syndrome) == 16
        assert all(s.uncorrectable == 3 for s in census.per_syndrome)
        assert census.nu_exact == 3 and census.total_classes == 64

    def test_eight_qubit(self, eight):
        census = census_uncorrectable(eight)
        assert census.total_classes == 32 * 64
        assert all(s.uncorrectable == 63 for s in census.per_syndrome)

    def test_too_large(self):
        big = make_code("big", [Pauli.identity(11)], [], [], 1)
        with pytest.raises(CensusSizeError):
            census_uncorrectable(big)


class TestSampling:
    def test_uncorrectable(self, eight, rng):
        for _ in range(2000):
            assert not classify_error(eight, sample_uncorrectable(eight, rng)).is_correctable

    def test_exclude_zero(self, five, rng):
        for _ in range(200):
            e = sample_uncorrectable(five, rng, exclude_zero_syndrome=True)
            assert any(syndrome_of(e, five.generators))

    def test_classes_uniform(self, five, rng):
        counts = np.zeros(4, int)
        for _ in range(3000):
            counts[classify_error(five, sample_uncorrectable(five, rng)).logical_class] += 1
        assert counts[0] == 0
        assert np.all(np.abs(counts[1:] - 1000) < 120)

    def test_random_consistent(self, eight, rng):
        s = (1, 0, 1, 1, 0)
        for _ in range(50):
            assert syndrome_of(random_syndrome_consistent(eight, s, rng), eight.generators) == s
