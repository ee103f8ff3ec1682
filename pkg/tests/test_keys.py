import numpy as np
import pytest

from ueiqc.codes import load_catalog
from ueiqc.keys import (
    CodeSelectionError, Dummy, KeyMaterial, KeyParameterError, dummy_spec,
    inverse_permute, keygen, permute, select_code, slot_order,
)
from ueiqc.statevector import StateVector, H, apply_single, fidelity, measure_qubit


class TestKeygen:
    def test_shapes(self, rng):
        for _ in range(50):
            keys = keygen(3, 1, rng)
            assert len(keys.kappa1) == len(keys.kappa2) == len(keys.kappa3) == 2
            assert "".join(map(str, keys.kappa4)) in {"011", "101", "110"}
            assert keys.dummies == 2

    def test_all_positions_reachable(self, rng):
        seen = {keygen(3, 1, rng).kappa4 for _ in range(200)}
        assert len(seen) == 3

    @pytest.mark.parametrize("k,kp", [(2, 2), (3, 0), (1, 1), (3, 4)])
    def test_bad_parameters(self, k, kp, rng):
        with pytest.raises(KeyParameterError):
            keygen(k, kp, rng)

    def test_material_validated(self):
        with pytest.raises(KeyParameterError):
            KeyMaterial(3, 1, (0, 1), (0, 1), (0, 1), (1, 1, 1))


class TestDummies:
    def test_computational_one(self):
        for k2 in (0, 1):
            d = Dummy(1, k2, 0)
            assert d.basis == "Z" and d.expected == 1
            assert fidelity(d.state(), StateVector(np.array([0, 1.0]), 1)) == pytest.approx(1)

    def test_minus(self):
        d = Dummy(0, 1, 1)
        minus = StateVector(np.array([1, -1]) / np.sqrt(2), 1)
        assert d.basis == "X" and d.expected == 1
        assert fidelity(d.state(), minus) == pytest.approx(1)

    def test_plus(self):
        d = Dummy(1, 0, 1)
        plus = StateVector(np.array([1, 1]) / np.sqrt(2), 1)
        assert d.expected == 0
        assert fidelity(d.state(), plus) == pytest.approx(1)

    def test_outcomes_deterministic(self, rng):
        for bits in np.ndindex(2, 2, 2):
            d = Dummy(*bits)
            bit, _ = measure_qubit(d.state(), 0, d.basis, rng)
            assert bit == d.expected

    def test_spec_length(self, rng):
        keys = keygen(5, 2, rng)
        assert len(dummy_spec(keys)) == 3


class TestPermute:
    def test_placement(self):
        assert permute(["psi"], ["d1", "d2"], (1, 0, 1)) == ["d1", "psi", "d2"]

    def test_identity(self):
        assert permute(["a", "b"], [], (0, 0)) == ["a", "b"]

    def test_inverse(self, rng):
        for _ in range(30):
            keys = keygen(6, 2, rng)
            payload, dummies = ["p0", "p1"], [f"d{i}" for i in range(4)]
            reg = permute(payload, dummies, keys.kappa4)
            assert inverse_permute(reg, keys.kappa4) == (payload, dummies)
            assert [(payload + dummies)[i] for i in slot_order(keys.kappa4)] == reg

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            permute(["a"], ["d"], (1, 1, 0))


class TestSelectCode:
    catalog = load_catalog()

    def test_noiseless_smallest(self):
        assert select_code(0.0, self.catalog, 1e-12).name == "513"

    def test_one_percent(self):
        assert select_code(0.01, self.catalog, 1e-3).name == "513"

    def test_too_noisy(self):
        with pytest.raises(CodeSelectionError):
            select_code(0.2, self.catalog, 1e-3)

    def test_dummy_capacity(self):
        assert select_code(0.0, self.catalog, 1e-3, min_k=2).name == "833"
