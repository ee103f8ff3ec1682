import io
import shlex

import pytest

from ueiqc.analysis import read_nu_csv
from ueiqc.cli import main
from ueiqc.report import fmt, render_csv, render_table, render_text


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr()


def replay(capsys, text):
    line = next(ln for ln in text.splitlines() if ln.startswith("# command: "))
    return run(capsys, shlex.split(line[len("# command: "):]))


class TestOverhead:
    def test_five_node(self, capsys):
        code, out = run(capsys, ["overhead", "--N", "2", "--Na", "2", "--nbsm", "2"])
        assert code == 0
        assert "teleportation.N_T" in out.out and "  102\n" in out.out
        assert "comparison_only" in out.out and "4.0846266e-11" in out.out


class TestSimulate:
    argv = ["simulate", "--code", "833", "--kprime", "1", "--p", "0", "--seed", "7"]

    def test_identical_transcripts(self, capsys, tmp_path):
        paths = [tmp_path / "a.tsv", tmp_path / "b.tsv"]
        outs = []
        for p in paths:
            code, out = run(capsys, self.argv + ["--transcript", str(p)])
            assert code == 0
            outs.append(out.out)
        assert paths[0].read_text() == paths[1].read_text()
        assert outs[0] == outs[1] and "outcome: Delivered" in outs[0]

    def test_replay(self, capsys):
        _, first = run(capsys, self.argv + ["--relays", "2", "--p", "0.02"])
        _, second = replay(capsys, first.out)
        assert first.out == second.out

    def test_five_qubit_rejected(self, capsys):
        code, out = run(capsys, ["simulate", "--code", "513", "--seed", "1"])
        assert code == 2 and "k'" in out.err

    def test_unknown_code(self, capsys):
        code, out = run(capsys, ["simulate", "--code", "nope", "--seed", "1"])
        assert code == 2 and "nope" in out.err

    def test_seed_required(self, capsys):
        assert run(capsys, ["simulate"])[0] == 2

    def test_malformed_config(self, capsys, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("code: [")
        assert run(capsys, ["simulate", "--config", str(path)])[0] == 2

    def test_config_file(self, capsys, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("code: '833'\nk_prime: 2\nseed: 3\nchannel:\n  hops: [0.0, 0.0]\n")
        code, out = run(capsys, ["simulate", "--config", str(path)])
        assert code == 0 and "k_prime: 2" in out.out

    def test_abort_exit_status(self, capsys):
        codes = {run(capsys, ["simulate", "--attack", "uniform-coset", "--seed", str(s)])[0]
                 for s in range(12)}
        assert codes == {0, 3}


class TestMonteCarlo:
    argv = ["montecarlo", "--code", "513", "--p", "0.05", "--trials", "50000", "--seed", "4"]

    def test_deterministic_and_replayable(self, capsys):
        _, a = run(capsys, self.argv)
        _, b = replay(capsys, a.out)
        assert a.out == b.out and "within_3_sigma: true" in a.out

    def test_threads_do_not_change_bytes(self, capsys, monkeypatch):
        argv = ["montecarlo", "--p", "0.02", "--trials", str(3 * (1 << 20) // 2), "--seed", "1"]
        _, one = run(capsys, argv + ["--workers", "1"])
        monkeypatch.setenv("UEIQC_THREADS", "3")
        _, many = run(capsys, argv)
        assert one.out == many.out


class TestAttack:
    argv = ["attack", "--trials", "5000", "--seed", "2"]

    def test_reproducible(self, capsys):
        _, a = run(capsys, self.argv)
        _, b = run(capsys, self.argv + ["--workers", "2"])
        _, c = replay(capsys, a.out)
        assert a.out == b.out == c.out
        assert "coset_matches" in a.out and "logical_class_match: 0.015625" in a.out

    def test_bad_backend_combination(self, capsys):
        code, _ = run(capsys, self.argv + ["--attack", "measure-forward"])
        assert code == 2

    def test_zero_trials(self, capsys):
        assert run(capsys, ["attack", "--trials", "0", "--seed", "1"])[0] == 2


class TestNu:
    def test_exact_and_estimate(self, capsys):
        code, out = run(capsys, ["nu", "--code", "513", "--exact"])
        assert code == 0
        assert "exact.uncorrectable_per_syndrome  [3]" in out.out
        assert "estimate                          2.75" in out.out

    def test_curve_csv(self, capsys, tmp_path):
        path = tmp_path / "nu.csv"
        code, out = run(capsys, ["nu", "--n", "102", "--curve", str(path), "--nmax", "20",
                                 "--rstep", "0.1"])
        assert code == 0
        rows = read_nu_csv(io.StringIO(path.read_text()))
        assert len(rows) == 20 * 9 and rows[0]["n"] == 1

    def test_bound_printed(self, capsys):
        _, out = run(capsys, ["nu", "--n", "102", "--R", "0.5"])
        assert "bound.nu_bound" in out.out and "5070602400912917605986806" in out.out


class TestOther:
    def test_accinfo(self, capsys):
        code, out = run(capsys, ["accinfo", "--n", "102"])
        assert code == 0 and "holevo_bits: 0" in out.out and "bits: 2.04" in out.out

    def test_accinfo_replay(self, capsys):
        _, a = run(capsys, ["accinfo", "--kprime", "2", "--seed", "9"])
        _, b = replay(capsys, a.out)
        assert a.out == b.out

    def test_validate(self, capsys):
        code, out = run(capsys, ["validate"])
        assert code == 0 and out.out.count(".ok") == 3 and "false" not in out.out

    def test_validate_unknown(self, capsys):
        assert run(capsys, ["validate", "--code", "nope"])[0] == 2

    @pytest.mark.parametrize("fmtname", ["csv", "table", "text"])
    def test_formats(self, capsys, fmtname):
        code, out = run(capsys, ["overhead", "--format", fmtname])
        assert code == 0 and "102" in out.out

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "r.txt"
        _, out = run(capsys, ["validate", "--out", str(path)])
        assert path.read_text() == out.out


class TestReport:
    def test_small_numbers_scientific(self):
        assert fmt(4.12e-7) == "4.1200000e-07"
        assert fmt(0.0123) == "0.0123"

    def test_misc(self):
        assert fmt(True) == "true" and fmt(None) == "none" and fmt([1, 0.5]) == "[1, 0.5]"

    def test_renderers(self):
        data = {"a": 1, "b": {"c": 2.5e-9}}
        assert render_text(data) == "a: 1\nb:\n  c: 2.5000000e-09"
        assert render_table(data) == "a    1\nb.c  2.5000000e-09"
        assert render_csv(data) == "key,value\na,1\nb.c,2.5e-09"
