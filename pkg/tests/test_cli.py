import numpy as np
import pytest

from crease.cli import main
from crease.career import load_career
from crease.mcmc import load_samples

FIT_FAST = ["--iters", "6000", "--burn", "1000", "--thin", "5"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def career_file(tmp_path):
    path = tmp_path / "player.txt"
    rng = np.random.default_rng(17)
    lines = []
    for _ in range(60):
        runs = int(rng.geometric(1 / 30.0)) - 1
        lines.append(f"{runs}*" if rng.random() < 0.08 else str(runs))
    path.write_text("\n".join(lines) + "\n")
    return path


class TestFit:
    def test_fit_writes_samples_and_prints_row(self, capsys, tmp_path, career_file):
        out = tmp_path / "samples.txt"
        code, stdout, _ = run_cli(
            capsys, "fit", "--data", str(career_file), "--out", str(out), "--seed", "3", *FIT_FAST
        )
        assert code == 0
        assert out.exists()
        assert "mu1 =" in stdout and "+-" in stdout
        assert "traditional average" in stdout
        samples, meta = load_samples(out)
        assert samples.draws.shape == (1000, 4)
        assert meta["player"] == "player"

    def test_fit_constant_model(self, capsys, tmp_path, career_file):
        out = tmp_path / "c.txt"
        code, stdout, _ = run_cli(
            capsys, "fit", "--data", str(career_file), "--model", "constant",
            "--out", str(out), *FIT_FAST
        )
        assert code == 0
        samples, _ = load_samples(out)
        assert samples.draws.shape[1] == 1

    def test_fit_empty_data_prints_prior(self, capsys, tmp_path):
        data = tmp_path / "empty.txt"
        data.write_text("# no innings\n")
        out = tmp_path / "s.txt"
        code, stdout, _ = run_cli(
            capsys, "fit", "--data", str(data), "--out", str(out),
            "--iters", "30000", "--burn", "3000", "--thin", "3",
        )
        assert code == 0
        # prior means: mu ~ 32.8, tau ~ 20, ell ~ 3
        samples, _ = load_samples(out)
        assert samples.draws[:, 0].mean() == pytest.approx(32.8, abs=1.5)
        assert samples.draws[:, 2].mean() == pytest.approx(20.0, abs=2.0)

    def test_fit_determinism_byte_identical(self, capsys, tmp_path, career_file):
        outs = []
        for name in ("a.txt", "b.txt"):
            out = tmp_path / name
            code, _, _ = run_cli(
                capsys, "fit", "--data", str(career_file), "--out", str(out), "--seed", "5", *FIT_FAST
            )
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_fit_missing_file_errors(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "fit", "--data", str(tmp_path / "nope.txt"), "--out", str(tmp_path / "o.txt")
        )
        assert code != 0
        assert "error" in err.lower()

    def test_fit_parse_error_names_line(self, capsys, tmp_path):
        data = tmp_path / "bad.txt"
        data.write_text("12\nbogus\n")
        code, _, err = run_cli(capsys, "fit", "--data", str(data), "--out", str(tmp_path / "o.txt"))
        assert code != 0
        assert "line 2" in err

    def test_fit_unwritable_out_errors(self, capsys, career_file, tmp_path):
        code, _, err = run_cli(
            capsys, "fit", "--data", str(career_file), "--out", str(tmp_path / "no-dir" / "o.txt"),
            *FIT_FAST,
        )
        assert code != 0
        assert err


class TestSummarize:
    def test_summarize_prints_ess(self, capsys, tmp_path, career_file):
        out = tmp_path / "s.txt"
        run_cli(capsys, "fit", "--data", str(career_file), "--out", str(out), *FIT_FAST)
        code, stdout, _ = run_cli(capsys, "summarize", "--samples", str(out))
        assert code == 0
        assert "ess[mu1]" in stdout


class TestSimulate:
    def test_simulate_roundtrip_parses(self, capsys, tmp_path):
        out = tmp_path / "sim.txt"
        code, stdout, _ = run_cli(
            capsys, "simulate", "--mu1", "15", "--mu2", "60", "--tau", "5", "--ell", "3",
            "--n", "500", "--seed", "2", "--notout-rate", "0.1", "--out", str(out),
        )
        assert code == 0
        career = load_career(out)
        assert career.num_innings == 500
        assert 20 <= career.num_not_out <= 80

    def test_simulate_zero_innings(self, capsys, tmp_path):
        out = tmp_path / "sim0.txt"
        code, _, _ = run_cli(
            capsys, "simulate", "--mu1", "15", "--mu2", "60", "--tau", "5", "--ell", "3",
            "--n", "0", "--out", str(out),
        )
        assert code == 0
        assert load_career(out).num_innings == 0

    def test_simulate_geometric_mean(self, capsys, tmp_path):
        out = tmp_path / "simgeo.txt"
        code, _, _ = run_cli(
            capsys, "simulate", "--mu1", "30", "--mu2", "30", "--tau", "5", "--ell", "1",
            "--n", "1000000", "--seed", "5", "--out", str(out),
        )
        assert code == 0
        career = load_career(out)
        mean = sum(i.runs for i in career.innings) / career.num_innings
        assert mean == pytest.approx(30.0, abs=0.1)

    def test_simulate_deterministic(self, capsys, tmp_path):
        blobs = []
        for name in ("s1.txt", "s2.txt"):
            out = tmp_path / name
            run_cli(
                capsys, "simulate", "--mu1", "15", "--mu2", "60", "--tau", "5", "--ell", "3",
                "--n", "200", "--seed", "7", "--notout-rate", "0.2", "--out", str(out),
            )
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]

    def test_simulate_fit_round_trip_recovers_params(self, capsys, tmp_path):
        # end-to-end through the file formats, fixed seeds
        sim = tmp_path / "sim.txt"
        out = tmp_path / "fit.txt"
        code, _, _ = run_cli(
            capsys, "simulate", "--mu1", "15", "--mu2", "60", "--tau", "5", "--ell", "3",
            "--n", "500", "--seed", "16000", "--notout-rate", "0.1", "--out", str(sim),
        )
        assert code == 0
        code, stdout, _ = run_cli(
            capsys, "fit", "--data", str(sim), "--out", str(out), "--seed", "16000"
        )
        assert code == 0
        samples, _ = load_samples(out)
        means = samples.draws.mean(axis=0)
        sds = samples.draws.std(axis=0)
        true = np.array([15.0, 60.0, 5.0, 3.0])
        assert (np.abs(means - true) <= 2.0 * sds).all()

    def test_simulate_invalid_params(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "simulate", "--mu1", "-5", "--mu2", "60", "--tau", "5", "--ell", "3",
            "--n", "10", "--out", str(tmp_path / "x.txt"),
        )
        assert code != 0
        code, _, err = run_cli(
            capsys, "simulate", "--mu1", "5", "--mu2", "60", "--tau", "5", "--ell", "3",
            "--n", "10", "--notout-rate", "1.0", "--out", str(tmp_path / "x.txt"),
        )
        assert code != 0


class TestCompare:
    @pytest.fixture()
    def two_sample_files(self, capsys, tmp_path, career_file):
        a = tmp_path / "a_samples.txt"
        b = tmp_path / "b_samples.txt"
        run_cli(capsys, "fit", "--data", str(career_file), "--out", str(a), "--seed", "1", *FIT_FAST)
        run_cli(capsys, "fit", "--data", str(career_file), "--out", str(b), "--seed", "2", *FIT_FAST)
        return a, b

    def test_compare_prints_probability_and_pairs(self, capsys, two_sample_files):
        a, b = two_sample_files
        code, stdout, _ = run_cli(
            capsys, "compare", "--samples-a", str(a), "--samples-b", str(b), "--query", "hazard0_less"
        )
        assert code == 0
        assert "probability:" in stdout
        assert "pairs: 1000" in stdout

    def test_self_comparison_cross_pairing(self, capsys, two_sample_files):
        a, _ = two_sample_files
        code, stdout, _ = run_cli(
            capsys, "compare", "--samples-a", str(a), "--samples-b", str(a),
            "--query", "hazard0_less", "--pairing", "cross",
        )
        assert code == 0
        prob = float(next(l for l in stdout.splitlines() if l.startswith("probability")).split()[1])
        assert prob == pytest.approx(0.5, abs=0.01)

    def test_multi_b_joint_query(self, capsys, two_sample_files, tmp_path, career_file):
        a, b = two_sample_files
        c = tmp_path / "c_samples.txt"
        run_cli(capsys, "fit", "--data", str(career_file), "--out", str(c), "--seed", "3", *FIT_FAST)
        code, stdout, _ = run_cli(
            capsys, "compare", "--samples-a", str(a), "--samples-b", str(b),
            "--samples-b", str(c), "--query", "tau_and_ell_both_less",
        )
        assert code == 0
        prob = float(next(l for l in stdout.splitlines() if l.startswith("probability")).split()[1])
        assert 0.0 <= prob <= 1.0

    def test_unknown_query_lists_registry(self, capsys, two_sample_files):
        a, b = two_sample_files
        with pytest.raises(SystemExit) as exc:
            main(["compare", "--samples-a", str(a), "--samples-b", str(b), "--query", "nope"])
        assert exc.value.code != 0
        err = capsys.readouterr().err
        assert "hazard0_less" in err


class TestPredict:
    def test_predict_constant_point_mass(self, capsys, tmp_path):
        samples = tmp_path / "const.txt"
        samples.write_text("# model: constant\n# seed: 0\nmu\n" + "30.0\n" * 50)
        out = tmp_path / "table.txt"
        code, _, _ = run_cli(capsys, "predict", "--samples", str(samples), "--xmax", "100", "--out", str(out))
        assert code == 0
        rows = [l.split() for l in out.read_text().splitlines() if l and not l.startswith("#")][1:]
        eff = np.array([float(r[3]) for r in rows])
        assert np.allclose(eff, 30.0, atol=1e-9)

    def test_predict_uses_meta_max_score(self, capsys, tmp_path, career_file):
        s = tmp_path / "s.txt"
        run_cli(capsys, "fit", "--data", str(career_file), "--out", str(s), *FIT_FAST)
        out = tmp_path / "t.txt"
        code, stdout, _ = run_cli(capsys, "predict", "--samples", str(s), "--out", str(out))
        assert code == 0
        career = load_career(career_file)
        assert f"x_max={max(200, 3 * career.max_score)}" in stdout

    def test_predict_deterministic(self, capsys, tmp_path, career_file):
        s = tmp_path / "s.txt"
        run_cli(capsys, "fit", "--data", str(career_file), "--out", str(s), *FIT_FAST)
        blobs = []
        for name in ("t1.txt", "t2.txt"):
            out = tmp_path / name
            run_cli(capsys, "predict", "--samples", str(s), "--xmax", "150", "--out", str(out))
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]


class TestEvidenceCommand:
    def test_evidence_block_on_small_career(self, capsys, tmp_path):
        data = tmp_path / "short.txt"
        rng = np.random.default_rng(3)
        data.write_text("\n".join(str(int(x)) for x in rng.geometric(1 / 20, 25) - 1) + "\n")
        out = tmp_path / "ev.txt"
        code, stdout, _ = run_cli(
            capsys, "evidence", "--data", str(data), "--ais-runs", "8", "--temps", "120",
            "--out", str(out),
        )
        assert code == 0
        assert "log_z:" in stdout and "log_z0:" in stdout and "log_bayes_factor:" in stdout
        assert out.read_text() == stdout

    def test_evidence_deterministic(self, capsys, tmp_path):
        data = tmp_path / "short.txt"
        rng = np.random.default_rng(4)
        data.write_text("\n".join(str(int(x)) for x in rng.geometric(1 / 20, 15) - 1) + "\n")
        outs = []
        for _ in range(2):
            code, stdout, _ = run_cli(
                capsys, "evidence", "--data", str(data), "--ais-runs", "6", "--temps", "80"
            )
            assert code == 0
            outs.append(stdout)
        assert outs[0] == outs[1]
