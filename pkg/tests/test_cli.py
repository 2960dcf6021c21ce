"""Command-line entry points: config resolution, artifacts, exit codes."""

import json

import pytest

from kdvtorus import __version__
from kdvtorus.cli import ENV_OUTPUT_ROOT, run
from kdvtorus.errors import ConfigError
from kdvtorus.cli import load_config


def read_manifest(outdir):
    return json.loads((outdir / "manifest.json").read_text(encoding="utf-8"))


class TestArgHandling:
    def test_no_arguments_prints_usage(self, capsys):
        assert run([]) == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag_is_a_usage_error(self, capsys):
        assert run(["identities", "--bogus"]) == 2

    def test_unknown_subcommand_is_a_usage_error(self):
        assert run(["frobnicate"]) == 2


class TestIdentities:
    def test_writes_report_and_manifest(self, tmp_path, capsys):
        rc = run(["identities", "--limit", "8", "--out", str(tmp_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "PASS" in out
        payload = json.loads((tmp_path / "identities.json").read_text())
        assert payload == {
            "limit": 8,
            "cube_identity": True,
            "factorization_identity": True,
        }
        manifest = read_manifest(tmp_path)
        assert manifest["command"] == "identities"
        assert manifest["version"] == __version__
        assert manifest["artifacts"] == ["identities.json"]
        assert manifest["wall_time_s"] >= 0.0


class TestShallowWater:
    def test_default_run_reports_the_regime(self, tmp_path, capsys):
        rc = run(["shallow-water", "--out", str(tmp_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "mismatch" in out and "0.262864" in out
        regime = json.loads((tmp_path / "regime.json").read_text())
        assert regime["mismatch"] == pytest.approx(0.2628639, abs=1e-6)
        assert regime["valid"] is True

    def test_dimensional_block_requires_all_three_scales(self, tmp_path, capsys):
        rc = run(["shallow-water", "--a-phys", "1.0", "--out", str(tmp_path)])
        assert rc == 1
        assert "a_phys, h0, l" in capsys.readouterr().err

    def test_dimensional_reference_values(self, tmp_path, capsys):
        rc = run([
            "shallow-water", "--a-phys", "1", "--h0", "100", "--l", "1000",
            "--out", str(tmp_path),
        ])
        assert rc == 0
        regime = json.loads((tmp_path / "regime.json").read_text())
        dims = regime["dimensional"]
        assert dims["alpha"] == 0.01
        assert dims["beta"] == 0.01
        assert dims["c0"] == pytest.approx(31.3209, abs=1e-4)

    def test_domain_error_exits_one(self, tmp_path, capsys):
        rc = run(["shallow-water", "--delta", "-0.5", "--out", str(tmp_path)])
        assert rc == 1
        assert "error:" in capsys.readouterr().err


class TestConfigFile:
    def test_file_values_overridden_by_flags(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment line\ndelta = 0.02\neps = 0.5\n")
        outdir = tmp_path / "out"
        rc = run([
            "shallow-water", "--config", str(cfg), "--eps", "0.4",
            "--out", str(outdir),
        ])
        assert rc == 0
        manifest = read_manifest(outdir)
        assert manifest["parameters"]["delta"] == 0.02  # from file
        assert manifest["parameters"]["eps"] == 0.4  # flag wins

    def test_unknown_key_is_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus = 3\n")
        rc = run(["shallow-water", "--config", str(cfg), "--out", str(tmp_path)])
        assert rc == 1
        assert "unknown config key: bogus" in capsys.readouterr().err

    def test_profile_key_switches_the_scheme(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("profile = paper\n")
        outdir = tmp_path / "out"
        rc = run([
            "simulate", "--config", str(cfg), "--m", "64", "--dt", "1e-3",
            "--t-final", "0.05", "--samples", "2", "--out", str(outdir),
        ])
        assert rc == 0
        params = read_manifest(outdir)["parameters"]
        assert params["profile"] == "paper"
        assert params["scheme"] == "fornberg-whitham"

    def test_malformed_line_is_reported(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("delta 0.02\n")
        with pytest.raises(ConfigError, match="expected key=value"):
            load_config(cfg, allowed={"delta": 0.01})


class TestSimulate:
    def test_small_run_produces_the_full_artifact_set(self, tmp_path):
        rc = run([
            "simulate", "--m", "64", "--dt", "1e-3", "--t-final", "0.1",
            "--samples", "3", "--out", str(tmp_path),
        ])
        assert rc == 0
        manifest = read_manifest(tmp_path)
        for name in manifest["artifacts"]:
            assert (tmp_path / name).exists(), name
        header = (tmp_path / "trajectory.csv").read_text().splitlines()[0]
        assert header == "t,energy,momentum,deviation"
        assert manifest["results"]["terminal_deviation"] > 0.0
        assert manifest["results"]["max_momentum"] == 0.0

    def test_reruns_are_byte_identical(self, tmp_path):
        args = ["simulate", "--m", "64", "--dt", "1e-3", "--t-final", "0.1",
                "--samples", "3"]
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert run(args + ["--out", str(out_a)]) == 0
        assert run(args + ["--out", str(out_b)]) == 0
        for name in ("trajectory.csv", "spectrum_initial.csv", "spectrum_final.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


class TestNormalFormCheck:
    def test_small_probe_passes(self, tmp_path, capsys):
        rc = run([
            "normalform-check", "--support", "3", "--cutoff", "12",
            "--seed", "1", "--census-count", "2", "--census-support", "8",
            "--identity-limit", "6", "--out", str(tmp_path),
        ])
        assert rc == 0
        assert "PASS" in capsys.readouterr().out
        payload = json.loads((tmp_path / "normalform_report.json").read_text())
        assert payload["identity_checks"]["cube_identity"] is True
        orders = payload["residual_probe"]["observed_orders"]
        assert all(1.5 <= o <= 2.5 for o in orders)
        census = payload["ratio_census"]
        assert set(census["maxima"]) == {"r1", "r2", "r3", "r4", "r5"}


class TestOutputRoot:
    def test_environment_variable_sets_the_default_root(self, tmp_path, monkeypatch):
        monkeypatch.setenv(ENV_OUTPUT_ROOT, str(tmp_path))
        rc = run(["identities", "--limit", "6"])
        assert rc == 0
        assert (tmp_path / "identities" / "manifest.json").exists()

    def test_explicit_out_flag_wins(self, tmp_path, monkeypatch):
        monkeypatch.setenv(ENV_OUTPUT_ROOT, str(tmp_path / "env-root"))
        explicit = tmp_path / "explicit"
        rc = run(["identities", "--limit", "6", "--out", str(explicit)])
        assert rc == 0
        assert (explicit / "manifest.json").exists()
        assert not (tmp_path / "env-root").exists()
