import json

import pytest

from nqitsim import nqit
from nqitsim.cli import build_parser, config_from_args, main

SMALL = ["--trials", "2", "--runs", "2", "--shots", "2", "--grid", "2x2"]


def test_dqs_noise_writes_outputs(tmp_path, capsys):
    assert main(["dqs-noise", *SMALL, "--out", str(tmp_path), "--emit-plotdata"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["trials"] == 2
    assert (tmp_path / "results.csv").exists()
    assert (tmp_path / "plot_perfect_vs_noisy.csv").exists()
    assert json.loads((tmp_path / "manifest.json").read_text())["n_records"] == 2


def test_cli_output_is_deterministic(tmp_path):
    for sub in ("a", "b"):
        assert main(["sweep", *SMALL, "--mode", "fixed", "--seed", "3", "--out", str(tmp_path / sub)]) == 0
    assert (tmp_path / "a" / "results.csv").read_bytes() == (tmp_path / "b" / "results.csv").read_bytes()


def test_flags_map_to_config(tmp_path):
    path = tmp_path / "profile.txt"
    path.write_text("ProbDephasing = 1e-3\nTimeLinkingOperation = 2.0\n")
    args = build_parser().parse_args(
        ["ablation", "--variant", "repetition-code", "--chain", "9x8", "--noise-profile", str(path), "--k", "64", "--engine", "exact"]
    )
    cfg = config_from_args(args)
    assert cfg.recipe == "part3_ablation"
    assert cfg.variant_set == "repetition-code"
    assert cfg.chain == (9, 8)
    assert cfg.noise.rate_dephasing == 1e-3 and cfg.timing.t_linking == 2.0
    assert cfg.samples_k == 64 and cfg.noisy_engine == "exact"
    preset_cfg = config_from_args(build_parser().parse_args(["dqs-noise", "--noise-profile", "summary-rates"]))
    assert preset_cfg.noise == nqit.SUMMARY_RATES


@pytest.mark.parametrize(
    "argv",
    [
        ["dqs-noise", "--trials", "0"],
        ["dqs-noise", "--noise-profile", "no-such-preset"],
        ["mbqc-restricted", "--chain", "1x4"],
    ],
)
def test_config_errors_exit_nonzero(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_bad_flag_values_exit_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["dqs-noise", "--grid", "four-by-five"])
    assert exc.value.code != 0
    with pytest.raises(SystemExit) as exc:
        main(["tomography"])
    assert exc.value.code != 0


def test_unknown_profile_key(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("ProbGremlins = 1\n")
    assert main(["dqs-noise", "--noise-profile", str(path)]) == 2
    assert "ProbGremlins" in capsys.readouterr().err
