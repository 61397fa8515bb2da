"""CLI behaviour: exit codes, certificate logs, settings precedence.

Everything here sticks to the small fixtures (m1 / f9 / d9) so the whole
file runs in seconds; the full-scale paths get their workout in the
acceptance suite.
"""

import json

import pytest

from eggplane.cli import Settings, _parser, main


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for var in ("EGGPLANE_SEED", "EGGPLANE_MODE", "EGGPLANE_OUT", "EGGPLANE_THREADS"):
        monkeypatch.delenv(var, raising=False)


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["flock", "verify", "--egg", "m1"],
        ["egg", "verify", "--egg", "m1"],
        ["semifield", "verify", "--semifield", "d9"],
        ["semifield", "nuclei", "--semifield", "d9"],
        ["spread", "verify", "--semifield", "d9"],
        ["spread", "correspondence", "--semifield", "f9"],
        ["blocking", "solvability", "--egg", "m1"],
        ["blocking", "check", "--egg", "m1"],
        ["unital", "verify", "--egg", "m1"],
        ["polar", "check", "--egg", "m1", "--lam", "1"],
    ],
)
def test_small_verbs_exit_zero(argv, capsys):
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "ok" in out and "FAIL" not in out


def test_field_mismatch_is_a_usage_error(capsys):
    # kk9 has no registered partner semifield, so the d243 fallback clashes
    assert main(["unital", "build", "--egg", "kk9"]) == 2
    assert "error:" in capsys.readouterr().err


def test_bad_config_file(tmp_path, capsys):
    bad = tmp_path / "cfg.toml"
    bad.write_text("seed = [unclosed")
    assert main(["--config", str(bad), "flock", "verify", "--egg", "m1"]) == 2
    assert "bad --config" in capsys.readouterr().err
    assert main(["--config", str(tmp_path / "missing.toml"), "flock", "verify"]) == 2


def test_unknown_choices_are_argparse_errors():
    with pytest.raises(SystemExit) as exc:
        main(["egg", "verify", "--egg", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["pipeline"])  # missing target


# ---------------------------------------------------------------------------
# certificate log
# ---------------------------------------------------------------------------


def test_out_writes_parseable_jsonl(tmp_path, capsys):
    assert main(["blocking", "solvability", "--egg", "m1", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "certificates.jsonl").read_text().splitlines()
    assert lines
    for line in lines:
        rec = json.loads(line)
        assert rec["ok"] is True
        assert {"object", "mode", "checks_run", "wall_ms"} <= set(rec)


def test_same_seed_same_certificates(tmp_path, capsys):
    argv = ["semifield", "verify", "--semifield", "d243", "--samples", "50000", "--seed", "5"]
    runs = []
    for d in ("a", "b"):
        out = tmp_path / d
        assert main(argv + ["--out", str(out)]) == 0
        recs = [json.loads(l) for l in (out / "certificates.jsonl").read_text().splitlines()]
        for r in recs:
            r.pop("wall_ms")
        runs.append(recs)
    assert runs[0] == runs[1]


def test_global_flags_parse_after_the_verb(tmp_path, capsys):
    assert main(["flock", "verify", "--egg", "m1", "--seed", "3", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "certificates.jsonl").exists()


# ---------------------------------------------------------------------------
# settings precedence: flag > env > config > default
# ---------------------------------------------------------------------------


def test_settings_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.toml"
    cfg.write_text('seed = 1\nmode = "exhaustive"\n')

    def setting(argv):
        return Settings(_parser().parse_args(argv))

    base = ["--config", str(cfg), "flock", "verify"]
    assert setting(base).get("seed", 0, int) == 1  # config beats default
    assert setting(base).get("mode", "auto") == "exhaustive"
    assert setting(base).get("threads", 4, int) == 4  # untouched key: default

    monkeypatch.setenv("EGGPLANE_SEED", "2")
    assert setting(base).get("seed", 0, int) == 2  # env beats config
    assert setting(base + ["--seed", "3"]).get("seed", 0, int) == 3  # flag beats env

    monkeypatch.delenv("EGGPLANE_SEED")
    assert setting(["flock", "verify"]).get("seed", 0, int) == 0
