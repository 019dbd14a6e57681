import pytest

from capregion.config import ConfigError, load_config, parse_config

BASE = {
    "pulse": {"beta": 0.25, "delta": 0.9, "T": 1.0},
    "channel": {"tau1": 0.0, "tau2": 0.45, "snr_db": 20.0, "N": 16},
    "run": {"mode": "time", "weight_count": 17},
    "output": {"csv_path": "out.csv"},
}


def _with(section, **fields):
    doc = {k: dict(v) for k, v in BASE.items()}
    doc[section].update(fields)
    return doc


def _without(section, key):
    doc = {k: dict(v) for k, v in BASE.items()}
    del doc[section][key]
    return doc


def test_valid_config():
    cfg = parse_config(BASE)
    assert cfg.pulse.delta == 0.9
    assert cfg.chan.power == pytest.approx((100.0, 100.0))
    assert cfg.chan.tau == (0.0, 0.45)
    assert cfg.kind == "region" and cfg.precision == 12 and cfg.svg_path is None


def test_defaults_follow_nyquist_setting():
    cfg = parse_config({"channel": {"snr_db": 20.0}})
    assert (cfg.pulse.beta, cfg.pulse.delta, cfg.pulse.T) == (0.25, 1.0, 1.0)


def test_per_user_values():
    cfg = parse_config(_with("channel", snr_db=[20.0, 10.0]))
    assert cfg.chan.power == pytest.approx((100.0, 10.0))
    doc = _without("channel", "snr_db")
    doc["channel"].update(power=[4.0, 2.0], sigma0_sq=0.5)
    cfg = parse_config(doc)
    assert cfg.chan.power == (4.0, 2.0) and cfg.chan.sigma0_sq == 0.5


@pytest.mark.parametrize("doc,path", [
    (_with("pulse", beta=1.5), "pulse.beta"),
    (_with("pulse", delta=0.0), "pulse.delta"),
    (_with("pulse", T="one"), "pulse.T"),
    (_with("channel", power=3.0), "channel.snr_db"),
    (_without("channel", "snr_db"), "channel.snr_db"),
    (_with("channel", tau2=1.5), "channel.tau2"),
    (_with("channel", tau1=0.5, tau2=0.2), "channel.tau2"),
    (_with("channel", N=2.5), "channel.N"),
    (_with("channel", snr_db=[20.0]), "channel.snr_db"),
    (_with("run", mode="spectral"), "run.mode"),
    (_with("run", weight_count=2), "run.weight_count"),
    (_with("run", kind="sweep"), "run.tau_list"),
    (_with("run", kind="sweep", tau_list=[0.1, 2.0]), "run.tau_list.1"),
    (_with("run", kind="convergence", n_list=[32, 16]), "run.n_list"),
    (_with("run", comparison="other"), "run.comparison"),
    (_with("run", allow_floor="yes"), "run.allow_floor"),
    (_with("output", precision=40), "output.precision"),
    (_with("output", colour="red"), "output.colour"),
    ({**BASE, "extra": {}}, "extra"),
])
def test_field_path_in_errors(doc, path):
    with pytest.raises(ConfigError) as info:
        parse_config(doc)
    assert info.value.path == path
    assert str(info.value).startswith(path + ":")


def test_load_from_file(tmp_path):
    p = tmp_path / "s.toml"
    p.write_text('[pulse]\ndelta = 0.9\n[channel]\nsnr_db = 20\nN = 8\n[run]\nkind = "sweep"\n'
                 'tau_list = [0.0, 0.45]\n', encoding="utf-8")
    cfg = load_config(str(p))
    assert cfg.kind == "sweep" and cfg.tau_list == (0.0, 0.45) and cfg.csv_path == "sweep.csv"
    bad = tmp_path / "bad.toml"
    bad.write_text("[pulse\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.toml"))
