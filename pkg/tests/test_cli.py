import json
import math

import pytest

from stringdamp.cli import main

CONFIG = """[scenario]
problem = stop-moving
horizon = {horizon}
stride = 0.7853981633974483
seed = 3
[initial]
{initial}
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def summary(text):
    return dict(line.split(" = ", 1) for line in text.splitlines())


def test_simulate_constant_field(tmp_path, capsys):
    cfg = write(tmp_path, "g2.ini", CONFIG.format(horizon=4 * math.pi, initial="breakpoints = 0:2"))
    code, out, _ = run(["simulate", cfg, "--out", str(tmp_path / "o"),
                        "--snapshot", "t=6.283185307179586"], capsys)
    assert code == 0
    s = summary(out)
    assert float(s["rate"]) == pytest.approx(1.0) and float(s["rho_T"]) == 0.0
    header = (tmp_path / "o" / "flow.csv").read_text().splitlines()[0]
    assert header == "t,rho,phi_at_0,u"
    assert (tmp_path / "o" / "summary.txt").exists()
    assert len(list((tmp_path / "o").glob("snapshot_t=*.pwl"))) == 1


def test_simulate_is_deterministic(tmp_path, capsys):
    cfg = write(tmp_path, "c.ini", CONFIG.format(horizon=20.0, initial="cosine = 0.1, 1.5, -0.7")
                + "[compare]\nbreakpoints = 0:0.2, 3:-1, 5:0.5\n")
    for d in ("a", "b"):
        assert run(["simulate", cfg, "--out", str(tmp_path / d)], capsys)[0] == 0
    for name in ("flow.csv", "energy.csv", "summary.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("horizon,initial", [
    (-1, "breakpoints = 0:1"),
    (5, ""),
    (5, "breakpoints = 0:1\ncosine = 1, 2"),
    ("abc", "breakpoints = 0:1"),
    (5, "file = does-not-exist.pwl"),
])
def test_simulate_config_errors(tmp_path, capsys, horizon, initial):
    cfg = write(tmp_path, "bad.ini", CONFIG.format(horizon=horizon, initial=initial))
    code, _, err = run(["simulate", cfg, "--out", str(tmp_path / "o")], capsys)
    assert code == 2 and "config error" in err


def test_simulate_reads_pwl_file(tmp_path, capsys):
    write(tmp_path, "g.pwl", "#pwl period=6.2831853071795862 periodic=1\n0,3,0\n")
    cfg = write(tmp_path, "f.ini", CONFIG.format(horizon=2 * math.pi, initial="file = g.pwl"))
    code, out, _ = run(["simulate", cfg, "--out", str(tmp_path / "o")], capsys)
    assert code == 0 and float(summary(out)["rho_T"]) == pytest.approx(4 * math.pi)


def test_bad_snapshot_flag(tmp_path, capsys):
    cfg = write(tmp_path, "g.ini", CONFIG.format(horizon=1.0, initial="breakpoints = 0:1"))
    assert run(["simulate", cfg, "--snapshot", "x=1"], capsys)[0] == 2


def test_reachable(tmp_path, capsys):
    cfg = write(tmp_path, "r.ini", "[scenario]\nhorizon = 18.84955592153876\n"
                "stride = 6.283185307179586\n[dual]\npsi = 0, 1\n")
    assert run(["reachable", cfg, "--out", str(tmp_path)], capsys)[0] == 0
    lines = (tmp_path / "support_scan.csv").read_text().splitlines()
    assert lines[0] == "T,H_full,H_reduced,H_normalized,H_limit" and len(lines) == 4
    assert float(lines[1].split(",")[1]) == pytest.approx(4.0)


def test_spectral(tmp_path, capsys):
    cfg = write(tmp_path, "s.ini", "[spectral]\ncutoffs = 1, 2\n")
    assert run(["spectral", cfg, "--out", str(tmp_path)], capsys)[0] == 0
    rows = (tmp_path / "secular.csv").read_text().splitlines()
    assert rows[0] == "N,k,mu_N,mu_limit,gap" and len(rows) == 4
    assert float(rows[1].split(",")[2]) == pytest.approx(1 / math.sqrt(3))


def test_verify_decay_passes(tmp_path, capsys):
    code, out, _ = run(["verify", "decay", "--out", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "verify.json").read_text())
    assert doc["passed"] and doc["suite"] == "decay"
    assert json.loads(out)["seed"] == doc["seed"]


def test_verify_bogus_suite(capsys):
    assert run(["verify", "bogus"], capsys)[0] == 2


def test_verify_all_aggregates(tmp_path, capsys):
    code, out, _ = run(["verify", "all", "--seed", "7"], capsys)
    doc = json.loads(out)
    assert len(doc["checks"]) >= 8 and doc["seed"] == 7
    assert code == (0 if doc["passed"] else 1)
    assert {c["criterion"] for c in doc["checks"]} == set(range(1, 11))
