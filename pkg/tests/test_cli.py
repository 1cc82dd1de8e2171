import numpy as np
import pytest

from gdsbp.cli import EXIT_DATA, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, main
from gdsbp.codes import rotated_toric
from gdsbp.experiments import ExperimentRecord, read_records, records_to_csv
from gdsbp.matrices import read_matrix


def test_build_toric_roundtrip(tmp_path, capsys):
    out = tmp_path / "t4.chk"
    assert main(["build", "toric:4", "--out", str(out), "--girth"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "4"
    h = read_matrix(out)
    assert (h.m, h.n) == (16, 16)
    assert np.array_equal(h.codes, rotated_toric(4).h.codes)


def test_build_qc_girth(capsys):
    rc = main(["build", "qc", "--base", "5 3 13 10 0 16; 9 1 10 10 6 0", "--c", "17", "--with-identity", "--girth"])
    assert rc == EXIT_OK
    assert capsys.readouterr().out.strip() == "8"


def test_build_singleshot_files(tmp_path, capsys):
    assert main(["build", "singleshot", "--out", str(tmp_path)]) == EXIT_OK
    assert "136x(126+136)" in capsys.readouterr().out
    dec = read_matrix(tmp_path / "gb126_decoding.gds")
    assert (dec.m_prime, dec.n_quaternary, dec.m_binary) == (136, 126, 136)


def test_build_rejects_odd_toric(capsys):
    assert main(["build", "toric:3"]) == EXIT_DATA
    assert "error" in capsys.readouterr().err


def test_search_infeasible():
    # a 1x1 base can never reach girth 8 once the identity is appended with c = 1
    assert main(["build", "search", "--gamma", "2", "--rho", "2", "--c", "1", "--attempts", "3"]) == EXIT_INFEASIBLE


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["memory", "--epsilon-b", "0.1", "--eta", "2"]) == EXIT_USAGE
    assert main(["build", "qc", "--base", "1 2"]) == EXIT_USAGE
    capsys.readouterr()


@pytest.fixture
def t4_file(tmp_path):
    out = tmp_path / "t4.chk"
    assert main(["build", "toric:4", "--out", str(out)]) == EXIT_OK
    return out


def test_decode_zero_syndrome(t4_file, capsys):
    assert main(["decode", str(t4_file), "--syndrome", "0" * 16]) == EXIT_OK
    out = capsys.readouterr().out
    assert "converged: yes" in out and "iterations: 1" in out
    assert "estimate: " + "I" * 16 in out


def test_decode_single_error(t4_file, capsys):
    h = rotated_toric(4).h
    e = np.zeros(16, np.uint8)
    e[0] = 1
    s = "".join(map(str, h.syndrome(e)))
    assert main(["decode", str(t4_file), "--syndrome", s, "--dump-llrs", "--strict"]) == EXIT_OK
    out = capsys.readouterr().out
    est = next(l for l in out.splitlines() if l.startswith("estimate:")).split()[1]
    got = np.array(["IXZY".index(c) for c in est], np.uint8)
    assert np.array_equal(h.syndrome(got), h.syndrome(e))
    assert sum(l.startswith("llr E") for l in out.splitlines()) == 16


def test_decode_bad_input(t4_file, tmp_path, capsys):
    assert main(["decode", str(t4_file), "--syndrome", "01"]) == EXIT_DATA
    assert main(["decode", str(t4_file), "--syndrome", "0a" * 8]) == EXIT_DATA
    bad = tmp_path / "bad.chk"
    bad.write_text("XQ\n")
    assert main(["decode", str(bad), "--syndrome", "0"]) == EXIT_DATA
    assert main(["decode", str(tmp_path / "missing.chk"), "--syndrome", "0"]) == EXIT_DATA
    capsys.readouterr()


def test_memory_noiseless_is_censored(tmp_path):
    out = tmp_path / "m.csv"
    rc = main(["memory", "--code", "toric:4", "--epsilon", "0", "--epsilon-b", "0", "--trials", "3",
               "--max-cycles", "5", "--out", str(out)])
    assert rc == EXIT_OK
    (rec,) = read_records(out)
    assert rec.trials == 3 and rec.censored == 3 and rec.failures == 0
    assert (tmp_path / "m.csv.config").exists()


def _memory_argv(out, workers, extra=()):
    return ["memory", "--code", "toric:4", "--epsilon", "0.03", "--rounds", "2", "--trials", "40",
            "--failure-target", "6", "--tmax", "20", "--seed", "11", "--workers", str(workers),
            "--out", str(out), *extra]


def test_memory_byte_identical_across_workers(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(_memory_argv(a, 1)) == EXIT_OK
    assert main(_memory_argv(b, 3)) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    rows = read_records(a)
    assert rows[0].failures == 6


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# campaign\nepsilon = 0.05\nseed = 3\ntrials = 4\ntmax = 5\nfailure_target = 0\n")
    out = tmp_path / "c.csv"
    assert main(["--config", str(cfg), "memory", "--code", "toric:4", "--seed", "9", "--out", str(out)]) == EXIT_OK
    side = dict(l.split("=", 1) for l in (tmp_path / "c.csv.config").read_text().splitlines())
    assert side["seed"] == "9" and side["epsilon"] == "0.05" and side["trials"] == "4"
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 1\n")
    assert main(["--config", str(bad), "memory"]) == EXIT_USAGE


def test_singleshot_small(tmp_path):
    out = tmp_path / "s.csv"
    rc = main(["singleshot", "--epsilon", "0.005", "--eta", "1", "--trials", "5", "--out", str(out)])
    assert rc == EXIT_OK
    (rec,) = read_records(out)
    assert rec.code == "gb126" and rec.trials == 5 and rec.r == 1


def test_fit_planted(tmp_path, capsys):
    nu, tau, c = 1.5, 0.03, (0.1, 0.8, 2.0)
    recs = []
    for d in (4, 6, 8):
        for eps in (0.026, 0.028, 0.03, 0.032, 0.034):
            x = d ** (1 / nu) * (eps - tau)
            y = c[0] + c[1] * x + c[2] * x * x
            recs.append(ExperimentRecord("toric", d, 3, eps, eps, 100, 10, y, 1.0, 1.0))
    path = tmp_path / "fit.csv"
    path.write_text(records_to_csv(recs))
    assert main(["fit", str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "nu=1.50 tau=0.0300" in out
    one = tmp_path / "one.csv"
    one.write_text(records_to_csv(recs[:2]))
    assert main(["fit", str(one)]) == EXIT_INFEASIBLE
