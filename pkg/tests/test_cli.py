import json

import pytest

from merolib.cli import RunConfig, dispatch, main
from merolib.caps import Caps


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_hopf_census(capsys):
    code, out = run(["hopf", "census", "--q", "3"], capsys)
    assert code == 0 and out["result"]["total"] == 7


def test_regular(capsys):
    code, out = run(["regular", "--ring", "builtin:hopf", "--num", "y", "--den", "1+x*y"], capsys)
    assert code == 0 and out["result"]["status"] == "regular"
    code, out = run(["regular", "--ring", "builtin:hopf", "--num", "1", "--den", "x"], capsys)
    assert out["result"]["certificate"] == {"q": 3, "point": [0, 0]}


def test_regular_undecided_exit(capsys):
    code, out = run(["regular", "--ring", "builtin:hopf", "--num", "1", "--den", "x", "--primes", "", "--caps", "u=0"], capsys)
    assert code == 2 and out["result"]["status"] == "undecided"


def test_lift_gate(capsys):
    code, out = run(["lift", "--crossings", "-1"], capsys)
    assert code == 1 and out["result"]["index"] == 0
    code, out = run(["lift", "--crossings", "+1,+2,+1"], capsys)
    assert code == 0 and out["result"]["chain"] == "[a1 a2 a3]"


def test_braid_roundtrip(tmp_path, capsys):
    pres = tmp_path / "pres.json"
    code, out = run(["braid", "variety", "--strands", "2", "--word", "1,1,1", "--out", str(pres)], capsys)
    assert code == 0 and out["result"]["relations"] == ["z1*z2*z3 + z1 + z3"]
    code, out = run(["braid", "count", "--pres", str(pres), "--q", "5"], capsys)
    assert out["result"]["count"] == 21
    code, out = run(["braid", "variety", "--strands", "3", "--word", "1,2"], capsys)
    assert code == 1
    code, out = run(["braid", "demazure", "--strands", "3", "--word", "1,2,1"], capsys)
    assert out["result"] == {"permutation": "[3 2 1]", "length": 3, "is_longest": True}


def test_hh0_and_ho(capsys):
    code, out = run(["hh0", "--quiver", "cyclic:3", "--max-len", "7"], capsys)
    assert out["result"]["dim"] == 5
    code, out = run(["ho", "--quiver", "cyclic:2", "--chain", "rho", "--rep", "1,1;a1=x;a2=y"], capsys)
    assert out["result"]["value"] == "x*y"


def test_merodromy_and_verify(capsys):
    code, out = run(["merodromy", "--chart", "2,3", "--cycle", "1,1"], capsys)
    assert out["result"]["value"] == "6"
    code, out = run(["verify", "--spikes", "3", "--rank", "2", "--q", "5", "--seed", "7"], capsys)
    assert code == 0 and out["tally"] == {"agree": 50, "samples": 50}


def test_table_format(capsys):
    code, out = run(["hopf", "census", "--q", "2", "--format", "table"], capsys)
    assert "result.total" in out and code == 0


def test_usage_errors(capsys):
    assert main(["nonsense"]) == 3
    assert main(["suite", "bogus"]) == 3
    assert main(["hh0", "--quiver", "cyclic:x", "--max-len", "2"]) == 3
    assert main(["hopf"]) == 3
    assert main(["regular", "--ring", "builtin:hopf", "--num", "1", "--den", "x", "--primes", "4"]) == 3


def test_env_caps(monkeypatch, capsys):
    monkeypatch.setenv("MEROLIB_CAPS", "w=5")
    code, out = run(["hh0", "--quiver", "cyclic:2", "--max-len", "12"], capsys)
    assert code == 2 and out["caps"]["walk"] == 5


def test_reports_are_byte_identical(capsys):
    argv = ["verify", "--spikes", "2", "--rank", "2", "--seed", "3"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_dispatch_unknown_command():
    assert dispatch(RunConfig("frobnicate", {}, Caps())).exit_code == 3


def test_timing_is_opt_in(capsys):
    _, out = run(["hopf", "census", "--q", "2"], capsys)
    assert "seconds" not in out
    _, out = run(["hopf", "census", "--q", "2", "--timing"], capsys)
    assert "seconds" in out
