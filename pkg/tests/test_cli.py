import json

import pytest

from kdonaldson.cli import UsageError, main, parse_class, parse_range, parse_window


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parsers():
    assert parse_range("5..13") == list(range(5, 14))
    assert parse_range("4") == [4]
    assert parse_window("[-10,16]") == (-10, 16)
    assert parse_class("2H-3E") == {"H": 2, "E": -3}
    assert parse_class("-H") == {"H": -1, "E": 0}
    assert parse_class("0") == {"H": 0, "E": 0}
    for bad in (lambda: parse_range("9..5"), lambda: parse_window("1,"), lambda: parse_class("2X")):
        with pytest.raises(UsageError):
            bad()


def test_zinst_json(capsys):
    code, out, _ = run(capsys, "zinst", "--rank", "2", "--cs", "0", "--n-max", "1")
    assert code == 0
    obj = json.loads(out)
    assert obj["rank"] == 2 and obj["n_max"] == 1


def test_zinst_random_is_deterministic(capsys):
    a = run(capsys, "zinst", "--n-max", "1", "--eval", "random", "--seed", "4")
    b = run(capsys, "zinst", "--n-max", "1", "--eval", "random", "--seed", "4")
    assert a == b and json.loads(a[1])["seed"] == 4


def test_zinst_bad_level_is_usage_error(capsys):
    code, _, err = run(capsys, "zinst", "--cs", "3")
    assert code == 2 and "error" in err


def test_blowup_check_table(capsys):
    code, out, _ = run(capsys, "blowup-check", "--rank", "2", "--cs", "2", "--d", "4", "--order", "8")
    assert code == 0 and "FAILS at Λ^4" in out
    code, out, _ = run(capsys, "blowup-check", "--cs", "1", "--d", "0..1", "--order", "8")
    assert code == 0 and out.count("holds through Λ^8") == 2


def test_sw_emit(capsys):
    code, out, _ = run(capsys, "sw", "--emit", "u", "--lambda-order", "2")
    assert code == 0 and json.loads(out)["quantity"] == "u"
    code, out, _ = run(capsys, "sw", "--emit", "contact", "--lambda-order", "4", "--p-window", "[-12,16]")
    obj = json.loads(out)
    assert code == 0 and obj["sn"] == obj["contact"] == obj["U1"] == "0"


def test_wallcross_both_sides(capsys):
    code, out, _ = run(capsys, "wallcross", "--xi", "2H-3E", "--n", "2", "--d-max", "10", "--l-max", "2")
    obj = json.loads(out)
    assert code == 0 and obj["agree"] and obj["window_ok"]
    assert obj["modular"] == {"2": 6, "6": -189, "10": 595}


def test_p2_hilbert(capsys):
    code, out, _ = run(capsys, "p2-hilbert", "--c1", "0", "--d", "5..13")
    assert code == 0
    assert out.splitlines()[:2] == ["P_5 = 1", "P_9 = 1 + t^2 + t^4"]
    code, out, _ = run(capsys, "p2-hilbert", "--c1", "H", "--d", "4", "--emit", "json")
    assert code == 0 and json.loads(out)[0]["d"] == 4


def test_p2_hilbert_no_admissible_degree(capsys):
    code, _, err = run(capsys, "p2-hilbert", "--c1", "0", "--d", "6..8")
    assert code == 2 and "admissible" in err


def test_negative_order_is_usage_error(capsys):
    code, _, _ = run(capsys, "blowup-check", "--order", "-1")
    assert code == 2


def test_unknown_subcommand(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2
