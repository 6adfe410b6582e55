import json

import mpmath
import pytest

from rankwitness import __version__, report
from rankwitness.catalog import load_catalog, lookup, parse_entry
from rankwitness.cli import main, run
from rankwitness.curve import count_ap, hasse_ok
from rankwitness.errors import InputError


def test_bundled_catalog(catalog):
    assert {"37a-short", "27a-short"} <= set(catalog)
    e = catalog["37a-short"]
    assert (e.a, e.b, e.conductor, e.ap_overrides) == (-16, 16, 37, {2: -2})
    for entry in catalog.values():
        for p, ap in entry.ap_overrides.items():
            assert hasse_ok(p, ap) and entry.curve.disc % p == 0 and entry.conductor % p


@pytest.mark.parametrize("line", [
    '{"label": "x", "a": 0, "b": 0, "conductor": 1}',
    '{"label": "x", "a": -16, "b": 16, "conductor": 37, "ap_overrides": {"2": 3}}',
    '{"label": "x", "a": -16, "b": 16, "conductor": 37, "ap_overrides": {"3": 1}}',
    '{"label": "x", "a": -16, "b": 16}',
    'not json',
])
def test_bad_catalog_lines(line):
    with pytest.raises(InputError):
        parse_entry(line)


def test_unknown_label():
    with pytest.raises(InputError):
        lookup("99z-short")


def test_report_round_trip_and_order():
    rep = report.make_report("x", {"n": 3}, {"v": mpmath.mpf("0.125"), "l": [1, None, True]}, True)
    text = report.dumps(rep)
    assert report.dumps(report.loads(text)) == text
    assert list(json.loads(text)) == ["command", "inputs", "results", "status", "version"]
    assert json.loads(text)["inputs"]["n"] == "3"
    val, digits = report.parse_tagged(json.loads(text)["results"]["v"])
    assert val == mpmath.mpf("0.125") and digits == report.FLOAT_DIGITS
    assert json.loads(text)["version"] == __version__


def test_every_golden_report_round_trips():
    from pathlib import Path

    for path in sorted((Path(__file__).parent / "golden").glob("*.json")):
        text = path.read_text()
        assert report.dumps(report.loads(text)) == text, path.name


def test_ap_cache_idempotent(tmp_path):
    cache = tmp_path / "ap.csv"
    text1, code1 = run(["ap", "37a-short", "--max-prime", "100", "--cache", str(cache)])
    first = cache.read_bytes()
    text2, code2 = run(["ap", "37a-short", "--max-prime", "100", "--cache", str(cache)])
    assert code1 == code2 == 0
    assert cache.read_bytes() == first
    assert json.loads(text2)["results"]["cache"] == "verified"


def test_ap_cache_mismatch_exits_2(tmp_path):
    cache = tmp_path / "ap.csv"
    run(["ap", "37a-short", "--max-prime", "50", "--cache", str(cache)])
    cache.write_text(cache.read_text().replace("5,-2", "5,2"))
    text, code = run(["ap", "37a-short", "--max-prime", "50", "--cache", str(cache)])
    assert code == 2 and "disagrees" in text


def test_ap_matches_oracle(e37):
    text, code = run(["ap", "37a-short", "--max-prime", "100"])
    table = json.loads(text)["results"]["ap"]
    for p, ap in table.items():
        p = int(p)
        if e37.disc % p:
            xs = range(p)
            n = 1 + sum(1 for x in xs for y in xs if (y * y - x**3 + 16 * x - 16) % p == 0)
            assert int(ap) == p + 1 - n
    assert json.loads(text)["results"]["hasse_bound_holds"] is True


def test_witness_schema():
    text, code = run(["witness", "37a-short", "--count", "2"])
    assert code == 0
    m = json.loads(text)["results"]["members"][0]
    assert {"m", "f_m", "s", "d", "x", "y_coeff", "nontorsion", "split_checks"} <= set(m)


def test_witness_exhausted_exit_1():
    text, code = run(["witness", "37a-short", "--count", "5", "--bound", "2"])
    assert code == 1 and json.loads(text)["status"] == "failed"


@pytest.mark.parametrize("argv, code", [
    (["classfield", "--fund-disc", "-7", "--conductor", "1", "--prime", "3", "--nmax", "3"], 0),
    (["classfield", "--fund-disc", "-7", "--inert-step", "5", "5"], 0),
    (["classfield", "--fund-disc", "-5", "--prime", "3"], 2),
    (["classfield", "--fund-disc", "-7", "--inert-step", "11", "11"], 2),
    (["primesearch", "37a-short", "--fund-disc", "-7", "--p", "5", "--bound", "50"], 1),
    (["primesearch", "37a-short", "--fund-disc", "-7", "--p", "37"], 2),
    (["recurrence", "--p", "5", "--ap", "5", "--c0", "1", "--c1", "0"], 2),
    (["recurrence", "--p", "5", "--ap", "1", "--c0", "0", "--c1", "0"], 2),
    (["recurrence", "--p", "6", "--ap", "1", "--c0", "1", "--c1", "0"], 2),
    (["heegner", "37a-short", "--fund-disc", "-8"], 2),
    (["nonsense"], 2),
    (["ap", "no-such-curve"], 2),
])
def test_exit_codes(argv, code):
    assert run(argv)[1] == code


def test_classfield_ratios():
    text, _ = run(["classfield", "--fund-disc", "-7", "--conductor", "1", "--prime", "3", "--nmax", "3"])
    assert json.loads(text)["results"]["ratios"] == ["3", "3", "3"]
    text, _ = run(["classfield", "--fund-disc", "-7", "--inert-step", "5", "5"])
    assert json.loads(text)["results"]["degree"] == "6"


def test_heegner_report():
    text, code = run(["heegner", "37a-short", "--fund-disc", "-7"])
    res = json.loads(text)["results"]
    assert code == 0 and res["point"] == {"x": "4", "y": "4"} and res["nontorsion"] is True
    assert "value" in res["residual"] and "digits" in res["residual"]
    text, code = run(["heegner", "37a-short", "--fund-disc", "-7", "--verify-inert", "3"])
    val, _ = report.parse_tagged(json.loads(text)["results"]["residual"])
    assert code == 0 and val < mpmath.mpf("1e-8")


def test_recurrence_report():
    text, code = run(["recurrence", "--p", "5", "--ap", "-2", "--c0", "1", "--c1", "0", "--steps", "5"])
    res = json.loads(text)["results"]
    assert code == 0
    assert res["sequence"][:3] == ["1", "0", "-1/5"]
    assert res["valuations"][:3] == ["0", None, "-1"]
    assert res["first_nonintegral"] == {"index": "2", "kind": "nonintegral"}


def test_out_file_matches_stdout(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["recurrence", "--p", "5", "--ap", "-2", "--c0", "1", "--c1", "0", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == out.read_text()


def test_out_to_bad_path_exits_2(tmp_path):
    _, code = run(["recurrence", "--p", "5", "--ap", "-2", "--c0", "1", "--c1", "0",
                   "--out", str(tmp_path / "missing" / "r.json")])
    assert code == 2


def test_custom_catalog(tmp_path):
    cat = tmp_path / "c.jsonl"
    cat.write_text('{"label": "tiny", "a": -1, "b": 0, "conductor": 32}\n')
    text, code = run(["ap", "tiny", "--max-prime", "20", "--catalog", str(cat)])
    assert code == 0 and json.loads(text)["results"]["ap"]["5"] == str(count_ap(load_catalog(cat)["tiny"].curve, 5))
