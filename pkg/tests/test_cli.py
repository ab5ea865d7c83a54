import json

import pytest

from brauerkit.cli import (
    CSV_COLUMNS,
    EXIT_CAP,
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_VIOLATION,
    REPORT_SCHEMA,
    load_report,
    main,
    parse_range,
)


def test_parse_range():
    assert parse_range("3") == (3,)
    assert parse_range("2..5") == (2, 3, 4, 5)
    with pytest.raises(Exception):
        parse_range("abc")
    with pytest.raises(Exception):
        parse_range("5..2")


def test_bad_range_exits_with_config_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["table", "--g", "abc"])
    assert exc.value.code == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        main(["table", "--g", "3..1"])
    assert exc.value.code == EXIT_CONFIG
    capsys.readouterr()


def test_nonpositive_cap_is_config_error(capsys):
    assert main(["table", "--g", "2", "--r", "2", "--d", "0", "--cap", "0"]) == EXIT_CONFIG
    assert "cap" in capsys.readouterr().err


def test_bad_jobs_is_config_error(capsys):
    code = main(["table", "--g", "2", "--r", "2", "--d", "0", "--jobs", "0"])
    assert code == EXIT_CONFIG
    capsys.readouterr()


def test_table_frozen_two_records(capsys):
    code = main(["table", "--g", "2", "--r", "2", "--d", "0..1"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["schema"] == REPORT_SCHEMA
    assert doc["config"]["g"] == [2]
    assert doc["config"]["d"] == [0, 1]
    assert len(doc["records"]) == 2
    by_d = {rec["d"]: rec for rec in doc["records"]}
    assert by_d[0]["quotient_components"] == 2 and by_d[0]["l"] == 2
    assert by_d[1]["quotient_components"] == 1 and by_d[1]["l"] == 1
    for rec in doc["records"]:
        assert rec["status"] == "ok"
        assert rec["g_all_equals_weil_span"] is True
        assert rec["prym_components"] == 2
        assert rec["timing_ms"] is None


def test_table_four_records_all_span_equal(capsys):
    code = main(["table", "--g", "2..3", "--r", "2..3", "--d", "0"])
    doc = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert len(doc["records"]) == 4
    assert all(r["g_all_equals_weil_span"] for r in doc["records"])
    assert all(r["g_primitive_equals_weil_span"] for r in doc["records"])
    keys = [(r["g"], r["r"], r["d"]) for r in doc["records"]]
    assert keys == sorted(keys)


def test_table_cap_exceeded_marks_skipped(capsys):
    code = main(["table", "--g", "2", "--r", "2", "--d", "0", "--cap", "10"])
    out = capsys.readouterr().out
    assert code == EXIT_CAP
    rec = json.loads(out)["records"][0]
    assert rec["status"] == "skipped-cap"
    assert rec["g_order_all_pairs"] is None
    # cover counts do not depend on the enumeration, so they are still filled
    assert rec["quotient_components"] == 2


def test_cap_env_var_and_cli_override(capsys, monkeypatch):
    monkeypatch.setenv("BRAUERKIT_CAP", "10")
    assert main(["table", "--g", "2", "--r", "2", "--d", "0"]) == EXIT_CAP
    capsys.readouterr()
    code = main(["table", "--g", "2", "--r", "2", "--d", "0", "--cap", "1000000"])
    assert code == EXIT_OK
    capsys.readouterr()
    monkeypatch.setenv("BRAUERKIT_CAP", "ten")
    assert main(["table", "--g", "2", "--r", "2", "--d", "0"]) == EXIT_CONFIG
    capsys.readouterr()


def test_table_csv_projection(capsys):
    code = main(["table", "--g", "2", "--r", "2", "--d", "0", "--format", "csv"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 2
    row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
    assert row["g"] == "2" and row["status"] == "ok"
    assert row["e_in_gprime"] == "true"
    assert row["cfg_mode"] == "both"
    assert row["cfg_seed"] == "0"
    assert row["timing_ms"] == ""


def test_table_deterministic_bytes(tmp_path):
    args = ["table", "--g", "2", "--r", "2..3", "--d", "0..1"]
    a, b, c = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
    assert main(args + ["--out", str(a)]) == EXIT_OK
    assert main(args + ["--out", str(b)]) == EXIT_OK
    assert main(args + ["--jobs", "2", "--out", str(c)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_table_timings_flag(capsys):
    code = main(["table", "--g", "2", "--r", "2", "--d", "0", "--timings"])
    doc = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert doc["records"][0]["timing_ms"] >= 0


def test_load_report_roundtrip_preserves_unknown_fields(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["table", "--g", "2", "--r", "2", "--d", "0", "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    doc["records"][0]["future_field"] = "kept"
    out.write_text(json.dumps(doc))
    again = load_report(str(out))
    assert again["records"][0]["future_field"] == "kept"
    out.write_text(json.dumps({"schema": "other.v9"}))
    with pytest.raises(ValueError):
        load_report(str(out))


def test_verify_g_output(capsys):
    code = main(["verify-g", "--g", "2", "--r", "2..3"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert len(lines) == 4  # two r values, both modes
    assert all("equals-pairing-span=yes" in line for line in lines)


def test_bogomolov_streamed_and_explicit(capsys):
    code = main(["bogomolov", "--g", "2", "--r", "2..3"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "members=streamed" in out
    assert "e-in-G'=yes" in out and "G'-in-G=yes" in out
    code = main(["bogomolov", "--g", "2", "--r", "2", "--explicit"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "members=15" in out


def test_bogomolov_all_family(capsys):
    code = main(["bogomolov", "--g", "2", "--r", "2", "--family", "all"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "family=all members=35 |G'|=1" in out


def test_components_table(capsys):
    code = main(["components", "--r", "2..4", "--d", "0..2"])
    out = capsys.readouterr().out.strip().split("\n")
    assert code == EXIT_OK
    assert out[0] == "r d prym quotient l twist"
    assert "2 0 2 2 2 1" in out
    assert "4 2 4 2 2 2" in out
    assert len(out) == 1 + 3 * 3


def test_selftest_passes_and_is_deterministic(capsys):
    assert main(["selftest", "--seed", "0"]) == EXIT_OK
    first = capsys.readouterr().out
    assert "selftest: PASS" in first
    assert main(["selftest", "--seed", "0"]) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second


def test_selftest_fault_injection_names_suite(capsys):
    code = main(["selftest", "--seed", "0", "--inject-fault", "weil-a1b1"])
    out = capsys.readouterr().out
    assert code == EXIT_VIOLATION
    assert "suite weil-nondegeneracy: FAIL" in out
    assert "selftest: FAIL (weil-nondegeneracy)" in out
