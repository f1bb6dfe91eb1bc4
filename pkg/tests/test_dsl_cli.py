import json
import pathlib

import pytest

from gradedlie.cli import run
from gradedlie.derivations import is_homological
from gradedlie.dsl import (DslError, parse, parse_expression, print_document,
                           to_algebroid_spec)

DATA = pathlib.Path(__file__).parent / "data"


def spec_text(name):
    return (DATA / name).read_text()


# -- parser -----------------------------------------------------------------

def test_golden_files_parse_and_round_trip():
    for path in sorted(DATA.glob("*.spec")):
        text = path.read_text()
        doc = parse(text)
        printed = print_document(doc)
        assert parse(printed) == doc
        assert print_document(parse(printed)) == printed


def test_print_parse_fixpoint_e7():
    doc = parse(spec_text("e7.spec"))
    assert print_document(doc) == spec_text("e7.spec")


def test_parsed_e7_is_homological():
    spec = to_algebroid_spec(parse(spec_text("e7.spec")))
    assert is_homological(spec.d).ok


def test_comments_and_whitespace_insensitive():
    a = parse("algebroid a degree 0\nodd xi weight 0 dim 2\n"
              "d xi[2] = xi[1]*xi[2]\n")
    b = parse("# header\nalgebroid   a\n  degree 0  # trailing\n"
              "odd xi weight 0 dim 2\nd xi[ 2 ]=xi[1] * xi[2]")
    assert a == b


def test_rational_literals_and_precedence():
    from fractions import Fraction
    table = parse("algebroid a degree 0\nbase x weight 0 dim 1\n").table
    x = table.gen("x", 1)
    assert parse_expression(table, "1/2*x[1]^2 + 3") == Fraction(1, 2) * x ** 2 + 3
    assert parse_expression(table, "-x[1]^2") == -(x ** 2)
    assert parse_expression(table, "(1 - x[1])^2") == 1 - 2 * x + x ** 2


def test_undeclared_identifier_error():
    with pytest.raises(DslError) as err:
        parse("algebroid a degree 0\nbase x weight 0 dim 1\n"
              "d z[1] = y[1]*x[1]\n")
    assert "z" in str(err.value)
    assert "line 3" in str(err.value)


def test_empty_document_error():
    with pytest.raises(DslError) as err:
        parse("   # only a comment\n")
    assert "header" in str(err.value)


def test_declaration_after_use():
    doc = parse("algebroid a degree 0\nd xi[2] = xi[1]*xi[2]\n"
                "odd xi weight 0 dim 2\n")
    assert to_algebroid_spec(doc) is not None


def test_weight_inconsistent_assignment_reports_span():
    with pytest.raises(DslError) as err:
        to_algebroid_spec(parse(
            "algebroid a degree 1\nbase x weight 0 dim 1\n"
            "even z weight 1 dim 1\nodd y weight 0 dim 1\n"
            "d x[1] = z[1]\n"))
    assert "line" in str(err.value)


def test_degree_mismatch_rejected():
    with pytest.raises(DslError):
        parse("algebroid a degree 2\nbase x weight 0 dim 1\n"
              "odd y weight 0 dim 1\n")


# -- CLI --------------------------------------------------------------------

def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_check_pass(capsys):
    code, out, _ = _run(capsys, "check", str(DATA / "e7.spec"))
    assert code == 0
    assert "PASS" in out


def test_cli_check_fail_named_residual(capsys):
    code, out, _ = _run(capsys, "check", str(DATA / "broken.spec"),
                        "--format", "json")
    assert code == 1
    payload = json.loads(out)
    assert payload["status"] == "fail"
    assert set(payload) == {"status", "residuals"}
    assert payload["residuals"]


def test_cli_check_json_keys(capsys):
    code, out, _ = _run(capsys, "check", str(DATA / "sl2.spec"),
                        "--format", "json")
    assert code == 0
    assert set(json.loads(out)) == {"status", "residuals"}


def test_cli_decompose_e7(capsys):
    code, out, _ = _run(capsys, "decompose", str(DATA / "e7.spec"),
                        "--weight", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"status", "dims"}
    assert payload["dims"] == {"(2,0)": 7, "(2,1)": 7, "(2,2)": 1}


def test_cli_rep_adjoint(capsys):
    code, out, _ = _run(capsys, "rep", str(DATA / "adjoint.spec"),
                        "--weight", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"status", "residuals", "components"}
    assert payload["status"] == "ok"
    assert set(payload["components"]) == {"0", "1"}


def test_cli_cohomology_sl2(capsys):
    code, out, _ = _run(capsys, "cohomology", str(DATA / "sl2.spec"),
                        "--weight", "0", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"status", "betti", "truncated"}
    assert payload["betti"] == [1, 0, 0, 1]
    assert payload["truncated"] is False


def test_cli_cohomology_cap_error(capsys):
    code, _out, err = _run(capsys, "cohomology", str(DATA / "e7.spec"),
                           "--weight", "2")
    assert code == 2
    assert "cap" in err


def test_cli_example_round_trip(tmp_path, capsys):
    out_file = tmp_path / "gen.spec"
    code, out, _ = _run(capsys, "example", "adjoint", "-o", str(out_file),
                        "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"status", "path"}
    code, out, _ = _run(capsys, "check", str(out_file))
    assert code == 0


def test_cli_example_unknown(capsys):
    code, _out, err = _run(capsys, "example", "nope")
    assert code == 2
    assert "unknown example" in err


def test_cli_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.spec"
    bad.write_text("algebroid broken degree 1\nodd xi weight 0\n")
    code, _out, err = _run(capsys, "check", str(bad))
    assert code == 2
    assert "error" in err


def test_cli_missing_file_exit_2(capsys):
    code, _out, _err = _run(capsys, "check", "no_such_file.spec")
    assert code == 2


def test_cli_usage_error_exit_2(capsys):
    assert run([]) == 2
    assert run(["decompose", str(DATA / "e7.spec")]) == 2  # missing --weight
