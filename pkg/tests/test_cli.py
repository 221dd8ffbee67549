import json
from fractions import Fraction

import jsonschema
import pytest

from mzvalg.algebra import parse_poly
from mzvalg import numeric
from mzvalg.cli import run
from mzvalg.finite_sums import A
from mzvalg.qsym import parse_qsym, qsym_mul, star
from mzvalg.shuffle import shuffle

COEFF = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
POLY = {"type": "array", "items": {"type": "object", "required": ["coeff", "word"],
                                   "properties": {"coeff": COEFF,
                                                  "word": {"type": "string", "pattern": "^[xy]*$"}}}}
QSYM = {"type": "object", "required": ["basis", "terms"],
        "properties": {"basis": {"enum": ["M", "F", "E"]},
                       "terms": {"type": "array", "items": {
                           "type": "object", "required": ["coeff", "composition"],
                           "properties": {"coeff": COEFF, "composition": {
                               "type": "array", "items": {"type": "integer", "minimum": 1}}}}}}}
APPROX = {"type": "object", "required": ["value", "error_bound"],
          "properties": {"value": {"type": "number"}, "error_bound": {"type": "number", "minimum": 0}}}
REPORT = {"type": "object", "required": ["identity", "params", "passed"],
          "properties": {"identity": {"type": "string"}, "passed": {"type": "boolean"},
                         "lhs": {"anyOf": [APPROX, {"type": "string"}]},
                         "rhs": {"anyOf": [APPROX, {"type": "string"}]}}}


def envelope(result_schema):
    return {"type": "object", "required": ["command", "inputs", "result"],
            "properties": {"command": {"type": "string"}, "inputs": {"type": "object"},
                           "result": result_schema}}


SCHEMAS = {
    "product": envelope({"anyOf": [POLY, QSYM]}),
    "convert": envelope(QSYM),
    "act": envelope(POLY), "derive": envelope(POLY), "tau": envelope(POLY), "psi": envelope(POLY),
    "series": envelope({"type": "array", "items": POLY}),
    "finite": envelope(COEFF),
    "modp": envelope({"type": "object", "required": ["residue", "modulus"]}),
    "zeta": envelope(APPROX),
    "lyndon": envelope({"type": "array", "items": {"type": "string"}}),
    "verify": {"type": "object", "required": ["command", "passed", "groups"],
               "properties": {"passed": {"type": "boolean"},
                              "groups": {"type": "object",
                                         "additionalProperties": {"type": "array", "items": REPORT}}}},
}


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv", [
    ["product", "--type", "shuffle", "xy", "xy"],
    ["product", "--type", "star", "x^2y", "y"],
    ["product", "--type", "qsym", "E(2)", "E(3)"],
    ["convert", "M(2,1)", "--to", "F"],
    ["act", "y", "xyy"],
    ["derive", "D", "xxy", "--n", "2"],
    ["derive", "partial", "xy", "--n", "2"],
    ["series", "sigma_inv", "xy", "--order", "2"],
    ["tau", "xxy"],
    ["psi", "xyy"],
    ["finite", "S", "(4,2,1)", "6"],
    ["modp", "(1,1)", "7"],
    ["zeta", "(2,1)"],
    ["lyndon", "5"],
    ["verify", "duality", "--max-weight", "3"],
    ["verify", "thm6x", "--max-weight", "3", "--max-prime", "13"],
])
def test_json_matches_schema(capsys, argv):
    code, out, _ = call(capsys, *argv, "--json")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMAS[argv[0]])


@pytest.mark.parametrize("kind,u,v", [("shuffle", "xy", "x^2y"), ("star", "xy - y", "2*xxy"),
                                      ("shuffle", "1/2*yx", "y")])
def test_product_text_round_trips(capsys, kind, u, v):
    code, out, _ = call(capsys, "product", "--type", kind, u, v)
    assert code == 0
    product = shuffle if kind == "shuffle" else star
    assert parse_poly(out.strip()) == product(parse_poly(u), parse_poly(v))


def test_qsym_text_round_trips(capsys):
    _, out, _ = call(capsys, "product", "--type", "qsym", "M(1,1)", "M(2)")
    assert parse_qsym(out.strip()) == qsym_mul(parse_qsym("M(1,1)"), parse_qsym("M(2)"))


def test_finite_example(capsys):
    _, out, _ = call(capsys, "finite", "S", "(4,2,1)", "6")
    assert Fraction(out.strip()) == sum(A(J, 6) for J in [(4, 2, 1), (6, 1), (4, 3), (7,)])


def test_modp_text(capsys):
    assert call(capsys, "modp", "(1)", "5", "--kind", "S")[1].strip() == "0 mod 5"


def test_verify_table_and_exit_code(capsys):
    code, out, _ = call(capsys, "verify", "duality", "--max-weight", "4")
    assert code == 0
    assert out.count("PASS duality") == 7 and "ALL PASSED" in out
    code, out, _ = call(capsys, "verify", "le_murakami", "n=2", "k=1")
    assert code == 0 and "PASS le_murakami(n=2, k=1)" in out


def test_verify_all_small(capsys):
    code, out, _ = call(capsys, "verify", "all", "--max-weight", "4", "--max-prime", "11", "--order", "2")
    assert code == 0 and "ALL PASSED" in out


def test_failing_verification_exits_one(capsys, monkeypatch):
    original = numeric.check_duality

    def broken(w, tol=numeric.DEFAULT_TOL):
        report = original(w, tol)
        report.passed = False
        return report

    monkeypatch.setitem(numeric.IDENTITIES, "duality",
                        numeric.Identity("duality", broken, numeric._duality_family, {"max_weight": 8}))
    code, out, _ = call(capsys, "verify", "duality", "w=xxy")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("argv,needle", [
    (["zeta", "(1,2)"], "diverges"),
    (["product", "xy", "x^"], "offset 1"),
    (["finite", "A", "(2,0)", "3"], "offset"),
    (["modp", "(1)", "8"], "not prime"),
    (["verify", "duality", "--max-weight", "12"], "cap"),
    (["verify", "nonsense"], "unknown identity"),
    (["act", "yx", "y"], "not ending in y"),
    (["verify", "duality", "oops"], "key=value"),
])
def test_usage_errors_exit_two(capsys, argv, needle):
    code, _, err = call(capsys, *argv)
    assert code == 2 and needle in err


def test_argparse_errors_exit_two(capsys):
    assert run(["bogus"]) == 2
    assert run(["product", "--type", "nope", "x", "y"]) == 2
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert "product" in capsys.readouterr().out
