from fractions import Fraction
from pathlib import Path

import pytest

from geoham.errors import ParseError
from geoham.expr import Chart, parse_expression
from geoham.geom import DifferentialForm, Tensor11, VectorField
from geoham.sysfile import (
    parse_form_literal,
    parse_frequencies_literal,
    parse_matrix_literal,
    parse_system_file,
    parse_tensor_literal,
    parse_vector_field_literal,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_parse_oscillator_fixture():
    system = parse_system_file((FIXTURES / "oscillator_r4.sys").read_text(), "oscillator_r4.sys")
    assert system.chart.names == ("q1", "q2", "p1", "p2")
    assert system.chart.constants == ("omega",)
    assert system.constant_values == {"omega": Fraction(3, 2)}
    kinds = {name: kind for name, (kind, _) in system.objects.items()}
    assert kinds["H1"] == "scalar"
    assert kinds["w1"] == "form"
    assert kinds["Gamma"] == "vectorfield"
    assert kinds["T"] == "tensor"
    assert [r.kind for r in system.requests] == ["verify", "verify", "altgen", "normalform"]


def test_form_literal_roundtrip():
    chart = Chart(["q1", "q2", "p1", "p2"])
    form = DifferentialForm(chart, 2, {
        (0, 2): chart.one(),
        (1, 3): parse_expression("-1/2*q1", chart),
    })
    parsed = parse_form_literal(str(form).split(": ", 1)[0] + ": " + str(form).split(": ", 1)[1], chart)
    assert parsed == form
    assert parse_form_literal("2-form: 0", chart) == DifferentialForm.zero(chart, 2)
    zero_form = DifferentialForm.zero(chart, 3)
    assert parse_form_literal(str(zero_form), chart) == zero_form


def test_vector_field_and_tensor_literals():
    chart = Chart(["q", "p"], constants=["omega"])
    field = parse_vector_field_literal("[omega*p, -omega*q]", chart)
    assert field == VectorField(chart, [
        parse_expression("omega*p", chart), parse_expression("-omega*q", chart)
    ])
    tensor = parse_tensor_literal("[[0, 1], [1, 0]]", chart)
    assert tensor == Tensor11(chart, [
        [chart.zero(), chart.one()], [chart.one(), chart.zero()]
    ])
    # printed forms re-parse
    assert parse_vector_field_literal(str(field), chart) == field
    assert parse_tensor_literal(str(tensor), chart) == tensor


def test_matrix_and_frequencies_literals():
    matrix = parse_matrix_literal("[[0, -1/2], [1/2, 0]]")
    assert matrix.entries[0][1] == Fraction(-1, 2)
    spec = parse_frequencies_literal("{ basis: [1, sqrt2]; omega: [[1, 0], [0, 1]] }")
    assert spec.basis == ("1", "sqrt2")
    assert spec.n == 2


def test_parse_errors_carry_line_numbers():
    bad = "chart q, p\nscalar H = q +\n"
    with pytest.raises(ParseError) as err:
        parse_system_file(bad)
    assert err.value.line == 2

    with pytest.raises(ParseError) as err:
        parse_system_file("scalar H = 1\n")
    assert "chart" in str(err.value)

    with pytest.raises(ParseError) as err:
        parse_system_file("chart q, p\nverify v : G w H\n")
    assert "unknown object" in str(err.value)


def test_duplicate_names_rejected():
    text = "chart q, p\nscalar H = q\nscalar H = p\n"
    with pytest.raises(ParseError):
        parse_system_file(text)
    text = "chart q, p\nscalar H = q\nverify a : H H H\nverify a : H H H\n"
    with pytest.raises(ParseError):
        parse_system_file(text)


def test_request_kind_checks():
    text = "chart q, p\nscalar H = q\nfactorize f : H\n"
    with pytest.raises(ParseError) as err:
        parse_system_file(text)
    assert "kind" in str(err.value)


def test_multiline_matrix_continuation():
    text = (
        "chart q1, q2, p1, p2\n"
        "matrix A = [[0, 0, 1, 0],\n"
        "            [0, 0, 0, 1],\n"
        "            [-1, 0, 0, 0],\n"
        "            [0, -1, 0, 0]]\n"
        "factorize f : A\n"
    )
    system = parse_system_file(text)
    assert system.objects["A"][1].n == 4


def test_all_fixture_files_parse():
    for path in sorted(FIXTURES.glob("*.sys")):
        system = parse_system_file(path.read_text(), str(path))
        assert system.requests, path
