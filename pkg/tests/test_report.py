from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtetra.report import Case, Report


def test_case_coerces_exact_values():
    c = Case("x", 1, {"a": (1, 2), "f": Fraction(1, 3)}, None, 1 + 2j)
    assert c.passed is True
    assert c.inputs == {"a": [1, 2], "f": "1/3"}
    assert c.got == [1.0, 2.0]


def test_exit_code_and_totals():
    r = Report("s", [Case("a", True), Case("b", False)])
    assert r.totals == {"cases": 2, "passed": 1, "failed": 1}
    assert r.exit_code() == 1
    assert Report("s", [Case("a", True)]).exit_code() == 0
    assert Report("empty").ok


def test_schema_checked():
    d = Report("s", [Case("a", True)]).to_dict()
    d["schema"] = 99
    with pytest.raises(ValueError):
        Report.from_dict(d)


@given(st.lists(st.tuples(st.text(max_size=8), st.booleans(), st.integers()), max_size=5), st.floats(0, 100))
def test_json_round_trip(rows, wall):
    r = Report("s", [Case(n, p, {"k": k}, k, [k]) for n, p, k in rows], wall)
    assert Report.from_json(r.to_json()) == r
