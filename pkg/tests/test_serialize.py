import json

import pytest

from biquad_sos.decompose import decompose_P_plus
from biquad_sos.families import gen_P, gen_P_plus
from biquad_sos.serialize import (
    decomposition_from_dict,
    dumps_decomposition,
    dumps_form,
    form_from_dict,
    loads_decomposition,
    loads_form,
)


def test_form_json_shape():
    data = json.loads(dumps_form(gen_P(3, 3, 1)))
    assert data == {"m": 3, "n": 3, "monomials": [{"i": 1, "k": 1, "j": 1, "l": 1, "coeff": "1"}]}


@pytest.mark.parametrize("f", [gen_P(3, 3, 6), gen_P_plus()])
def test_form_roundtrip(f):
    assert loads_form(dumps_form(f)) == f


def test_decomposition_roundtrip():
    d = decompose_P_plus()
    back = loads_decomposition(dumps_decomposition(d))
    assert back == d
    coeffs = {e["coeff"] for sq in json.loads(dumps_decomposition(d))["squares"] for e in sq["entries"]}
    assert coeffs == {"1/2", "1/2*sqrt(3)", "-1/2*sqrt(3)", "-1/2", "1"}


def test_noncanonical_monomials_are_merged():
    f = form_from_dict({"m": 3, "n": 3, "monomials": [
        {"i": 2, "k": 1, "j": 1, "l": 3, "coeff": "1"},
        {"i": 1, "k": 2, "j": 3, "l": 1, "coeff": "1"},
    ]})
    assert f.coefficient(1, 2, 1, 3) == 2


def test_radical_coefficient_text():
    f = form_from_dict({"m": 2, "n": 2, "monomials": [{"i": 1, "k": 1, "j": 1, "l": 1, "coeff": "1/2*sqrt(3)+1"}]})
    assert str(f.coefficient(1, 1, 1, 1)) == "1+1/2*sqrt(3)"


def test_malformed_inputs():
    with pytest.raises(ValueError):
        form_from_dict({"m": 3})
    with pytest.raises(ValueError):
        decomposition_from_dict({"m": 3, "n": 3, "squares": [{"entries": [{"i": 1}]}]})


def test_form_and_decomposition_are_not_interchangeable():
    with pytest.raises(ValueError):
        loads_form(dumps_decomposition(decompose_P_plus()))
    with pytest.raises(ValueError):
        loads_decomposition(dumps_form(gen_P_plus()))
