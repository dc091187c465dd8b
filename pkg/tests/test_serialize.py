import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import weight_from_seed
from orbitforge.gamma import GammaSet
from orbitforge.group import DiscreteVec, IntBox, IntInterval, PointSet, RealPoint, RealUnion
from orbitforge.repro import claim2_vector, final_z, r_peaks, twosided_exp
from orbitforge.serialize import (
    SpecError,
    dumps,
    gamma_from_inline,
    gamma_from_json,
    gamma_to_json,
    jsonable,
    point_from_json,
    point_to_json,
    vec_from_json,
    vec_to_json,
    weight_from_json,
    weight_to_json,
    window_from_json,
    window_to_json,
)
from orbitforge.weights import ProductWeight


@pytest.mark.parametrize("w", [twosided_exp(), final_z(), r_peaks(6), ProductWeight((twosided_exp(), final_z()))],
                         ids=["twosided", "final", "peaks", "product"])
def test_weight_roundtrip_is_byte_stable(w):
    text = dumps(weight_to_json(w))
    back = weight_from_json(json.loads(text))
    assert back == w
    assert dumps(weight_to_json(back)) == text


@given(st.integers(0, 2 ** 32 - 1))
def test_random_weight_roundtrip(seed):
    w = weight_from_seed(seed)
    assert weight_from_json(json.loads(dumps(weight_to_json(w)))) == w


@pytest.mark.parametrize("g", [GammaSet.all(), GammaSet.annulus(0.5, 2), GammaSet.zero_to_one(),
                               GammaSet.one_to_inf(), GammaSet.singleton(3), GammaSet.of_grid([1, 2, 4])])
def test_gamma_roundtrip(g):
    assert gamma_from_json(json.loads(dumps(gamma_to_json(g)))) == g


def test_gamma_inline():
    assert gamma_from_inline("annulus:0.5,2") == GammaSet.annulus(0.5, 2)
    assert gamma_from_inline("grid:pow2:3") == GammaSet.of_grid([1, 2, 4, 8])
    assert gamma_from_inline("singleton:1") == GammaSet.singleton(1)
    with pytest.raises(SpecError):
        gamma_from_inline("disc")


@pytest.mark.parametrize("K", [IntInterval(-2, 5), PointSet((1, 4, 9)), IntBox((0, 0), (2, 3)),
                               RealUnion(((3, -0.5, 0.25),), r_peaks(6).anchors)])
def test_window_roundtrip(K):
    assert window_from_json(json.loads(dumps(window_to_json(K)))) == K


@pytest.mark.parametrize("p", [3, (1, -2), RealPoint(4, 0.5)])
def test_point_roundtrip(p):
    assert point_from_json(point_to_json(p)) == p


def test_vector_roundtrip():
    for f in (DiscreteVec("Z", ((0, 1 + 2j), (3, -0.5))), claim2_vector(6)):
        assert vec_from_json(json.loads(dumps(vec_to_json(f)))) == f


def test_errors_name_the_field():
    with pytest.raises(SpecError) as e:
        weight_from_json({"space": "Z", "window": {"lo": 0}})
    assert "window" in e.value.field
    with pytest.raises(SpecError) as e:
        vec_from_json({"space": "Q", "entries": []})
    assert e.value.field == "vector.space"


def test_jsonable_handles_specials():
    out = jsonable({"a": float("inf"), "b": float("nan"), "c": 1 + 2j})
    assert out == {"a": "inf", "b": None, "c": {"re": 1.0, "im": 2.0}}
    dumps(out)
