from fractions import Fraction

import pytest

from lgwindows.model import GaugedModel, ModelError, Space, decompose, mirror, parity_witness, validate


def test_flop_is_valid(flop0, flopW):
    for m in (flop0, flopW):
        rep = validate(m)
        assert rep.valid, rep.to_dict()
    assert decompose(flopW).d == 2


def test_calabi_yau_failure():
    m = GaugedModel.from_spec([("x", 1, 0), ("y", -2, 2)], "0")
    rep = validate(m)
    assert not rep.valid
    assert [c.name for c in rep.failures()] == ["calabi_yau"]


def test_W_bidegree_failure():
    m = GaugedModel.from_spec([("x", 1, 0), ("y", -1, 2)], "x*y + x")
    assert "W_bidegree" in [c.name for c in validate(m).failures()]


def test_parity():
    m = GaugedModel.from_spec([("x", 2, 0), ("y1", -1, 1), ("y2", -1, 1)], "x*y1*y2")
    assert parity_witness(m.table) == 1
    bad = GaugedModel.from_spec([("x", 1, 0), ("y", -1, 1)], "0")
    assert parity_witness(bad.table) is None
    assert not validate(bad).valid
    half = GaugedModel.from_spec([("x", 2, 1), ("y", -2, 1)], "0")
    assert parity_witness(half.table) == Fraction(1, 2)


def test_json_round_trip(flopW, tmp_path):
    p = tmp_path / "m.json"
    p.write_text(flopW.dumps())
    assert GaugedModel.load(p) == flopW


def test_malformed_json():
    with pytest.raises(ModelError):
        GaugedModel.from_dict({"variables": [{"name": "x"}]})


def test_mirror_swaps_sides(flopW):
    d = decompose(mirror(flopW))
    assert d.x_indices == (2, 3) and d.y_indices == (0, 1)


def test_space_parse():
    assert Space.parse("PLUS") is Space.PLUS
    assert Space.PLUS.opposite() is Space.MINUS
    with pytest.raises(ModelError):
        Space.parse("nowhere")
    with pytest.raises(ModelError):
        Space.STACK.opposite()
