import json

import pytest

from filterlogic.enumeration import enumerate_frames
from filterlogic.io import FrameFormatError, frame_document, from_document, loads_frame


def doc(**kw):
    d = {"version": "filterlogic-frame/1", "elements": ["0", "a", "b", "1"],
         "leq_pairs": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]]}
    d.update(kw)
    return d


def test_round_trip_modal_frames():
    for fr in enumerate_frames(3, "modal"):
        lf = from_document(json.loads(json.dumps(frame_document(fr.sl, fr.rows))))
        assert lf.sl.poset.up == fr.sl.poset.up
        assert lf.frame.rows == fr.rows


def test_meet_table_form():
    lf = from_document({"elements": ["0", "1"], "meet": [["0", "0"], ["0", "1"]]})
    assert lf.sl.leq(0, 1)
    assert lf.lattice is not None


def test_valuation_and_lattice():
    lf = from_document(doc(valuation={"p": ["a", "1"]}))
    assert lf.valuation == {"p": 0b1010}
    assert lf.lattice.join[1][2] == 3


def test_modal_lattice_tables():
    lf = from_document({"elements": ["0", "1"], "leq_pairs": [["0", "1"]],
                        "box": {"0": "0", "1": "1"}, "dia": {"0": "0", "1": "1"}})
    assert lf.modal_lattice.box == (0, 1)


@pytest.mark.parametrize("bad,where", [
    ("not json", "line 1"),
    ('{"elements": ["a"], "leq_pairs": [["a", "z"]]}', "$.leq_pairs[0]"),
    ('{"elements": ["a", "b"], "leq_pairs": [["a", "b"], ["b", "a"]]}', "$.leq_pairs"),
    ('{"elements": ["a", "b", "1"], "leq_pairs": [["a", "1"], ["b", "1"]]}', "$"),
    ('{"elements": ["0", "1"], "leq_pairs": [["0", "1"]], "valuation": {"p": ["0"]}}', "$.valuation.p"),
    ('{"version": "other", "elements": []}', "$.version"),
    ('{"elements": ["0"]}', "$"),
])
def test_errors_name_location(bad, where):
    with pytest.raises(FrameFormatError) as e:
        loads_frame(bad)
    assert e.value.where.startswith(where)
