import pytest
from hypothesis import given, strategies as st

from aacplan.errors import InvalidAccuracy, InvalidTopk, InvalidTransformation, UnknownTrait
from aacplan.register import canonical_register, descriptor_of
from aacplan.transform import (
    Catalog,
    Mode,
    TopkRow,
    accuracy_from_topk,
    add_transformation,
    builtin_topk_table,
    classify_mode,
    miscommunication,
)

REG = canonical_register()


@pytest.mark.parametrize("src, dst, mode", [
    ("Text", "SyntheticSpeech", Mode.I),
    ("HandGesture", "Text", Mode.II),
    ("Text", "HandGesture", Mode.II),
    ("AuditorySignal", "HandGesture", Mode.III),
])
def test_classify_mode(src, dst, mode):
    assert classify_mode(descriptor_of(REG, src), descriptor_of(REG, dst)) is mode


@given(st.sampled_from(REG.entries), st.sampled_from(REG.entries))
def test_classify_mode_symmetric(a, b):
    assert classify_mode(a, b) is classify_mode(b, a)


def test_add_transformation_derives_mode():
    cat = add_transformation(Catalog(REG), "HandGesture", "Text", 0.85)
    (t,) = cat.transformations
    assert t.mode is Mode.II
    assert t.accuracy == 0.85


def test_add_transformation_rejects_bad_accuracy():
    with pytest.raises(InvalidAccuracy):
        add_transformation(Catalog(REG), "Text", "SyntheticSpeech", 1.2)


def test_add_transformation_unknown_trait():
    with pytest.raises(UnknownTrait):
        add_transformation(Catalog(REG), "Unicorn", "Text", 0.5)


def test_parallel_edges_are_kept():
    cat = add_transformation(Catalog(REG), "HandGesture", "Text", 0.85)
    cat2 = add_transformation(cat, "HandGesture", "Text", 0.86)
    assert [t.accuracy for t in cat2] == [0.85, 0.86]
    assert len({t.id for t in cat2}) == 2
    assert len(cat) == 1


def test_self_loop_rejected():
    with pytest.raises(InvalidTransformation):
        add_transformation(Catalog(REG), "Text", "Text", 0.9)


def test_negative_latency_rejected():
    with pytest.raises(InvalidTransformation):
        add_transformation(Catalog(REG), "Text", "SyntheticSpeech", 0.9, latency=-1)


@pytest.mark.parametrize("acc, risk", [(0.85, 0.15), (1.0, 0.0), (0.70, 0.30)])
def test_miscommunication(acc, risk):
    (t,) = add_transformation(Catalog(REG), "HandGesture", "Text", acc).transformations
    assert miscommunication(t) == pytest.approx(risk, abs=1e-15)


@given(st.floats(0.0, 1.0))
def test_miscommunication_complements_accuracy(acc):
    (t,) = add_transformation(Catalog(REG), "HandGesture", "Text", acc).transformations
    assert miscommunication(t) + t.accuracy == pytest.approx(1.0, abs=1e-15)


def test_topk_table_rows():
    rows = {r.model: r for r in builtin_topk_table()}
    assert len(rows) == 7
    r = rows["Transformer encoder + focus projection"]
    assert (r.top1, r.top5, r.top10) == (26.06, 56.91, 68.97)
    r = rows["I3D"]
    assert (r.top1, r.top5, r.top10) == (32.48, 57.31, 66.31)
    assert all(r.dataset == "WLASL-2000" for r in rows.values())
    assert all(r.top1 <= r.top5 <= r.top10 for r in rows.values())


def test_topk_row_monotonicity_enforced():
    with pytest.raises(InvalidTopk):
        TopkRow("bad", "x", 50, 40, 60)


def test_accuracy_from_topk():
    rows = {r.model: r for r in builtin_topk_table()}
    assert accuracy_from_topk(rows["Transformer encoder + focus projection"], 10) == pytest.approx(0.6897, abs=1e-15)
    assert accuracy_from_topk(rows["I3D"], 1) == pytest.approx(0.3248, abs=1e-15)
    assert accuracy_from_topk(TopkRow("zero", "x", 0, 0, 0), 1) == 0.0
    with pytest.raises(ValueError):
        accuracy_from_topk(rows["I3D"], 3)
