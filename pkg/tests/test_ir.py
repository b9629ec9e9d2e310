"""Lowering, graph typing, fusion, and the working-set model."""

import pytest

from hdc2c.errors import EncodingTypeError
from hdc2c.ir.fuse import fuse
from hdc2c.ir.lower import lower
from hdc2c.ir.memplan import plan_memory
from hdc2c.ir.nodes import Op, ShapeType


@pytest.fixture
def lower_text(make_description):
    def build(encoding, **kw):
        return lower(make_description(encoding=encoding, **kw))
    return build


def test_bundle_of_bind_dump(lower_text):
    ir = lower_text("MULTIBUNDLE(BATCHBIND(ID, VALUE))")
    assert ir.dump() == (
        "%0 = LoadEmbedding(ID) : FeatureStream\n"
        "%1 = LoadEmbedding(VALUE) : FeatureStream\n"
        "%2 = BatchBind(%0, %1) : FeatureStream\n"
        "%3 = MultiBundle(%2) : SingleHV\n"
    )
    assert ir.output == 3


def test_hashtable_desugars_to_bind_bundle(lower_text):
    sugar = lower_text("HASHTABLE(ID, VALUE)")
    spelled = lower_text("MULTIBUNDLE(BATCHBIND(ID, VALUE))")
    assert sugar.dump() == spelled.dump()


def test_loads_are_shared(lower_text):
    ir = lower_text("BUNDLE(MULTIBUNDLE(BATCHBIND(ID, VALUE)), MULTIBUNDLE(ID))")
    loads = [n for n in ir.nodes if n.op is Op.LoadEmbedding]
    assert len(loads) == 2  # ID and VALUE, each loaded once


def test_ngram_lowering(lower_text):
    ir = lower_text("NGRAM(VALUE, 3)")
    [node] = [n for n in ir.nodes if n.op is Op.Ngram]
    assert node.param == 3
    assert node.shape is ShapeType.SingleHV


def test_permute_preserves_shape(lower_text):
    ir = lower_text("MULTIBUNDLE(BATCHBIND(ID, PERMUTE(VALUE, 2)))")
    [perm] = [n for n in ir.nodes if n.op is Op.Permute]
    assert perm.shape is ShapeType.FeatureStream
    ir = lower_text("PERMUTE(MULTIBUNDLE(VALUE), 1)")
    [perm] = [n for n in ir.nodes if n.op is Op.Permute]
    assert perm.shape is ShapeType.SingleHV


def test_bind_requires_single_vectors(lower_text):
    with pytest.raises(EncodingTypeError):
        lower_text("BIND(ID, VALUE)")  # both are streams


def test_multibundle_requires_stream(lower_text):
    with pytest.raises(EncodingTypeError):
        lower_text("MULTIBUNDLE(MULTIBUNDLE(ID))")


def test_toplevel_stream_rejected(lower_text):
    with pytest.raises(EncodingTypeError):
        lower_text("BATCHBIND(ID, VALUE)")


def test_ngram_window_bounds(lower_text):
    with pytest.raises(EncodingTypeError) as info:
        lower_text("NGRAM(VALUE, 17)")  # input_dim is 16
    assert "17" in str(info.value)


def test_positional_table_must_cover_positions(lower_text):
    with pytest.raises(EncodingTypeError) as info:
        lower_text("MULTIBUNDLE(BATCHBIND(ID, VALUE))", id_items=8)
    assert "8" in str(info.value)


# -- fusion -------------------------------------------------------------


def test_fuse_bind_bundle(lower_text):
    ir = fuse(lower_text("MULTIBUNDLE(BATCHBIND(ID, VALUE))"))
    assert ir.dump() == (
        "%0 = LoadEmbedding(ID) : FeatureStream\n"
        "%1 = LoadEmbedding(VALUE) : FeatureStream\n"
        "%2 = FusedBindBundle(%0, %1) : SingleHV\n"
    )


def test_fuse_ngram(lower_text):
    ir = fuse(lower_text("NGRAM(VALUE, 2)"))
    ops = [n.op for n in ir.nodes]
    assert Op.FusedNgram in ops and Op.Ngram not in ops


def test_fusion_skips_wrapped_batchbind(lower_text):
    # a permute between the bind and the bundle blocks the pattern
    ir = fuse(lower_text("MULTIBUNDLE(PERMUTE(BATCHBIND(ID, VALUE), 1))"))
    ops = [n.op for n in ir.nodes]
    assert Op.FusedBindBundle not in ops
    assert Op.MultiBundle in ops and Op.BatchBind in ops


def test_fusion_drops_unreachable_and_renumbers(lower_text):
    ir = fuse(lower_text("BUNDLE(HASHTABLE(ID, VALUE), MULTIBUNDLE(ID))"))
    assert [n.id for n in ir.nodes] == list(range(len(ir.nodes)))
    assert all(a < n.id for n in ir.nodes for a in n.args)
    assert ir.nodes[ir.output].shape is ShapeType.SingleHV


def test_fusion_is_idempotent(lower_text):
    once = fuse(lower_text("BUNDLE(HASHTABLE(ID, VALUE), NGRAM(VALUE, 2))"))
    assert fuse(once).dump() == once.dump()


# -- working-set model --------------------------------------------------


def test_plan_fused_bundle_small(make_description):
    desc = make_description(
        encoding="MULTIBUNDLE(BATCHBIND(ID, VALUE))",
        dimensions=10240, input_dim=617, id_items=617, weight_items=100,
    )
    fused = plan_memory(fuse(lower(desc)), desc)
    # accumulator + one temporary, well under four full vectors
    assert fused.materialized == 0
    assert fused.peak_elements <= 4 * 10240
    unfused = plan_memory(lower(desc), desc)
    assert unfused.materialized >= 617 * 10240
    assert unfused.peak_elements > fused.peak_elements


def test_plan_plain_bundle(make_description):
    desc = make_description(encoding="MULTIBUNDLE(VALUE)", dimensions=64)
    plan = plan_memory(fuse(lower(desc)), desc)
    assert plan.peak_elements <= 2 * 64


def test_fusion_never_grows_plan(make_description):
    encodings = [
        "MULTIBUNDLE(BATCHBIND(ID, VALUE))",
        "HASHTABLE(ID, VALUE)",
        "NGRAM(VALUE, 3)",
        "BUNDLE(HASHTABLE(ID, VALUE), PERMUTE(NGRAM(VALUE, 2), 1))",
        "BIND(MULTIBUNDLE(BATCHBIND(ID, PERMUTE(VALUE, 1))), MULTIBUNDLE(ID))",
        "MULTIBUNDLE(PERMUTE(BATCHBIND(ID, VALUE), 1))",
    ]
    for enc in encodings:
        desc = make_description(encoding=enc)
        raw = lower(desc)
        assert (
            plan_memory(fuse(raw), desc).peak_elements
            <= plan_memory(raw, desc).peak_elements
        ), enc
