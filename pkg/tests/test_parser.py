"""Directive grammar: shapes, aliases, encoding expressions, recovery."""

import pytest

from hdc2c.errors import ParseError
from hdc2c.frontend import model
from hdc2c.frontend.lexer import tokenize
from hdc2c.frontend.parser import Directive, parse
from hdc2c.frontend.printer import format_expr


def parse_text(text):
    return parse(tokenize(text))


def only_expr(text):
    [d] = parse_text(f".ENCODING {text};")
    return d.args[0]


def test_full_description_parses():
    text = """\
// VoiceHD-shaped listing
.NAME VOICEHD;
.WEIGHT_EMBED (VALUE LEVEL 100);
.EMBEDDING (ID RANDOM 617);
.INPUT_DIM 617;
.ENCODING MULTIBUNDLE(BATCHBIND(ID, VALUE));
.CLASSES 27;
.TYPE PARALLEL;
.DIMENSIONS 10240;
.TRAIN_SIZE 6238;
.TEST_SIZE 1559;
.NUM_THREADS 4;
.VECTOR_SIZE 128;
.DEBUG TRUE;
.SEED 42;
"""
    directives = parse_text(text)
    assert [d.name for d in directives] == [
        "NAME", "WEIGHT_EMBED", "EMBEDDING", "INPUT_DIM", "ENCODING",
        "CLASSES", "TYPE", "DIMENSIONS", "TRAIN_SIZE", "TEST_SIZE",
        "NUM_THREADS", "VECTOR_SIZE", "DEBUG", "SEED",
    ]
    assert directives[1].args == ("VALUE", "LEVEL", 100)
    assert directives[3].args == (617,)
    assert directives[12].args == (True,)


def test_embeddings_alias_and_bare_args():
    a, b = parse_text(".EMBEDDINGS (CHAN RANDOM 4);\n.EMBEDDING POS RANDOM 8;")
    assert a.name == "EMBEDDING" and a.args == ("CHAN", "RANDOM", 4)
    assert b.name == "EMBEDDING" and b.args == ("POS", "RANDOM", 8)


def test_directive_names_case_insensitive():
    [d] = parse_text(".name VOICEHD;")
    assert d.name == "NAME"
    assert d.args == ("VOICEHD",)


def test_name_accepts_string():
    [d] = parse_text('.NAME "mnist run";')
    assert d.args == ("mnist run",)


def test_encoding_forms():
    assert only_expr("SYM") == model.Ref("SYM")
    assert only_expr("NGRAM(SYM, 4)") == model.Ngram("SYM", 4)
    assert only_expr("HASHTABLE(ID, VALUE)") == model.HashTable("ID", "VALUE")
    assert only_expr("MULTISET(BATCHBIND(ID, VALUE))") == model.MultiBundle(
        model.BatchBind(model.Ref("ID"), model.Ref("VALUE"))
    )
    assert only_expr("PERMUTE(SYM, 3)") == model.Permute(model.Ref("SYM"), 3)
    assert only_expr("BUNDLE(BIND(A, B), C)") == model.Bundle(
        model.Bind(model.Ref("A"), model.Ref("B")), model.Ref("C")
    )


def test_combinator_words_can_be_table_names():
    # a bare combinator word without '(' is an ordinary reference
    expr = only_expr("MULTIBUNDLE(BIND)")
    assert expr == model.MultiBundle(model.Ref("BIND"))


def test_nested_encoding():
    expr = only_expr(
        "BUNDLE(MULTIBUNDLE(BATCHBIND(ID, PERMUTE(VALUE, 2))), NGRAM(VALUE, 3))"
    )
    assert isinstance(expr, model.Bundle)
    assert isinstance(expr.left, model.MultiBundle)
    assert expr.right == model.Ngram("VALUE", 3)


def test_missing_semicolon_says_so():
    with pytest.raises(ParseError) as info:
        parse_text(".NAME X\n.SEED 1;")
    assert "SEMICOLON" in info.value.expected
    assert ";" in str(info.value) or "missing" in info.value.message


def test_unknown_directive():
    with pytest.raises(ParseError) as info:
        parse_text(".BOGUS 1;")
    assert "BOGUS" in info.value.message
    assert info.value.line == 1


def test_bad_argument_kind():
    with pytest.raises(ParseError) as info:
        parse_text(".DIMENSIONS lots;")
    assert "integer" in info.value.message


def test_truncated_expression():
    with pytest.raises(ParseError):
        parse_text(".ENCODING MULTIBUNDLE(BATCHBIND(ID,;")


def test_end_of_input_position_past_last_token():
    with pytest.raises(ParseError) as info:
        parse_text(".NAME")
    assert info.value.column > 1


def test_expr_round_trip_through_printer():
    samples = [
        "MULTIBUNDLE(BATCHBIND(ID, VALUE))",
        "NGRAM(SYM, 3)",
        "BUNDLE(HASHTABLE(K, V), PERMUTE(MULTIBUNDLE(BATCHBIND(K, PERMUTE(V, 2))), 1))",
        "BIND(MULTIBUNDLE(ID), MULTIBUNDLE(VALUE))",
    ]
    for text in samples:
        expr = only_expr(text)
        printed = format_expr(expr)
        assert only_expr(printed) == expr


def test_directive_is_frozen():
    [d] = parse_text(".SEED 1;")
    assert isinstance(d, Directive)
    with pytest.raises(AttributeError):
        d.name = "OTHER"
