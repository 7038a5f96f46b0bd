import pytest
from hypothesis import given
from hypothesis import strategies as st

from origami_monoids.words import (
    Generator,
    Kind,
    Presentation,
    RankError,
    WordError,
    a,
    b,
    bar,
    build_jones_presentation,
    build_origami_presentation,
    format_word,
    h,
    origami_rule_instances,
    parse_word,
    reverse,
    shortlex_compare,
    shortlex_key,
)

letters = st.sampled_from([a(1), a(2), a(3), b(1), b(2), b(3)])
words = st.lists(letters, max_size=8).map(tuple)


def rels(p):
    return {frozenset((u, v)) for u, v in p.relations}


def test_jones_n2_single_relation():
    assert rels(build_jones_presentation(2)) == {frozenset({(h(1), h(1)), (h(1),)})}


def test_jones_n3_relations():
    expected = {
        frozenset({(h(1), h(2), h(1)), (h(1),)}),
        frozenset({(h(2), h(1), h(2)), (h(2),)}),
        frozenset({(h(1), h(1)), (h(1),)}),
        frozenset({(h(2), h(2)), (h(2),)}),
    }
    assert rels(build_jones_presentation(3)) == expected


def test_jones_n4_single_commutation():
    commuting = [r for r in rels(build_jones_presentation(4)) if all(len(s) == 2 for s in r)]
    commuting = [r for r in commuting if len({g for s in r for g in s}) == 2]
    assert commuting == [frozenset({(h(1), h(3)), (h(3), h(1))})]


@pytest.mark.parametrize("n,count", [(2, 1), (3, 4), (4, 8), (5, 13), (6, 19), (7, 26)])
def test_jones_relation_counts(n, count):
    assert len(build_jones_presentation(n).relations) == count


def test_origami_n2_relations():
    expected = {
        frozenset({(a(1), a(1)), (a(1),)}),
        frozenset({(b(1), b(1)), (b(1),)}),
        frozenset({(a(1), b(1), a(1), b(1)), (a(1), b(1))}),
        frozenset({(b(1), a(1), b(1), a(1)), (b(1), a(1))}),
    }
    assert rels(build_origami_presentation(2)) == expected


def test_origami_n3_rule4_dedup():
    inst = origami_rule_instances(3)["4"]
    assert {frozenset(r) for r in inst} == {
        frozenset({(a(1), b(2)), (b(2), a(1))}),
        frozenset({(a(2), b(1)), (b(1), a(2))}),
    }


@pytest.mark.parametrize(
    "n,full,reduced", [(2, 4, 4), (3, 22, 18), (4, 44, 36), (5, 70, 58), (6, 100, 84), (7, 134, 114)]
)
def test_origami_relation_counts(n, full, reduced):
    assert len(build_origami_presentation(n).relations) == full
    assert len(build_origami_presentation(n, include_redundant=False).relations) == reduced


def test_rank_too_small():
    with pytest.raises(RankError):
        build_jones_presentation(1)
    with pytest.raises(RankError):
        build_origami_presentation(1)


def test_presentation_symbols_valid():
    p = build_origami_presentation(4)
    assert all(g.kind != Kind.H and 1 <= g.index <= 3 for u, v in p.relations for g in u + v)
    assert all(g.kind == Kind.H for u, v in build_jones_presentation(4).relations for g in u + v)


def test_bar_examples():
    assert bar((a(1), b(2))) == (b(1), a(2))
    assert bar(()) == ()
    w = (b(1), a(1), b(1))
    assert bar(bar(w)) == w
    with pytest.raises(WordError):
        bar((h(1),))


def test_reverse_examples():
    assert reverse((a(1), b(1), a(2))) == (a(2), b(1), a(1))
    assert reverse(()) == ()


@given(words)
def test_involutions_commute(w):
    assert bar(bar(w)) == w
    assert reverse(reverse(w)) == w
    assert bar(reverse(w)) == reverse(bar(w))


def test_shortlex_examples():
    assert shortlex_compare((a(1),), (b(1), a(1))) == -1
    assert shortlex_compare((a(2),), (b(1),)) == -1
    w = (a(1), b(2))
    assert shortlex_compare(w, w) == 0
    assert shortlex_compare((h(2),), (h(1),)) == 1


@given(words, words, words)
def test_shortlex_total_order(u, v, w):
    assert shortlex_compare(u, v) == -shortlex_compare(v, u)
    assert (shortlex_compare(u, v) == 0) == (u == v)
    if shortlex_compare(u, v) <= 0 and shortlex_compare(v, w) <= 0:
        assert shortlex_compare(u, w) <= 0
    assert (shortlex_key(u) < shortlex_key(v)) == (shortlex_compare(u, v) < 0)


@given(words)
def test_parse_format_roundtrip(w):
    assert parse_word(format_word(w)) == w


def test_parse_identity_token():
    assert parse_word("1") == ()
    assert parse_word("a1 b2 h3") == (a(1), b(2), h(3))
    with pytest.raises(WordError):
        parse_word("x1")


@pytest.mark.parametrize("builder", [build_jones_presentation, build_origami_presentation])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_presentation_text_roundtrip(builder, n):
    p = builder(n)
    q = Presentation.from_text(p.to_text(), rank=n, family=p.family)
    assert q.relations == p.relations
    assert q.to_text() == p.to_text()


def test_presentation_text_format():
    line = build_origami_presentation(3).to_text().splitlines()[0]
    assert " = " in line
    assert Presentation.from_text("a1 b2 = b2 a1\n", rank=3).relations == (((b(2), a(1)), (a(1), b(2))),)


def test_generator_str():
    assert str(Generator(Kind.BETA, 3)) == "b3"
