import json

import numpy as np
import pytest

from origami_monoids.congruence import (
    CacheVersionError,
    MemoryBudgetExceeded,
    MonoidTable,
    cache_path,
    element_of,
    product,
    table_from_rewriting,
    tables_agree,
    tc_enumerate,
    write_json,
)
from origami_monoids.jones import catalan
from origami_monoids.words import a, b, build_jones_presentation, build_origami_presentation, h

from conftest import jones, kb_system, origami


@pytest.mark.parametrize("n", range(2, 8))
def test_jones_sizes(n):
    assert jones(n).size == catalan(n)


@pytest.mark.parametrize("n,size", [(2, 7), (3, 45), (4, 294), (5, 2180)])
def test_origami_sizes(n, size):
    assert origami(n).size == size


def test_origami2_reps():
    reps = set(origami(2).reps)
    assert reps == {(), (a(1),), (b(1),), (a(1), b(1)), (b(1), a(1)), (a(1), b(1), a(1)), (b(1), a(1), b(1))}


def test_element_of_examples():
    j3, o3 = jones(3), origami(3)
    assert element_of(j3, ()) == 0
    assert element_of(j3, (h(1), h(2), h(1))) == element_of(j3, (h(1),))
    assert element_of(o3, (a(1), b(2))) == element_of(o3, (b(2), a(1)))


def test_product_examples():
    m = origami(2)
    ab = m.element_of((a(1), b(1)))
    assert product(m, ab, ab) == ab
    assert all(m.product(0, e) == e == m.product(e, 0) for e in range(m.size))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_product_matches_concatenation(n):
    m = origami(n)
    for x in range(m.size):
        for y in range(0, m.size, max(1, m.size // 40)):
            assert m.product(x, y) == m.element_of(m.rep(x) + m.rep(y))


@pytest.mark.parametrize("family,n", [("jones", 5), ("origami", 3), ("origami", 4)])
def test_table_invariants(family, n):
    m = jones(n) if family == "jones" else origami(n)
    assert m.rep(0) == ()
    assert all(m.rep(e) for e in range(1, m.size))
    for e in range(m.size):
        assert m.element_of(m.rep(e)) == e
    # reps are shortlex sorted and each is least in its class
    keys = [(len(w), m.presentation.encode(w)) for w in m.reps]
    assert keys == sorted(keys)
    for e in range(m.size):
        for g, letter in enumerate(m.presentation.alphabet):
            assert m.left[e, g] == m.element_of((letter,) + m.rep(e))
            for g2 in range(m.num_generators):
                assert m.right[m.left[e, g], g2] == m.left[m.right[e, g2], g]


def test_associativity_sample():
    m = origami(3)
    rng = np.random.default_rng(0)
    xs, ys, zs = rng.integers(0, m.size, (3, 500))
    left = m.products(m.products(xs, ys), zs)
    right = m.products(xs, m.products(ys, zs))
    assert np.array_equal(left, right)


@pytest.mark.parametrize("family,n", [("jones", 6), ("origami", 3), ("origami", 4), ("origami", 5)])
def test_engines_agree(family, n):
    kb = table_from_rewriting(kb_system(family, n))
    tc = jones(n) if family == "jones" else origami(n)
    assert tables_agree(kb, tc)


@pytest.mark.parametrize("n", range(2, 6))
def test_finiteness_bound(n):
    assert origami(n).size <= 4 * catalan(n) ** 2


def test_budget_exceeded():
    with pytest.raises(MemoryBudgetExceeded):
        tc_enumerate(build_origami_presentation(4), max_elements=50)


def test_deterministic():
    p = build_origami_presentation(4)
    assert tables_agree(tc_enumerate(p), tc_enumerate(p))


def test_json_roundtrip(tmp_path):
    m = origami(3)
    path = tmp_path / "o3.json"
    write_json(m, path)
    data = json.loads(path.read_text())
    assert set(data) == {"family", "n", "size", "reps", "right_cayley", "left_cayley"}
    assert data["size"] == 45 and data["reps"][0] == "1"
    again = MonoidTable.from_json_dict(data, m.presentation)
    assert tables_agree(m, again)


def test_npz_roundtrip_and_version_checks(tmp_path):
    m = origami(3)
    path = cache_path(tmp_path, "origami", 3, True)
    assert path.name == "origami-n3-full-v1.npz"
    m.save_npz(path)
    assert tables_agree(m, MonoidTable.load_npz(path, m.presentation))
    with pytest.raises(CacheVersionError):
        MonoidTable.load_npz(path, build_origami_presentation(3, include_redundant=False))
    np.savez(path, version=np.int64(99), relations=np.array(""))
    with pytest.raises(CacheVersionError):
        MonoidTable.load_npz(path, m.presentation)
