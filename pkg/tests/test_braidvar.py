import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from merolib.braidvar import (
    CONVENTION,
    BraidWord,
    NotFullDemazure,
    Permutation,
    braid_matrix_product,
    count_points,
    demazure,
    fit_torus_exponent,
    presentation_from_json,
    presentation_to_json,
    variable_names,
    variety_presentation,
)
from merolib.exactalg import CoordinateRing, brute_force_points, evaluate
from merolib.oracles import demazure_by_subwords, matrix_product_2x2_blocks
from merolib.quiverhh import det


def W(n, s):
    return BraidWord.parse(n, s)


def test_demazure_examples():
    assert str(demazure(W(2, "1"))) == "[2 1]"
    assert demazure(W(2, "1,1")) == Permutation.longest(2)
    assert demazure(W(3, "1,2,1")) == Permutation.longest(3)
    assert demazure(W(3, "1,2")).length() == 2


def test_product_examples():
    M = braid_matrix_product(W(3, ""))
    assert [[str(e) for e in row] for row in M] == [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    M = braid_matrix_product(W(2, "1"))
    assert [[str(e) for e in row] for row in M] == [["z1", "1"], ["1", "0"]]
    M = braid_matrix_product(W(2, "1,1"))
    assert [[str(e) for e in row] for row in M] == [["z1*z2 + 1", "z1"], ["z2", "1"]]


def test_presentations():
    pres = variety_presentation(W(2, "1,1,1"))
    assert [str(r) for r in pres.ring.ideal] == ["z1*z2*z3 + z1 + z3"]
    assert pres.metadata["convention"] == CONVENTION
    pres = variety_presentation(W(3, "1,2,1"))
    assert len(pres.ring.vars) == 3 and len(pres.ring.ideal) == 3
    with pytest.raises(NotFullDemazure):
        variety_presentation(W(3, "1,2"))


def test_json_roundtrip():
    pres = variety_presentation(W(3, "1,2,1,2"))
    text = presentation_to_json(pres)
    assert list(json.loads(text)) == ["strands", "word", "variables", "relations", "units", "convention"]
    back = presentation_from_json(text)
    assert back.ring == pres.ring
    assert presentation_to_json(back) == text


def test_hopf_type_counts():
    pres = variety_presentation(W(2, "1,1,1"))
    counts = {q: count_points(pres, q) for q in (2, 3, 5)}
    assert counts == {2: 3, 3: 7, 5: 21}
    assert fit_torus_exponent(counts) == 0
    hopf = CoordinateRing.hopf()
    assert count_points(hopf, 5) == 21


def test_four_crossing_counts_do_not_fit():
    pres = variety_presentation(W(2, "1,1,1,1"))
    counts = {q: count_points(pres, q) for q in (2, 3, 5)}
    assert counts == {q: len(brute_force_points(pres.ring, q)) for q in (2, 3, 5)}
    assert fit_torus_exponent(counts) is None


def test_fit_exponent():
    assert fit_torus_exponent({q: (q - 1) ** 2 * (q * q - q + 1) for q in (2, 3, 5)}) == 2
    assert fit_torus_exponent({2: 3, 3: 8, 5: 21}) is None


words = st.integers(2, 4).flatmap(
    lambda n: st.lists(st.integers(1, n - 1), max_size=5).map(lambda ls: BraidWord(n, tuple(ls)))
)


@given(words, st.data())
def test_multiplicativity(w, data):
    k = data.draw(st.integers(0, len(w)))
    u, v = BraidWord(w.strands, w.letters[:k]), BraidWord(w.strands, w.letters[k:])
    names = variable_names(w)
    whole = braid_matrix_product(w, names)
    prod = braid_matrix_product(u, names[:k], names).dot(braid_matrix_product(v, names[k:], names))
    assert all(whole[i, j] == prod[i, j] for i in range(w.strands) for j in range(w.strands))


@given(words, st.data())
def test_product_matches_plain_matrices(w, data):
    zs = data.draw(st.lists(st.integers(-4, 4), min_size=len(w), max_size=len(w)))
    M = braid_matrix_product(w)
    plain = matrix_product_2x2_blocks(w.letters, zs, w.strands)
    assert [[evaluate(e, zs) for e in row] for row in M] == plain


@given(words)
def test_determinant_sign(w):
    assert det(braid_matrix_product(w)) == (-1) ** len(w)


@given(words)
def test_demazure_matches_subwords(w):
    assert demazure(w).images == demazure_by_subwords(w.letters, w.strands)


@given(words)
def test_demazure_fixes_reduced_words(w):
    d = demazure(w)
    assert demazure(BraidWord(w.strands, d.reduced_word())) == d
    # a second copy of a simple reflection already in the product is absorbed
    i = w.letters[-1] if w.letters else 1
    assert demazure(w + BraidWord(w.strands, (i,))) == d or not w.letters


def test_reduced_word_roundtrip():
    p = Permutation((2, 0, 3, 1))
    word = p.reduced_word()
    assert len(word) == p.length()
    w = Permutation.identity(4)
    for i in word:
        w = w.times_simple(i)
    assert w == p
