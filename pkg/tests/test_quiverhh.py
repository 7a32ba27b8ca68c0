from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from merolib.caps import CapExceeded, Caps
from merolib.exactalg import LaurentPoly
from merolib.oracles import closed_walk_classes, necklace_count
from merolib.quiverhh import (
    Chain,
    PathClass,
    Quiver,
    Representation,
    canonicalize_cycle,
    ho_trace,
    parse_rep,
    path_class,
    rep_moduli_chart,
    symbolic_representation,
    trace,
    trace_space,
)


def test_cyclic_three():
    ts = trace_space(Quiver.cyclic(3), 7)
    assert ts.labels() == ["e1", "e2", "e3", "[a1 a2 a3]", "[a1 a2 a3 a1 a2 a3]"]


def test_linear_has_only_idempotents():
    for L in (0, 3, 9):
        assert trace_space(Quiver.linear(2), L).labels() == ["e1", "e2"]


def test_loop_truncation():
    ts = trace_space(Quiver.loop(), 4)
    assert ts.dim == 5
    assert ts.labels()[1:] == ["[t]", "[t t]", "[t t t]", "[t t t t]"]


def test_walk_cap():
    q = Quiver(1, ((1, 1, "a"), (1, 1, "b"), (1, 1, "c")))
    with pytest.raises(CapExceeded):
        trace_space(q, 10, Caps(walk=1000))


def test_canonicalize():
    q = Quiver.cyclic(3)
    assert canonicalize_cycle(["a2", "a3", "a1"], q) == canonicalize_cycle(["a1", "a2", "a3"], q)
    assert canonicalize_cycle(["a1", "a2", "a3"] * 2, q).label(q) == "[a1 a2 a3 a1 a2 a3]"
    assert canonicalize_cycle(["t"], Quiver.loop()).label(Quiver.loop()) == "[t]"
    with pytest.raises(ValueError):
        canonicalize_cycle(["a1", "a2"], q)
    assert path_class(["a1", "a2"], q) is None


def test_chain_parsing():
    q = Quiver.cyclic(3)
    c = Chain.parse("2*[a2 a3 a1] - e1+rho^2", q)
    assert str(c) == "-e1 + 2*[a1 a2 a3] + [a1 a2 a3 a1 a2 a3]"
    two = Quiver(1, ((1, 1, "a"), (1, 1, "b")))
    assert Chain.parse("[a b]-[b a]", two).is_zero()


def test_ho_trace_examples():
    q = Quiver.linear(2)
    rep = Representation(q, (3, 1), {"b1": np.zeros((1, 3), dtype=object)})
    assert ho_trace(Chain.parse("e1", q), rep) == 3
    cyc = Quiver.cyclic(2)
    rep, pres = symbolic_representation(cyc, (1, 1))
    assert ho_trace(Chain.parse("rho", cyc), rep) == LaurentPoly.monomial((1, 1), pres.ring.vars)


def test_ho_trace_composition_order():
    q = Quiver.cyclic(2)
    rep = parse_rep("2,1;a1=[[1,2]];a2=[[3],[4]]", q)
    # walk a1 then a2 from vertex 1: A2 @ A1 = [[3,6],[4,8]]
    assert ho_trace(Chain.parse("[a1 a2]", q), rep) == 11
    assert ho_trace(Chain.parse("[a2 a1]", q), rep) == 11


def test_symbolic_rank_two_trace():
    rep, pres = symbolic_representation(Quiver.loop("a1"), (2,))
    assert str(ho_trace(Chain.parse("[a1]", rep.quiver), rep)) == "a1_11 + a1_22"


def test_rep_moduli_charts():
    pres = rep_moduli_chart(Quiver.cyclic(2), (1, 1))
    assert pres.ring.vars == ("a1", "a2") and [str(u) for u in pres.ring.units] == ["a1", "a2"]
    pres = rep_moduli_chart(Quiver.loop(), (1,))
    assert [str(u) for u in pres.ring.units] == ["t"]
    pres = rep_moduli_chart(Quiver.linear(2), (1, 1))
    assert pres.ring.vars == ("b1",) and pres.ring.ideal == ()


def test_shape_validation():
    q = Quiver.cyclic(2)
    with pytest.raises(ValueError):
        Representation(q, (2, 1), {"a1": [[1, 2]], "a2": [[1, 2]]})


@st.composite
def quivers(draw):
    n = draw(st.integers(1, 4))
    k = draw(st.integers(0, 6))
    arrows = tuple((draw(st.integers(1, n)), draw(st.integers(1, n)), f"c{i}") for i in range(k))
    return Quiver(n, arrows)


@given(quivers(), st.integers(0, 5))
def test_basis_matches_brute_force(q, L):
    ts = trace_space(q, L)
    oracle = {PathClass(min(b)) for b in closed_walk_classes(q, L)}
    assert set(ts.basis[q.n:]) == oracle
    assert ts.dim == q.n + necklace_count(q, L)


@given(st.integers(1, 6), st.integers(0, 12))
def test_cyclic_dimension(n, L):
    assert trace_space(Quiver.cyclic(n), L).dim == n + L // n


@given(st.integers(1, 5), st.integers(0, 4), st.data())
def test_rotation_invariance(n, k, data):
    q = Quiver.cyclic(n)
    walk = list(q.labels) * (k + 1)
    r = data.draw(st.integers(0, len(walk) - 1))
    assert canonicalize_cycle(walk[r:] + walk[:r], q) == canonicalize_cycle(walk, q)
    mats = {lab: np.array([[Fraction(data.draw(st.integers(-3, 3)))]], dtype=object) for lab in q.labels}
    rep = Representation(q, (1,) * n, mats)
    assert trace(rep.composite(walk[r:] + walk[:r])) == trace(rep.composite(walk))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("r", [1, 2])
def test_symbolic_cycle_trace_rotation(n, r):
    q = Quiver.cyclic(n)
    rep, _ = symbolic_representation(q, (r,) * n)
    rho = Chain.parse("rho", q)
    value = ho_trace(rho, rep)
    labels = q.labels
    for k in range(1, n):
        rotated = Representation(q, rep.dims, {labels[i]: rep.matrices[labels[(i + k) % n]] for i in range(n)})
        assert ho_trace(rho, rotated) == value
