from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from merolib.exactalg import LaurentPoly
from merolib.holonomy import (
    ChartPoint,
    CrossingWord,
    HopfModuliPoint,
    KnModuliPoint,
    PositivityError,
    chart_value,
    ho_on_moduli,
    hopf_action,
    hopf_orbit_census,
    intersection_vector,
    is_positive,
    local_lift,
    merodromy,
    reduce_word,
    restrict_to_chart,
    verify_local_to_global,
)
from merolib.quiverhh import Chain, Quiver


def C(text, disks=None):
    return CrossingWord.parse(text, disks)


def test_intersection_vectors():
    assert intersection_vector(C("+1,+2", 2)) == (1, 1)
    assert intersection_vector(C("+1,-1", 1)) == (0,)
    assert intersection_vector(C("-2,-2,+1", 2)) == (1, -2)


def test_positivity_modes():
    assert is_positive(C("+1,+2"), "geometric") and is_positive(C("+1,+2"), "homological")
    assert is_positive(C("+1,-1"), "geometric") and is_positive(C("+1,-1"), "homological")
    w = C("-1,+2,+2")
    assert not is_positive(w, "geometric") and not is_positive(w, "homological")
    # net-positive but a negative crossing cannot cancel
    w = C("+1,+2,-1")
    assert is_positive(w, "homological") and not is_positive(w, "geometric")


def test_reduction_keeps_indices():
    assert reduce_word(C("+1,+2,-2,+3")) == [(0, (1, 1)), (3, (3, 1))]


def test_local_lift_examples():
    lift = local_lift(C("+1,+2,+1"))
    assert lift.quiver == Quiver.cyclic(3)
    assert str(lift) == "[a1 a2 a3]"
    with pytest.raises(PositivityError) as err:
        local_lift(C("-3"))
    assert err.value.index == 0
    with pytest.raises(PositivityError) as err:
        local_lift(C("+1,+2,-1"))
    assert err.value.index == 2
    empty = local_lift(C(""))
    assert empty.quiver == Quiver.loop() and str(empty) == "[t]"


def test_restriction():
    q = Quiver.cyclic(2)
    rho = ("rho",)
    assert restrict_to_chart(Chain.parse("rho", q)) == LaurentPoly.var("rho", rho)
    assert restrict_to_chart(Chain.parse("rho^2", q)) == LaurentPoly.monomial((2,), rho)
    assert restrict_to_chart(Chain.parse("e1", q)) == 1
    assert restrict_to_chart(Chain.parse("e1", q), rank=3) == 3


def test_merodromy_examples():
    assert merodromy(ChartPoint((2, 3)), (0, 0)) == 1
    assert merodromy(ChartPoint((2, 3)), (1, 1)) == 6
    assert merodromy(ChartPoint((5,)), (-1,)) == Fraction(1, 5)
    with pytest.raises(ValueError):
        ChartPoint((0, 1))


def test_ho_on_moduli_examples():
    lift = local_lift(C("+1,+2"))
    assert ho_on_moduli(lift, KnModuliPoint(([[1]], [[1]]))) == 1
    # defined off the chart too
    assert ho_on_moduli(lift, KnModuliPoint(([[0]], [[5]]))) == 0
    A = [[1, 2], [3, 4]]
    B = [[0, 1], [1, 1]]
    v = ho_on_moduli(lift, KnModuliPoint((A, B)))
    assert v == np.trace(np.array(A).dot(B)) == np.trace(np.array(B).dot(A))
    assert chart_value(lift + 3 * Chain.parse("e1", lift.quiver), KnModuliPoint((A, B))) == v + 3 * 2  # e1 -> rank 2


def test_hopf_action_examples():
    p = HopfModuliPoint(Fraction(3), Fraction(4))
    assert hopf_action((1, 1), p) == p
    assert hopf_action((7, 7), p) == p
    assert hopf_action((2, 1), p) == HopfModuliPoint(6, 2)
    with pytest.raises(ValueError):
        HopfModuliPoint(1, -1)


def test_census_small_fields():
    c3 = hopf_orbit_census(3)
    assert c3["total"] == 7
    assert c3["free_alpha_orbits"] == {"count": 1, "sizes": [2]}
    assert c3["orbit_x"]["sizes"] == [2] and c3["orbit_y"]["sizes"] == [2]
    assert c3["fixed_point"] == {"count": 1, "sizes": [1]}
    c2 = hopf_orbit_census(2)
    assert c2["total"] == 3 and c2["free_alpha_orbits"]["count"] == 0
    assert c2["orbit_x"]["sizes"] == [1] and c2["orbit_y"]["sizes"] == [1]
    c5 = hopf_orbit_census(5)
    assert c5["total"] == 21 and c5["free_alpha_orbits"] == {"count": 3, "sizes": [4, 4, 4]}


def test_symbolic_hopf_action():
    vars = ("x", "y", "t1", "t2")
    x, y, t1, t2 = (LaurentPoly.var(v, vars) for v in vars)
    moved = hopf_action((t1, t2), HopfModuliPoint(x, y))
    assert 1 + moved.x * moved.y == 1 + x * y
    diag = hopf_action((t1, t1), HopfModuliPoint(x, y))
    assert (diag.x, diag.y) == (x, y)


def test_verify_examples():
    rep = verify_local_to_global(spikes=2, rank=1)
    assert str(rep.polynomial) == "a1*a2" and rep.ok and rep.rank1_merodromy_agreements == 50
    rep = verify_local_to_global(spikes=1, rank=2)
    assert str(rep.polynomial) == "a1_11 + a1_22" and rep.ok
    rep = verify_local_to_global("+1,-2,+3")
    assert rep.rejected and not rep.ok


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (3, 1), (4, 1), (1, 2), (2, 2), (3, 2), (1, 3), (2, 3)])
def test_verify_grid(n, r):
    rep = verify_local_to_global(spikes=n, rank=r, samples=50, seed=n * 10 + r)
    assert rep.ok and rep.regular and rep.agreements == 50


signed = st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=6)


@given(signed, st.integers(0, 5))
def test_homological_positivity_is_rotation_invariant(crossings, k):
    w = CrossingWord(tuple(crossings), 3)
    assert intersection_vector(w.rotate(k)) == intersection_vector(w)


@given(signed)
def test_geometric_implies_homological(crossings):
    w = CrossingWord(tuple(crossings), 3)
    if is_positive(w, "geometric"):
        assert is_positive(w, "homological")
    survivors = reduce_word(w)
    assert all(survivors[i][1] != (d, -s) for i in range(1, len(survivors)) for d, s in [survivors[i - 1][1]])
