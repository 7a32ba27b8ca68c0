"""Acceptance and oracle batteries behind ``merolib suite``.

Each check returns a dict with an id, a short name, a pass flag and the
measured quantities.  Everything is seeded, so two runs with the same seed
serialize to identical JSON.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from importlib import resources

import numpy as np

from .braidvar import (
    BraidWord,
    Permutation,
    braid_matrix_product,
    count_points as braid_count,
    demazure,
    fit_torus_exponent,
    variable_names,
    variety_presentation,
)
from .caps import CapExceeded, Caps
from .exactalg import CoordinateRing, LaurentPoly, brute_force_points, count_points, evaluate
from .groebner import (
    RationalSection,
    buchberger,
    check_certificate,
    is_regular,
    membership_oracle,
    split_units,
)
from .holonomy import (
    CrossingWord,
    HopfModuliPoint,
    hopf_action,
    hopf_orbit_census,
    is_positive,
    reduce_word,
    verify_local_to_global,
)
from .oracles import (
    closed_walk_classes,
    closed_walk_total,
    demazure_by_subwords,
    matrix_product_2x2_blocks,
    necklace_count,
)
from .quiverhh import Chain, PathClass, Quiver, Representation, full_cycle, ho_trace, symbolic_representation, trace, trace_space

RANK_GRID = [(n, 1) for n in range(1, 5)] + [(n, 2) for n in range(1, 4)] + [(n, 3) for n in range(1, 3)]
HOPF_PRIMES = (2, 3, 5, 7)
WALK_BOUND = 20_000  # brute-force oracle budget for random quivers


def load_lines(name):
    text = resources.files("merolib.fixtures").joinpath(name).read_text()
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def crossing_corpus():
    return [CrossingWord.parse("" if ln == "empty" else ln) for ln in load_lines("crossing_words.txt")]


def braid_corpus():
    out = []
    for ln in load_lines("braid_words.txt"):
        n, _, word = ln.partition(":")
        out.append(BraidWord.parse(int(n), word))
    return out


def _result(cid, name, passed, **measured):
    return {"id": cid, "name": name, "passed": bool(passed), "measured": measured}


# -- trace spaces --------------------------------------------------------------------


def _oracle_basis(quiver, max_len):
    reps = {PathClass(min(bucket)) for bucket in closed_walk_classes(quiver, max_len)}
    return reps | {PathClass.idempotent(v) for v in range(1, quiver.n + 1)}


def check_cyclic_dims():
    bad = []
    for n in range(1, 7):
        q = Quiver.cyclic(n)
        for L in range(0, 13):
            ts = trace_space(q, L)
            expected = n + L // n
            if ts.dim != expected or set(ts.basis) != _oracle_basis(q, L) or ts.dim != n + necklace_count(q, L):
                bad.append([n, L, ts.dim, expected])
    return _result(1, "cyclic trace-space dimension n + floor(L/n)", not bad, cases=78, mismatches=bad)


def random_quiver(rng, max_vertices=5, max_arrows=8):
    n = rng.randint(1, max_vertices)
    k = rng.randint(0, max_arrows)
    arrows = tuple((rng.randint(1, n), rng.randint(1, n), f"c{i}") for i in range(1, k + 1))
    return Quiver(n, arrows)


def check_random_trace_spaces(rng, count=100):
    bad, redraws = [], 0
    done = 0
    while done < count:
        q = random_quiver(rng)
        L = rng.randint(0, 8)
        if closed_walk_total(q, L) > WALK_BOUND:
            redraws += 1
            continue
        done += 1
        ts = trace_space(q, L)
        if set(ts.basis) != _oracle_basis(q, L) or ts.dim != q.n + necklace_count(q, L):
            bad.append({"quiver": q.to_text(), "L": L})
    return _result(2, "trace-space basis vs brute-force oracle", not bad, agree=count - len(bad), total=count, redraws=redraws)


# -- trace pairing --------------------------------------------------------------------


def _random_closed_walk(rng, quiver, length):
    """Random walk of ``length`` steps, closed up along the base cycle (arrows 0..n-1)."""
    start = v = rng.randint(1, quiver.n)
    walk = []
    for _ in range(length):
        outs = [i for i, a in enumerate(quiver.arrows) if a[0] == v]
        i = rng.choice(outs)
        walk.append(i)
        v = quiver.target(i)
    while v != start or not walk:
        walk.append(v - 1)
        v = quiver.target(v - 1)
    return walk


def _random_rep(rng, quiver):
    dims = tuple(rng.randint(1, 3) for _ in range(quiver.n))
    mats = {}
    for s, t, lab in quiver.arrows:
        m = np.empty((dims[t - 1], dims[s - 1]), dtype=object)
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                m[i, j] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        mats[lab] = m
    return Representation(quiver, dims, mats)


def check_commutators(rng, count=200):
    failures = 0
    for _ in range(count):
        n = rng.randint(1, 4)
        base = Quiver.cyclic(n)
        extra = tuple((rng.randint(1, n), rng.randint(1, n), f"d{i}") for i in range(rng.randint(0, 3)))
        quiver = Quiver(n, base.arrows + extra)
        walk = _random_closed_walk(rng, quiver, rng.randint(1, 6))
        k = rng.randint(0, len(walk))
        p, q = walk[:k], walk[k:]
        rep = _random_rep(rng, quiver)
        direct_ok = trace(rep.composite(p + q)) == trace(rep.composite(q + p))
        chain = Chain.of(quiver, p + q) - Chain.of(quiver, q + p)
        if not (direct_ok and chain.is_zero() and ho_trace(chain, rep) == 0):
            failures += 1
    monomial_bad = []
    for n in range(1, 7):
        q = Quiver.cyclic(n)
        rep, pres = symbolic_representation(q, (1,) * n)
        value = ho_trace(Chain.of(q, full_cycle(q)), rep)
        expected = LaurentPoly.monomial((1,) * n, pres.ring.vars)
        if value != expected:
            monomial_bad.append(n)
    return _result(
        3,
        "trace pairing kills commutators; full cycle gives x1...xn",
        failures == 0 and not monomial_bad,
        commutator_pairs=count,
        failures=failures,
        monomial_mismatch=monomial_bad,
    )


# -- local-to-global ------------------------------------------------------------------


def _ranks_for(n):
    return sorted({r for m, r in RANK_GRID if m == n} | {1})


def check_local_to_global(seed, samples=50, q=5):
    from .cli import RunConfig, dispatch

    bad, runs, rejected, rejection_failures = [], 0, 0, []
    for word in crossing_corpus():
        if not is_positive(word):
            rejected += 1
            report = dispatch(RunConfig("lift", {"crossings": str(word)}))
            if report.exit_code != 1:
                rejection_failures.append(str(word))
            continue
        n = len(reduce_word(word))
        for r in _ranks_for(max(n, 1)):
            runs += 1
            rep = verify_local_to_global(word, rank=r, q=q, samples=samples, seed=seed)
            if not rep.ok or (r == 1 and rep.rank1_merodromy_agreements != samples):
                bad.append([str(word), r])
    for n, r in RANK_GRID:
        runs += 1
        rep = verify_local_to_global(spikes=n, rank=r, q=q, samples=samples, seed=seed)
        if not rep.ok:
            bad.append([f"spikes={n}", r])
    return _result(
        4,
        "local lift is regular and agrees with the chart",
        not bad and not rejection_failures and rejected > 0,
        runs=runs,
        samples_per_run=samples,
        failures=bad,
        negative_words=rejected,
        rejection_failures=rejection_failures,
    )


# -- Hopf link -------------------------------------------------------------------------


def check_hopf():
    ring = CoordinateRing.hopf()
    counts = {q: count_points(ring, q) for q in HOPF_PRIMES}
    brute = {q: len(brute_force_points(ring, q)) for q in HOPF_PRIMES}
    census_ok = True
    censuses = {}
    for q in HOPF_PRIMES:
        c = hopf_orbit_census(q)
        censuses[q] = c
        census_ok &= c["free_alpha_orbits"]["count"] == q - 2
        census_ok &= all(s == q - 1 for s in c["free_alpha_orbits"]["sizes"])
        census_ok &= c["orbit_x"]["sizes"] == [q - 1] and c["orbit_y"]["sizes"] == [q - 1]
        census_ok &= c["fixed_point"]["sizes"] == [1]
    vars = ("x", "y", "t1", "t2")
    x, y, t1, t2 = (LaurentPoly.var(v, vars) for v in vars)
    moved = hopf_action((t1, t2), HopfModuliPoint(x, y))
    preserves = 1 + moved.x * moved.y == 1 + x * y
    diag = hopf_action((t1, t1), HopfModuliPoint(x, y))
    trivial_diag = diag.x == x and diag.y == y
    counts_ok = all(counts[q] == brute[q] == q * q - q + 1 for q in HOPF_PRIMES)
    return _result(
        5,
        "Hopf point counts, orbit census and torus action",
        counts_ok and census_ok and preserves and trivial_diag,
        counts={str(q): counts[q] for q in HOPF_PRIMES},
        census={str(q): {k: v for k, v in censuses[q].items() if k != "q"} for q in HOPF_PRIMES},
        preserves_unit=preserves,
        diagonal_trivial=trivial_diag,
    )


# -- regularity ------------------------------------------------------------------------


def _random_poly(rng, vars, max_deg, terms=None, constant_ok=True):
    terms = terms or rng.randint(1, 3)
    out = {}
    for _ in range(4 * terms):  # few monomials may exist in one variable
        if len(out) == terms:
            break
        exp = [0] * len(vars)
        for _ in range(rng.randint(0 if constant_ok else 1, max_deg)):
            exp[rng.randrange(len(vars))] += 1
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        out[tuple(exp)] = Fraction(c)
    return LaurentPoly(vars, out)


def random_regularity_instance(rng):
    vars = ("x", "y", "z")[: rng.randint(1, 3)]
    ideal = [_random_poly(rng, vars, 2, constant_ok=False) for _ in range(rng.randint(0, 2))]
    units = [_random_poly(rng, vars, 1, 2)] if rng.random() < 0.5 else []
    units = [u for u in units if not u.is_constant()]
    ring = CoordinateRing(vars, tuple(ideal), tuple(units))
    qpart = _random_poly(rng, vars, 2, constant_ok=False)
    if rng.random() < 0.5:
        num = _random_poly(rng, vars, 1) * qpart
        for g in ideal:
            num = num + _random_poly(rng, vars, 1) * g
    else:
        num = _random_poly(rng, vars, 3)
    den = qpart * units[0] if units and rng.random() < 0.5 else qpart
    if num.is_zero():
        num = LaurentPoly.const(1, vars)
    return RationalSection(num, den, ring)


def _oracle_regular(section, units_cap, degree_cap):
    """Membership of num*U^m in I + (q) by linear algebra; True/False/None(undecided)."""
    ring = section.ring
    _, q = split_units(section.denominator, ring.units)
    U = ring.unit_product()
    gens = list(ring.ideal) + [q]
    target = section.numerator
    for _ in range(units_cap + 1):
        try:
            if membership_oracle(target, gens, degree_cap):
                return True
        except CapExceeded:
            return None
        target = target * U
    return False


def expr_holds(section, res, caps=None):
    """num*U^m - h*q lies in the ideal (checked with a fresh basis of the ideal alone)."""
    ring = section.ring
    expr = section.numerator * ring.unit_product() ** res.unit_power - res.witness * res.reduced_denominator
    return expr.is_zero() or (bool(ring.ideal) and buchberger(list(ring.ideal), caps=caps).contains(expr))


HOPF_FIXTURES = [
    ("y", "1 + x*y", "regular"),
    ("1", "x", "not_regular"),
    ("x^2*y + x", "x", "regular"),
    ("x", "1 + x*y", "regular"),
    ("1", "x*y", "not_regular"),
]


def check_regularity(rng, count=50):
    cap_grid = [Caps(degree=4, units=1), Caps(), Caps(degree=10, units=3)]
    contradictions, agree, decided, oracle_confirms, status_counts = [], 0, 0, 0, {}
    for k in range(count):
        sec = random_regularity_instance(rng)
        statuses = set()
        for caps in cap_grid:
            res = is_regular(sec, caps)
            statuses.add(res.status)
            if res.status == "regular":
                ok = expr_holds(sec, res, caps)
            elif res.status == "not_regular":
                ok = check_certificate(sec, res.certificate) and _oracle_regular(sec, caps.units, 6) is not True
            else:
                ok = True
            if not ok:
                contradictions.append({"instance": k, "caps": caps.as_dict()})
        main = is_regular(sec, Caps())
        status_counts[main.status] = status_counts.get(main.status, 0) + 1
        if {"regular", "not_regular"} <= statuses:
            contradictions.append({"instance": k, "flip": sorted(statuses)})
        if main.status == "undecided":
            continue
        decided += 1
        oracle = _oracle_regular(sec, Caps().units, 6)
        if main.status == "regular":
            # the exact witness identity was checked above; the oracle may
            # simply need a larger degree cap to see it
            agree += oracle is not False or expr_holds(sec, main)
            oracle_confirms += oracle is True
        else:
            agree += oracle is not True and check_certificate(sec, main.certificate)
    fixtures_ok = True
    ring = CoordinateRing.hopf()
    for num, den, expected in HOPF_FIXTURES:
        fixtures_ok &= is_regular(RationalSection(num, den, ring)).status == expected
    return _result(
        6,
        "regularity decisions agree with the membership oracle",
        not contradictions and agree == decided and fixtures_ok and decided > 0,
        instances=count,
        decided=decided,
        agree=agree,
        oracle_confirms_regular=oracle_confirms,
        statuses=dict(sorted(status_counts.items())),
        contradictions=contradictions,
        hopf_fixtures=fixtures_ok,
    )


# -- braid varieties -------------------------------------------------------------------


def check_braids(rng, splits=50):
    mult_fail = 0
    for _ in range(splits):
        n = rng.randint(2, 4)
        u = BraidWord(n, tuple(rng.randint(1, n - 1) for _ in range(rng.randint(0, 4))))
        v = BraidWord(n, tuple(rng.randint(1, n - 1) for _ in range(rng.randint(0, 4))))
        w = u + v
        names = variable_names(w)
        whole = braid_matrix_product(w, names)
        left = braid_matrix_product(u, names[: len(u)], names)
        right = braid_matrix_product(v, names[len(u):], names)
        prod = left.dot(right)
        same = all(whole[i, j] == prod[i, j] for i in range(n) for j in range(n))
        zs = [rng.randint(-4, 4) for _ in names]
        numeric = matrix_product_2x2_blocks(w.letters, zs, n)
        same &= all(evaluate(whole[i, j], zs) == numeric[i][j] for i in range(n) for j in range(n))
        if not same:
            mult_fail += 1

    w0_ok = demazure(BraidWord.parse(3, "1,2,1")) == Permutation.longest(3)
    table, count_fail, dem_fail = [], [], []
    for word in braid_corpus():
        dem = demazure(word)
        if dem.images != demazure_by_subwords(word.letters, word.strands):
            dem_fail.append(str(word))
        if dem != Permutation.longest(word.strands):
            table.append({"strands": word.strands, "word": str(word), "rejected": True})
            continue
        pres = variety_presentation(word)
        counts = {}
        for q in (2, 3, 5):
            if q ** len(word) > 10**5:
                continue
            c = braid_count(pres, q)
            if c != len(brute_force_points(pres.ring, q)):
                count_fail.append([str(word), q])
            counts[q] = c
        entry = {"strands": word.strands, "word": str(word), "counts": {str(q): c for q, c in counts.items()}}
        entry["torus_exponent"] = fit_torus_exponent(counts)
        table.append(entry)
    hopf_word = next(e for e in table if e["word"] == "1,1,1" and e["strands"] == 2)
    return _result(
        7,
        "braid product multiplicativity, Demazure product and point counts",
        mult_fail == 0 and w0_ok and not count_fail and not dem_fail and hopf_word["torus_exponent"] is not None,
        splits=splits,
        multiplicativity_failures=mult_fail,
        demazure_121_is_w0=w0_ok,
        demazure_oracle_failures=dem_fail,
        count_failures=count_fail,
        table=table,
    )


# -- batteries -------------------------------------------------------------------------


def _acceptance_body(seed):
    rng = random.Random(seed)
    return [
        check_cyclic_dims(),
        check_random_trace_spaces(random.Random(rng.randrange(2**32))),
        check_commutators(random.Random(rng.randrange(2**32))),
        check_local_to_global(seed),
        check_hopf(),
        check_regularity(random.Random(rng.randrange(2**32))),
        check_braids(random.Random(rng.randrange(2**32))),
    ]


def acceptance(seed=0):
    results = _acceptance_body(seed)
    first = json.dumps(results, sort_keys=True)
    second = json.dumps(_acceptance_body(seed), sort_keys=True)
    results.append(_result(8, "seeded reruns are byte-identical", first == second, bytes=len(first)))
    return results


def oracles(seed=0):
    rng = random.Random(seed)
    out = [check_random_trace_spaces(random.Random(rng.randrange(2**32)))]
    # Buchberger membership against linear algebra on small ideals
    sub = random.Random(rng.randrange(2**32))
    mismatches = 0
    trials = 100
    for _ in range(trials):
        vars = ("x", "y")[: sub.randint(1, 2)]
        gens = [_random_poly(sub, vars, 2, constant_ok=False) for _ in range(sub.randint(1, 2))]
        f = sum((_random_poly(sub, vars, 1) * g for g in gens), LaurentPoly(vars))
        if sub.random() < 0.5:
            f = f + _random_poly(sub, vars, 2)
        gb = buchberger(gens)
        lin = membership_oracle(f, gens, 6)
        if lin and not gb.contains(f):
            mismatches += 1
    out.append(_result("gb", "Groebner membership vs linear algebra", mismatches == 0, trials=trials, mismatches=mismatches))
    out.append(check_braids(random.Random(rng.randrange(2**32)), splits=20))
    return out


SUITES = {"acceptance": acceptance, "oracles": oracles}


def run_suite(name="acceptance", seed=0):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    results = SUITES[name](seed)
    return {
        "suite": name,
        "seed": seed,
        "passed": all(r["passed"] for r in results),
        "criteria": results,
    }
