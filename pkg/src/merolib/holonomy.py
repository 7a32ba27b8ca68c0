"""Crossing words, positivity gating, local trace lifts and their evaluation.

A relative cycle is recorded only through the ordered list of its signed
crossings with the compressing disks.  A geometrically positive word lifts
to the full cycle class on the cyclic quiver with one vertex per crossing;
the empty word lifts to the loop class of the one-vertex quiver.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .caps import CapExceeded, Caps
from .exactalg import CoordinateRing, Fq, LaurentPoly, enumerate_points, evaluate
from .quiverhh import (
    Chain,
    PathClass,
    Quiver,
    Representation,
    det,
    full_cycle,
    ho_trace,
    symbolic_representation,
    trace,
)


class PositivityError(ValueError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"negative crossing survives cancellation at index {index}")


@dataclass(frozen=True)
class CrossingWord:
    crossings: tuple  # ((disk, sign), ...), disks 1-based, sign in {+1, -1}
    disks: int
    start: str = "t_a"
    end: str = "t_b"

    def __post_init__(self):
        cr = tuple((int(d), 1 if s in (1, "+") else -1 if s in (-1, "-") else _bad_sign(s)) for d, s in self.crossings)
        object.__setattr__(self, "crossings", cr)
        for d, _ in cr:
            if not 1 <= d <= self.disks:
                raise ValueError(f"disk index {d} outside [1, {self.disks}]")

    @classmethod
    def parse(cls, text: str, disks: int | None = None):
        """``"+1,+2,-1"``; the disk count defaults to the largest index used."""
        items = [t.strip() for t in text.replace(" ", ",").split(",") if t.strip()]
        crossings = []
        for t in items:
            if t[0] not in "+-" or not t[1:].isdigit():
                raise ValueError(f"malformed crossing {t!r}; expected +i or -i")
            crossings.append((int(t[1:]), 1 if t[0] == "+" else -1))
        if disks is None:
            disks = max((d for d, _ in crossings), default=0)
        return cls(tuple(crossings), disks)

    def __len__(self):
        return len(self.crossings)

    def __str__(self):
        return ",".join(f"{'+' if s > 0 else '-'}{d}" for d, s in self.crossings)

    def rotate(self, k):
        k %= max(len(self.crossings), 1)
        return CrossingWord(self.crossings[k:] + self.crossings[:k], self.disks, self.start, self.end)


def _bad_sign(s):
    raise ValueError(f"sign must be + or -, got {s!r}")


def intersection_vector(w: CrossingWord) -> tuple:
    vec = [0] * w.disks
    for d, s in w.crossings:
        vec[d - 1] += s
    return tuple(vec)


def reduce_word(w: CrossingWord):
    """Iterated cancellation of adjacent opposite crossings on the same disk.

    Returns the surviving crossings paired with their original indices.
    """
    stack = []
    for i, (d, s) in enumerate(w.crossings):
        if stack and stack[-1][1] == (d, -s):
            stack.pop()
        else:
            stack.append((i, (d, s)))
    return stack


def is_positive(w: CrossingWord, mode: str = "geometric") -> bool:
    if mode == "homological":
        return all(v >= 0 for v in intersection_vector(w))
    if mode == "geometric":
        return all(s > 0 for _, (_, s) in reduce_word(w))
    raise ValueError(f"unknown positivity mode {mode!r}")


def lift_quiver(k: int) -> Quiver:
    return Quiver.loop("t") if k == 0 else Quiver.cyclic(k)


def local_lift(w: CrossingWord) -> Chain:
    """Full cycle class on the cyclic quiver with one vertex per surviving crossing."""
    survivors = reduce_word(w)
    for i, (_, s) in survivors:
        if s < 0:
            raise PositivityError(i)
    q = lift_quiver(len(survivors))
    return Chain(q, {PathClass(full_cycle(q)): 1})


def restrict_to_chart(lift: Chain, rank: int = 1) -> LaurentPoly:
    """Image in k[rho^{+-1}]: [rho^m] -> rho^m, e_i -> rank (the vertex dimension)."""
    vars = ("rho",)
    quiver = lift.quiver
    cycle_len = len(full_cycle(quiver))
    out = LaurentPoly(vars)
    for cls, c in lift.terms.items():
        if cls.is_idempotent:
            out = out + LaurentPoly.const(c * rank, vars)
            continue
        m, rest = divmod(len(cls), cycle_len)
        if rest:
            raise ValueError(f"class {cls.label(quiver)} is not a power of the full cycle")
        out = out + LaurentPoly.monomial((m,), vars, c)
    return out


@dataclass(frozen=True)
class ChartPoint:
    values: tuple  # invertible scalars, one per relative-homology basis element
    basis: tuple = ()

    def __post_init__(self):
        for v in self.values:
            if v == 0:
                raise ValueError("chart coordinates must be invertible")


def merodromy(point: ChartPoint, cls) -> object:
    """Monomial prod x_j^{cls_j} at the chart point."""
    if len(cls) != len(point.values):
        raise ValueError("homology vector length does not match chart rank")
    out = 1
    for x, e in zip(point.values, cls):
        if e:
            out = out * (x ** e if not isinstance(x, int) else Fraction(x) ** e)
    return out


@dataclass(frozen=True)
class KnModuliPoint:
    matrices: tuple  # n square matrices (object arrays or nested lists) of equal size

    @property
    def rank(self):
        return np.asarray(self.matrices[0], dtype=object).shape[0]

    def __post_init__(self):
        mats = tuple(np.array(m, dtype=object).reshape(np.shape(m) or (1, 1)) for m in self.matrices)
        r = mats[0].shape[0] if mats else 0
        for m in mats:
            if m.shape != (r, r):
                raise ValueError("all spike matrices must be square of equal size")
        object.__setattr__(self, "matrices", mats)


def _kn_rep(quiver: Quiver, point: KnModuliPoint) -> Representation:
    mats = {lab: m for lab, m in zip(quiver.labels, point.matrices)}
    return Representation(quiver, (point.rank,) * quiver.n, mats)


def ho_on_moduli(lift: Chain, point: KnModuliPoint):
    if len(point.matrices) != len(lift.quiver.arrows):
        raise ValueError(f"lift has {len(lift.quiver.arrows)} spikes, point has {len(point.matrices)}")
    return ho_trace(lift, _kn_rep(lift.quiver, point))


def monodromy_matrix(point: KnModuliPoint):
    """Transport once around: A_n ... A_1, multiplied directly."""
    m = None
    for a in point.matrices:
        m = a if m is None else a.dot(m)
    return m


def chart_value(lift: Chain, point: KnModuliPoint):
    """Evaluate the chart restriction of ``lift`` at a point.

    rho^m (m > 0) becomes tr(M^m) for the monodromy M; the constant term is
    already a function value (vertex dimensions) and is taken as is.
    """
    poly = restrict_to_chart(lift, point.rank)
    M = monodromy_matrix(point)
    total = 0
    for (m,), c in poly.terms.items():
        if m < 0:
            raise ValueError("negative powers need an inverse monodromy")
        if m == 0:
            value = 1
        else:
            P = M
            for _ in range(m - 1):
                P = P.dot(M)
            value = trace(P)
        total = total + c * value
    return total


# -- Hopf link ---------------------------------------------------------------------


@dataclass(frozen=True)
class HopfModuliPoint:
    x: object
    y: object

    def __post_init__(self):
        if 1 + self.x * self.y == 0:
            raise ValueError("1 + xy must be invertible")


def hopf_action(frame, point: HopfModuliPoint) -> HopfModuliPoint:
    """(t1, t2; x, y) -> (t1 x t2^-1, t2 y t1^-1)."""
    t1, t2 = frame
    if t1 == 0 or t2 == 0:
        raise ValueError("frame must be invertible")
    if isinstance(t1, int) and isinstance(t2, int):
        t1, t2 = Fraction(t1), Fraction(t2)
    return HopfModuliPoint(t1 * point.x / t2, t2 * point.y / t1)


def hopf_orbit_census(q: int, caps: Caps | None = None) -> dict:
    """Orbits of (tau; x, y) -> (tau x, tau^-1 y) on X(F_q), classified by type."""
    pts = enumerate_points(CoordinateRing.hopf(), q, cap=(caps or Caps()).enum)
    remaining = set(pts)
    orbits = []
    for p in pts:
        if p not in remaining:
            continue
        x, y = p
        orb = {(t * x % q, pow(t, -1, q) * y % q) for t in range(1, q)}
        remaining -= orb
        orbits.append(orb)
    census = {
        "q": q,
        "free_alpha_orbits": {"count": 0, "sizes": []},
        "orbit_x": {"count": 0, "sizes": []},
        "orbit_y": {"count": 0, "sizes": []},
        "fixed_point": {"count": 0, "sizes": []},
        "total": len(pts),
    }
    for orb in orbits:
        x, y = min(orb)
        if x == 0 and y == 0:
            kind = "fixed_point"
        elif y == 0:
            kind = "orbit_x"
        elif x == 0:
            kind = "orbit_y"
        else:
            kind = "free_alpha_orbits"
        census[kind]["count"] += 1
        census[kind]["sizes"].append(len(orb))
    for kind in ("free_alpha_orbits", "orbit_x", "orbit_y", "fixed_point"):
        census[kind]["sizes"].sort()
    census["alphas"] = sorted({x * y % q for orb in orbits for x, y in [min(orb)] if x and y})
    return census


# -- end-to-end check -----------------------------------------------------------------


def _random_invertible(rng, r, q):
    while True:
        m = np.empty((r, r), dtype=object)
        for i in range(r):
            for j in range(r):
                m[i, j] = Fq(rng.randrange(q), q)
        if det(m) != 0:
            return m


@dataclass
class LocalToGlobalReport:
    word: str
    spikes: int
    rank: int
    polynomial: LaurentPoly | None = None
    regular: bool = False
    agreements: int = 0
    samples: int = 0
    rank1_merodromy_agreements: int | None = None
    rejected: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.rejected is None and self.regular and self.agreements == self.samples

    def to_dict(self):
        out = {"word": self.word, "spikes": self.spikes, "rank": self.rank}
        if self.rejected:
            out["rejected"] = self.rejected
            return out
        out["polynomial"] = str(self.polynomial)
        out["variables"] = list(self.polynomial.vars)
        out["nonnegative_exponents"] = self.regular
        out["tally"] = {"agree": self.agreements, "samples": self.samples}
        if self.rank1_merodromy_agreements is not None:
            out["tally"]["merodromy_agree"] = self.rank1_merodromy_agreements
        return out


def verify_local_to_global(word=None, spikes=None, rank=1, q=5, samples=50, seed=0, caps: Caps | None = None):
    """Symbolic HO value of the local lift plus sampled chart agreement.

    Give either a crossing word or a spike count (all-positive word).
    """
    caps = caps or Caps()
    if word is None:
        if spikes is None:
            raise ValueError("need a crossing word or a spike count")
        word = CrossingWord(tuple((i, 1) for i in range(1, spikes + 1)), spikes)
    elif isinstance(word, str):
        word = CrossingWord.parse(word)
    try:
        lift = local_lift(word)
    except PositivityError as exc:
        return LocalToGlobalReport(str(word), len(word), rank, rejected=str(exc))
    n = len(lift.quiver.arrows)
    if n * rank * rank > caps.symbolic_vars:
        raise CapExceeded(f"{n} spikes at rank {rank} exceed the symbolic cap {caps.symbolic_vars}")
    rep, pres = symbolic_representation(lift.quiver, (rank,) * lift.quiver.n, caps)
    poly = ho_trace(lift, rep)
    if not isinstance(poly, LaurentPoly):
        poly = LaurentPoly.const(poly, pres.ring.vars)
    report = LocalToGlobalReport(str(word), n, rank, poly, poly.is_polynomial(), samples=samples)

    rng = random.Random(seed)
    merodromy_ok = 0
    for _ in range(samples):
        mats = tuple(_random_invertible(rng, rank, q) for _ in range(n))
        point = KnModuliPoint(mats)
        coords = [int(m[i, j]) for m in mats for i in range(rank) for j in range(rank)]
        symbolic = evaluate(poly, coords, q)
        direct = chart_value(lift, point)
        if symbolic == int(direct):
            report.agreements += 1
        if rank == 1:
            chart = ChartPoint(tuple(m[0, 0] for m in mats))
            merodromy_ok += merodromy(chart, (1,) * n) == symbolic
    if rank == 1:
        report.rank1_merodromy_agreements = merodromy_ok
    return report
