"""Groebner bases over Q, ideal membership and regularity of rational sections."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .caps import CapExceeded, Caps
from .exactalg import CoordinateRing, LaurentPoly, PoleError, count_points, enumerate_points, evaluate


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, exp):
        if self.kind == "lex":
            return exp
        return (sum(exp), tuple(-e for e in reversed(exp)))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# -- dict-level kernels --------------------------------------------------------
# polynomials are {exponent tuple: Fraction}; the variable list lives outside.

def _lead(p, key):
    return max(p, key=key)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _addmul(acc, p, c, shift):
    """acc += c * x^shift * p, in place."""
    for e, v in p.items():
        m = tuple(a + b for a, b in zip(e, shift))
        s = acc.get(m, 0) + c * v
        if s:
            acc[m] = s
        else:
            acc.pop(m, None)


def _scale(p, c):
    return {e: v * c for e, v in p.items()}


def _reduce(f, basis, leads, key, track=None, cofs=None):
    """Full reduction of ``f`` by ``basis``; returns the remainder.

    When ``track`` is given, every step ``p += c*x^s*basis[i]`` is mirrored as
    ``track[j] += c*x^s*cofs[i][j]``, so ``p - sum(track[j]*gen_j)`` is invariant.
    """
    p = dict(f)
    rem = {}
    while p:
        lt = _lead(p, key)
        c = p[lt]
        for i, lm in enumerate(leads):
            if _divides(lm, lt):
                g = basis[i]
                factor = -c / g[lm]
                shift = tuple(a - b for a, b in zip(lt, lm))
                _addmul(p, g, factor, shift)
                if track is not None:
                    for j, cj in enumerate(cofs[i]):
                        if cj:
                            _addmul(track[j], cj, factor, shift)
                break
        else:
            rem[lt] = c
            del p[lt]
    return rem


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple
    basis: tuple
    order: MonomialOrder = GREVLEX
    # basis[i] == sum(cofactors[i][j] * generators[j]) when tracked
    cofactors: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def vars(self):
        return self.generators[0].vars if self.generators else ()

    def is_unit_ideal(self):
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def reduce(self, f):
        return normal_form(f, self)

    def contains(self, f):
        return normal_form(f, self).is_zero()

    def lift(self, f):
        """Remainder and cofactors c_j with f = sum c_j*generators[j] + remainder."""
        if self.cofactors is None:
            raise ValueError("basis was computed without cofactor tracking")
        key = self.order.key
        vars = f.vars
        basis = [b.terms for b in self.basis]
        leads = [_lead(b, key) for b in basis]
        cofs = [[c.terms for c in row] for row in self.cofactors]
        track = [{} for _ in self.generators]
        rem = _reduce(f.terms, basis, leads, key, track, cofs)
        # track accumulated -quotient*cofs, so f = -sum(track_j g_j) + rem
        return LaurentPoly(vars, rem), tuple(-LaurentPoly(vars, t) for t in track)


def _check_polys(polys):
    if not polys:
        raise ValueError("need at least one generator")
    vars = polys[0].vars
    for p in polys:
        if p.vars != vars:
            raise ValueError("generators must share one variable list")
        if not p.is_polynomial():
            raise ValueError(f"generator {p} has negative exponents")
    return vars


def buchberger(generators, order: MonomialOrder = GREVLEX, caps: Caps | None = None, track=False) -> GroebnerBasis:
    """Reduced Groebner basis; deterministic for fixed input and order.

    Raises CapExceeded when the pair budget or the degree cap is exhausted.
    """
    caps = caps or Caps()
    gens = tuple(generators)
    vars = _check_polys(gens)
    nv = len(vars)
    key = order.key
    m = len(gens)

    G, C, L = [], [], []
    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        G.append(dict(g.terms))
        C.append([{(0,) * nv: Fraction(1)} if i == j else {} for i in range(m)] if track else None)
        L.append(_lead(g.terms, key))
    for p in G:
        if max(sum(e) for e in p) > caps.degree:
            raise CapExceeded(f"generator degree exceeds cap {caps.degree}")

    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    processed = 0

    def lcm(a, b):
        return tuple(max(x, y) for x, y in zip(a, b))

    def pair_key(ij):
        i, j = ij
        return (key(lcm(L[i], L[j])), i, j)

    while pairs:
        pairs.sort(key=pair_key, reverse=True)
        # smallest lcm first; pop from the end
        i, j = pairs.pop()
        processed += 1
        if processed > caps.pairs:
            raise CapExceeded(f"more than {caps.pairs} S-pairs")
        if all(a == 0 or b == 0 for a, b in zip(L[i], L[j])):
            continue  # coprime leading monomials
        # Gebauer-Moeller style chain criterion, simple form
        lc = lcm(L[i], L[j])
        if any(
            k not in (i, j)
            and _divides(L[k], lc)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue
        si = tuple(a - b for a, b in zip(lc, L[i]))
        sj = tuple(a - b for a, b in zip(lc, L[j]))
        ci, cj = 1 / G[i][L[i]], -1 / G[j][L[j]]
        s = {}
        _addmul(s, G[i], ci, si)
        _addmul(s, G[j], cj, sj)
        cof = None
        if track:
            cof = [{} for _ in range(m)]
            for t in range(m):
                if C[i][t]:
                    _addmul(cof[t], C[i][t], ci, si)
                if C[j][t]:
                    _addmul(cof[t], C[j][t], cj, sj)
        r = _reduce(s, G, L, key, cof, C if track else None)
        if not r:
            continue
        if max(sum(e) for e in r) > caps.degree:
            raise CapExceeded(f"intermediate degree exceeds cap {caps.degree}")
        n = len(G)
        G.append(r)
        C.append(cof if track else None)
        L.append(_lead(r, key))
        pairs.extend((k, n) for k in range(n))
        if all(x == 0 for x in L[-1]):
            break  # unit ideal

    G, C = _reduced(G, C, key, track)
    basis = tuple(LaurentPoly(vars, g) for g in G)
    cofactors = None
    if track:
        cofactors = tuple(tuple(LaurentPoly(vars, c) for c in row) for row in C)
    return GroebnerBasis(gens, basis, order, cofactors)


def _reduced(G, C, key, track):
    L = [_lead(g, key) for g in G]
    # a nonzero constant makes this the unit ideal
    for i, lm in enumerate(L):
        if not any(lm):
            inv = 1 / G[i][lm]
            return [{lm: Fraction(1)}], [[_scale(c, inv) for c in C[i]]] if track else [None]
    keep = []
    for i, lm in enumerate(L):
        if any(_divides(L[k], lm) and (L[k] != lm or k < i) for k in range(len(G)) if k != i):
            continue
        keep.append(i)
    G = [G[i] for i in keep]
    C = [C[i] for i in keep]
    L = [L[i] for i in keep]
    for i in range(len(G)):
        others = [k for k in range(len(G)) if k != i]
        cof = [dict(c) for c in C[i]] if track else None
        r = _reduce(G[i], [G[k] for k in others], [L[k] for k in others], key, cof, [C[k] for k in others] if track else None)
        inv = 1 / r[L[i]]
        G[i] = _scale(r, inv)
        if track:
            C[i] = [_scale(c, inv) for c in cof]
    order = sorted(range(len(G)), key=lambda i: key(L[i]), reverse=True)
    return [G[i] for i in order], [C[i] for i in order]


def normal_form(f: LaurentPoly, basis: GroebnerBasis) -> LaurentPoly:
    if basis.basis and f.vars != basis.basis[0].vars:
        raise ValueError("arity mismatch between polynomial and basis")
    key = basis.order.key
    polys = [b.terms for b in basis.basis]
    leads = [_lead(p, key) for p in polys]
    return LaurentPoly(f.vars, _reduce(f.terms, polys, leads, key))


# -- independent membership oracle -------------------------------------------------

def _monomials_up_to(nv, deg):
    out = []
    for d in range(deg + 1):
        for combo in itertools.combinations_with_replacement(range(nv), d):
            e = [0] * nv
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    return out


def membership_oracle(f: LaurentPoly, generators, degree_cap: int, max_unknowns: int = 6000) -> bool:
    """Decide whether f = sum c_i g_i with every deg c_i <= degree_cap.

    Dense linear algebra over Q on monomial coefficients; shares no code with
    the Buchberger path.
    """
    gens = [g for g in generators if not g.is_zero()]
    if f.is_zero():
        return True
    if not gens:
        return False
    nv = len(f.vars)
    monos = _monomials_up_to(nv, degree_cap)
    unknowns = [(i, m) for i in range(len(gens)) for m in monos]
    if len(unknowns) > max_unknowns:
        raise CapExceeded(f"{len(unknowns)} unknowns exceed oracle cap {max_unknowns}")
    rows = {}
    for col, (i, m) in enumerate(unknowns):
        for e, c in gens[i].terms.items():
            mono = tuple(a + b for a, b in zip(e, m))
            rows.setdefault(mono, {})[col] = QQ(c.numerator, c.denominator)
    for mono in f.terms:
        rows.setdefault(mono, {})
    row_keys = sorted(rows)
    shape = (len(row_keys), len(unknowns))
    Am = DomainMatrix({r: rows[k] for r, k in enumerate(row_keys) if rows[k]}, shape, QQ)
    rhs = {}
    for r, k in enumerate(row_keys):
        c = f.terms.get(k)
        if c:
            rhs[r] = {0: QQ(c.numerator, c.denominator)}
    Ab = Am.hstack(DomainMatrix(rhs, (shape[0], 1), QQ))
    return Am.rank() == Ab.rank()


# -- regularity ------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalSection:
    numerator: LaurentPoly
    denominator: LaurentPoly
    ring: CoordinateRing

    def __post_init__(self):
        for name in ("numerator", "denominator"):
            p = getattr(self, name)
            if isinstance(p, str):
                p = self.ring.poly(p)
            elif p.vars != self.ring.vars:
                p = p.with_vars(self.ring.vars)
            if not p.is_polynomial():
                raise ValueError(f"{name} must be a polynomial")
            object.__setattr__(self, name, p)
        if self.denominator.is_zero():
            raise ValueError("zero denominator")

    def denominator_survives(self, q=5, cap=None):
        """Sampled check that the denominator is not identically zero on the ring."""
        pts = enumerate_points(self.ring, q, cap=cap)
        return not pts or any(evaluate(self.denominator, p, q) for p in pts)


@dataclass
class Regularity:
    status: str  # regular | not_regular | undecided
    witness: LaurentPoly | None = None
    unit_power: int = 0
    unit_part: LaurentPoly | None = None
    reduced_denominator: LaurentPoly | None = None
    certificate: dict | None = None
    reason: str = ""

    def to_dict(self):
        out = {"status": self.status}
        if self.witness is not None:
            out["witness"] = str(self.witness)
            out["unit_power"] = self.unit_power
            out["unit_part"] = str(self.unit_part)
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.reason:
            out["reason"] = self.reason
        return out


def exact_quotient(f: LaurentPoly, g: LaurentPoly):
    """f/g when g divides f in Q[vars], else None."""
    if g.is_zero():
        return None
    key = LEX.key
    lm = _lead(g.terms, key)
    p = dict(f.terms)
    quot = {}
    while p:
        lt = _lead(p, key)
        if not _divides(lm, lt):
            return None
        c = p[lt] / g.terms[lm]
        shift = tuple(a - b for a, b in zip(lt, lm))
        quot[shift] = c
        _addmul(p, g.terms, -c, shift)
    return LaurentPoly(f.vars, quot)


def split_units(den: LaurentPoly, units, max_mult=64):
    """Write den = u*q with u a product of distinguished units (greedy)."""
    u = LaurentPoly.const(1, den.vars)
    q = den
    for unit in units:
        if unit.is_constant():
            continue
        for _ in range(max_mult):
            t = exact_quotient(q, unit)
            if t is None:
                break
            q, u = t, u * unit
    return u, q


def find_pole(section: RationalSection, primes=(3, 5, 7, 11), cap=None, skip_denominator=None):
    """An F_q point of the ring where the reduced denominator vanishes and the numerator does not."""
    den = section.denominator if skip_denominator is None else skip_denominator
    for q in primes:
        try:
            pts = enumerate_points(section.ring, q, cap=cap)
        except (CapExceeded, ZeroDivisionError):
            continue
        for pt in pts:
            try:
                if evaluate(den, pt, q) == 0 and evaluate(section.numerator, pt, q) != 0:
                    return {"q": q, "point": list(pt)}
            except ZeroDivisionError:
                break  # coefficient denominators vanish mod q
    return None


def check_certificate(section: RationalSection, cert) -> bool:
    q, pt = cert["q"], tuple(cert["point"])
    ring = section.ring
    try:
        on_ring = all(evaluate(g, pt, q) == 0 for g in ring.ideal) and all(evaluate(u, pt, q) for u in ring.units)
        return on_ring and evaluate(section.denominator, pt, q) == 0 and evaluate(section.numerator, pt, q) != 0
    except (PoleError, ZeroDivisionError):
        return False


def is_regular(section: RationalSection, caps: Caps | None = None, primes=(3, 5, 7, 11), order=GREVLEX) -> Regularity:
    """Decide whether numerator/denominator extends to an element of the ring.

    ``regular`` carries h and m with numerator*U^m == h*q modulo the ideal,
    where denominator = u*q and U is the product of the distinguished units.
    ``not_regular`` carries an explicit pole over some F_q.  Anything else is
    ``undecided``.
    """
    caps = caps or Caps()
    ring = section.ring
    num = section.numerator
    u_part, q_part = split_units(section.denominator, ring.units)
    U = ring.unit_product()
    reason = ""
    try:
        gb = buchberger(list(ring.ideal) + [q_part], order, caps, track=True)
        target = num
        for m in range(caps.units + 1):
            rem, cof = gb.lift(target)
            if rem.is_zero():
                return Regularity("regular", cof[-1], m, u_part, q_part)
            target = target * U
    except CapExceeded as exc:
        reason = str(exc)
    cert = find_pole(section, primes, caps.enum, q_part)
    if cert is not None:
        return Regularity("not_regular", certificate=cert, unit_part=u_part, reduced_denominator=q_part)
    return Regularity("undecided", unit_part=u_part, reduced_denominator=q_part, reason=reason or "unit-multiplicity cap exhausted")


def check_witness(section: RationalSection, result: Regularity, q=5, samples=50, rng=None, cap=None) -> int:
    """Count sampled variety points where num*U^m - h*q_part vanishes; returns the tally."""
    import random

    rng = rng or random.Random(0)
    ring = section.ring
    U = ring.unit_product()
    expr = section.numerator * U**result.unit_power - result.witness * result.reduced_denominator
    pts = enumerate_points(ring, q, cap=cap)
    if not pts:
        return 0
    chosen = [pts[rng.randrange(len(pts))] for _ in range(samples)]
    return sum(evaluate(expr, p, q) == 0 for p in chosen)


__all__ = [
    "GREVLEX",
    "LEX",
    "GroebnerBasis",
    "MonomialOrder",
    "RationalSection",
    "Regularity",
    "buchberger",
    "check_certificate",
    "check_witness",
    "count_points",
    "exact_quotient",
    "find_pole",
    "is_regular",
    "membership_oracle",
    "normal_form",
    "split_units",
]
