"""Exact scalars, multivariate Laurent polynomials and localized coordinate rings.

Coefficients are always :class:`fractions.Fraction`.  Prime-field arithmetic is
available through :class:`Fq` and through ``modulus=`` arguments, which reduce
rational coefficients on the fly.
"""

from __future__ import annotations

import ast
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .caps import CapExceeded, Caps


class ArityError(ValueError):
    pass


class PoleError(ZeroDivisionError):
    pass


def is_prime(q):
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    i = 3
    while i * i <= q:
        if q % i == 0:
            return False
        i += 2
    return True


class Fq:
    """Element of the prime field with ``q`` elements, stored reduced."""

    __slots__ = ("value", "q")

    def __init__(self, value, q):
        if isinstance(value, Fq):
            value = value.value
        if isinstance(value, Fraction):
            value = reduce_mod(value, q)
        self.value = int(value) % q
        self.q = q

    def _other(self, other):
        if isinstance(other, Fq):
            if other.q != self.q:
                raise ValueError(f"mixed moduli {self.q} and {other.q}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return Fq(other, self.q).value
        return None

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else Fq(self.value + o, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else Fq(self.value - o, self.q)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else Fq(o - self.value, self.q)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else Fq(self.value * o, self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return Fq(-self.value, self.q)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return Fq(pow(self.value, -1, self.q), self.q)

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else self * Fq(o, self.q).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else self.inverse() * o

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** -k
        return Fq(pow(self.value, k, self.q), self.q)

    def __eq__(self, other):
        o = self._other(other)
        return o is not None and o == self.value

    def __hash__(self):
        return hash((self.value, self.q))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fq({self.value}, {self.q})"


def reduce_mod(c, q):
    """Image of a rational number in F_q."""
    c = Fraction(c)
    den = c.denominator % q
    if den == 0:
        raise ZeroDivisionError(f"denominator of {c} vanishes mod {q}")
    return c.numerator * pow(den, -1, q) % q


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not an exact rational scalar: {c!r}")


class LaurentPoly:
    """Multivariate Laurent polynomial over Q in a fixed ordered variable list.

    ``terms`` maps integer exponent tuples (negative entries allowed) to
    nonzero Fractions.  Instances are treated as immutable.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms=None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ArityError(f"exponent {exp} does not match variables {self.vars}")
            c = _as_fraction(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c, vars):
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, name, vars):
        vars = tuple(vars)
        exp = tuple(int(v == name) for v in vars)
        if sum(exp) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls(vars, {exp: 1})

    @classmethod
    def monomial(cls, exp, vars, coeff=1):
        return cls(vars, {tuple(exp): coeff})

    @classmethod
    def parse(cls, text, vars=None):
        return parse_poly(text, vars)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.vars != self.vars:
                raise ArityError(f"variable lists differ: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other, self.vars)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return LaurentPoly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be raised to negative powers")
            (exp, c), = self.terms.items()
            return LaurentPoly(self.vars, {tuple(k * e for e in exp): Fraction(1) / c ** -k})
        result = LaurentPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _as_fraction(other))
        if isinstance(other, LaurentPoly) and len(other.terms) == 1:
            return self * other ** -1
        return NotImplemented

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other, self.vars)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def is_polynomial(self):
        """True when no exponent is negative (an honest polynomial)."""
        return all(min(e, default=0) >= 0 for e in self.terms)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def min_exponents(self):
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(col) for col in zip(*self.terms))

    def used_vars(self):
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def with_vars(self, vars):
        """Re-embed in a larger (or reordered) variable list."""
        vars = tuple(vars)
        missing = set(self.used_vars()) - set(vars)
        if missing:
            raise ArityError(f"variables {sorted(missing)} not in {vars}")
        pos = {v: i for i, v in enumerate(self.vars)}
        terms = {}
        for e, c in self.terms.items():
            terms[tuple(e[pos[v]] if v in pos else 0 for v in vars)] = c
        return LaurentPoly(vars, terms)

    def substitute(self, values: dict):
        """Substitute LaurentPoly/scalar values for some variables."""
        out = None
        for exp, c in self.terms.items():
            term = LaurentPoly.const(c, self.vars)
            for v, e in zip(self.vars, exp):
                if e == 0:
                    continue
                base = values.get(v, LaurentPoly.var(v, self.vars))
                term = term * base ** e
            out = term if out is None else out + term
        return out if out is not None else LaurentPoly(self.vars)

    def evaluate(self, point, modulus=None):
        return evaluate(self, point, modulus)

    def sorted_terms(self):
        """Terms in graded-reverse-lex descending order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-e for e in reversed(t[0]))), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, exp) if e)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r}, vars={self.vars})"


def poly_op(lhs: LaurentPoly, rhs: LaurentPoly, op: str) -> LaurentPoly:
    if lhs.vars != rhs.vars:
        raise ArityError(f"variable lists differ: {lhs.vars} vs {rhs.vars}")
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown op {op!r}")


def evaluate(f: LaurentPoly, point, modulus=None):
    """Exact value of ``f`` at ``point``; over F_modulus when given."""
    if len(point) != len(f.vars):
        raise ArityError(f"point has {len(point)} coordinates, need {len(f.vars)}")
    if modulus is None and any(isinstance(p, Fq) for p in point):
        modulus = next(p.q for p in point if isinstance(p, Fq))
    if modulus is not None:
        q = modulus
        xs = [int(p) % q if not isinstance(p, Fraction) else reduce_mod(p, q) for p in point]
        total = 0
        for exp, c in f.terms.items():
            t = reduce_mod(c, q)
            for x, e in zip(xs, exp):
                if e < 0:
                    if x == 0:
                        raise PoleError("negative power of a variable evaluated at 0")
                    t = t * pow(x, e, q) % q
                elif e:
                    t = t * pow(x, e, q) % q
            total += t
        return total % q
    xs = [_as_fraction(p) for p in point]
    total = Fraction(0)
    for exp, c in f.terms.items():
        t = c
        for x, e in zip(xs, exp):
            if e < 0 and x == 0:
                raise PoleError("negative power of a variable evaluated at 0")
            if e:
                t *= x**e
        total += t
    return total


# -- text grammar ------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def parse_poly(text: str, vars: Sequence[str] | None = None) -> LaurentPoly:
    """Parse ``1 + x*y``, ``x^-1*y^2``, ``3/2*x - (y+1)^2`` and the like.

    Without ``vars`` the variables are the identifiers in order of appearance.
    """
    if vars is None:
        seen = []
        for name in _IDENT.findall(text):
            if name not in seen:
                seen.append(name)
        vars = seen
    vars = tuple(vars)
    try:
        tree = ast.parse(text.replace("^", "**").strip() or "0", mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}") from exc
    return _eval_node(tree.body, vars, text)


def _eval_node(node, vars, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return LaurentPoly.const(node.value, vars)
    if isinstance(node, ast.Name):
        if node.id not in vars:
            raise ValueError(f"unknown variable {node.id!r} in {text!r}")
        return LaurentPoly.var(node.id, vars)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, vars, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            k = _int_literal(node.right)
            if k is None:
                raise ValueError(f"exponent must be an integer literal in {text!r}")
            return _eval_node(node.left, vars, text) ** k
        left = _eval_node(node.left, vars, text)
        right = _eval_node(node.right, vars, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant() or right.is_zero():
                raise ValueError(f"division only by nonzero constants in {text!r}")
            return left * (Fraction(1) / right.constant_term())
    raise ValueError(f"unsupported syntax in polynomial {text!r}")


def _int_literal(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        k = _int_literal(node.operand)
        return None if k is None else -k
    return None


# -- coordinate rings ----------------------------------------------------------

def _as_poly(p, vars):
    if isinstance(p, LaurentPoly):
        return p if p.vars == tuple(vars) else p.with_vars(vars)
    if isinstance(p, str):
        return parse_poly(p, vars)
    return LaurentPoly.const(p, vars)


@dataclass(frozen=True)
class CoordinateRing:
    """Q[vars]/(ideal) with the ``units`` formally inverted."""

    vars: tuple
    ideal: tuple = ()
    units: tuple = ()

    def __post_init__(self):
        vars = tuple(self.vars)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "ideal", tuple(_as_poly(p, vars) for p in self.ideal))
        object.__setattr__(self, "units", tuple(_as_poly(p, vars) for p in self.units))
        for p in self.ideal + self.units:
            if not p.is_polynomial():
                raise ValueError(f"ring data must be honest polynomials, got {p}")
        for u in self.units:
            if u.is_zero():
                raise ValueError("zero cannot be a distinguished unit")

    @classmethod
    def hopf(cls):
        return cls(("x", "y"), (), ("1 + x*y",))

    def poly(self, text):
        return _as_poly(text, self.vars)

    def without_units(self):
        return CoordinateRing(self.vars, self.ideal, ())

    def unit_product(self):
        return reduce(lambda a, b: a * b, self.units, LaurentPoly.const(1, self.vars))

    def to_dict(self):
        return {
            "variables": list(self.vars),
            "relations": [str(p) for p in self.ideal],
            "units": [str(u) for u in self.units],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(data["variables"]), tuple(data.get("relations", ())), tuple(data.get("units", ())))

    def units_survive(self, q, cap=None):
        """Sampled check that no distinguished unit vanishes on all of V(ideal)(F_q).

        Returns None when V(ideal) has no F_q points (inconclusive).
        """
        pts = enumerate_points(self.without_units(), q, cap=cap)
        if not pts:
            return None
        return all(any(evaluate(u, p, q) for p in pts) for u in self.units)


@dataclass(frozen=True)
class VarietyPresentation:
    ring: CoordinateRing
    metadata: dict = field(default_factory=dict, compare=False)

    def to_dict(self):
        return {**self.metadata, **self.ring.to_dict()}


def _grid_chunks(v, q, chunk):
    total = q**v
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cols = []
        for _ in range(v):
            cols.append(idx % q)
            idx = idx // q
        yield cols[::-1]  # first variable most significant


def _vector_eval(f, cols, q, n):
    out = np.zeros(n, dtype=np.int64)
    for exp, c in f.terms.items():
        t = np.full(n, reduce_mod(c, q), dtype=np.int64)
        for col, e in zip(cols, exp):
            for _ in range(e):
                t = t * col % q
        out = (out + t) % q
    return out


def _point_mask(ring, q, cols, n):
    mask = np.ones(n, dtype=bool)
    for g in ring.ideal:
        mask &= _vector_eval(g, cols, q, n) == 0
    for u in ring.units:
        mask &= _vector_eval(u, cols, q, n) != 0
    return mask


def _check_enum(ring, q, cap):
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q > 2**31:
        raise ValueError("modulus must be at most 2^31")
    cap = Caps().enum if cap is None else cap
    if q ** len(ring.vars) > cap:
        raise CapExceeded(f"{q}^{len(ring.vars)} assignments exceed enumeration cap {cap}")


def enumerate_points(ring: CoordinateRing, q: int, cap=None, chunk=1 << 18) -> list:
    """All F_q points of the ring, in lexicographic order of coordinates."""
    _check_enum(ring, q, cap)
    v = len(ring.vars)
    if v == 0:
        ok = all(reduce_mod(g.constant_term(), q) == 0 for g in ring.ideal) and all(
            reduce_mod(u.constant_term(), q) != 0 for u in ring.units
        )
        return [()] if ok else []
    points = []
    for cols in _grid_chunks(v, q, chunk):
        n = len(cols[0])
        mask = _point_mask(ring, q, cols, n)
        if mask.any():
            sel = np.stack([c[mask] for c in cols], axis=1)
            points.extend(tuple(int(x) for x in row) for row in sel)
    return points


def count_points(ring: CoordinateRing, q: int, cap=None, chunk=1 << 18) -> int:
    _check_enum(ring, q, cap)
    v = len(ring.vars)
    if v == 0:
        return len(enumerate_points(ring, q, cap))
    return sum(int(_point_mask(ring, q, cols, len(cols[0])).sum()) for cols in _grid_chunks(v, q, chunk))


def brute_force_points(ring: CoordinateRing, q: int) -> list:
    """Scalar-loop enumeration; slow reference used only by tests and oracles."""
    pts = []
    for p in itertools.product(range(q), repeat=len(ring.vars)):
        if all(evaluate(g, p, q) == 0 for g in ring.ideal) and all(evaluate(u, p, q) for u in ring.units):
            pts.append(p)
    return pts


def product(items: Iterable, one=1):
    return reduce(lambda a, b: a * b, items, one)
