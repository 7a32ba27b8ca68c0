"""Quivers, truncated trace spaces R/[R,R] of path algebras, and the trace pairing.

Convention: a path is written left to right in the order its arrows are
traversed, so ``a1 a2`` means a1 first.  Its representation matrix is the
composite ``A2 @ A1`` (matrices act on column vectors), and the trace of a
cycle class is ``tr(A_k ... A_1)``.  Traces of closed walks are invariant
under rotation, so class values do not depend on the chosen representative.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .caps import CapExceeded, Caps
from .exactalg import CoordinateRing, LaurentPoly, VarietyPresentation


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple  # (source, target, label), vertices numbered 1..n

    def __post_init__(self):
        arrows = tuple((int(s), int(t), str(lab)) for s, t, lab in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        if self.n < 1:
            raise ValueError("a quiver needs at least one vertex")
        labels = [a[2] for a in arrows]
        if len(set(labels)) != len(labels):
            raise ValueError("arrow labels must be unique")
        for s, t, lab in arrows:
            if not (1 <= s <= self.n and 1 <= t <= self.n):
                raise ValueError(f"arrow {lab} has endpoint outside [1, {self.n}]")

    @classmethod
    def cyclic(cls, n, prefix="a"):
        return cls(n, tuple((i, i % n + 1, f"{prefix}{i}") for i in range(1, n + 1)))

    @classmethod
    def loop(cls, label="t"):
        return cls(1, ((1, 1, label),))

    @classmethod
    def linear(cls, n, prefix="b"):
        return cls(n, tuple((i, i + 1, f"{prefix}{i}") for i in range(1, n)))

    @classmethod
    def parse_file(cls, text):
        """First line ``n``, then one ``src tgt label`` triple per line."""
        lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ValueError("empty quiver file")
        n = int(lines[0])
        arrows = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 3:
                raise ValueError(f"malformed arrow line {ln!r}")
            arrows.append((int(parts[0]), int(parts[1]), parts[2]))
        return cls(n, tuple(arrows))

    @classmethod
    def from_spec(cls, spec: str):
        """``cyclic:<n>``, ``loop``, ``linear:<n>`` or ``file:<path>``."""
        kind, _, arg = spec.partition(":")
        if kind == "cyclic":
            return cls.cyclic(int(arg))
        if kind == "loop":
            return cls.loop(arg or "t")
        if kind == "linear":
            return cls.linear(int(arg))
        if kind == "file":
            return cls.parse_file(Path(arg).read_text())
        raise ValueError(f"unknown quiver spec {spec!r}")

    @property
    def labels(self):
        return tuple(a[2] for a in self.arrows)

    def source(self, i):
        return self.arrows[i][0]

    def target(self, i):
        return self.arrows[i][1]

    def index(self, arrow):
        if isinstance(arrow, int):
            if not 0 <= arrow < len(self.arrows):
                raise ValueError(f"no arrow with index {arrow}")
            return arrow
        try:
            return self.labels.index(arrow)
        except ValueError:
            raise ValueError(f"unknown arrow {arrow!r}") from None

    def adjacency(self):
        A = np.zeros((self.n, self.n), dtype=object)
        A[:, :] = 0
        for s, t, _ in self.arrows:
            A[s - 1, t - 1] += 1
        return A

    def to_text(self):
        return "\n".join([str(self.n)] + [f"{s} {t} {lab}" for s, t, lab in self.arrows]) + "\n"


@dataclass(frozen=True, order=True)
class PathClass:
    """A basis element of the trace space.

    ``arrows`` is the rotation-minimal arrow-index sequence of a closed walk;
    an empty sequence denotes the idempotent at ``vertex``.
    """

    arrows: tuple = ()
    vertex: int = 0

    @classmethod
    def idempotent(cls, vertex):
        return cls((), vertex)

    @property
    def is_idempotent(self):
        return not self.arrows

    def __len__(self):
        return len(self.arrows)

    def sort_key(self):
        return (len(self.arrows), self.arrows, self.vertex)

    def label(self, quiver):
        if self.is_idempotent:
            return f"e{self.vertex}"
        return "[" + " ".join(quiver.labels[i] for i in self.arrows) + "]"


def _min_rotation(seq):
    seq = tuple(seq)
    return min(seq[i:] + seq[:i] for i in range(len(seq))) if seq else seq


def _is_walk(quiver, idx):
    return all(quiver.target(a) == quiver.source(b) for a, b in zip(idx, idx[1:]))


def canonicalize_cycle(path, quiver: Quiver) -> PathClass:
    """Rotation-minimal class of a closed walk given by labels or indices."""
    idx = tuple(quiver.index(a) for a in path)
    if not idx:
        raise ValueError("empty path: use PathClass.idempotent")
    if not _is_walk(quiver, idx) or quiver.target(idx[-1]) != quiver.source(idx[0]):
        raise ValueError(f"not a closed walk: {list(path)}")
    return PathClass(_min_rotation(idx))


def path_class(path, quiver: Quiver):
    """Class of an arbitrary path; None for the zero class (open paths)."""
    idx = tuple(quiver.index(a) for a in path)
    if not idx:
        raise ValueError("empty path")
    if not _is_walk(quiver, idx):
        raise ValueError(f"arrows do not compose: {list(path)}")
    if quiver.target(idx[-1]) != quiver.source(idx[0]):
        return None
    return PathClass(_min_rotation(idx))


@dataclass(frozen=True)
class TraceSpace:
    quiver: Quiver
    max_len: int
    basis: tuple

    @property
    def dim(self):
        return len(self.basis)

    def __contains__(self, cls):
        return cls in set(self.basis)

    def labels(self):
        return [b.label(self.quiver) for b in self.basis]


def trace_space(quiver: Quiver, max_len: int, caps: Caps | None = None) -> TraceSpace:
    """Idempotents plus rotation classes of closed walks of length 1..max_len.

    Walks are grown only from their smallest arrow and kept when they are the
    least rotation, so each class is produced exactly once.
    """
    if max_len < 0:
        raise ValueError("length cap must be nonnegative")
    cap = (caps or Caps()).walk
    out_arrows = {v: [] for v in range(1, quiver.n + 1)}
    for i, (s, _, _) in enumerate(quiver.arrows):
        out_arrows[s].append(i)

    found = []
    nodes = 0
    for first in range(len(quiver.arrows) if max_len else 0):
        start = quiver.source(first)
        stack = [(first,)]
        while stack:
            walk = stack.pop()
            nodes += 1
            if nodes > cap:
                raise CapExceeded(f"walk enumeration exceeded {cap} nodes")
            end = quiver.target(walk[-1])
            if end == start and _min_rotation(walk) == walk:
                found.append(PathClass(walk))
            if len(walk) < max_len:
                for a in reversed(out_arrows[end]):
                    if a >= first:
                        stack.append(walk + (a,))
    basis = [PathClass.idempotent(v) for v in range(1, quiver.n + 1)]
    basis += sorted(found, key=PathClass.sort_key)
    return TraceSpace(quiver, max_len, tuple(basis))


class Chain:
    """Finite linear combination of trace-space classes on one quiver."""

    def __init__(self, quiver: Quiver, terms=None):
        self.quiver = quiver
        self.terms = {}
        for cls, c in (terms or {}).items():
            if c:
                self.terms[cls] = self.terms.get(cls, 0) + c
        self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def of(cls, quiver, path_or_class, coeff=1):
        if isinstance(path_or_class, PathClass):
            return cls(quiver, {path_or_class: coeff})
        pc = path_class(path_or_class, quiver)
        return cls(quiver, {} if pc is None else {pc: coeff})

    def __add__(self, other):
        self._same(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return Chain(self.quiver, terms)

    def __neg__(self):
        return Chain(self.quiver, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return Chain(self.quiver, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Chain) and self.quiver == other.quiver and self.terms == other.terms

    def _same(self, other):
        if self.quiver != other.quiver:
            raise ValueError("chains live on different quivers")

    def is_zero(self):
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for cls in sorted(self.terms, key=PathClass.sort_key):
            c = self.terms[cls]
            sign, c = ("-", -c) if c < 0 else ("+", c)
            lab = cls.label(self.quiver)
            term = lab if c == 1 else f"{c}*{lab}"
            out += (f"-{term}" if sign == "-" else term) if not out else f" {sign} {term}"
        return out

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str, quiver: Quiver):
        """Parse ``2*[a1 a2] - e1 + rho^2``.

        ``rho`` is the full cycle a1..an of a cyclic (or one-loop) quiver.
        """
        chain = Chain(quiver)
        pos = 0
        text = text.strip()
        if not text or text == "0":
            return chain
        for m in _TERM.finditer(text):
            if m.start() != pos:
                break
            sign, coeff, term = m.group(1), m.group(2), m.group(3)
            if pos and not sign:
                break
            c = Fraction(coeff) if coeff else Fraction(1)
            chain = chain + _parse_class(term, quiver, -c if sign == "-" else c)
            pos = m.end()
        if pos != len(text):
            raise ValueError(f"cannot parse chain {text!r}")
        return chain


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?(\[[^\]]*\]|e\d+|rho(?:\^\d+)?)\s*")


def _parse_class(term, quiver, coeff):
    m = re.fullmatch(r"e(\d+)", term)
    if m:
        v = int(m.group(1))
        if not 1 <= v <= quiver.n:
            raise ValueError(f"no vertex {v}")
        return Chain(quiver, {PathClass.idempotent(v): coeff})
    m = re.fullmatch(r"rho(?:\^(\d+))?", term)
    if m:
        k = int(m.group(1) or 1)
        return Chain.of(quiver, full_cycle(quiver) * k, coeff)
    m = re.fullmatch(r"\[([^\]]*)\]", term)
    if m:
        labels = [t for t in re.split(r"[\s,]+", m.group(1)) if t]
        return Chain.of(quiver, labels, coeff)
    raise ValueError(f"cannot parse chain term {term!r}")


def full_cycle(quiver: Quiver):
    """Arrow indices of the defining cycle of a cyclic or one-loop quiver."""
    n = quiver.n
    if len(quiver.arrows) == n and all(quiver.arrows[i][:2] == (i + 1, (i + 1) % n + 1) for i in range(n)):
        return tuple(range(n))
    raise ValueError("rho is only defined for cyclic quivers")


# -- representations --------------------------------------------------------------


def _matrix(rows):
    rows = [list(r) for r in rows]
    m = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            m[i, j] = v
    return m


def identity(n, one=1, zero=0):
    m = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            m[i, j] = one if i == j else zero
    return m


def trace(m):
    return sum((m[i, i] for i in range(m.shape[0])), 0)


def det(m):
    """Leibniz determinant; fine for the small symbolic matrices used here."""
    n = m.shape[0]
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = term * m[i, perm[i]]
        total = total + (-term if inv % 2 else term)
    return total


@dataclass
class Representation:
    quiver: Quiver
    dims: tuple
    matrices: dict  # label -> object ndarray, shape (dim target, dim source)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if len(self.dims) != self.quiver.n:
            raise ValueError("one dimension per vertex required")
        mats = {}
        for s, t, lab in self.quiver.arrows:
            if lab not in self.matrices:
                raise ValueError(f"missing matrix for arrow {lab}")
            m = self.matrices[lab]
            if not isinstance(m, np.ndarray):
                m = _matrix(m)
            if m.shape != (self.dims[t - 1], self.dims[s - 1]):
                raise ValueError(f"arrow {lab}: shape {m.shape} != {(self.dims[t - 1], self.dims[s - 1])}")
            mats[lab] = m
        self.matrices = mats

    def composite(self, arrows):
        idx = [self.quiver.index(a) for a in arrows]
        m = None
        for i in idx:
            a = self.matrices[self.quiver.labels[i]]
            m = a if m is None else a.dot(m)
        return m


def ho_trace(chain: Chain, rep: Representation):
    """Trace pairing: e_i -> dim V_i, closed walk -> trace of the composite."""
    if chain.quiver != rep.quiver:
        raise ValueError("chain and representation are on different quivers")
    total = 0
    for cls, c in chain.terms.items():
        if cls.is_idempotent:
            value = rep.dims[cls.vertex - 1]
        elif rep.dims[rep.quiver.source(cls.arrows[0]) - 1] == 0:
            value = 0
        else:
            value = trace(rep.composite(cls.arrows))
        total = total + c * value
    return total


def _entry_names(label, rows, cols):
    if rows == cols == 1:
        return [[label]]
    sep = "_" if max(rows, cols) < 10 else None
    return [[f"{label}_{i}{j}" if sep else f"{label}_{i}_{j}" for j in range(1, cols + 1)] for i in range(1, rows + 1)]


def rep_moduli_chart(quiver: Quiver, dims, caps: Caps | None = None) -> VarietyPresentation:
    """Symbolic representation variety: one variable per matrix entry.

    The ideal is empty; the distinguished units are the determinants of the
    square arrow matrices (the invertible-locus chart).
    """
    dims = tuple(dims)
    if len(dims) != quiver.n:
        raise ValueError("one dimension per vertex required")
    names = {}
    vars = []
    for s, t, lab in quiver.arrows:
        grid = _entry_names(lab, dims[t - 1], dims[s - 1])
        names[lab] = grid
        vars.extend(v for row in grid for v in row)
    cap = (caps or Caps()).symbolic_vars
    if len(vars) > cap:
        raise CapExceeded(f"{len(vars)} symbolic variables exceed cap {cap}")
    vars = tuple(vars)
    units = []
    for s, t, lab in quiver.arrows:
        if dims[s - 1] == dims[t - 1] and dims[s - 1] > 0:
            m = _matrix([[LaurentPoly.var(v, vars) for v in row] for row in names[lab]])
            units.append(det(m))
    ring = CoordinateRing(vars, (), tuple(units))
    meta = {"quiver": quiver.to_text(), "dims": list(dims), "matrices": names}
    return VarietyPresentation(ring, meta)


def symbolic_representation(quiver: Quiver, dims, caps: Caps | None = None):
    pres = rep_moduli_chart(quiver, dims, caps)
    vars = pres.ring.vars
    mats = {}
    for s, t, lab in quiver.arrows:
        grid = pres.metadata["matrices"][lab]
        m = np.empty((dims[t - 1], dims[s - 1]), dtype=object)
        for i, row in enumerate(grid):
            for j, v in enumerate(row):
                m[i, j] = LaurentPoly.var(v, vars)
        mats[lab] = m
    return Representation(quiver, tuple(dims), mats), pres


def parse_rep(text: str, quiver: Quiver, vars=None) -> Representation:
    """``"1,1;a1=2;a2=[[1,x],[0,1]]"``: dims, then one matrix per arrow.

    Entries are rationals, or polynomials when ``vars`` is given or any entry
    mentions a variable.
    """
    from .exactalg import parse_poly, _IDENT

    chunks = [c.strip() for c in text.split(";") if c.strip()]
    if not chunks:
        raise ValueError("empty representation")
    dims = tuple(int(d) for d in chunks[0].split(","))
    raw = {}
    for c in chunks[1:]:
        lab, _, body = c.partition("=")
        body = body.strip()
        rows = re.findall(r"\[([^\[\]]*)\]", body) if body.startswith("[") else [body]
        raw[lab.strip()] = [[e.strip() for e in r.split(",")] for r in rows]
    if vars is None:
        names = []
        for grid in raw.values():
            for row in grid:
                for e in row:
                    names.extend(n for n in _IDENT.findall(e) if n not in names)
        vars = tuple(names)
    mats = {}
    for lab, grid in raw.items():
        if vars:
            mats[lab] = _matrix([[parse_poly(e, vars) for e in row] for row in grid])
        else:
            mats[lab] = _matrix([[Fraction(e) for e in row] for row in grid])
    for s, t, lab in quiver.arrows:
        if lab not in mats and (dims[s - 1] == 0 or dims[t - 1] == 0):
            mats[lab] = np.empty((dims[t - 1], dims[s - 1]), dtype=object)
    return Representation(quiver, dims, mats)
