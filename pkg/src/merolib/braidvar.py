"""Positive braid words, Demazure products and braid-variety presentations.

Convention (recorded in every presentation as ``CONVENTION``): the letter
sigma_i with parameter z is the identity matrix with the block [[z,1],[1,0]]
in rows/columns i, i+1, and the braid variety of a word is the locus where
every entry of the ordered product strictly above the antidiagonal vanishes
(the product times w0 is lower triangular).  The antidiagonal entries are
then automatically units because det B_i(z) = -1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .caps import Caps
from .exactalg import CoordinateRing, LaurentPoly, VarietyPresentation, count_points as _count

CONVENTION = "B(z)=[[z,1],[1,0]];above_antidiag=0"


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(i) for i in self.letters))
        if self.strands < 2:
            raise ValueError("need at least two strands")
        for i in self.letters:
            if not 1 <= i <= self.strands - 1:
                raise ValueError(f"generator {i} out of range for {self.strands} strands")

    @classmethod
    def parse(cls, strands, text):
        text = text.strip()
        letters = [int(t) for t in text.replace(" ", ",").split(",") if t] if text else []
        return cls(strands, tuple(letters))

    def __add__(self, other):
        if self.strands != other.strands:
            raise ValueError("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return ",".join(map(str, self.letters))


@dataclass(frozen=True)
class Permutation:
    images: tuple  # one-line notation on 0..n-1

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def longest(cls, n):
        return cls(tuple(range(n - 1, -1, -1)))

    def length(self):
        w = self.images
        return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])

    def times_simple(self, i):
        """w * s_i (swap positions i, i+1; i is 1-based)."""
        w = list(self.images)
        w[i - 1], w[i] = w[i], w[i - 1]
        return Permutation(tuple(w))

    def reduced_word(self):
        """A reduced word (1-based letters) by bubble sort."""
        w = list(self.images)
        word = []
        changed = True
        while changed:
            changed = False
            for i in range(len(w) - 1):
                if w[i] > w[i + 1]:
                    w[i], w[i + 1] = w[i + 1], w[i]
                    word.append(i + 1)
                    changed = True
        return tuple(reversed(word))

    def __str__(self):
        return "[" + " ".join(str(i + 1) for i in self.images) + "]"


def demazure(word: BraidWord) -> Permutation:
    """Fold with w * s = ws when the length goes up, else w."""
    w = Permutation.identity(word.strands)
    for i in word.letters:
        # length of w s_i exceeds that of w iff w(i) < w(i+1)
        if w.images[i - 1] < w.images[i]:
            w = w.times_simple(i)
    return w


def variable_names(word: BraidWord):
    return tuple(f"z{k}" for k in range(1, len(word) + 1))


def braid_matrix_product(word: BraidWord, vars=None, ambient=None):
    """Ordered product B_{i1}(z1) ... B_{il}(zl) as an object array of LaurentPoly.

    ``vars[k]`` is the parameter of the k-th letter; the entries live in the
    ring with variables ``ambient`` (default ``vars``), which lets products of
    subwords be compared inside one ring.
    """
    vars = tuple(vars) if vars is not None else variable_names(word)
    ring_vars = tuple(ambient) if ambient is not None else vars
    n = word.strands
    one = LaurentPoly.const(1, ring_vars)
    zero = LaurentPoly(ring_vars)
    M = np.empty((n, n), dtype=object)
    for r in range(n):
        for c in range(n):
            M[r, c] = one if r == c else zero
    for k, i in enumerate(word.letters):
        z = LaurentPoly.var(vars[k], ring_vars)
        a = i - 1
        # right-multiplying by B_i(z) only touches columns a, a+1
        left, right = M[:, a].copy(), M[:, a + 1].copy()
        for r in range(n):
            M[r, a] = left[r] * z + right[r]
            M[r, a + 1] = left[r]
    return M


class NotFullDemazure(ValueError):
    pass


def variety_presentation(word: BraidWord) -> VarietyPresentation:
    n = word.strands
    if demazure(word) != Permutation.longest(n):
        raise NotFullDemazure(f"Demazure product of {word} is {demazure(word)}, not the longest element")
    vars = variable_names(word)
    M = braid_matrix_product(word, vars)
    relations = []
    for r in range(n):
        for c in range(n - 1 - r):
            if not M[r, c].is_zero():
                relations.append(M[r, c])
    ring = CoordinateRing(vars, tuple(relations), ())
    meta = {"strands": n, "word": list(word.letters), "convention": CONVENTION}
    return VarietyPresentation(ring, meta)


def presentation_to_json(pres: VarietyPresentation) -> str:
    d = pres.to_dict()
    ordered = {k: d[k] for k in ("strands", "word", "variables", "relations", "units", "convention") if k in d}
    return json.dumps(ordered, indent=2)


def presentation_from_json(text: str) -> VarietyPresentation:
    d = json.loads(text)
    ring = CoordinateRing.from_dict(d)
    meta = {k: d[k] for k in ("strands", "word", "convention") if k in d}
    return VarietyPresentation(ring, meta)


def count_points(pres, q: int, caps: Caps | None = None) -> int:
    ring = pres.ring if isinstance(pres, VarietyPresentation) else pres
    return _count(ring, q, cap=(caps or Caps()).enum)


def fit_torus_exponent(counts: dict):
    """Integer a with counts[q] == (q-1)^a (q^2-q+1) for every q, else None."""
    base = {q: q * q - q + 1 for q in counts}
    for q, c in counts.items():
        if c % base[q]:
            return None
    # q = 2 carries no information about a
    informative = [q for q in counts if q > 2]
    if not informative:
        return 0 if all(counts[q] == base[q] for q in counts) else None
    q0 = min(informative)
    ratio = counts[q0] // base[q0]
    a = round(math.log(ratio, q0 - 1)) if ratio > 0 else None
    if a is None or a < 0:
        return None
    if all(counts[q] == (q - 1) ** a * base[q] for q in counts):
        return a
    return None
