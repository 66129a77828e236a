"""Permutations on {1..n}, stored 0-based internally.

Composition is left-to-right: ``(p * q)(i) == q(p(i))``, so ``i ** (p*q) ==
(i ** p) ** q`` in the usual right-action reading.  Cycle notation in parsing
and formatting is 1-based.
"""

from __future__ import annotations

import re
from functools import reduce
from math import gcd

from .errors import InputError


class Perm:
    """An immutable permutation of degree n."""

    __slots__ = ("img", "_hash")

    def __init__(self, images):
        img = tuple(images)
        self.img = img
        self._hash = hash(img)

    @staticmethod
    def identity(degree: int) -> "Perm":
        return Perm(range(degree))

    @staticmethod
    def from_cycles(degree: int, cycles, one_based: bool = True) -> "Perm":
        """Build a permutation from disjoint cycles."""
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            pts = [c - 1 for c in cycle] if one_based else list(cycle)
            for a in pts:
                if not 0 <= a < degree:
                    raise InputError(f"point {a + 1} out of range 1..{degree}")
                if a in seen:
                    raise InputError(f"point {a + 1} appears in two cycles")
                seen.add(a)
            for a, b in zip(pts, pts[1:]):
                images[a] = b
            if pts:
                images[pts[-1]] = pts[0]
        return Perm(images)

    @property
    def degree(self) -> int:
        return len(self.img)

    def __getitem__(self, i: int) -> int:
        return self.img[i]

    def __mul__(self, other: "Perm") -> "Perm":
        a, b = self.img, other.img
        if len(a) != len(b):
            raise InputError("degree mismatch in permutation product")
        return Perm([b[x] for x in a])

    def inv(self) -> "Perm":
        img = self.img
        out = [0] * len(img)
        for i, j in enumerate(img):
            out[j] = i
        return Perm(out)

    def __pow__(self, n: int) -> "Perm":
        if n < 0:
            return self.inv() ** (-n)
        result = Perm.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self, g: "Perm") -> "Perm":
        """Conjugate self by g: returns g^-1 * self * g."""
        ginv = g.inv().img
        img, gi = self.img, g.img
        return Perm([gi[img[ginv[i]]] for i in range(len(img))])

    def comm(self, g: "Perm") -> "Perm":
        """Commutator [self, g] = self^-1 g^-1 self g."""
        return self.inv() * g.inv() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.img))

    def cycles(self, include_fixed: bool = False):
        """Cycle decomposition, 0-based, cycles sorted by smallest point."""
        img = self.img
        seen = [False] * len(img)
        out = []
        for i in range(len(img)):
            if seen[i]:
                continue
            cycle = [i]
            seen[i] = True
            j = img[i]
            while j != i:
                seen[j] = True
                cycle.append(j)
                j = img[j]
            if len(cycle) > 1 or include_fixed:
                out.append(tuple(cycle))
        return out

    def order(self) -> int:
        return reduce(lambda m, c: m * len(c) // gcd(m, len(c)), self.cycles(), 1)

    def moved(self):
        return [i for i, j in enumerate(self.img) if i != j]

    def min_moved(self):
        for i, j in enumerate(self.img):
            if i != j:
                return i
        return None

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def cycle_type(self):
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.img == other.img

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Perm({format_cycles(self)!r}, degree={self.degree})"

    def __str__(self) -> str:
        return format_cycles(self)


_CYCLE_RE = re.compile(r"\(\s*([0-9]+(?:\s*[, ]\s*[0-9]+)*)?\s*\)")


def parse_cycles(text: str, degree: int | None = None) -> Perm:
    """Parse 1-based cycle notation like ``(1,2,3)(4,5)`` or ``(1 2 3)``.

    ``()`` denotes the identity.  When degree is omitted, the largest point
    mentioned sets it.
    """
    stripped = text.strip()
    if not stripped:
        raise InputError("empty permutation string")
    cycles = []
    pos = 0
    for match in _CYCLE_RE.finditer(stripped):
        if stripped[pos:match.start()].strip():
            raise InputError(f"could not parse permutation {text!r}")
        body = match.group(1)
        if body:
            cycles.append([int(tok) for tok in re.split(r"\s*[, ]\s*", body.strip())])
        pos = match.end()
    if stripped[pos:].strip():
        raise InputError(f"could not parse permutation {text!r}")
    maxpt = max((max(c) for c in cycles), default=0)
    if degree is None:
        degree = maxpt
    elif maxpt > degree:
        raise InputError(f"point {maxpt} exceeds degree {degree}")
    for c in cycles:
        if min(c) < 1:
            raise InputError("points are 1-based")
    return Perm.from_cycles(degree, cycles)


def format_cycles(p: Perm) -> str:
    """Format in 1-based cycle notation; identity prints as ``()``."""
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(i + 1) for i in c) + ")" for c in cycles)


def validate_images(degree: int, images) -> tuple:
    """Check a 1-based image sequence is a bijection on 1..degree."""
    images = tuple(images)
    if len(images) != degree or sorted(images) != list(range(1, degree + 1)):
        raise InputError("images are not a bijection on 1..n")
    return images
