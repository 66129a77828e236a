"""Permutation groups with a deterministic base and strong generating set.

The BSGS is built once, lazily, by the deterministic (non-randomized)
Schreier-Sims algorithm; all queries afterwards are read-only.  Base points
are always chosen as the smallest point moved by the permutation that forces
the new level, which makes construction reproducible: the same generator
list always yields the same base, transversals and element order.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator

import numpy as np

from .config import Budget, budget_or_default
from .errors import BudgetExceeded, InputError, PreconditionError
from .perms import Perm
from . import rows as rk


class _Level:
    __slots__ = ("point", "gens", "transversal")

    def __init__(self, point: int, ident: Perm):
        self.point = point
        self.gens: list[Perm] = []
        self.transversal: dict[int, Perm] = {point: ident}


class PermGroup:
    """A finite permutation group on {1..degree} given by generators."""

    def __init__(self, degree: int, gens: Iterable[Perm]):
        if degree < 1:
            raise InputError("degree must be at least 1")
        gens = [g for g in gens if not g.is_identity()]
        for g in gens:
            if g.degree != degree:
                raise InputError("generator degree mismatch")
        # drop duplicates, keep first occurrence for determinism
        seen = set()
        uniq = []
        for g in gens:
            if g.img not in seen:
                seen.add(g.img)
                uniq.append(g)
        self.degree = degree
        self.gens: tuple[Perm, ...] = tuple(uniq)
        self.identity = Perm.identity(degree)
        self._levels: list[_Level] | None = None
        self._cache: dict = {}

    # -- BSGS ------------------------------------------------------------

    def _bsgs(self) -> list[_Level]:
        if self._levels is None:
            self._levels = _schreier_sims(self.degree, self.gens, self.identity)
        return self._levels

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lvl.point for lvl in self._bsgs())

    def order(self) -> int:
        n = 1
        for lvl in self._bsgs():
            n *= len(lvl.transversal)
        return n

    def _strip(self, g: Perm) -> Perm:
        h = g
        for lvl in self._bsgs():
            u = lvl.transversal.get(h[lvl.point])
            if u is None:
                return h
            h = h * u.inv()
        return h

    def contains(self, x: Perm) -> bool:
        if x.degree != self.degree:
            raise InputError("degree mismatch in membership test")
        return self._strip(x).is_identity()

    def __contains__(self, x: Perm) -> bool:
        return self.contains(x)

    # -- element enumeration ----------------------------------------------

    def elements(self, budget: Budget | None = None) -> Iterator[Perm]:
        """Yield every element exactly once, in a fixed deterministic order."""
        b = budget_or_default(budget)
        if self.order() > b.elements:
            raise BudgetExceeded("element enumeration", self.order(), b.elements)
        levels = self._bsgs()

        # unique factorization g = u_{k-1} * ... * u_0, deepest level first
        def rec(i: int, acc: Perm) -> Iterator[Perm]:
            if i == len(levels):
                yield acc
                return
            for a in sorted(levels[i].transversal):
                yield from rec(i + 1, levels[i].transversal[a] * acc)

        yield from rec(0, self.identity)

    def element_list(self, budget: Budget | None = None) -> list[Perm]:
        lst = self._cache.get("element_list")
        if lst is None:
            lst = list(self.elements(budget))
            self._cache["element_list"] = lst
        return lst

    def element_rows(self, budget: Budget | None = None) -> np.ndarray:
        arr = self._cache.get("element_rows")
        if arr is None:
            arr = rk.rows_from_perms(self.element_list(budget), self.degree)
            self._cache["element_rows"] = arr
        return arr

    def element_keys(self, budget: Budget | None = None) -> frozenset:
        keys = self._cache.get("element_keys")
        if keys is None:
            keys = frozenset(rk.pack_rows(self.element_rows(budget)))
            self._cache["element_keys"] = keys
        return keys

    def random_element(self, rng) -> Perm:
        g = self.identity
        for lvl in self._bsgs():
            pts = sorted(lvl.transversal)
            g = lvl.transversal[rng.choice(pts)] * g
        return g

    # -- misc structure ----------------------------------------------------

    def is_trivial(self) -> bool:
        return not self.gens

    def is_abelian(self) -> bool:
        val = self._cache.get("abelian")
        if val is None:
            val = all(
                (a * b).img == (b * a).img
                for i, a in enumerate(self.gens)
                for b in self.gens[i + 1:]
            )
            self._cache["abelian"] = val
        return val

    def is_cyclic(self) -> bool:
        n = self.order()
        return any(x.order() == n for x in self.element_list())

    def element_order_histogram(self) -> dict[int, int]:
        hist = self._cache.get("order_hist")
        if hist is None:
            hist = {}
            for x in self.element_list():
                o = x.order()
                hist[o] = hist.get(o, 0) + 1
            self._cache["order_hist"] = hist
        return hist

    def conjugacy_classes(self, budget: Budget | None = None) -> list[list[Perm]]:
        """Conjugacy classes as lists, each headed by its first-seen element."""
        classes = self._cache.get("conj_classes")
        if classes is not None:
            return classes
        elems = self.element_list(budget)
        seen: set[tuple] = set()
        classes = []
        for x in elems:
            if x.img in seen:
                continue
            orbit = {x.img: x}
            queue = [x]
            while queue:
                y = queue.pop()
                for g in self.gens:
                    z = y.conj(g)
                    if z.img not in orbit:
                        orbit[z.img] = z
                        queue.append(z)
            seen.update(orbit)
            classes.append(list(orbit.values()))
        self._cache["conj_classes"] = classes
        return classes

    def orbits(self) -> list[list[int]]:
        """Orbits on points, sorted by smallest point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            orbit = [start]
            seen[start] = True
            qi = 0
            while qi < len(orbit):
                a = orbit[qi]
                qi += 1
                for g in self.gens:
                    b = g[a]
                    if not seen[b]:
                        seen[b] = True
                        orbit.append(b)
            out.append(sorted(orbit))
        return out

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, ngens={len(self.gens)})"


def _schreier_sims(degree: int, gens: tuple[Perm, ...], ident: Perm) -> list[_Level]:
    levels: list[_Level] = []

    def new_level(pt: int):
        levels.append(_Level(pt, ident))

    def rebuild_orbit(i: int):
        lvl = levels[i]
        t = {lvl.point: ident}
        queue = [lvl.point]
        qi = 0
        while qi < len(queue):
            a = queue[qi]
            qi += 1
            ua = t[a]
            for s in lvl.gens:
                b = s[a]
                if b not in t:
                    t[b] = ua * s
                    queue.append(b)
        lvl.transversal = t

    def strip(g: Perm, start: int) -> tuple[int, Perm]:
        h = g
        for i in range(start, len(levels)):
            lvl = levels[i]
            u = lvl.transversal.get(h[lvl.point])
            if u is None:
                return i, h
            h = h * u.inv()
            if h.is_identity():
                return len(levels), h
        return len(levels), h

    # seed: place every generator at the deepest prefix of the base it fixes
    for g in gens:
        j = 0
        while j < len(levels) and g[levels[j].point] == levels[j].point:
            j += 1
        if j == len(levels):
            new_level(g.min_moved())
        for l in range(j + 1):
            levels[l].gens.append(g)
    for i in range(len(levels)):
        rebuild_orbit(i)

    # verify Schreier generators bottom-up, adding residues as strong gens
    i = len(levels) - 1
    while i >= 0:
        lvl = levels[i]
        failure = None
        for a in sorted(lvl.transversal):
            ua = lvl.transversal[a]
            for s in lvl.gens:
                b = s[a]
                g = ua * s * lvl.transversal[b].inv()
                if g.is_identity():
                    continue
                j, h = strip(g, i + 1)
                if not h.is_identity():
                    failure = (j, h)
                    break
            if failure:
                break
        if failure is None:
            i -= 1
            continue
        j, h = failure
        if j == len(levels):
            new_level(h.min_moved())
        for l in range(i + 1, j + 1):
            levels[l].gens.append(h)
            rebuild_orbit(l)
        i = j
    return levels


def group_from_generators(degree: int, gens: Iterable[Perm]) -> PermGroup:
    """Validated constructor: every generator must be a bijection on 1..degree."""
    checked = []
    for g in gens:
        if g.degree != degree:
            raise InputError(f"generator degree {g.degree} != {degree}")
        if sorted(g.img) != list(range(degree)):
            raise InputError("generator is not a bijection")
        checked.append(g)
    return PermGroup(degree, checked)


MAX_QUOTIENT_DEGREE = 4096


class Quotient:
    """The right-coset action of G on a normal subgroup N.

    Since N is normal the image is the regular representation of G/N; an
    image permutation is determined by where it sends coset 0 (= N itself),
    which keeps pullbacks exact.
    """

    def __init__(self, group: PermGroup, image: PermGroup, reps: list[Perm],
                 key_of: Callable[[Perm], bytes], key_index: dict[bytes, int],
                 kernel: PermGroup):
        self.source = group
        self.group = image
        self.reps = reps
        self._key_of = key_of
        self._key_index = key_index
        self.kernel = kernel

    @property
    def is_identity_map(self) -> bool:
        return self.kernel.is_trivial()

    def image_of(self, x: Perm) -> Perm:
        """Image of an arbitrary element of G in the coset action."""
        if self.is_identity_map:
            return x
        idx = self._key_index
        images = [idx[self._key_of(r * x)] for r in self.reps]
        return Perm(images)

    def push_gens(self, gens: Iterable[Perm]) -> list[Perm]:
        return [self.image_of(g) for g in gens]

    def pull_gens(self, image_gens: Iterable[Perm]) -> list[Perm]:
        """Generators of the full preimage of the subgroup they generate."""
        if self.is_identity_map:
            return list(image_gens)
        out = list(self.kernel.gens)
        for x in image_gens:
            out.append(self.reps[x[0]])
        return out


def coset_action(group: PermGroup, normal: PermGroup,
                 budget: Budget | None = None, check: bool = True) -> Quotient:
    """Quotient of ``group`` by the normal subgroup ``normal``.

    The returned image acts regularly on the |G:N| cosets.  Raises
    PreconditionError if N is not normal.
    """
    if normal.degree != group.degree:
        raise InputError("degree mismatch between group and subgroup")
    if check:
        for n in normal.gens:
            if not group.contains(n):
                raise PreconditionError("quotient subgroup is not contained in group")
            for g in group.gens:
                if not normal.contains(n.conj(g)):
                    raise PreconditionError("quotient subgroup is not normal")
    if normal.is_trivial():
        return Quotient(group, group, [group.identity], lambda x: b"", {}, normal)

    b = budget_or_default(budget)
    index = group.order() // normal.order()
    if index > MAX_QUOTIENT_DEGREE:
        raise BudgetExceeded("coset action degree", index, MAX_QUOTIENT_DEGREE)

    n_rows = normal.element_rows(b)

    def key_of(r: Perm) -> bytes:
        img = np.asarray(r.img, dtype=n_rows.dtype)
        coset = img[n_rows]
        return min(rk.pack_rows(coset))

    reps: list[Perm] = [group.identity]
    key_index: dict[bytes, int] = {key_of(group.identity): 0}
    qi = 0
    while qi < len(reps):
        r = reps[qi]
        qi += 1
        for s in group.gens:
            r2 = r * s
            k = key_of(r2)
            if k not in key_index:
                key_index[k] = len(reps)
                reps.append(r2)
    if len(reps) != index:
        raise PreconditionError("coset enumeration mismatch; subgroup not normal?")

    image_gens = []
    for s in group.gens:
        images = [key_index[key_of(r * s)] for r in reps]
        image_gens.append(Perm(images))
    image = PermGroup(index, image_gens)
    if image.order() != index:
        raise PreconditionError("quotient image order mismatch")
    return Quotient(group, image, reps, key_of, key_index, normal)
