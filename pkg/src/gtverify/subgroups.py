"""Subgroup handles and subgroup-level machinery.

A Subgroup ties generators to a fixed ambient group.  Identity of subgroups
is decided by an exact fingerprint: the frozen set of packed elements when
the subgroup has at most 2**14 elements, and a coarse-hash wrapper whose
equality falls back to exact membership tests above that size.  Results of
the expensive operations (closures, cores, normalizers) are cached on the
ambient group keyed by that fingerprint.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .arith import p_part, prime_factors, prime_power
from .config import Budget, budget_or_default
from .errors import BudgetExceeded, InputError, PreconditionError
from .groups import PermGroup, Quotient, coset_action
from .perms import Perm
from . import rows as rk

SMALL_FINGERPRINT_LIMIT = 2**14


class _CoarseKey:
    """Fingerprint for subgroups too large to enumerate: hash by invariants,
    compare exactly through generator membership."""

    __slots__ = ("order", "orbit_sizes", "group")

    def __init__(self, group: PermGroup):
        self.group = group
        self.order = group.order()
        self.orbit_sizes = tuple(sorted(len(o) for o in group.orbits()))

    def __hash__(self):
        return hash(("coarse", self.order, self.orbit_sizes))

    def __eq__(self, other):
        if not isinstance(other, _CoarseKey):
            return NotImplemented
        if self.order != other.order or self.orbit_sizes != other.orbit_sizes:
            return False
        return all(other.group.contains(g) for g in self.group.gens)


class Subgroup:
    """A subgroup of a fixed ambient group, with cached structure."""

    __slots__ = ("parent", "group", "_key")

    def __init__(self, parent: PermGroup, group: PermGroup):
        self.parent = parent
        self.group = group
        self._key = None

    @property
    def gens(self) -> tuple[Perm, ...]:
        return self.group.gens

    @property
    def order(self) -> int:
        return self.group.order()

    def contains(self, x: Perm) -> bool:
        return self.group.contains(x)

    def key(self):
        if self._key is None:
            if self.order <= SMALL_FINGERPRINT_LIMIT:
                self._key = self.group.element_keys()
            else:
                self._key = _CoarseKey(self.group)
        return self._key

    def elem_keys(self) -> frozenset:
        if self.order > SMALL_FINGERPRINT_LIMIT:
            raise BudgetExceeded("subgroup element fingerprint", self.order,
                                 SMALL_FINGERPRINT_LIMIT)
        return self.group.element_keys()

    def rows(self) -> np.ndarray:
        return self.group.element_rows()

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self.order <= other.order and all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Subgroup(order={self.order}, ngens={len(self.gens)})"


def subgroup(parent: PermGroup, gens: Iterable[Perm], *, check: bool = False) -> Subgroup:
    gens = list(gens)
    if check:
        for g in gens:
            if not parent.contains(g):
                raise InputError("generator lies outside the ambient group")
    return Subgroup(parent, PermGroup(parent.degree, gens))


def trivial_subgroup(parent: PermGroup) -> Subgroup:
    return Subgroup(parent, PermGroup(parent.degree, []))


def whole_group(parent: PermGroup) -> Subgroup:
    return Subgroup(parent, parent)


def group_from_elements(parent: PermGroup, elems: Iterable[Perm]) -> Subgroup:
    """Subgroup generated by elems, with an incrementally reduced generator set."""
    sel: list[Perm] = []
    grp = PermGroup(parent.degree, [])
    for x in elems:
        if not grp.contains(x):
            sel.append(x)
            grp = PermGroup(parent.degree, sel)
    return Subgroup(parent, grp)


def conjugate_subgroup(h: Subgroup, g: Perm) -> Subgroup:
    return subgroup(h.parent, [x.conj(g) for x in h.gens])


def _cached(parent: PermGroup, tag: str, key, compute):
    cache_key = (tag, key)
    val = parent._cache.get(cache_key)
    if val is None:
        val = compute()
        parent._cache[cache_key] = val
    return val


# -- normality, closure, core -------------------------------------------


def is_normal(g: PermGroup, h: Subgroup) -> bool:
    return all(h.contains(x.conj(s)) for x in h.gens for s in g.gens)


def normal_closure(g: PermGroup, h: Subgroup) -> Subgroup:
    """Smallest normal subgroup of g containing h."""

    def compute():
        gens = [x for x in h.gens]
        grp = PermGroup(g.degree, gens)
        queue = list(gens)
        while queue:
            x = queue.pop(0)
            for s in g.gens:
                c = x.conj(s)
                if not grp.contains(c):
                    gens.append(c)
                    grp = PermGroup(g.degree, gens)
                    queue.append(c)
        return Subgroup(g, grp)

    return _cached(g, "nclosure", h.key(), compute)


def normal_core(g: PermGroup, h: Subgroup, budget: Budget | None = None) -> Subgroup:
    """Largest normal subgroup of g contained in h."""

    def compute():
        current = h
        while True:
            if current.order == 1:
                return current
            changed = False
            for s in g.gens:
                conj = conjugate_subgroup(current, s)
                if conj.key() != current.key():
                    current = meet(g, current, conj, budget)
                    changed = True
                    if current.order == 1:
                        return current
            if not changed:
                return current

    return _cached(g, "ncore", h.key(), compute)


# -- lattice operations --------------------------------------------------


def meet(g: PermGroup, a: Subgroup, b: Subgroup, budget: Budget | None = None) -> Subgroup:
    """Intersection, by filtering the smaller subgroup's elements."""
    small, large = (a, b) if a.order <= b.order else (b, a)
    bud = budget_or_default(budget)
    if small.order > bud.elements:
        raise BudgetExceeded("meet element filter", small.order, bud.elements)
    if large.order <= SMALL_FINGERPRINT_LIMIT:
        lk = large.elem_keys()
        kept = [x for x, k in zip(small.group.element_list(bud),
                                  rk.pack_rows(small.rows()))
                if k in lk]
    else:
        kept = [x for x in small.group.element_list(bud) if large.contains(x)]
    return group_from_elements(g, kept)


def join(g: PermGroup, a: Subgroup, b: Subgroup) -> Subgroup:
    return subgroup(g, list(a.gens) + list(b.gens))


# -- normalizer ----------------------------------------------------------


def normalizer(g: PermGroup, h: Subgroup, budget: Budget | None = None) -> Subgroup:
    """N_G(H) via the conjugation orbit of H with Schreier generators.

    The orbit of H under G-conjugation is traversed breadth-first; Schreier
    generators of the stabilizer of the starting point are exactly a
    generating set of the normalizer.
    """

    def compute():
        bud = budget_or_default(budget)
        start_key = h.key()
        transversal = {start_key: g.identity}
        order_list = [start_key]
        node_gens = {start_key: h}
        schreier: list[Perm] = []
        qi = 0
        while qi < len(order_list):
            key = order_list[qi]
            qi += 1
            node = node_gens[key]
            u = transversal[key]
            for s in g.gens:
                conj = conjugate_subgroup(node, s)
                ck = conj.key()
                if ck not in transversal:
                    if len(transversal) > bud.conjugate_orbit:
                        raise BudgetExceeded("normalizer conjugation orbit",
                                             len(transversal), bud.conjugate_orbit)
                    transversal[ck] = u * s
                    node_gens[ck] = conj
                    order_list.append(ck)
                else:
                    cand = u * s * transversal[ck].inv()
                    if not cand.is_identity():
                        schreier.append(cand)
        result = group_from_elements(g, list(h.gens) + schreier)
        assert result.order * len(transversal) == g.order()
        return result

    return _cached(g, "normalizer", h.key(), compute)


def normalizer_bruteforce(g: PermGroup, h: Subgroup, budget: Budget | None = None) -> Subgroup:
    """Oracle implementation: scan every element of g."""
    bud = budget_or_default(budget)
    elems = g.element_list(bud)
    small = h.order <= SMALL_FINGERPRINT_LIMIT
    hk = h.elem_keys() if small else None
    kept = []
    for x in elems:
        if small:
            ok = all(rk.pack_perm(y.conj(x)) in hk for y in h.gens)
        else:
            ok = all(h.contains(y.conj(x)) for y in h.gens)
        if ok:
            kept.append(x)
    return group_from_elements(g, kept)


def centralizer_of_section(g: PermGroup, upper: Subgroup, lower: Subgroup,
                           budget: Budget | None = None) -> Subgroup:
    """C_G(L/K): elements g with [l, g] in K for all l in a generating set of L."""

    def compute():
        bud = budget_or_default(budget)
        kept = [x for x in g.element_list(bud)
                if all(lower.contains(l.comm(x)) for l in upper.gens)]
        return group_from_elements(g, kept)

    return _cached(g, "centralizer", (upper.key(), lower.key()), compute)


# -- Sylow subgroups -----------------------------------------------------


def _p_element_power(x: Perm, p: int) -> Perm | None:
    """A power of x of maximal p-power order, or None if p does not divide o(x)."""
    o = x.order()
    pk = p_part(o, p)
    if pk == 1:
        return None
    return x ** (o // pk)


def sylow_subgroup(g: PermGroup, p: int, budget: Budget | None = None) -> Subgroup:
    """A Sylow p-subgroup, grown through normalizers in deterministic scan order."""

    def compute():
        bud = budget_or_default(budget)
        target = p_part(g.order(), p)
        if target == 1:
            return trivial_subgroup(g)
        seed = None
        for x in g.element_list(bud):
            seed = _p_element_power(x, p)
            if seed is not None:
                break
        current = subgroup(g, [seed])
        while current.order < target:
            norm = normalizer(g, current, budget)
            grown = False
            for z in norm.group.element_list(bud):
                w = _p_element_power(z, p)
                if w is not None and not current.contains(w):
                    current = subgroup(g, list(current.gens) + [w])
                    grown = True
                    break
            if not grown:
                raise AssertionError("Sylow growth stalled; normalizer bug?")
        return current

    return _cached(g, "sylow", p, compute)


# -- subgroup enumeration in p-groups -------------------------------------


def _extension_rows(h_rows: np.ndarray, x: Perm, p: int) -> np.ndarray:
    """Element rows of H<x> for x normalizing H with x^p in H."""
    blocks = [h_rows]
    x_row = np.asarray(x.img, dtype=h_rows.dtype)
    cur = h_rows
    for _ in range(p - 1):
        cur = x_row[cur]
        blocks.append(cur)
    return np.vstack(blocks)


def subgroups_of_order(p_grp: Subgroup, d: int, budget: Budget | None = None) -> list[Subgroup]:
    """All subgroups of the p-group p_grp of order d, by cyclic extension.

    Every subgroup of order p^(j+1) in a p-group normalizes some subgroup of
    order p^j inside it, so walking normalizing cyclic extensions level by
    level and deduplicating by element fingerprint enumerates everything.
    """
    pp = prime_power(p_grp.order) if p_grp.order > 1 else None
    if p_grp.order > 1 and pp is None:
        raise PreconditionError("subgroups_of_order requires a p-group")
    if d == 1:
        return [trivial_subgroup(p_grp.group)]
    dd = prime_power(d)
    if dd is None or (pp is not None and dd[0] != pp[0]) or p_grp.order % d != 0:
        raise PreconditionError(f"order {d} is not a p-power dividing |P|")
    p, k = dd

    def compute():
        bud = budget_or_default(budget)
        ambient = p_grp.group
        level: dict[frozenset, Subgroup] = {
            trivial_subgroup(ambient).key(): trivial_subgroup(ambient)
        }
        for _ in range(k):
            nxt: dict[frozenset, Subgroup] = {}
            for hk in sorted(level, key=sorted):
                h = level[hk]
                h_rows = h.rows()
                used = set(hk)
                norm = normalizer(ambient, h, budget)
                for x in norm.group.element_list(bud):
                    xk = rk.pack_perm(x)
                    if xk in used:
                        continue
                    if not h.contains(x ** p):
                        continue
                    ext_rows = _extension_rows(h_rows, x, p)
                    ext_key = frozenset(rk.pack_rows(ext_rows))
                    used |= ext_key
                    if ext_key in nxt:
                        continue
                    if len(nxt) >= bud.p_subgroups:
                        raise BudgetExceeded("p-subgroup enumeration",
                                             len(nxt) + 1, bud.p_subgroups)
                    ext = subgroup(ambient, list(h.gens) + [x])
                    assert ext.order == h.order * p
                    nxt[ext_key] = ext
            level = nxt
        out = [level[key] for key in sorted(level, key=sorted)]
        return [subgroup(p_grp.parent, s.gens) for s in out]

    return _cached(p_grp.parent, "p_subgroups", (p_grp.key(), d), compute)


def cyclic_subgroups_of_order(p_grp: Subgroup, m: int, budget: Budget | None = None) -> list[Subgroup]:
    """All cyclic subgroups <x> with o(x) = m, deduplicated."""
    bud = budget_or_default(budget)
    seen: dict[frozenset, Subgroup] = {}
    for x in p_grp.group.element_list(bud):
        if x.order() != m:
            continue
        sg = subgroup(p_grp.parent, [x])
        key = sg.elem_keys()
        if key not in seen:
            seen[key] = sg
    return [seen[k] for k in sorted(seen, key=sorted)]


# -- full subgroup closure, maximal subgroups, Frattini --------------------


def all_subgroups(g: PermGroup, budget: Budget | None = None) -> list[Subgroup]:
    """Every subgroup, as the join-closure of the cyclic subgroups."""

    def compute():
        bud = budget_or_default(budget)
        subs: dict = {}
        triv = trivial_subgroup(g)
        subs[triv.key()] = triv
        atoms = []
        for x in g.element_list(bud):
            if x.is_identity():
                continue
            s = subgroup(g, [x])
            k = s.key()
            if k not in subs:
                subs[k] = s
                atoms.append(s)
        worklist = list(subs.values())
        join_ops = 0
        join_budget = 3 * bud.subgroup_closure
        while worklist:
            a = worklist.pop(0)
            for b in list(subs.values()):
                join_ops += 1
                if join_ops > join_budget:
                    raise BudgetExceeded("subgroup closure joins", join_ops, join_budget)
                j = join(g, a, b)
                k = j.key()
                if k not in subs:
                    if len(subs) >= bud.subgroup_closure:
                        raise BudgetExceeded("subgroup closure", len(subs),
                                             bud.subgroup_closure)
                    subs[k] = j
                    worklist.append(j)
        return sorted(subs.values(), key=lambda s: (s.order, sorted(s.elem_keys())))

    return _cached(g, "all_subgroups", None, compute)


def maximal_subgroups(g: PermGroup, budget: Budget | None = None) -> list[Subgroup]:
    """Maximal proper subgroups, read off the full subgroup closure."""

    def compute():
        subs = [s for s in all_subgroups(g, budget) if s.order < g.order()]
        out = []
        for s in subs:
            if not any(s.order < t.order and s.is_subgroup_of(t) for t in subs):
                out.append(s)
        return out

    return _cached(g, "maximal_subgroups", None, compute)


def derived_subgroup(g: PermGroup) -> Subgroup:
    comms = [a.comm(b) for i, a in enumerate(g.gens) for b in g.gens[i + 1:]]
    return normal_closure(g, subgroup(g, comms))


def derived_series_orders(g: PermGroup) -> list[int]:
    """Orders along the derived series until it stabilizes."""
    out = [g.order()]
    current = g
    while True:
        der = derived_subgroup(current)
        if der.order == out[-1]:
            break
        out.append(der.order)
        if der.order == 1:
            break
        current = der.group
    return out


def is_soluble(g: PermGroup) -> bool:
    return derived_series_orders(g)[-1] == 1


def minimal_normal_subgroups(g: PermGroup, budget: Budget | None = None) -> list[Subgroup]:
    """Minimal normal subgroups: minimal members among normal closures of
    prime-order cyclic subgroups (every minimal normal subgroup arises so)."""

    def compute():
        closures: dict = {}
        for cls in g.conjugacy_classes(budget):
            x = cls[0]
            if not prime_power(x.order()) or x.is_identity():
                continue
            o = x.order()
            p = prime_factors(o).popitem()[0]
            y = x ** (o // p)
            c = normal_closure(g, subgroup(g, [y]))
            closures[c.key()] = c
        items = sorted(closures.values(), key=lambda s: s.order)
        out = []
        for s in items:
            if not any(t.order < s.order and t.is_subgroup_of(s) for t in out):
                out.append(s)
        return out

    return _cached(g, "minimal_normals", None, compute)


def frattini_p_group(g: PermGroup) -> Subgroup:
    """Phi(P) for a p-group: normal closure of commutators and p-th powers."""
    pp = prime_power(g.order())
    if g.order() == 1:
        return trivial_subgroup(g)
    if pp is None:
        raise PreconditionError("frattini_p_group needs a p-group")
    p = pp[0]
    seeds = [a.comm(b) for i, a in enumerate(g.gens) for b in g.gens[i + 1:]]
    seeds += [x ** p for x in g.gens]
    return normal_closure(g, subgroup(g, seeds))


def _has_complement_in_sylow(g: PermGroup, w: Subgroup, budget: Budget | None) -> bool:
    """Gaschuetz: an abelian normal p-subgroup is complemented in G iff it is
    complemented in a Sylow p-subgroup."""
    p = prime_power(w.order)[0]
    syl = sylow_subgroup(g, p, budget)
    quot = syl.order // w.order
    if quot == 1:
        return True  # the trivial subgroup complements W inside P
    wk = w.elem_keys()
    for cand in subgroups_of_order(syl, quot, budget):
        if len(cand.elem_keys() & wk) == 1:
            return True
    return False


def _index_coprime(g: PermGroup, w: Subgroup, p: int) -> bool:
    return (g.order() // w.order) % p != 0


def frattini(g: PermGroup, budget: Budget | None = None) -> Subgroup:
    """Frattini subgroup.

    p-groups use the closed form; soluble groups recurse through an
    uncomplemented minimal normal subgroup (complement existence tested in a
    Sylow subgroup); anything else falls back to intersecting the maximal
    subgroups of the full subgroup closure, within budget.
    """

    def compute():
        if g.order() == 1:
            return trivial_subgroup(g)
        if prime_power(g.order()):
            return frattini_p_group(g)
        if is_soluble(g):
            for w in minimal_normal_subgroups(g, budget):
                if not w.group.is_abelian():
                    raise AssertionError("nonabelian minimal normal in soluble group")
                if _index_coprime(g, w, prime_power(w.order)[0]):
                    continue  # Schur-Zassenhaus complement exists
                if not _has_complement_in_sylow(g, w, budget):
                    quot = coset_action(g, w.group, budget)
                    phi_bar = frattini(quot.group, budget)
                    return subgroup(g, quot.pull_gens(phi_bar.gens))
            return trivial_subgroup(g)
        current = whole_group(g)
        for m in maximal_subgroups(g, budget):
            current = meet(g, current, m, budget)
            if current.order == 1:
                break
        return current

    return _cached(g, "frattini", None, compute)


# -- quaternion-free test and omega ---------------------------------------


def _looks_like_q8(grp: PermGroup) -> bool:
    return (grp.order() == 8 and not grp.is_abelian()
            and grp.element_order_histogram().get(2, 0) == 1)


def is_quaternion_free(p_grp: Subgroup, budget: Budget | None = None) -> bool:
    """True iff no section S/N of the 2-group is a quaternion group of order 8.

    Q8 recognition uses the classification fact: order 8, nonabelian, unique
    involution.
    """
    pp = prime_power(p_grp.order) if p_grp.order > 1 else None
    if p_grp.order > 1 and (pp is None or pp[0] != 2):
        raise PreconditionError("quaternion-free test is for 2-groups")

    def compute():
        if p_grp.order % 8 != 0 or p_grp.group.is_abelian():
            return True
        order = 8
        while order <= p_grp.order:
            for s in subgroups_of_order(p_grp, order, budget):
                if s.group.is_abelian():
                    continue
                if order == 8:
                    if _looks_like_q8(s.group):
                        return False
                    continue
                for n in subgroups_of_order(Subgroup(s.group, s.group), order // 8, budget):
                    inner = Subgroup(s.group, n.group)
                    if not is_normal(s.group, inner):
                        continue
                    quot = coset_action(s.group, n.group, budget)
                    if _looks_like_q8(quot.group):
                        return False
            order *= 2
        return True

    return _cached(p_grp.parent, "quaternion_free", p_grp.key(), compute)


def omega(p_grp: Subgroup, budget: Budget | None = None) -> Subgroup:
    """Omega(P): generated by elements of order dividing p, or dividing 4 for
    2-groups that are not quaternion-free."""
    if p_grp.order == 1:
        return p_grp
    p = prime_power(p_grp.order)[0]
    bound = p
    if p == 2 and not is_quaternion_free(p_grp, budget):
        bound = 4
    bud = budget_or_default(budget)
    elems = [x for x in p_grp.group.element_list(bud) if bound % x.order() == 0]
    return group_from_elements(p_grp.parent, elems)


# -- isomorphism testing ---------------------------------------------------


def _element_invariants(g: PermGroup, budget: Budget | None):
    """Map element -> (order, conjugacy class size)."""
    inv = {}
    for cls in g.conjugacy_classes(budget):
        size = len(cls)
        for x in cls:
            inv[x.img] = (x.order(), size)
    return inv


def _generating_sequence(g: PermGroup, budget: Budget | None) -> list[Perm]:
    """Small generating sequence, highest element orders first."""
    elems = sorted(g.element_list(budget_or_default(budget)),
                   key=lambda x: (-x.order(), x.img))
    gens: list[Perm] = []
    grp = PermGroup(g.degree, [])
    for x in elems:
        if not grp.contains(x):
            gens.append(x)
            grp = PermGroup(g.degree, gens)
            if grp.order() == g.order():
                break
    return gens


def _extends_to_isomorphism(a: PermGroup, gens: list[Perm], images: list[Perm],
                            b: PermGroup) -> bool:
    """Check gen -> image extends to an isomorphism by closing the word map."""
    mapping: dict[tuple, Perm] = {a.identity.img: b.identity}
    frontier = [a.identity]
    gen_pairs = list(zip(gens, images))
    while frontier:
        x = frontier.pop()
        fx = mapping[x.img]
        for g, img in gen_pairs:
            y = x * g
            fy = fx * img
            known = mapping.get(y.img)
            if known is None:
                mapping[y.img] = fy
                frontier.append(y)
            elif known != fy:
                return False
    if len(mapping) != a.order():
        return False
    return len({v.img for v in mapping.values()}) == a.order()


def isomorphic_to(a: PermGroup, b: PermGroup, budget: Budget | None = None) -> bool:
    """Exact isomorphism test: invariant screen, then generator-image backtracking.

    Complete (no false negatives) for orders within the budget cap.
    """
    bud = budget_or_default(budget)
    if a.order() != b.order():
        return False
    if a.order() > bud.iso_order:
        raise BudgetExceeded("isomorphism test order", a.order(), bud.iso_order)
    if a.degree == b.degree and a.element_keys() == b.element_keys():
        return True
    if a.is_abelian() != b.is_abelian():
        return False
    if a.element_order_histogram() != b.element_order_histogram():
        return False
    sizes_a = sorted(len(c) for c in a.conjugacy_classes(bud))
    sizes_b = sorted(len(c) for c in b.conjugacy_classes(bud))
    if sizes_a != sizes_b:
        return False
    if derived_series_orders(a) != derived_series_orders(b):
        return False

    gens = _generating_sequence(a, budget)
    inv_a = _element_invariants(a, budget)
    inv_b = _element_invariants(b, budget)
    pool: dict[tuple, list[Perm]] = {}
    for x in b.element_list(bud):
        pool.setdefault(inv_b[x.img], []).append(x)

    prefix_orders = []
    grp = PermGroup(a.degree, [])
    for g in gens:
        grp = PermGroup(a.degree, list(grp.gens) + [g])
        prefix_orders.append(grp.order())

    def backtrack(i: int, chosen: list[Perm]) -> bool:
        if i == len(gens):
            return _extends_to_isomorphism(a, gens, chosen, b)
        for cand in pool.get(inv_a[gens[i].img], []):
            trial = PermGroup(b.degree, chosen + [cand])
            if trial.order() != prefix_orders[i]:
                continue
            if backtrack(i + 1, chosen + [cand]):
                return True
        return False

    return backtrack(0, [])
