from __future__ import annotations

import itertools
import random

import pytest

from gtverify.config import Budget
from gtverify.errors import BudgetExceeded, InputError, PreconditionError
from gtverify.groups import PermGroup, coset_action, group_from_generators
from gtverify.perms import Perm, parse_cycles


def sym(n: int) -> PermGroup:
    gens = [parse_cycles("(1,2)", degree=n)]
    if n > 2:
        gens.append(parse_cycles("(" + ",".join(str(i) for i in range(1, n + 1)) + ")", degree=n))
    return PermGroup(n, gens)


def alt4() -> PermGroup:
    return PermGroup(4, [parse_cycles("(1,2,3)", degree=4), parse_cycles("(2,3,4)", degree=4)])


def v4() -> PermGroup:
    return PermGroup(4, [parse_cycles("(1,2)(3,4)", degree=4), parse_cycles("(1,3)(2,4)", degree=4)])


def test_orders_of_small_groups():
    assert sym(4).order() == 24
    assert sym(8).order() == 40320
    assert alt4().order() == 12
    assert v4().order() == 4
    assert PermGroup(4, []).order() == 1


def test_trivial_group_from_no_generators():
    t = group_from_generators(4, [])
    assert t.order() == 1
    assert list(t.elements()) == [Perm.identity(4)]


def test_group_from_generators_rejects_non_bijection():
    with pytest.raises(InputError):
        group_from_generators(3, [Perm([0, 0, 2])])
    with pytest.raises(InputError):
        group_from_generators(3, [Perm([0, 1])])


def test_membership_alt4():
    g = alt4()
    assert g.contains(parse_cycles("(1,2,3)", degree=4))
    assert not g.contains(parse_cycles("(1,2)", degree=4))
    assert parse_cycles("(1,3)(2,4)", degree=4) in PermGroup(4, [parse_cycles("(1,2,3,4)", degree=4)])


def test_membership_degree_mismatch():
    with pytest.raises(InputError):
        sym(4).contains(Perm.identity(5))


def test_elements_enumeration_counts():
    for grp, n in [(sym(3), 6), (v4(), 4), (alt4(), 12), (sym(5), 120)]:
        elems = list(grp.elements())
        assert len(elems) == n == grp.order()
        assert len({e.img for e in elems}) == n


def test_elements_budget():
    with pytest.raises(BudgetExceeded):
        list(sym(8).elements(Budget(elements=1000)))


def test_bsgs_deterministic():
    g1 = sym(6)
    g2 = sym(6)
    assert g1.base == g2.base
    assert g1.order() == g2.order()
    assert [e.img for e in g1.elements()] == [e.img for e in g2.elements()]


def test_membership_agrees_with_bruteforce():
    rng = random.Random(42)
    for grp in [sym(4), alt4(), v4(), PermGroup(8, [parse_cycles("(1,2,3,4,5,6,7,8)", degree=8)])]:
        members = {e.img for e in grp.elements()}
        n = grp.degree
        for _ in range(100):
            if rng.random() < 0.5:
                x = grp.random_element(rng)
            else:
                images = list(range(n))
                rng.shuffle(images)
                x = Perm(images)
            assert grp.contains(x) == (x.img in members)


def test_random_element_uniform_support():
    rng = random.Random(7)
    grp = sym(4)
    seen = {grp.random_element(rng).img for _ in range(600)}
    assert len(seen) == 24


def test_conjugacy_classes_sym4():
    sizes = sorted(len(c) for c in sym(4).conjugacy_classes())
    assert sizes == [1, 3, 6, 6, 8]


def test_orbits():
    g = PermGroup(6, [parse_cycles("(1,2,3)", degree=6), parse_cycles("(4,5)", degree=6)])
    assert g.orbits() == [[0, 1, 2], [3, 4], [5]]


def test_is_abelian_and_cyclic():
    assert v4().is_abelian() and not v4().is_cyclic()
    c6 = PermGroup(6, [parse_cycles("(1,2,3,4,5,6)", degree=6)])
    assert c6.is_abelian() and c6.is_cyclic()
    assert not sym(4).is_abelian()


# -- coset actions -------------------------------------------------------


def test_coset_action_sym4_mod_v4():
    q = coset_action(sym(4), v4())
    assert q.group.degree == 6
    assert q.group.order() == 6
    assert not q.group.is_abelian()  # Sym(3)


def test_coset_action_by_whole_group():
    g = sym(4)
    q = coset_action(g, g)
    assert q.group.order() == 1


def test_coset_action_trivial_kernel_is_identity_map():
    g = sym(4)
    q = coset_action(g, PermGroup(4, []))
    assert q.group is g
    x = parse_cycles("(1,2)", degree=4)
    assert q.image_of(x) == x


def test_coset_action_rejects_non_normal():
    g = sym(4)
    d8 = PermGroup(4, [parse_cycles("(1,2,3,4)", degree=4), parse_cycles("(1,3)", degree=4)])
    with pytest.raises(PreconditionError):
        coset_action(g, d8)


def test_coset_action_pushes_and_pulls_subgroups():
    g = sym(4)
    q = coset_action(g, v4())
    a4 = PermGroup(4, [parse_cycles("(1,2,3)", degree=4), parse_cycles("(2,3,4)", degree=4)])
    image_gens = q.push_gens(a4.gens)
    img = PermGroup(q.group.degree, image_gens)
    assert img.order() == 3
    back = PermGroup(4, q.pull_gens(image_gens))
    assert back.order() == 12


def test_coset_action_order_product_invariant():
    g = sym(4)
    for normal in [v4(), alt4(), g]:
        q = coset_action(g, normal)
        assert q.group.order() * normal.order() == g.order()


def test_element_homomorphism_through_quotient():
    g = sym(4)
    q = coset_action(g, v4())
    rng = random.Random(3)
    for _ in range(25):
        x, y = g.random_element(rng), g.random_element(rng)
        assert q.image_of(x * y) == q.image_of(x) * q.image_of(y)
