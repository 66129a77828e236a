from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtverify.errors import InputError
from gtverify.perms import Perm, format_cycles, parse_cycles


def test_identity():
    e = Perm.identity(5)
    assert e.is_identity()
    assert e.order() == 1
    assert str(e) == "()"


def test_parse_and_format_roundtrip():
    p = parse_cycles("(1,2,3)(4,5)", degree=6)
    assert p.degree == 6
    assert p.order() == 6
    assert format_cycles(p) == "(1,2,3)(4,5)"
    assert parse_cycles("(1 2 3)(4 5)", degree=6) == p


def test_parse_rejects_garbage():
    with pytest.raises(InputError):
        parse_cycles("(1,1,2)")
    with pytest.raises(InputError):
        parse_cycles("(1,2,")
    with pytest.raises(InputError):
        parse_cycles("(0,1)")
    with pytest.raises(InputError):
        parse_cycles("(1,9)", degree=4)


def test_composition_is_left_to_right():
    p = parse_cycles("(1,2)", degree=3)
    q = parse_cycles("(2,3)", degree=3)
    # apply p first: 1 -> 2 -> 3
    assert (p * q)[0] == 2


def test_conjugation_relabels_cycles():
    p = parse_cycles("(1,2,3)", degree=4)
    g = parse_cycles("(3,4)", degree=4)
    assert p.conj(g) == parse_cycles("(1,2,4)", degree=4)


@st.composite
def perms(draw, degree=st.integers(min_value=1, max_value=12)):
    n = draw(degree)
    images = draw(st.permutations(list(range(n))))
    return Perm(images)


@given(perms(), perms(), perms())
@settings(max_examples=60)
def test_associativity(a, b, c):
    n = max(a.degree, b.degree, c.degree)

    def pad(p):
        return Perm(list(p.img) + list(range(p.degree, n)))

    a, b, c = pad(a), pad(b), pad(c)
    assert ((a * b) * c) == (a * (b * c))


@given(perms())
@settings(max_examples=60)
def test_inverse_cancels(p):
    assert (p * p.inv()).is_identity()
    assert (p.inv() * p).is_identity()


@given(perms())
@settings(max_examples=60)
def test_format_parse_roundtrip(p):
    assert parse_cycles(format_cycles(p), degree=p.degree) == p


@given(perms())
@settings(max_examples=60)
def test_order_annihilates(p):
    assert (p ** p.order()).is_identity()
    for k in range(1, p.order()):
        assert not (p ** k).is_identity()
