"""Small integer helpers: factorization, p-parts, pi-numbers."""

from __future__ import annotations


def prime_factors(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale n)."""
    if n < 1:
        raise ValueError("n must be positive")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def primes_of(n: int) -> frozenset[int]:
    return frozenset(prime_factors(n))


def is_prime(n: int) -> bool:
    return n > 1 and prime_factors(n) == {n: 1}


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def p_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        v += 1
        n //= p
    return v


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) when n = p^k with k >= 1, else None."""
    if n < 2:
        return None
    fac = prime_factors(n)
    if len(fac) != 1:
        return None
    [(p, k)] = fac.items()
    return p, k


def is_pi_number(n: int, pi) -> bool:
    """True iff every prime divisor of n lies in pi (so 1 always passes)."""
    if n < 1:
        raise ValueError("pi-number test needs a positive integer")
    return primes_of(n) <= frozenset(pi)
