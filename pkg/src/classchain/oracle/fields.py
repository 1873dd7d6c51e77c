"""Small finite fields with table-driven arithmetic.

Elements are encoded as integers 0..size-1.  For the prime field F_p the code
is the residue; for F_{p^2} = F_p(alpha) with alpha^2 = delta (a fixed
non-square) the code of a + b*alpha is a + p*b.
"""

from __future__ import annotations

import functools


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def least_nonsquare(p: int) -> int:
    squares = {x * x % p for x in range(1, p)}
    for d in range(2, p):
        if d not in squares:
            return d
    raise ValueError(f"no non-square mod {p}")


class FiniteField:
    """Common interface: ``size``, ``p``, tables ``add``, ``mul``, ``neg``,
    ``inv`` and the involution ``conj`` (x -> x^p; identity on F_p)."""

    p: int
    size: int

    def __repr__(self):
        return f"{type(self).__name__}({self.p})"

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> range:
        return range(self.size)

    def nonzero(self) -> range:
        return range(1, self.size)


class PrimeField(FiniteField):
    def __init__(self, p: int):
        if not is_prime(p) or p == 2:
            raise ValueError(f"need an odd prime, got {p}")
        self.p = self.size = p
        self.add = [[(a + b) % p for b in range(p)] for a in range(p)]
        self.mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        self.neg = [(-a) % p for a in range(p)]
        self.inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
        self.conj = list(range(p))
        self.delta = least_nonsquare(p)


class QuadraticField(FiniteField):
    def __init__(self, p: int):
        if not is_prime(p) or p == 2:
            raise ValueError(f"need an odd prime, got {p}")
        self.p = p
        self.size = p * p
        self.delta = d = least_nonsquare(p)
        n = self.size

        def split(x):
            return x % p, x // p

        def code(a, b):
            return (a % p) + p * (b % p)

        self.add = [[code(split(x)[0] + split(y)[0], split(x)[1] + split(y)[1]) for y in range(n)] for x in range(n)]
        self.mul = [[0] * n for _ in range(n)]
        for x in range(n):
            a, b = split(x)
            for y in range(n):
                c, e = split(y)
                self.mul[x][y] = code(a * c + d * b * e, a * e + b * c)
        self.neg = [code(-split(x)[0], -split(x)[1]) for x in range(n)]
        self.inv = [0] * n
        for x in range(1, n):
            for y in range(1, n):
                if self.mul[x][y] == 1:
                    self.inv[x] = y
                    break
        # Frobenius: (a + b alpha)^p = a - b alpha since alpha^{p-1} = delta^{(p-1)/2} = -1
        self.conj = [code(split(x)[0], -split(x)[1]) for x in range(n)]

    def norm(self, x: int) -> int:
        return self.mul[x][self.conj[x]]


@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


@functools.lru_cache(maxsize=None)
def quadratic_field(p: int) -> QuadraticField:
    return QuadraticField(p)
