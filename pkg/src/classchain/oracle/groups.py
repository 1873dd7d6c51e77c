"""Explicit small classical groups over finite fields and their exact
eigenvalue-1 class statistics."""

from __future__ import annotations

import itertools
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..grouptheory import GroupSpec, group_order, order_o, order_u
from ..partitions import Partition
from .fields import FiniteField, PrimeField, prime_field, quadratic_field
from .linalg import (
    Matrix,
    batch_jordan_columns,
    conj,
    identity,
    jordan_type_at_one,
    mat_mul,
    minus_identity,
    null_space,
    rank,
    transpose,
)

DEFAULT_BUDGET = 100_000


class BudgetExceeded(RuntimeError):
    pass


class IntegrityError(RuntimeError):
    pass


def element_budget() -> int:
    raw = os.environ.get("CLASSCHAIN_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _check_budget(expected: int, budget: int | None):
    budget = element_budget() if budget is None else budget
    if expected > budget:
        raise BudgetExceeded(f"group of order {expected} exceeds the element budget {budget}")


@dataclass
class MatrixGroup:
    spec: GroupSpec
    field: FiniteField
    form: Matrix
    codes: np.ndarray  # sorted packed encodings
    label: str = ""
    _stats: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return len(self.form)

    def __len__(self) -> int:
        return int(self.codes.size)

    def encode(self, g) -> int:
        return encode(g, self.field.size)

    def decode(self, code: int) -> Matrix:
        return decode(int(code), self.dim, self.field.size)

    def __contains__(self, g) -> bool:
        c = self.encode(g)
        i = np.searchsorted(self.codes, c)
        return bool(i < self.codes.size and self.codes[i] == c)

    def elements(self):
        for c in self.codes:
            yield self.decode(c)

    def as_array(self) -> np.ndarray:
        return decode_array(self.codes, self.dim, self.field.size)


# ---------------------------------------------------------------------------
# encodings


def encode(g, base: int) -> int:
    c = 0
    for row in g:
        for x in row:
            c = c * base + int(x)
    return c


def decode(code: int, d: int, base: int) -> Matrix:
    flat = []
    for _ in range(d * d):
        code, r = divmod(code, base)
        flat.append(r)
    flat.reverse()
    return tuple(tuple(flat[i * d:(i + 1) * d]) for i in range(d))


def _weights(d: int, base: int) -> np.ndarray:
    return np.array([base ** (d * d - 1 - k) for k in range(d * d)], dtype=np.int64)


def encode_array(A: np.ndarray, base: int) -> np.ndarray:
    n, d, _ = A.shape
    if base ** (d * d) >= 2**62:
        raise BudgetExceeded("matrix encoding does not fit in 63 bits")
    return A.reshape(n, d * d).astype(np.int64) @ _weights(d, base)


def decode_array(codes: np.ndarray, d: int, base: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((codes.size, d * d), dtype=np.int64)
    rest = codes.copy()
    for k in range(d * d - 1, -1, -1):
        out[:, k] = rest % base
        rest //= base
    return out.reshape(-1, d, d)


# ---------------------------------------------------------------------------
# closure


def closure(generators: np.ndarray, p: int, chunk: int = 4096) -> np.ndarray:
    """Sorted codes of the group generated by ``generators`` (shape (G, d, d)) over F_p.

    Breadth-first: every new element is multiplied on the right by every
    generator.  The result does not depend on chunking or ordering.
    """
    gens = np.asarray(generators, dtype=np.int64) % p
    d = gens.shape[1]
    ident = np.eye(d, dtype=np.int64)[None]
    visited = encode_array(ident, p)
    frontier = ident
    while frontier.shape[0]:
        fresh = []
        for start in range(0, frontier.shape[0], chunk):
            block = frontier[start:start + chunk]
            prod = np.matmul(block[:, None], gens[None]) % p
            fresh.append(encode_array(prod.reshape(-1, d, d), p))
        codes = np.unique(np.concatenate(fresh))
        codes = codes[~np.isin(codes, visited, assume_unique=True)]
        visited = np.union1d(visited, codes)
        frontier = decode_array(codes, d, p)
    return visited


def _nonzero_vectors(d: int, p: int):
    for v in itertools.product(range(p), repeat=d):
        if any(v):
            yield np.array(v, dtype=np.int64)


def standard_alternating_form(n: int) -> np.ndarray:
    J = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(n):
        J[i, n + i] = 1
        J[n + i, i] = -1
    return J


def symplectic_transvections(n: int, p: int) -> np.ndarray:
    """All maps x -> x + c <x, v> v with <x, y> = x^T J y."""
    J = standard_alternating_form(n) % p
    d = 2 * n
    out = []
    for v in _nonzero_vectors(d, p):
        # <x, v> = x^T J v, so the matrix is I + c v (J v)^T
        w = (J @ v) % p
        for c in range(1, p):
            out.append((np.eye(d, dtype=np.int64) + c * np.outer(v, w)) % p)
    return np.unique(np.array(out), axis=0)


def reflections(gram: np.ndarray, p: int) -> np.ndarray:
    """r_v(x) = x - 2 B(x, v)/B(v, v) v for every anisotropic v."""
    d = gram.shape[0]
    out = []
    for v in _nonzero_vectors(d, p):
        Bvv = int(v @ gram @ v) % p
        if not Bvv:
            continue
        s = 2 * pow(Bvv, p - 2, p) % p
        # B(x, v) = v^T G x, so r_v = I - s v (G v)^T
        out.append((np.eye(d, dtype=np.int64) - s * np.outer(v, (gram @ v) % p)) % p)
    return np.unique(np.array(out), axis=0)


def _preserves_form(A: np.ndarray, gram: np.ndarray, p: int) -> bool:
    # g^T G g == G for every g in the stack
    lhs = np.matmul(np.matmul(np.transpose(A, (0, 2, 1)), gram[None]), A) % p
    return bool(np.all(lhs == (gram % p)[None]))


def _spot_check_closure(group: MatrixGroup, pairs: int, seed: int = 0):
    rng = random.Random(seed)
    n = len(group)
    A = group.as_array()
    idx1 = np.array([rng.randrange(n) for _ in range(pairs)])
    idx2 = np.array([rng.randrange(n) for _ in range(pairs)])
    p = group.field.p
    prod = np.matmul(A[idx1], A[idx2]) % p
    codes = encode_array(prod, p)
    if not np.all(np.isin(codes, group.codes)):
        raise IntegrityError(f"{group.label}: product of two elements left the set")


def _check_prime(p: int):
    if p == 2:
        raise ValueError("odd characteristic only")
    prime_field(p)


_CACHE: dict = {}


def build_symplectic(n: int, p: int, budget: int | None = None, verify_pairs: int = 10_000) -> MatrixGroup:
    _check_prime(p)
    spec = GroupSpec("Sp", 2 * n, p)
    expected = int(group_order(spec))
    _check_budget(expected, budget)
    key = ("Sp", n, p)
    if key in _CACHE:
        return _CACHE[key]
    J = standard_alternating_form(n) % p
    if n == 0:
        codes = np.zeros(1, dtype=np.int64)
    else:
        codes = closure(symplectic_transvections(n, p), p)
    G = MatrixGroup(spec, prime_field(p), tuple(map(tuple, J.tolist())), codes, spec.label())
    if len(G) != expected:
        raise IntegrityError(f"{spec.label()}: built {len(G)} elements, expected {expected}")
    if n:
        if not _preserves_form(G.as_array(), J, p):
            raise IntegrityError(f"{spec.label()}: an element does not preserve the form")
        _spot_check_closure(G, verify_pairs)
    _CACHE[key] = G
    return G


ORTHOGONAL_FORMS = ("identity", "delta")


def orthogonal_gram(d: int, p: int, which_form: str) -> np.ndarray:
    gram = np.eye(d, dtype=np.int64)
    if which_form == "delta":
        gram[0, 0] = prime_field(p).delta
    elif which_form != "identity":
        raise ValueError(f"which_form must be one of {ORTHOGONAL_FORMS}")
    return gram


def build_orthogonal(d: int, p: int, which_form: str = "identity", budget: int | None = None,
                     verify_pairs: int = 10_000) -> MatrixGroup:
    """Orthogonal group of the diagonal form identity or diag(delta, 1, ..., 1).

    The +/- label is read off from the order; in odd dimension both orders
    coincide and the label is left as None.
    """
    _check_prime(p)
    if d < 1:
        raise ValueError("dimension must be >= 1")
    gram = orthogonal_gram(d, p, which_form)
    if d % 2 == 0:
        orders = {s: int(order_o(d, p, s)) for s in "+-"}
        _check_budget(max(orders.values()), budget)
    else:
        _check_budget(int(order_o(d, p)), budget)
    key = ("O", d, p, which_form)
    if key in _CACHE:
        return _CACHE[key]
    codes = closure(reflections(gram, p), p)
    n = int(codes.size)
    if d % 2:
        sign = None
        if n != int(order_o(d, p)):
            raise IntegrityError(f"O({d},{p}) built with {n} elements")
    else:
        matches = [s for s, o in orders.items() if o == n]
        if not matches:
            raise IntegrityError(f"O({d},{p}) with {n} elements matches neither type")
        sign = matches[0]
    spec = GroupSpec("O", d, p, sign)
    G = MatrixGroup(spec, prime_field(p), tuple(map(tuple, gram.tolist())), codes, spec.label())
    if not _preserves_form(G.as_array(), gram, p):
        raise IntegrityError(f"{G.label}: an element does not preserve the form")
    _spot_check_closure(G, verify_pairs)
    _CACHE[key] = G
    return G


def build_orthogonal_signed(d: int, p: int, sign: str | None, budget: int | None = None) -> MatrixGroup:
    """The orthogonal group of type ``sign`` (either form in odd dimension)."""
    if d % 2:
        return build_orthogonal(d, p, "identity", budget)
    for which in ORTHOGONAL_FORMS:
        G = build_orthogonal(d, p, which, budget)
        if G.spec.sign == sign:
            return G
    raise IntegrityError(f"no diagonal form gives O{sign}({d},{p})")


def build_unitary(n: int, p: int, budget: int | None = None) -> MatrixGroup:
    """U(n, p): matrices over F_{p^2} with g^T conj(g) = I, found by filtering."""
    _check_prime(p)
    if n > 2:
        raise BudgetExceeded("unitary groups are built by filtering and need n <= 2")
    F = quadratic_field(p)
    spec = GroupSpec("U", n, p)
    expected = int(order_u(n, p))
    _check_budget(max(expected, F.size ** (n * n)), budget)
    key = ("U", n, p)
    if key in _CACHE:
        return _CACHE[key]
    I = identity(n)
    members = []
    for flat in itertools.product(range(F.size), repeat=n * n):
        g = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        if mat_mul(transpose(g), conj(g, F), F) == I:
            members.append(encode(g, F.size))
    codes = np.array(sorted(members), dtype=np.int64)
    G = MatrixGroup(spec, F, I, codes, spec.label())
    if len(G) != expected:
        raise IntegrityError(f"{spec.label()}: built {len(G)} elements, expected {expected}")
    # closure: the set is finite, so closure under products makes it a group
    elems = list(G.elements())
    rng = random.Random(0)
    for _ in range(min(10_000, len(elems) ** 2)):
        a, b = rng.choice(elems), rng.choice(elems)
        if mat_mul(a, b, F) not in G:
            raise IntegrityError(f"{G.label}: product left the set")
    _CACHE[key] = G
    return G


def build_group(family: str, dim: int, p: int, sign: str | None = None, budget: int | None = None) -> MatrixGroup:
    family = family.lower()
    if family == "sp":
        if dim % 2:
            raise ValueError("symplectic dimension must be even")
        return build_symplectic(dim // 2, p, budget)
    if family == "o":
        return build_orthogonal_signed(dim, p, sign, budget)
    if family == "u":
        return build_unitary(dim, p, budget)
    raise ValueError(f"unknown group family {family!r}")


# ---------------------------------------------------------------------------
# statistics


@dataclass
class ClassStatistics:
    order: int
    jordan: Counter
    fixed_dim: Counter
    unipotent: int

    def fraction(self, lam: Partition) -> Fraction:
        return Fraction(self.jordan.get(lam, 0), self.order)

    def fixed_fraction(self, k: int) -> Fraction:
        return Fraction(self.fixed_dim.get(k, 0), self.order)

    def to_json(self, label: str, dim: int | None = None) -> dict:
        dims = range(dim + 1) if dim is not None else sorted(self.fixed_dim)
        return {
            "group": label,
            "order": self.order,
            "unipotent": self.unipotent,
            "fixed_dim": {str(k): self.fixed_dim.get(k, 0) for k in dims},
            "jordan": {str(lam): v for lam, v in sorted(self.jordan.items(), key=lambda kv: (kv[0].size, kv[0].parts))},
        }


def jordan_types(G: MatrixGroup) -> list[Partition]:
    if isinstance(G.field, PrimeField):
        cols = batch_jordan_columns(G.as_array(), G.field.p)
        return [Partition.from_columns(c) for c in cols]
    return [jordan_type_at_one(g, G.field) for g in G.elements()]


def class_statistics(G: MatrixGroup) -> ClassStatistics:
    if "class" in G._stats:
        return G._stats["class"]
    types = jordan_types(G) if G.dim else [Partition(())]
    jordan = Counter(types)
    fixed = Counter(len(lam) for lam in types)
    unip = sum(1 for lam in types if lam.size == G.dim)
    stats = ClassStatistics(len(G), jordan, fixed, unip)
    if sum(jordan.values()) != len(G):
        raise IntegrityError("class statistics do not cover the group")
    G._stats["class"] = stats
    return stats


def isometry_type(g: Matrix, G: MatrixGroup) -> tuple[int, int]:
    """(s, t) for the fixed space W of g: t = dim(W cap W^perp), s = dim W - t."""
    F = G.field
    basis = null_space(minus_identity(g, F), F)
    w = len(basis)
    if w == 0:
        return 0, 0
    B = transpose(tuple(basis))  # d x w
    gram = mat_mul(mat_mul(transpose(B), G.form, F), conj(B, F), F)
    s = rank(gram, F)
    return s, w - s


def isometry_statistics(G: MatrixGroup) -> Counter:
    if G.spec.family != "U":
        raise ValueError("isometry statistics are computed for unitary groups")
    out = Counter()
    for g in G.elements():
        s, t = isometry_type(g, G)
        cols = jordan_type_at_one(g, G.field).conjugate().parts + (0, 0)
        if (cols[0], cols[1]) != (s + t, t):
            raise IntegrityError(f"isometry type {(s, t)} disagrees with Jordan columns {cols[:2]}")
        out[(s, t)] += 1
    return out
