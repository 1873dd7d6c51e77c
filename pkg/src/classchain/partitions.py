"""Partitions, signed partitions and the multiplicity constraints of the
symplectic and orthogonal conjugacy-class data at eigenvalue 1."""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Mapping

SYMPLECTIC = "symplectic"
ORTHOGONAL = "orthogonal"
FLAVORS = (SYMPLECTIC, ORTHOGONAL)

_FLAVOR_ALIASES = {
    "sp": SYMPLECTIC,
    "symplectic": SYMPLECTIC,
    "o": ORTHOGONAL,
    "orthogonal": ORTHOGONAL,
}


def normalize_flavor(flavor: str) -> str:
    try:
        return _FLAVOR_ALIASES[flavor.lower()]
    except (KeyError, AttributeError):
        raise ValueError(f"unknown flavor {flavor!r}") from None


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive integers.

    The empty partition is a legitimate value.
    """

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 1:
            raise ValueError(f"parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_columns(cls, columns) -> "Partition":
        """Build a partition from its column lengths (the conjugate)."""
        return conjugate(cls(tuple(c for c in columns if c)))

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __bool__(self):
        return bool(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    @property
    def size(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def multiplicities(self) -> dict[int, int]:
        return multiplicities(self)

    def column(self, i: int) -> int:
        """Length of column ``i`` (1-based); 0 past the last column."""
        return sum(1 for p in self.parts if p >= i)

    def to_json(self) -> dict:
        return {"parts": list(self.parts)}

    @classmethod
    def from_json(cls, data) -> "Partition":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(data["parts"]))


def conjugate(lam: Partition) -> Partition:
    if not lam.parts:
        return Partition()
    return Partition(tuple(sum(1 for p in lam.parts if p >= i) for i in range(1, lam.parts[0] + 1)))


def multiplicities(lam: Partition) -> dict[int, int]:
    return dict(sorted(Counter(lam.parts).items(), reverse=True))


def n_stat(lam: Partition) -> int:
    return sum(i * p for i, p in enumerate(lam.parts))


def lemma_combinatorics_sides(lam: Partition) -> tuple[int, int]:
    """Both sides of the identity relating multiplicities to column lengths.

    Left: sum_{h<i} 2 h m_h m_i + sum_i (i-1) m_i^2.
    Right: sum_i (lambda'_i)^2 - sum_i m_i^2.
    """
    m = multiplicities(lam)
    sizes = sorted(m)
    left = 0
    for a, h in enumerate(sizes):
        for i in sizes[a + 1:]:
            left += 2 * h * m[h] * m[i]
    left += sum((i - 1) * mi * mi for i, mi in m.items())
    right = sum(c * c for c in conjugate(lam).parts) - sum(mi * mi for mi in m.values())
    return left, right


def signed_parity(flavor: str) -> int:
    """Parity of the part sizes that carry a sign (0 even, 1 odd)."""
    return 0 if normalize_flavor(flavor) == SYMPLECTIC else 1


def admissible(lam: Partition, flavor: str) -> bool:
    # Sp: odd sizes need even multiplicity.  O: even sizes need even multiplicity.
    constrained = 1 - signed_parity(flavor)
    return all(mi % 2 == 0 for i, mi in multiplicities(lam).items() if i % 2 == constrained)


@dataclass(frozen=True)
class SignedPartition:
    shape: Partition
    flavor: str
    signs: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        flavor = normalize_flavor(self.flavor)
        object.__setattr__(self, "flavor", flavor)
        if not admissible(self.shape, flavor):
            raise ValueError(f"{self.shape} is not {flavor}-admissible")
        signs = {int(k): _norm_sign(v) for k, v in dict(self.signs).items()}
        parity = signed_parity(flavor)
        expected = {i for i in multiplicities(self.shape) if i % 2 == parity}
        if set(signs) != expected:
            raise ValueError(
                f"signs must be keyed exactly by sizes {sorted(expected)}, got {sorted(signs)}"
            )
        object.__setattr__(self, "signs", dict(sorted(signs.items(), reverse=True)))

    def __hash__(self):
        return hash((self.shape, self.flavor, tuple(self.signs.items())))

    def to_json(self) -> dict:
        return {
            "parts": list(self.shape.parts),
            "flavor": self.flavor,
            "signs": {str(k): ("-" if v == "-" else "+") for k, v in self.signs.items()},
        }

    @classmethod
    def from_json(cls, data) -> "SignedPartition":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(Partition(tuple(data["parts"])), data["flavor"], data.get("signs", {}))


def _norm_sign(s) -> str:
    if s in ("+", 1, "+1"):
        return "+"
    if s in ("-", "−", -1, "-1"):
        return "-"
    raise ValueError(f"bad sign {s!r}")


def sign_assignments(lam: Partition, flavor: str) -> list[SignedPartition]:
    flavor = normalize_flavor(flavor)
    if not admissible(lam, flavor):
        raise ValueError(f"{lam} is not {flavor}-admissible")
    parity = signed_parity(flavor)
    sizes = sorted((i for i in multiplicities(lam) if i % 2 == parity), reverse=True)
    return [
        SignedPartition(lam, flavor, dict(zip(sizes, combo)))
        for combo in itertools.product("+-", repeat=len(sizes))
    ]


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if max_part is None:
        max_part = n

    def rec(n, m):
        if n == 0:
            yield ()
            return
        for first in range(min(n, m), 0, -1):
            for rest in rec(n - first, first):
                yield (first,) + rest

    for parts in rec(n, max_part):
        yield Partition(parts)


def partitions_up_to(bound: int) -> Iterator[Partition]:
    for n in range(bound + 1):
        yield from partitions_of(n)


def admissible_partitions(bound: int, flavor: str) -> Iterator[Partition]:
    return (lam for lam in partitions_up_to(bound) if admissible(lam, flavor))
