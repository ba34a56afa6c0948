"""Integer partitions: enumeration, dominance, hooks, generalized Pochhammer.

Partitions are stored without trailing zeros, so ``Partition((2, 1, 0)) ==
Partition((2, 1))``.  Arithmetic helpers here are written with plain ``+ - * /``
so that they accept floats, complex numbers, :class:`fractions.Fraction`,
mpmath numbers and numpy arrays alike.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Optional

from .errors import DomainError


class Partition(tuple):
    """A non-increasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 0 for p in parts):
            raise DomainError(f"negative part in {parts}", param="parts")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise DomainError(f"parts not non-increasing: {parts}", param="parts")
        return super().__new__(cls, parts)

    def __repr__(self):
        return f"Partition({tuple(self)!r})"

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def part(self, i: int) -> int:
        """1-based part lookup, zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def cells(self) -> Iterator[tuple]:
        """Cells (i, j) of the diagram, 1-based, row by row."""
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def arm(self, i: int, j: int) -> int:
        return self[i - 1] - j

    def leg(self, i: int, j: int) -> int:
        return conjugate(self).part(j) - i


@lru_cache(maxsize=1 << 16)
def conjugate(kappa: tuple) -> Partition:
    if not kappa:
        return Partition()
    return Partition(sum(1 for p in kappa if p >= j) for j in range(1, kappa[0] + 1))


def enumerate_partitions(weight: int, max_length: int, max_part: Optional[int] = None) -> list:
    """All partitions of ``weight`` with at most ``max_length`` rows and parts
    at most ``max_part``, in reverse-lexicographic order."""
    if weight < 0 or max_length < 0:
        raise DomainError("weight and max_length must be non-negative", param="weight")
    if max_part is None:
        max_part = weight
    return [Partition(p) for p in _enum(weight, max_length, max_part)]


@lru_cache(maxsize=4096)
def _enum(weight: int, max_length: int, max_part: int) -> tuple:
    if weight == 0:
        return ((),)
    if max_length == 0 or max_part == 0:
        return ()
    out = []
    for first in range(min(weight, max_part), 0, -1):
        if first * max_length < weight:
            break
        for rest in _enum(weight - first, max_length - 1, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_up_to(max_weight: int, max_length: int, max_part: Optional[int] = None) -> list:
    """Partitions grouped by increasing weight, reverse-lex inside each weight."""
    out = []
    for w in range(max_weight + 1):
        out.extend(enumerate_partitions(w, max_length, max_part))
    return out


def dominance_leq(kappa, sigma) -> bool:
    """True iff ``kappa`` is dominated by ``sigma`` (same weight required)."""
    kappa, sigma = Partition(kappa), Partition(sigma)
    if kappa.weight != sigma.weight:
        raise DomainError(
            f"dominance needs equal weights, got {kappa.weight} and {sigma.weight}",
            param="sigma",
        )
    sk = ss = 0
    for i in range(max(len(kappa), len(sigma))):
        sk += kappa.part(i + 1)
        ss += sigma.part(i + 1)
        if sk > ss:
            return False
    return True


def hook_product(kappa, alpha):
    """prod over cells of (1 + arm + leg/alpha)."""
    kappa = Partition(kappa)
    conj = conjugate(kappa)
    out = 1
    for i, j in kappa.cells():
        out = out * (1 + (kappa[i - 1] - j) + (conj[j - 1] - i) / alpha)
    return out


def rising(x, k: int):
    """Rising factorial (x)_k = x (x+1) ... (x+k-1)."""
    out = 1
    for r in range(k):
        out = out * (x + r)
    return out


def gen_pochhammer(x, kappa, alpha):
    """[x]_kappa = prod_i (x - (i-1)/alpha)_{kappa_i}."""
    out = 1
    for i, k in enumerate(Partition(kappa)):
        out = out * rising(x - i / alpha, k)
    return out


def jack_at_ones(kappa, n: int, alpha):
    """P_kappa(1, ..., 1) with n ones (zero when the length exceeds n)."""
    kappa = Partition(kappa)
    if kappa.length > n:
        return 0 * alpha
    conj = conjugate(kappa)
    out = 1
    for i, j in kappa.cells():
        arm = kappa[i - 1] - j
        leg = conj[j - 1] - i
        out = out * (n + alpha * (j - 1) - (i - 1)) / (1 + alpha * arm + leg)
    return out

