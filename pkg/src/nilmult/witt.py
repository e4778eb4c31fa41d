"""Witt numbers: how many basic commutators of a given weight exist.

``chi(n, d) = (1/n) * sum_{m | n} mobius(m) * d**(n/m)``
"""

from __future__ import annotations

import threading
from collections.abc import Iterable

from .arith import divisors, mobius


class WittTable:
    """Memo of Witt numbers keyed by ``(weight, letters)``.

    ``max_weight`` / ``max_letters`` bound which entries get cached; values
    outside the bounds are still computed, just not stored.
    """

    def __init__(self, max_weight: int | None = None, max_letters: int | None = None):
        self.max_weight = max_weight
        self.max_letters = max_letters
        self._entries: dict[tuple[int, int], int] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._entries)

    def _cacheable(self, n, d):
        if self.max_weight is not None and n > self.max_weight:
            return False
        return self.max_letters is None or d <= self.max_letters

    def chi(self, n: int, d: int) -> int:
        if n < 1:
            raise ValueError(f"weight must be >= 1, got {n}")
        if d < 0:
            raise ValueError(f"letter count must be >= 0, got {d}")
        key = (n, d)
        value = self._entries.get(key)
        if value is not None:
            return value
        value = _witt(n, d)
        if self._cacheable(n, d):
            with self._lock:
                self._entries.setdefault(key, value)
        return value


def _witt(n: int, d: int) -> int:
    total = sum(mobius(m) * d ** (n // m) for m in divisors(n))
    if total % n:
        raise ArithmeticError(f"Moebius sum {total} not divisible by n={n} (d={d})")
    return total // n


_default = WittTable(max_weight=64, max_letters=4096)


def chi(n: int, d: int) -> int:
    """Number of basic commutators of weight ``n`` on ``d`` letters.

    >>> chi(6, 2), chi(4, 3), chi(1, 5)
    (9, 18, 5)
    """
    return _default.chi(n, d)


def chi_with_letter(n: int, d: int) -> int:
    """Weight-``n`` basic commutators on ``x_1..x_d`` that involve ``x_d``."""
    if d < 1:
        raise ValueError(f"letter count must be >= 1, got {d}")
    return chi(n, d) - chi(n, d - 1)


def chi_iterate(seed: int, classes: Iterable[int]) -> int:
    """Apply ``d -> chi(c + 1, d)`` for each ``c`` in ``classes``, in order.

    >>> chi_iterate(5, []), chi_iterate(5, [1]), chi_iterate(5, [1, 1])
    (5, 10, 45)
    """
    value = seed
    for c in classes:
        if c < 1:
            raise ValueError(f"classes must be >= 1, got {c}")
        value = chi(c + 1, value)
    return value
