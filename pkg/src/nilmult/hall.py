"""Basic (Hall) commutators and the commutator sets built from them.

Basic commutators on ``x_1..x_d`` are generated weight by weight:
``[a, b]`` is basic when ``a > b`` and, if ``a = [s, t]``, also ``b >= t``.
Within one weight, pairs are ordered lexicographically by the positions of
their left and right parts, so the enumeration is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING, Iterable

from .witt import chi

if TYPE_CHECKING:
    from .multiplier import GroupSpec

DEFAULT_BUDGET = 10**7


class EnumerationBudgetExceeded(RuntimeError):
    def __init__(self, letters: int, weight: int, needed: int, budget: int):
        super().__init__(
            f"enumerating basic commutators on {letters} letters up to weight "
            f"{weight} needs {needed} nodes, budget is {budget}"
        )
        self.letters = letters
        self.weight = weight


@dataclass(frozen=True, eq=False)
class BasicCommutator:
    """A letter ``x_i`` or a bracket ``[left, right]``.

    Equality and hashing go by tree shape only, so the same commutator taken
    from bases on different alphabets compares equal.
    """

    letter: int | None = None
    left: BasicCommutator | None = None
    right: BasicCommutator | None = None
    index: int = field(default=-1, compare=False)

    @cached_property
    def key(self):
        if self.letter is not None:
            return self.letter
        return (self.left.key, self.right.key)

    @cached_property
    def weight(self) -> int:
        if self.letter is not None:
            return 1
        return self.left.weight + self.right.weight

    @cached_property
    def letters_present(self) -> frozenset[int]:
        if self.letter is not None:
            return frozenset((self.letter,))
        return self.left.letters_present | self.right.letters_present

    @cached_property
    def content(self) -> tuple[int, ...]:
        """Multiset of letters as a sorted tuple."""
        if self.letter is not None:
            return (self.letter,)
        return tuple(sorted(self.left.content + self.right.content))

    def degree(self, letter: int) -> int:
        return self.content.count(letter)

    @property
    def is_letter(self) -> bool:
        return self.letter is not None

    def __eq__(self, other):
        if not isinstance(other, BasicCommutator):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        if self.letter is not None:
            return f"x{self.letter}"
        return f"[{self.left},{self.right}]"

    def __repr__(self):
        return f"BasicCommutator({self}, index={self.index})"

    def left_normed(self) -> str:
        """Flatten left-nested brackets: ``[[x2,x1],x1]`` -> ``[x2,x1,x1]``."""
        if self.letter is not None:
            return str(self)
        parts = []
        node = self
        while not node.is_letter:
            parts.append(node.right.left_normed())
            node = node.left
        parts.append(str(node))
        return "[" + ",".join(reversed(parts)) + "]"


@dataclass(frozen=True)
class HallBasis:
    letters: int
    min_weight: int
    max_weight: int
    items: tuple[BasicCommutator, ...]

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, pos):
        return self.items[pos]

    def of_weight(self, weight: int) -> list[BasicCommutator]:
        return [b for b in self.items if b.weight == weight]

    def containing(self, letter: int) -> list[BasicCommutator]:
        return filter_containing(self.items, letter)


@dataclass(frozen=True)
class PoweredCommutatorSet:
    """Commutators all raised to one shared exponent, ``{b**exponent}``."""

    base_commutators: tuple[BasicCommutator, ...]
    exponent: int

    def __len__(self):
        return len(self.base_commutators)

    def __iter__(self):
        return iter(self.base_commutators)


def _budget_need(d: int, max_weight: int) -> int:
    return sum(chi(w, d) for w in range(1, max_weight + 1))


@lru_cache(maxsize=64)
def _full_basis(d: int, max_weight: int) -> tuple[BasicCommutator, ...]:
    by_weight: list[list[BasicCommutator]] = [[]]
    by_weight.append([BasicCommutator(letter=i, index=i - 1) for i in range(1, d + 1)])
    ordered = list(by_weight[1])
    for w in range(2, max_weight + 1):
        layer = []
        for a in ordered:
            wb = w - a.weight
            if wb < 1 or wb > a.weight:
                continue
            floor = a.right.index if not a.is_letter else -1
            for b in by_weight[wb]:
                if b.index >= a.index:
                    break
                if b.index >= floor:
                    layer.append((a, b))
        start = len(ordered)
        nodes = [
            BasicCommutator(left=a, right=b, index=start + pos)
            for pos, (a, b) in enumerate(layer)
        ]
        by_weight.append(nodes)
        ordered.extend(nodes)
    return tuple(ordered)


def hall_basis(d: int, max_weight: int, budget: int = DEFAULT_BUDGET) -> HallBasis:
    """All basic commutators on ``d`` letters of weight ``<= max_weight``."""
    return generate(d, 1, max_weight, budget=budget)


def generate(
    d: int, min_weight: int, max_weight: int, budget: int = DEFAULT_BUDGET
) -> HallBasis:
    """Basic commutators on ``x_1..x_d`` with weight in ``[min_weight, max_weight]``.

    ``index`` on each item is its position in the full Hall order (weights
    from 1 up), not in the returned slice.

    >>> [str(b) for b in generate(2, 1, 2)]
    ['x1', 'x2', '[x2,x1]']
    """
    if d < 1:
        raise ValueError(f"need at least one letter, got d={d}")
    if not 1 <= min_weight <= max_weight:
        raise ValueError(f"need 1 <= min_weight <= max_weight, got {min_weight}, {max_weight}")
    need = _budget_need(d, max_weight)
    if need > budget:
        # name the first weight that overflows
        running = 0
        for w in range(1, max_weight + 1):
            running += chi(w, d)
            if running > budget:
                raise EnumerationBudgetExceeded(d, w, need, budget)
    items = tuple(b for b in _full_basis(d, max_weight) if b.weight >= min_weight)
    return HallBasis(d, min_weight, max_weight, items)


def filter_containing(basis_slice: Iterable[BasicCommutator], letter: int) -> list[BasicCommutator]:
    return [b for b in basis_slice if letter in b.letters_present]


def _on_letters(spec: GroupSpec, top: int, weights: range) -> list[BasicCommutator]:
    """Basic commutators on ``x_1..x_top`` involving ``x_top``, weights in range.

    Drawn from the basis on all ``k + 1`` letters so order indices are shared
    across every set built for the same spec.
    """
    if not weights:
        return []
    basis = generate(spec.k + 1, 1, weights[-1])
    return [
        b
        for b in basis
        if b.weight in weights and top in b.letters_present and max(b.letters_present) == top
    ]


def build_E(i: int, spec: GroupSpec, c: int) -> list[BasicCommutator]:
    """Weights ``c+n_i+1 .. c+n_1`` on ``x_1..x_{i+1}``, involving ``x_{i+1}``."""
    if not 2 <= i <= spec.k:
        raise IndexError(f"E_i needs 2 <= i <= {spec.k}, got {i}")
    n = spec.classes
    return _on_letters(spec, i + 1, range(c + n[i - 1] + 1, c + n[0] + 1))


def build_L(i: int, spec: GroupSpec, c: int) -> PoweredCommutatorSet:
    """Weights ``c+1 .. c+n_i`` on ``x_1..x_{i+1}`` involving ``x_{i+1}``, powered by ``m_{i+1}``."""
    if not max(spec.t, 1) <= i <= spec.k:
        raise IndexError(f"L_i needs {max(spec.t, 1)} <= i <= {spec.k}, got {i}")
    base = _on_letters(spec, i + 1, range(c + 1, c + spec.classes[i - 1] + 1))
    return PoweredCommutatorSet(tuple(base), spec.order(i + 1))


def build_D(i: int, j: int, spec: GroupSpec, c: int) -> PoweredCommutatorSet:
    """Weight exactly ``c+i`` on ``x_1..x_{t+j}`` involving ``x_{t+j}``, powered by ``m_{t+j}``."""
    if not 1 <= i <= spec.classes[0]:
        raise IndexError(f"D_(i,j) needs 1 <= i <= {spec.classes[0]}, got i={i}")
    if not 1 <= j <= spec.k + 1 - spec.t:
        raise IndexError(f"D_(i,j) needs 1 <= j <= {spec.k + 1 - spec.t}, got j={j}")
    top = spec.t + j
    base = _on_letters(spec, top, range(c + i, c + i + 1))
    return PoweredCommutatorSet(tuple(base), spec.order(top))
