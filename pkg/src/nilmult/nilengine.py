"""Arithmetic in the free nilpotent group of class ``n`` on ``d`` letters.

Elements are kept in Hall normal form ``b_1^e_1 b_2^e_2 ... b_N^e_N`` over the
basic commutators of weight ``<= n``. Products are computed by collection from
the left against a polycyclic presentation whose conjugation relations are
derived from the commutator definitions of the basis elements:

* ``[b_j, b_i]`` basic (``b_j`` a letter, or ``b_j = [s, t]`` with ``t <= b_i``):
  ``b_j^(b_i) = b_j [b_j, b_i]`` exactly, since that commutator *is* a generator.
* otherwise ``b_j = [s, t]`` with ``t > b_i`` and
  ``b_j^(b_i) = [s^(b_i), t^(b_i)]``, evaluated with relations already built.

Commutators follow ``[a, b] = a^-1 b^-1 a b``.

The truncated power-series image ``x_i -> 1 + X_i`` (``magnus_image``) is an
independent check on all of this; nothing in the collector uses it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

from .arith import gen_binomial
from .hall import BasicCommutator, hall_basis

Word = Sequence[tuple[int, int]]


class InvariantError(ArithmeticError):
    """An identity the engine should satisfy did not hold."""


def _inverse_word(word: Word) -> list[tuple[int, int]]:
    return [(g, -e) for g, e in reversed(word)]


class FreeNilpotentGroup:
    """Presentation data for the free nilpotent group ``F_d / gamma_{n+1}``."""

    def __init__(self, d: int, n: int):
        if d < 1 or n < 1:
            raise ValueError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
        self.d = d
        self.n = n
        self.basis: tuple[BasicCommutator, ...] = hall_basis(d, n).items
        size = len(self.basis)
        self.weights = [b.weight for b in self.basis]
        self._pair_index = {
            (b.left.index, b.right.index): b.index for b in self.basis if not b.is_letter
        }
        # generators past limit[g] commute with b_g modulo gamma_{n+1}
        self.limit = []
        for g in range(size):
            lim = g + 1
            while lim < size and self.weights[g] + self.weights[lim] <= n:
                lim += 1
            self.limit.append(lim)
        self._conj: list[dict[int, list[tuple[int, int]]]] = [dict() for _ in range(size)]
        self._iconj: list[dict[int, list[tuple[int, int]]]] = [dict() for _ in range(size)]
        self._build_tables()

    def __repr__(self):
        return f"FreeNilpotentGroup(d={self.d}, n={self.n})"

    @property
    def rank(self) -> int:
        return len(self.basis)

    def _build_tables(self):
        for i in range(self.rank - 1, -1, -1):
            conj = self._conj[i]
            for j in range(i + 1, self.limit[i]):
                bj = self.basis[j]
                if bj.is_letter or bj.right.index <= i:
                    conj[j] = [(j, 1), (self._pair_index[(j, i)], 1)]
                else:
                    x = self._image(conj, bj.left.index)
                    y = self._image(conj, bj.right.index)
                    word = _inverse_word(x) + _inverse_word(y) + x + y
                    conj[j] = self._sparse(self._collect(word))
            iconj = self._iconj[i]
            for j in range(self.limit[i] - 1, i, -1):
                if conj[j][0] != (j, 1):
                    raise InvariantError(f"conjugate of generator {j} by {i} does not lead with it")
                rest = conj[j][1:]
                image = []
                for g, e in rest:
                    part = self._image(iconj, g)
                    image.extend((part if e > 0 else _inverse_word(part)) * abs(e))
                iconj[j] = self._sparse(self._collect([(j, 1)] + _inverse_word(image)))

    @staticmethod
    def _image(table, g):
        return table.get(g, [(g, 1)])

    @staticmethod
    def _sparse(vec) -> list[tuple[int, int]]:
        return [(g, e) for g, e in enumerate(vec) if e]

    def _collect(self, word: Word, vec: list[int] | None = None) -> list[int]:
        """Multiply the normal form ``vec`` on the right by ``word``."""
        vec = [0] * self.rank if vec is None else vec
        stack = list(reversed(word))
        limit = self.limit
        while stack:
            g, e = stack.pop()
            if e == 0:
                continue
            lim = limit[g]
            if not any(vec[g + 1 : lim]):
                vec[g] += e
                continue
            sign = 1 if e > 0 else -1
            table = self._conj[g] if sign > 0 else self._iconj[g]
            stack.append((g, e - sign))
            pending = []
            for j in range(len(vec) - 1, g, -1):
                ej = vec[j]
                if not ej:
                    continue
                vec[j] = 0
                image = table.get(j) if j < lim else None
                if image is None:
                    pending.append((j, ej))
                elif ej > 0:
                    pending.extend(reversed(image * ej))
                else:
                    pending.extend(reversed(_inverse_word(image) * -ej))
            vec[g] += sign
            stack.extend(pending)
        return vec

    def element(self, word: Iterable[tuple[int, int]] = ()) -> NilElement:
        """Normal form of a product of basis-element powers, given by position."""
        return NilElement(self, tuple(self._sparse(self._collect(list(word)))))

    def identity(self) -> NilElement:
        return NilElement(self, ())

    def letter(self, i: int) -> NilElement:
        if not 1 <= i <= self.d:
            raise ValueError(f"letter index must be in 1..{self.d}, got {i}")
        return NilElement(self, ((i - 1, 1),))

    def generator(self, b: BasicCommutator | int) -> NilElement:
        """Basis element as a group element (by commutator or by position)."""
        index = b if isinstance(b, int) else self.index_of(b)
        return NilElement(self, ((index, 1),))

    def index_of(self, b: BasicCommutator) -> int:
        for item in self.basis:
            if item == b:
                return item.index
        raise KeyError(f"{b} is not a basis element of weight <= {self.n}")

    def from_letters(self, word: Iterable[int]) -> NilElement:
        """Element of a signed letter word such as ``[1, -2, 2, 1]``."""
        return self.element((abs(a) - 1, 1 if a > 0 else -1) for a in word)


@lru_cache(maxsize=32)
def free_nilpotent_group(d: int, n: int) -> FreeNilpotentGroup:
    return FreeNilpotentGroup(d, n)


@dataclass(frozen=True, eq=False)
class NilElement:
    """Hall normal form: ascending ``(basis position, exponent)`` pairs, no zeros."""

    group: FreeNilpotentGroup
    exponents: tuple[tuple[int, int], ...]

    @property
    def context(self) -> tuple[int, int]:
        return (self.group.d, self.group.n)

    def _check(self, other: NilElement):
        if not isinstance(other, NilElement):
            raise TypeError(f"expected NilElement, got {type(other).__name__}")
        if other.context != self.context:
            raise ValueError(f"context mismatch: {self.context} vs {other.context}")

    def __eq__(self, other):
        if not isinstance(other, NilElement):
            return NotImplemented
        return self.context == other.context and self.exponents == other.exponents

    def __hash__(self):
        return hash((self.context, self.exponents))

    def __mul__(self, other: NilElement) -> NilElement:
        return multiply(self, other)

    def __pow__(self, e: int) -> NilElement:
        return power(self, e)

    def __invert__(self) -> NilElement:
        return self.inverse()

    def inverse(self) -> NilElement:
        return self.group.element(_inverse_word(self.exponents))

    def exponent(self, b: BasicCommutator | int) -> int:
        index = b if isinstance(b, int) else self.group.index_of(b)
        return dict(self.exponents).get(index, 0)

    @property
    def is_identity(self) -> bool:
        return not self.exponents

    def __str__(self):
        if not self.exponents:
            return "1"
        basis = self.group.basis
        return " ".join(
            str(basis[g]) if e == 1 else f"{basis[g]}^{e}" for g, e in self.exponents
        )

    def __repr__(self):
        return f"NilElement({self}; d={self.group.d}, n={self.group.n})"


def multiply(a: NilElement, b: NilElement) -> NilElement:
    a._check(b)
    vec = [0] * a.group.rank
    for g, e in a.exponents:
        vec[g] = e
    vec = a.group._collect(b.exponents, vec)
    return NilElement(a.group, tuple(a.group._sparse(vec)))


def power(a: NilElement, e: int) -> NilElement:
    result = a.group.identity()
    base = a if e >= 0 else a.inverse()
    e = abs(e)
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def commutator(a: NilElement, b: NilElement) -> NilElement:
    """``a^-1 b^-1 a b``."""
    a._check(b)
    word = _inverse_word(a.exponents) + _inverse_word(b.exponents) + list(a.exponents) + list(b.exponents)
    return a.group.element(word)


class TruncatedSeries:
    """Integer noncommutative polynomial in ``X_1..X_d`` cut off above degree ``n``.

    Words are tuples of letter numbers; ``()`` holds the constant term.
    """

    __slots__ = ("d", "n", "coeffs")

    def __init__(self, d: int, n: int, coeffs: Mapping[tuple[int, ...], int] | None = None):
        self.d = d
        self.n = n
        self.coeffs = {w: c for w, c in (coeffs or {}).items() if c and len(w) <= n}

    @classmethod
    def one(cls, d, n):
        return cls(d, n, {(): 1})

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.d, self.n) == (other.d, other.n) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.d, self.n, frozenset(self.coeffs.items())))

    def __getitem__(self, word):
        return self.coeffs.get(tuple(word), 0)

    def __add__(self, other):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return TruncatedSeries(self.d, self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k: int) -> TruncatedSeries:
        return TruncatedSeries(self.d, self.n, {w: k * c for w, c in self.coeffs.items()})

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        n = self.n
        right = defaultdict(list)
        for v, b in other.coeffs.items():
            right[len(v)].append((v, b))
        out: dict[tuple[int, ...], int] = defaultdict(int)
        for u, a in self.coeffs.items():
            room = n - len(u)
            for q, terms in right.items():
                if q <= room:
                    for v, b in terms:
                        out[u + v] += a * b
        return TruncatedSeries(self.d, n, out)

    def inverse(self) -> TruncatedSeries:
        """Inverse of a series with constant term 1 (geometric series)."""
        if self[()] != 1:
            raise ValueError("only series with constant term 1 are inverted here")
        nil = self - TruncatedSeries.one(self.d, self.n)
        term = TruncatedSeries.one(self.d, self.n)
        total = TruncatedSeries.one(self.d, self.n)
        for _ in range(self.n):
            term = term * nil.scale(-1)
            total = total + term
        return total

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for w in sorted(self.coeffs, key=lambda w: (len(w), w)):
            mono = "".join(f"X{i}" for i in w) or "1"
            parts.append(f"{self.coeffs[w]:+d}*{mono}")
        return " ".join(parts)


def letter_series(d: int, n: int, i: int, e: int = 1) -> TruncatedSeries:
    """Image of ``x_i ** e``: ``sum_k C(e, k) X_i^k``."""
    return TruncatedSeries(d, n, {(i,) * k: gen_binomial(e, k) for k in range(n + 1)})


class _SeriesCache:
    def __init__(self, group: FreeNilpotentGroup):
        self.group = group
        self.powers: dict[int, list[TruncatedSeries]] = {}

    def basis_image(self, g: int) -> TruncatedSeries:
        return self.nil_powers(g)[0] + TruncatedSeries.one(self.group.d, self.group.n)

    def nil_powers(self, g: int) -> list[TruncatedSeries]:
        """``[N, N^2, ...]`` where ``1 + N`` is the image of basis element ``g``."""
        if g in self.powers:
            return self.powers[g]
        grp = self.group
        b = grp.basis[g]
        if b.is_letter:
            image = TruncatedSeries(grp.d, grp.n, {(): 1, (b.letter,): 1})
        else:
            s = self.basis_image(b.left.index)
            t = self.basis_image(b.right.index)
            image = s.inverse() * t.inverse() * s * t
        nil = image - TruncatedSeries.one(grp.d, grp.n)
        pows = [nil]
        for _ in range(grp.n // b.weight - 1):
            pows.append(pows[-1] * nil)
        self.powers[g] = pows
        return pows

    def power_image(self, g: int, e: int) -> TruncatedSeries:
        total = TruncatedSeries.one(self.group.d, self.group.n)
        for k, p in enumerate(self.nil_powers(g), start=1):
            total = total + p.scale(gen_binomial(e, k))
        return total


@lru_cache(maxsize=32)
def _series_cache(d: int, n: int) -> _SeriesCache:
    return _SeriesCache(free_nilpotent_group(d, n))


def magnus_image(a: NilElement) -> TruncatedSeries:
    """Image under ``x_i -> 1 + X_i`` truncated above degree ``n``."""
    cache = _series_cache(a.group.d, a.group.n)
    result = TruncatedSeries.one(a.group.d, a.group.n)
    for g, e in a.exponents:
        result = result * cache.power_image(g, e)
    return result


def word_series(d: int, n: int, word: Iterable[int]) -> TruncatedSeries:
    """Image of a signed letter word, built letter by letter."""
    result = TruncatedSeries.one(d, n)
    for a in word:
        result = result * letter_series(d, n, abs(a), 1 if a > 0 else -1)
    return result


def binomial_fit(values: Mapping[int, int], degree: int) -> list[int]:
    """Integers ``a_1..a_degree`` with ``values[m] == sum_j a_j * C(m, j)``.

    Solved from ``m = 1..degree`` (unit lower-triangular), then checked on
    every other sample, negative ``m`` included via generalised binomials.
    """
    coeffs: list[int] = []
    for m in range(1, degree + 1):
        if m not in values:
            raise ValueError(f"fit of degree {degree} needs a sample at {m}")
        known = sum(a * gen_binomial(m, j) for j, a in enumerate(coeffs, start=1))
        coeffs.append(values[m] - known)
    for m, v in values.items():
        predicted = sum(a * gen_binomial(m, j) for j, a in enumerate(coeffs, start=1))
        if predicted != v:
            raise InvariantError(
                f"exponent {v} at {m} is not reproduced by a degree-{degree} binomial fit {coeffs}"
            )
    return coeffs


class ExpansionRow(NamedTuple):
    commutator: BasicCommutator
    exponents: dict[int, int]
    coefficients: list[int]
    weight_bound: int


def lemma25_expand(n_max: int, context: tuple[int, int] = (2, 4)) -> list[ExpansionRow]:
    """Exponents of ``[x^m, y]`` for ``m = 0..n_max`` as binomial combinations.

    ``x = x_2`` and ``y = x_1`` so that ``[x, y] = [x2,x1]`` is itself a basis
    element. Each basis element's exponent is fitted as
    ``sum_j a_j C(m, j)`` with ``a_j = 0`` beyond its ``x``-degree, which is
    its weight as a commutator in ``x`` and ``[x, y]``.
    """
    d, cls = context
    if d < 2 or cls < 3:
        raise ValueError(f"need d >= 2 and class >= 3, got {context}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    grp = free_nilpotent_group(d, cls)
    x, y = grp.letter(2), grp.letter(1)
    samples = {m: commutator(x ** m, y) for m in range(n_max + 1)}
    return _fit_rows(grp, samples, lambda b: b.degree(2))


def commutator_power_expand(alphas: Iterable[int], context: tuple[int, int] = (2, 4)) -> list[ExpansionRow]:
    """Exponents of ``[b_1, b_2^alpha]`` with ``b_1 = x_2``, ``b_2 = x_1``.

    The fit degree for a commutator of weight ``w`` in the ``b``'s is
    ``w - 1`` (weight minus ``r - 1`` with ``r = 2``).
    """
    d, cls = context
    grp = free_nilpotent_group(d, cls)
    b1, b2 = grp.letter(2), grp.letter(1)
    samples = {a: commutator(b1, b2 ** a) for a in alphas}
    return _fit_rows(grp, samples, lambda b: b.weight - 1)


def _fit_rows(grp, samples, bound) -> list[ExpansionRow]:
    # too few samples pin down only the low coefficients
    reach = max((m for m in samples if m > 0), default=0)
    rows = []
    for b in grp.basis:
        exps = {m: el.exponent(b.index) for m, el in samples.items()}
        w = bound(b)
        coeffs = binomial_fit(exps, min(w, reach)) if w > 0 else []
        if w <= 0 and any(exps.values()):
            raise InvariantError(f"{b} has nonzero exponents but weight bound {w}")
        rows.append(ExpansionRow(b, exps, coeffs, w))
    return rows
