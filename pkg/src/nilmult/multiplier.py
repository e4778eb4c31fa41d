"""Nilpotent and polynilpotent multipliers of nilpotent products of cyclic groups.

A group ``Z *[n_1] ... *[n_{t-1}] Z *[n_t] Z/m_{t+1} ... *[n_k] Z/m_{k+1}``
(left associated, ``c >= n_1 >= ... >= n_k``, ``m_{k+1} | ... | m_{t+1}`` and
every prime ``p <= n_1`` coprime to ``m_{t+1}``) has

    N_c M(G) = Z^u + (Z/m_{t+1})^f_t + ... + (Z/m_{k+1})^f_k

with ``u`` and ``f_s`` sums of Witt numbers. Everything here is closed form;
no presentations are built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .arith import primes_up_to
from .witt import chi, chi_iterate

INFINITE = 0


@dataclass(frozen=True)
class GroupSpec:
    """Cyclic factors joined by nilpotent products.

    ``orders[i]`` is 0 for an infinite cyclic factor, else the finite order
    (at least 2). ``classes[i]`` joins factor ``i`` to factor ``i + 1``.
    """

    orders: tuple[int, ...]
    classes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.orders:
            raise ValueError("a group needs at least one factor")
        if len(self.classes) != len(self.orders) - 1:
            raise ValueError(
                f"{len(self.orders)} factors need {len(self.orders) - 1} classes, "
                f"got {len(self.classes)}"
            )
        for m in self.orders:
            if m != INFINITE and m < 2:
                raise ValueError(f"finite factor order must be >= 2, got {m}")
        for n in self.classes:
            if n < 1:
                raise ValueError(f"nilpotent product class must be >= 1, got {n}")

    @property
    def k(self) -> int:
        return len(self.classes)

    @property
    def t(self) -> int:
        """Number of infinite factors."""
        return sum(1 for m in self.orders if m == INFINITE)

    def order(self, i: int) -> int:
        """Order ``m_i`` of factor ``i`` (1-based), 0 if infinite."""
        return self.orders[i - 1]

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(m for m in self.orders if m != INFINITE)

    def __str__(self):
        parts = ["Z" if self.orders[0] == INFINITE else f"Z/{self.orders[0]}"]
        for n, m in zip(self.classes, self.orders[1:]):
            parts.append(f"*[{n}]")
            parts.append("Z" if m == INFINITE else f"Z/{m}")
        return " ".join(parts)


class ClassRow(tuple):
    """Class row ``(c_1, ..., c_s)`` of a polynilpotent variety."""

    def __new__(cls, classes: Iterable[int]):
        row = super().__new__(cls, (int(c) for c in classes))
        if not row:
            raise ValueError("class row must be non-empty")
        if any(c < 1 for c in row):
            raise ValueError(f"class row entries must be >= 1, got {tuple(row)}")
        return row


class Violation(NamedTuple):
    code: str
    arg: int | None = None

    def __str__(self):
        return self.code if self.arg is None else f"{self.code}({self.arg})"


CLASS_ROW_TOO_SMALL = "ClassRowTooSmall"
CLASSES_NOT_DESCENDING = "ClassesNotDescending"
DIVISIBILITY_CHAIN_BROKEN = "DivisibilityChainBroken"
PRIME_CONDITION_VIOLATED = "PrimeConditionViolated"
FACTOR_ORDER_INVALID = "FactorOrderInvalid"
UNSUPPORTED_SHAPE = "UnsupportedShape"


@dataclass(frozen=True)
class HypothesisReport:
    violations: tuple[Violation, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "hypotheses ok"
        return "hypotheses violated: " + ", ".join(str(v) for v in self.violations)


class HypothesisError(ValueError):
    def __init__(self, report: HypothesisReport):
        super().__init__(str(report))
        self.report = report


@dataclass(frozen=True)
class AbelianStructure:
    """``Z^free_rank`` plus torsion blocks ``(modulus, multiplicity)``.

    Blocks are kept in the order they arise, largest modulus first, each
    later modulus dividing the one before. Adjacent blocks may share a
    modulus; ``merged()`` collapses them.
    """

    free_rank: int = 0
    torsion: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError(f"free rank must be >= 0, got {self.free_rank}")
        blocks = tuple((int(m), int(e)) for m, e in self.torsion)
        for m, e in blocks:
            if m < 2 or e < 1:
                raise ValueError(f"bad torsion block ({m}, {e})")
        for (m0, _), (m1, _) in zip(blocks, blocks[1:]):
            if m0 % m1:
                raise ValueError(f"torsion moduli {m0}, {m1} do not form a divisor chain")
        object.__setattr__(self, "torsion", blocks)

    @classmethod
    def from_blocks(cls, free_rank: int, blocks: Iterable[tuple[int, int]]) -> AbelianStructure:
        """Build from raw blocks, dropping empty and modulus-1 blocks."""
        kept = [(m, e) for m, e in blocks if e != 0 and m != 1]
        for m, e in kept:
            if e < 0:
                raise ArithmeticError(f"negative multiplicity {e} for modulus {m}")
        return cls(free_rank, tuple(kept))

    def merged(self) -> AbelianStructure:
        out: list[list[int]] = []
        for m, e in self.torsion:
            if out and out[-1][0] == m:
                out[-1][1] += e
            else:
                out.append([m, e])
        return AbelianStructure(self.free_rank, tuple(map(tuple, out)))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "free_rank": self.free_rank,
            "torsion": [{"modulus": m, "multiplicity": e} for m, e in self.torsion],
        }

    @classmethod
    def from_dict(cls, data: dict) -> AbelianStructure:
        return cls(
            data["free_rank"],
            tuple((b["modulus"], b["multiplicity"]) for b in data["torsion"]),
        )

    def __str__(self):
        return format_structure(self)


def format_structure(a: AbelianStructure) -> str:
    """Render as e.g. ``Z^5 + (Z/5)^21``; the trivial group is ``0``."""
    parts = []
    if a.free_rank == 1:
        parts.append("Z")
    elif a.free_rank > 1:
        parts.append(f"Z^{a.free_rank}")
    for m, e in a.torsion:
        parts.append(f"Z/{m}" if e == 1 else f"(Z/{m})^{e}")
    return " + ".join(parts) if parts else "0"


def _is_chain(moduli: Sequence[int]) -> bool:
    return all(a % b == 0 for a, b in zip(moduli, moduli[1:]))


def validate(spec: GroupSpec, row: Sequence[int]) -> HypothesisReport:
    """Check every hypothesis of the closed forms and report all failures."""
    row = ClassRow(row)
    n = spec.classes
    violations: list[Violation] = []
    notes: list[str] = []

    if n and row[0] < n[0]:
        violations.append(Violation(CLASS_ROW_TOO_SMALL))
    if any(a < b for a, b in zip(n, n[1:])):
        violations.append(Violation(CLASSES_NOT_DESCENDING))

    seen_finite = False
    for m in spec.orders:
        if m != INFINITE:
            seen_finite = True
        elif seen_finite:
            violations.append(Violation(FACTOR_ORDER_INVALID))
            break

    moduli = spec.moduli
    if not _is_chain(moduli):
        violations.append(Violation(DIVISIBILITY_CHAIN_BROKEN))
    if moduli and n:
        for p in primes_up_to(n[0]):
            if moduli[0] % p == 0:
                violations.append(Violation(PRIME_CONDITION_VIOLATED, p))

    if spec.t == 0 and any(c != 1 for c in n):
        violations.append(Violation(UNSUPPORTED_SHAPE))

    if spec.t == len(spec.orders) and spec.k:
        notes.append("no finite factors: closed form specialised to the torsion-free case")
    if spec.t == 0:
        notes.append("all factors finite with classes 1: abelian route")
    return HypothesisReport(tuple(violations), tuple(notes))


def _require(spec: GroupSpec, row: Sequence[int]) -> None:
    report = validate(spec, row)
    if not report.ok:
        raise HypothesisError(report)


def free_rank_u(spec: GroupSpec, c: int) -> int:
    """Free rank ``u`` of ``N_c M(G)``."""
    t, n = spec.t, spec.classes
    if t <= 1:
        # every chi(c + j, 1) with c + j >= 2 vanishes
        return 0
    u = sum(chi(c + j, t) for j in range(1, n[t - 2] + 1))
    for i in range(1, t - 1):
        u += sum(chi(c + j, i + 1) for j in range(n[i] + 1, n[i - 1] + 1))
    return u


def torsion_exponent_f(spec: GroupSpec, c: int, s: int) -> int:
    """Multiplicity ``f_s`` of ``Z/m_{s+1}`` in ``N_c M(G)``."""
    if not 1 <= s <= spec.k:
        raise IndexError(f"f_s needs 1 <= s <= {spec.k}, got {s}")
    return sum(chi(c + j, s + 1) - chi(c + j, s) for j in range(1, spec.classes[s - 1] + 1))


def _abelian_blocks(free_rank: int, blocks: Sequence[tuple[int, int]], c: int):
    """Raw ``(b_m, [(modulus, b_{pos+e} - b_pos), ...])`` with ``b_i = chi(c+1, i)``."""
    out = []
    pos = free_rank
    for m, e in blocks:
        out.append((m, chi(c + 1, pos + e) - chi(c + 1, pos)))
        pos += e
    return chi(c + 1, free_rank), out


def _raw_multiplier(spec: GroupSpec, c: int):
    if spec.t == 0:
        return _abelian_blocks(0, [(m, 1) for m in spec.orders], c)
    u = free_rank_u(spec, c)
    blocks = [(spec.order(s + 1), torsion_exponent_f(spec, c, s)) for s in range(spec.t, spec.k + 1)]
    return u, blocks


def nilpotent_multiplier(spec: GroupSpec, c: int) -> AbelianStructure:
    """``N_c M(G)`` for a group meeting the hypotheses.

    >>> str(nilpotent_multiplier(GroupSpec((0, 0), (2,)), 2))
    'Z^5'
    """
    _require(spec, [c])
    u, blocks = _raw_multiplier(spec, c)
    return AbelianStructure.from_blocks(u, blocks)


def abelian_multiplier(free_rank: int, moduli: Sequence[int], c: int) -> AbelianStructure:
    """``N_c M`` of ``Z^free_rank + Z/m_1 + ... + Z/m_k`` with ``m_{i+1} | m_i``."""
    return abelian_multiplier_of(free_rank, [(m, 1) for m in moduli], c)


def abelian_multiplier_of(free_rank: int, blocks: Sequence[tuple[int, int]], c: int) -> AbelianStructure:
    """As ``abelian_multiplier`` but with moduli given as ``(modulus, multiplicity)`` runs."""
    if c < 1:
        raise ValueError(f"class must be >= 1, got {c}")
    if free_rank < 0 or any(m < 1 or e < 0 for m, e in blocks):
        raise ValueError("free rank, moduli and multiplicities must be non-negative")
    if not _is_chain([m for m, _ in blocks]):
        raise HypothesisError(HypothesisReport((Violation(DIVISIBILITY_CHAIN_BROKEN),)))
    b0, out = _abelian_blocks(free_rank, blocks, c)
    return AbelianStructure.from_blocks(b0, out)


def polynilpotent_multiplier(spec: GroupSpec, row: Sequence[int]) -> AbelianStructure:
    """``N_{c_1,...,c_s} M(G)`` in closed form.

    >>> str(polynilpotent_multiplier(GroupSpec((0, 0), (2,)), (2, 1)))
    'Z^10'
    """
    row = ClassRow(row)
    _require(spec, row)
    u, blocks = _raw_multiplier(spec, row[0])
    tail = row[1:]
    prev = d0 = chi_iterate(u, tail)
    running = u
    out = []
    for m, f in blocks:
        running += f
        d = chi_iterate(running, tail)
        out.append((m, d - prev))
        prev = d
    return AbelianStructure.from_blocks(d0, out)


def iterated_multiplier(spec: GroupSpec, row: Sequence[int]) -> AbelianStructure:
    """Same value as ``polynilpotent_multiplier``, one class at a time.

    Takes ``N_{c_1} M(G)`` and then the ``c_2, ..., c_s`` nilpotent
    multipliers of each abelian result in turn.
    """
    row = ClassRow(row)
    _require(spec, row)
    result = nilpotent_multiplier(spec, row[0])
    for c in row[1:]:
        result = abelian_multiplier_of(result.free_rank, result.torsion, c)
    return result
