"""Self-check suites run by ``nilmult verify``.

Each suite returns a ``SuiteResult``; a suite fails on the first
counterexample and names it in ``detail``.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Iterator

from .arith import binomial, divisors, lemma24_check, mobius
from .hall import build_E, build_L, generate
from .multiplier import (
    INFINITE,
    AbelianStructure,
    GroupSpec,
    abelian_multiplier,
    free_rank_u,
    iterated_multiplier,
    nilpotent_multiplier,
    polynilpotent_multiplier,
    torsion_exponent_f,
    validate,
)
from .nilengine import (
    free_nilpotent_group,
    lemma25_expand,
    commutator_power_expand,
    magnus_image,
    word_series,
)
from .witt import chi

QUICK = "quick"
FULL = "full"


@dataclass
class SuiteResult:
    name: str
    ok: bool
    cases: int
    seconds: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        tail = f" -- {self.detail}" if self.detail else ""
        return f"{status} {self.name} ({self.cases} cases, {self.seconds:.2f}s){tail}"


class CheckFailed(AssertionError):
    pass


def _check(cond: bool, msg: str):
    if not cond:
        raise CheckFailed(msg)


# -- sweeps -----------------------------------------------------------------


def _descending(length: int, top: int) -> Iterator[tuple[int, ...]]:
    for combo in itertools.combinations_with_replacement(range(top, 0, -1), length):
        yield combo


def _chains(length: int, pool: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Divisor chains (largest first) of the given length drawn from ``pool``."""
    for combo in itertools.product(pool, repeat=length):
        if all(a % b == 0 for a, b in zip(combo, combo[1:])):
            yield combo


def admissible_specs(max_factors: int = 4, max_n1: int = 3, max_c: int = 4) -> Iterator[tuple[GroupSpec, int]]:
    """Every ``(spec, c)`` with an infinite prefix that passes ``validate``.

    Finite moduli come from {25, 5}, or from {9, 3} when ``n_1 < 3``.
    """
    for factors in range(2, max_factors + 1):
        k = factors - 1
        for classes in _descending(k, max_n1):
            pools = [(25, 5)] + ([(9, 3)] if classes[0] < 3 else [])
            for t in range(1, factors + 1):
                finite = factors - t
                chains = set()
                for pool in pools:
                    chains.update(_chains(finite, pool))
                for chain in sorted(chains):
                    spec = GroupSpec((INFINITE,) * t + chain, classes)
                    for c in range(classes[0], max_c + 1):
                        if validate(spec, [c]).ok:
                            yield spec, c


def class_rows(max_len: int = 3, max_entry: int = 2) -> Iterator[tuple[int, ...]]:
    for length in range(1, max_len + 1):
        yield from itertools.product(range(1, max_entry + 1), repeat=length)


# -- enumeration-side oracle ---------------------------------------------------


def enumerated_multiplier(spec: GroupSpec, c: int) -> AbelianStructure:
    """``N_c M(G)`` from explicit basis sets instead of Witt sums.

    Free rank is the number of basic commutators of weight ``c+1..c+n_1``
    on all letters minus the ``E_i`` and ``L_i`` sets; ``|L_i|`` is the
    multiplicity of ``Z/m_{i+1}``.
    """
    n1 = spec.classes[0]
    total = len(generate(spec.k + 1, c + 1, c + n1))
    e_sizes = sum(len(build_E(i, spec, c)) for i in range(2, spec.k + 1))
    blocks = [(spec.order(i + 1), len(build_L(i, spec, c))) for i in range(spec.t, spec.k + 1)]
    free = total - e_sizes - sum(e for _, e in blocks)
    return AbelianStructure.from_blocks(free, blocks)


# -- suites -------------------------------------------------------------------


def suite_witt_hall(level: str):
    cases = 0
    ranges = [(3, 8), (4, 5)] if level == QUICK else [(2, 12), (3, 9), (4, 6), (5, 5)]
    for d_max, n_max in ranges:
        for d in range(1, d_max + 1):
            basis = generate(d, 1, n_max)
            for n in range(1, n_max + 1):
                count = len(basis.of_weight(n))
                _check(chi(n, d) == count, f"chi({n},{d})={chi(n, d)} but enumeration gives {count}")
                cases += 1
    _check(chi(6, 2) == 9 and chi(4, 3) == 18, "reference Witt values")
    return cases


def suite_mobius(level: str):
    top = 2000 if level == QUICK else 10**4
    for m in range(1, top + 1):
        total = sum(mobius(k) for k in divisors(m))
        _check(total == (1 if m == 1 else 0), f"Moebius divisor sum at {m} is {total}")
    return top


def suite_binomial_divisibility(level: str):
    top = 200 if level == QUICK else 600
    cases = 0
    for r in range(2, top + 1):
        for w in range(1, r):
            if lemma24_check(w, r):
                cases += 1
    return cases


def suite_pascal(level: str):
    for n in range(1, 65):
        for k in range(1, 65):
            _check(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k), f"Pascal at ({n},{k})")
    return 64 * 64


def _random_word(rng, d, length):
    return [rng.choice([1, -1]) * rng.randint(1, d) for _ in range(length)]


def _contexts():
    return [(d, n) for d in (1, 2, 3) for n in range(1, 6)]


def suite_engine_oracle(level: str, seed: int = 2024):
    rng = random.Random(seed)
    samples = 1000 if level == QUICK else 4000
    contexts = _contexts()
    for s in range(samples):
        d, n = contexts[s % len(contexts)]
        grp = free_nilpotent_group(d, n)
        w1 = _random_word(rng, d, rng.randint(0, 7))
        w2 = _random_word(rng, d, rng.randint(0, 7))
        a, b = grp.from_letters(w1), grp.from_letters(w2)
        ab = a * b
        _check(magnus_image(ab) == magnus_image(a) * magnus_image(b), f"image not multiplicative: {w1} {w2} in {(d, n)}")
        _check(magnus_image(ab) == word_series(d, n, w1 + w2), f"normal form of {w1 + w2} in {(d, n)}")
        _check((a == b) == (magnus_image(a) == magnus_image(b)), f"series image not injective on {w1}, {w2}")
    return samples


def suite_group_axioms(level: str, seed: int = 7):
    rng = random.Random(seed)
    samples = 1000 if level == QUICK else 4000
    contexts = _contexts()
    for s in range(samples):
        d, n = contexts[s % len(contexts)]
        grp = free_nilpotent_group(d, n)
        a, b, c = (grp.from_letters(_random_word(rng, d, rng.randint(0, 6))) for _ in range(3))
        _check((a * b) * c == a * (b * c), f"associativity fails in {(d, n)}")
        _check((a * a.inverse()).is_identity and (a.inverse() * a).is_identity, f"inverse law fails in {(d, n)}")
        _check(a * grp.identity() == a, f"identity law fails in {(d, n)}")
    return samples


def suite_normal_forms(level: str):
    grp = free_nilpotent_group(2, 3)
    _check(grp.rank == chi(1, 2) + chi(2, 2) + chi(3, 2), "basis size")
    images = set()
    for bits in itertools.product((0, 1), repeat=grp.rank):
        el = grp.element((g, 1) for g, bit in enumerate(bits) if bit)
        images.add(magnus_image(el))
    _check(len(images) == 2**grp.rank, f"{len(images)} distinct images, expected {2 ** grp.rank}")
    return 2**grp.rank


def suite_power_commutator_fit(level: str):
    rows = lemma25_expand(6, (2, 4))
    by_name = {r.commutator.left_normed(): r for r in rows}
    lead = by_name["[x2,x1]"]
    _check(all(lead.exponents[m] == m for m in lead.exponents), "leading [x,y] exponent is not n")
    _check(by_name["[x2,x1,x2]"].coefficients == [0, 1], "[x,y,x] exponent is not C(n,2)")
    if level == FULL:
        lemma25_expand(8, (3, 5))
    return len(rows)


def suite_commutator_power_fit(level: str):
    alphas = range(-2, 4) if level == QUICK else range(-5, 7)
    rows = commutator_power_expand(alphas, (2, 4))
    for r in rows:
        if r.commutator.weight == 1:
            _check(not any(r.exponents.values()), "letter exponent in a commutator")
        elif r.commutator.weight == 2:
            _check(all(r.exponents[a] == a for a in r.exponents), "[b1,b2] exponent is not alpha")
    return len(rows)


def suite_basis_accounting(level: str):
    cases = 0
    max_c = 4
    for spec, c in admissible_specs(4, 3, max_c):
        k, t, n = spec.k, spec.t, spec.classes
        u = free_rank_u(spec, c)
        fs = [torsion_exponent_f(spec, c, s) for s in range(t, k + 1)] if t >= 1 else []
        e_sizes = []
        for i in range(2, k + 1):
            size = len(build_E(i, spec, c))
            closed = sum(chi(c + j, i + 1) - chi(c + j, i) for j in range(n[i - 1] + 1, n[0] + 1))
            _check(size == closed, f"|E_{i}| for {spec}, c={c}: {size} vs {closed}")
            e_sizes.append(size)
        for s, f in zip(range(t, k + 1), fs):
            size = len(build_L(s, spec, c))
            _check(size == f, f"|L_{s}| for {spec}, c={c}: {size} vs f={f}")
        lhs = u + sum(fs) + sum(e_sizes)
        rhs = sum(chi(c + j, k + 1) for j in range(1, n[0] + 1))
        _check(lhs == rhs, f"accounting identity for {spec}, c={c}: {lhs} vs {rhs}")
        _check(nilpotent_multiplier(spec, c) == enumerated_multiplier(spec, c), f"enumerated structure for {spec}, c={c}")
        cases += 1
    return cases


def suite_schur(level: str, seed: int = 11):
    rng = random.Random(seed)
    samples = 200 if level == QUICK else 2000
    for _ in range(samples):
        length = rng.randint(1, 5)
        chain = [rng.randint(1, 100)]
        while len(chain) < length:
            options = [q for q in divisors(chain[-1])]
            chain.append(rng.choice(options))
        got = abelian_multiplier(0, chain, 1).merged()
        blocks = [(m, i - 1) for i, m in enumerate(chain, start=1) if i >= 2]
        want = AbelianStructure.from_blocks(0, blocks).merged()
        _check(got == want, f"Schur multiplier of {chain}: {got} vs {want}")
    return samples


def suite_iterated_equivalence(level: str):
    cases = 0
    for spec, c in admissible_specs(4, 3, 4):
        for row in class_rows(3, 2 if level == QUICK else 3):
            if row[0] != c:
                continue
            closed = polynilpotent_multiplier(spec, row)
            _check(closed == iterated_multiplier(spec, row), f"{spec} row {row}")
            if len(row) == 1:
                _check(closed == nilpotent_multiplier(spec, c), f"{spec} row {row} vs N_c")
            cases += 1
    _check(str(polynilpotent_multiplier(GroupSpec((0, 0), (2,)), (2, 1))) == "Z^10", "Z *[2] Z, row (2,1)")
    return cases


def suite_abelian_specialisation(level: str):
    cases = 0
    for spec, c in admissible_specs(4, 1, 4):
        want = abelian_multiplier(spec.t, spec.moduli, c)
        _check(nilpotent_multiplier(spec, c) == want, f"classes 1 vs abelian for {spec}, c={c}")
        cases += 1
    for c in range(1, 5):
        for n1 in range(1, c + 1):
            spec = GroupSpec((0, 0), (n1,))
            rank = len(generate(2, c + 1, c + n1))
            _check(nilpotent_multiplier(spec, c).free_rank == rank, f"free case {spec}, c={c}")
            cases += 1
    return cases


def suite_hypotheses(level: str):
    from .cli import parse_group_expr

    expected = {
        "Z *[2] Z/4": ["PrimeConditionViolated(2)"],
        "Z *[1] Z *[2] Z/5": ["ClassesNotDescending"],
        "Z *[2] Z/5": [],
    }
    for text, want in expected.items():
        got = [str(v) for v in validate(parse_group_expr(text), [2]).violations]
        _check(got == want, f"{text}: {got} vs {want}")
    return len(expected)


def suite_end_to_end(level: str):
    from .cli import parse_group_expr

    spec = parse_group_expr("Z *[2] Z *[2] Z/5 *[1] Z/5")
    got = str(nilpotent_multiplier(spec, 2))
    _check(got == "Z^5 + (Z/5)^21 + (Z/5)^12", got)
    _check(nilpotent_multiplier(spec, 2) == enumerated_multiplier(spec, 2), "enumeration cross-check")
    return 1


SUITES: dict[str, Callable[[str], int]] = {
    "witt-hall": suite_witt_hall,
    "mobius-identity": suite_mobius,
    "binomial-pascal": suite_pascal,
    "binomial-divisibility": suite_binomial_divisibility,
    "engine-oracle": suite_engine_oracle,
    "group-axioms": suite_group_axioms,
    "normal-forms": suite_normal_forms,
    "power-commutator-fit": suite_power_commutator_fit,
    "commutator-power-fit": suite_commutator_power_fit,
    "basis-accounting": suite_basis_accounting,
    "schur-classical": suite_schur,
    "iterated-equivalence": suite_iterated_equivalence,
    "abelian-specialisation": suite_abelian_specialisation,
    "hypothesis-gate": suite_hypotheses,
    "end-to-end": suite_end_to_end,
}


def run_suites(level: str = QUICK, names=None) -> list[SuiteResult]:
    if level not in (QUICK, FULL):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    results = []
    for name, fn in SUITES.items():
        if names and name not in names:
            continue
        start = time.perf_counter()
        try:
            cases = fn(level)
            results.append(SuiteResult(name, True, cases, time.perf_counter() - start))
        except CheckFailed as exc:
            results.append(SuiteResult(name, False, 0, time.perf_counter() - start, str(exc)))
    return results
