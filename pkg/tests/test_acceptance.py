"""Acceptance criteria 1 to 9, all exact integer checks."""

import io
import math
import random

from nilmult.arith import binomial, lemma24_check
from nilmult.cli import main, parse_group_expr
from nilmult.hall import build_E, build_L, generate
from nilmult.multiplier import (
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
from nilmult.nilengine import free_nilpotent_group, lemma25_expand, magnus_image, word_series
from nilmult.verify import admissible_specs, class_rows, enumerated_multiplier
from nilmult.witt import chi

Z = 0


def test_criterion_1_witt_hall(criterion):
    with criterion(1, "Witt numbers match Hall enumeration", budget=10):
        for d_max, n_max in [(3, 8), (4, 5)]:
            for d in range(1, d_max + 1):
                basis = generate(d, 1, n_max)
                for n in range(1, n_max + 1):
                    assert chi(n, d) == len(basis.of_weight(n)), (n, d)
        assert chi(6, 2) == 9
        assert chi(4, 3) == 18


def test_criterion_2_lemma24(criterion):
    with criterion(2, "r | C(r, w) when no prime <= w divides r", budget=1):
        checked = 0
        for r in range(2, 201):
            for w in range(1, r):
                # gcd(r, w!) == 1 is the same as no prime <= w dividing r
                coprime = math.gcd(r, math.factorial(w)) == 1
                assert lemma24_check(w, r) == coprime, (w, r)
                if coprime:
                    assert math.comb(r, w) % r == 0, (w, r)
                    checked += 1
        assert checked > 0


def _word(rng, d):
    return [rng.choice((1, -1)) * rng.randint(1, d) for _ in range(rng.randint(0, 7))]


def test_criterion_3_engine_vs_series(criterion):
    rng = random.Random(31)
    contexts = [(d, n) for d in (1, 2, 3) for n in range(1, 6)]
    with criterion(3, "collector agrees with series oracle and satisfies group axioms", budget=30):
        for s in range(1000):
            d, n = contexts[s % len(contexts)]
            grp = free_nilpotent_group(d, n)
            w1, w2 = _word(rng, d), _word(rng, d)
            a, b = grp.from_letters(w1), grp.from_letters(w2)
            assert magnus_image(a * b) == magnus_image(a) * magnus_image(b), (d, n, w1, w2)
            assert magnus_image(a * b) == word_series(d, n, w1 + w2), (d, n, w1, w2)
        for s in range(1000):
            d, n = contexts[s % len(contexts)]
            grp = free_nilpotent_group(d, n)
            a, b, c = (grp.from_letters(_word(rng, d)) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert (a * a.inverse()).is_identity and (a.inverse() * a).is_identity
            assert a * grp.identity() == grp.identity() * a == a


def test_criterion_4_commutator_expansion(criterion):
    with criterion(4, "[x^n, y] exponents are binomial combinations", budget=5):
        rows = lemma25_expand(6, (2, 4))
        for r in rows:
            for n in range(1, 7):
                rebuilt = sum(a * binomial(n, j) for j, a in enumerate(r.coefficients, start=1))
                assert rebuilt == r.exponents[n], (str(r.commutator), n)
        by_name = {r.commutator.left_normed(): r for r in rows}
        assert all(by_name["[x2,x1]"].exponents[n] == n for n in range(1, 7))
        xyx = by_name["[x2,x1,x2]"]
        assert xyx.coefficients == [0, 1]
        assert all(xyx.exponents[n] == math.comb(n, 2) for n in range(1, 7))


def test_criterion_5_accounting(criterion):
    with criterion(5, "free rank, torsion and E_i account for all basic commutators", budget=60):
        cases = 0
        for spec, c in admissible_specs(4, 3, 4):
            k, t, n = spec.k, spec.t, spec.classes
            u = free_rank_u(spec, c)
            f = {s: torsion_exponent_f(spec, c, s) for s in range(t, k + 1)}
            e_total = 0
            for i in range(2, k + 1):
                closed = sum(chi(c + j, i + 1) - chi(c + j, i) for j in range(n[i - 1] + 1, n[0] + 1))
                assert len(build_E(i, spec, c)) == closed, (spec, c, i)
                e_total += closed
            for s, fs in f.items():
                assert len(build_L(s, spec, c)) == fs, (spec, c, s)
            total = sum(chi(c + j, k + 1) for j in range(1, n[0] + 1))
            assert u + sum(f.values()) + e_total == total, (spec, c)
            assert total == len(generate(k + 1, c + 1, c + n[0]))
            assert nilpotent_multiplier(spec, c) == enumerated_multiplier(spec, c), (spec, c)
            cases += 1
        assert cases > 100


def test_criterion_6_schur(criterion):
    rng = random.Random(6)
    with criterion(6, "c = 1 gives the classical Schur multiplier", budget=1):
        for _ in range(200):
            length = rng.randint(1, 5)
            chain = [rng.randint(2, 100)]
            while len(chain) < length:
                chain.append(rng.choice([q for q in range(1, chain[-1] + 1) if chain[-1] % q == 0]))
            got = abelian_multiplier(0, chain, 1).merged()
            want = AbelianStructure.from_blocks(0, [(m, i - 1) for i, m in enumerate(chain, start=1)]).merged()
            assert got == want, chain


def test_criterion_7_iterated_equivalence(criterion):
    with criterion(7, "closed polynilpotent form equals iterated multiplier", budget=30):
        specs = sorted({spec for spec, _ in admissible_specs(4, 3, 4)}, key=str)
        cases = 0
        for spec in specs:
            for row in class_rows(3, 2):
                if not validate(spec, [row[0]]).ok:
                    continue
                assert polynilpotent_multiplier(spec, row) == iterated_multiplier(spec, row), (spec, row)
                cases += 1
        assert cases > 100
        got = polynilpotent_multiplier(GroupSpec((Z, Z), (2,)), (2, 1))
        assert got == AbelianStructure(10)
        assert str(got) == "Z^10"


def test_criterion_8_hypothesis_gate(criterion):
    expected = {
        "Z *[2] Z/4": ["PrimeConditionViolated(2)"],
        "Z *[1] Z *[2] Z/5": ["ClassesNotDescending"],
        "Z *[2] Z/5": [],
    }
    with criterion(8, "hypothesis reports are exact"):
        for text, want in expected.items():
            report = validate(parse_group_expr(text), [2])
            assert [str(v) for v in report.violations] == want, text
            assert report.ok == (not want)


def test_criterion_9_end_to_end(criterion):
    with criterion(9, "CLI prints the four-factor multiplier", budget=1):
        out, err = io.StringIO(), io.StringIO()
        code = main(["multiplier", "--group", "Z *[2] Z *[2] Z/5 *[1] Z/5", "--classrow", "2"], out, err)
        assert code == 0, err.getvalue()
        assert out.getvalue().strip() == "Z^5 + (Z/5)^21 + (Z/5)^12"
        spec = parse_group_expr("Z *[2] Z *[2] Z/5 *[1] Z/5")
        assert enumerated_multiplier(spec, 2) == AbelianStructure(5, ((5, 21), (5, 12)))
