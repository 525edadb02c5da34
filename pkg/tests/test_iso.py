import json
import random
from concurrent.futures import ThreadPoolExecutor

import pytest

from polyz.engine import AutMatrix, Automorphism
from polyz.errors import ClassificationError, DimensionMismatchError, NotAnAutomorphismError
from polyz.g2 import Aut2, Family
from polyz.g3 import Aut3, Pattern2x2, Variant, aut3_inverse
from polyz.iso import (
    TwistSequence,
    aut2_automorphism,
    conjugation_witness,
    g2_coset_witness,
    inner_twist_witness,
    twist_power_identity,
    twist_sequence,
    verify_witness,
)
from polyz.presets import B1, G2, ZXZ, Z


def alpha(a):
    return aut2_automorphism(Aut2(family=Family.ALPHA, a=a))


def b1_automorphism(f: Aut3) -> Automorphism:
    return Automorphism(B1, f.matrix(), aut3_inverse(f).matrix().columns)


def random_configuration(rng: random.Random):
    """A random (alpha, a) over G2 or B1."""
    if rng.random() < 0.5:
        f = Aut2(family=rng.choice(list(Family)), a=rng.randint(-5, 5))
        return aut2_automorphism(f), (rng.randint(-5, 5), rng.randint(-5, 5))
    family = rng.choice(list(Family))
    if family in (Family.ALPHA, Family.BETA):
        block = rng.choice([((0, 1), (1, 0)), ((2, 1), (1, 0)), ((0, -1), (1, 0))])
    else:
        block = rng.choice([((1, 0), (0, 1)), ((1, 2), (0, 1)), ((-1, 0), (0, 1))])
    f = Aut3(variant=Variant.B1, family=family, a=rng.randint(-5, 5), block=Pattern2x2.of(block))
    return b1_automorphism(f), tuple(rng.randint(-5, 5) for _ in range(3))


def check_twist_identities(alpha_aut: Automorphism, a, k_range: range, pair_range: range):
    tower = alpha_aut.tower
    sequence = TwistSequence(alpha_aut, a)
    powers = {k: alpha_aut.power(k) for k in range(min(k_range.start, pair_range.start), k_range.stop)}
    for k in k_range:
        assert sequence(k) == powers[k].apply(tower.inv(sequence(-k)))
    for k1 in pair_range:
        for k2 in pair_range:
            lhs = tower.mul(tower.inv(sequence(k1)), sequence(k1 + k2))
            assert lhs == powers[k1].apply(sequence(k2))


class TestTwistSequence:
    def test_zero_is_identity(self):
        assert twist_sequence(alpha(1), (3, 4), 0) == (0, 0)

    def test_z_examples(self):
        flip = Automorphism(Z, AutMatrix(rows=((-1,),)), [(-1,)])
        assert twist_sequence(flip, (5,), 2) == (0,)
        assert twist_sequence(flip, (5,), -1) == (5,)
        assert twist_sequence(flip, (5,), 3) == (5,)

    def test_first_terms(self):
        sequence = TwistSequence(alpha(1), (0, 1))
        assert sequence(1) == (0, 1)
        # g2 * alpha_1(g2) = g2 * g1 * g2^-1 = g1^-1
        assert sequence(2) == (-1, 0)
        assert sequence(-1) == alpha(1).inverse().apply(G2.inv((0, 1)))

    def test_memo_is_order_independent(self):
        sequence = TwistSequence(alpha(3), (2, 1))
        late = [sequence(k) for k in (9, -7, 3, -2, 0)]
        fresh = TwistSequence(alpha(3), (2, 1))
        assert late == [twist_sequence(fresh.alpha, (2, 1), k) for k in (9, -7, 3, -2, 0)]

    def test_length_checked(self):
        with pytest.raises(DimensionMismatchError):
            TwistSequence(alpha(1), (1, 2, 3))

    def test_identities_on_random_configurations(self):
        rng = random.Random(8)
        for _ in range(10):
            alpha_aut, a = random_configuration(rng)
            check_twist_identities(alpha_aut, a, range(-12, 13), range(-4, 5))


class TestInnerTwistWitness:
    def test_trivial_element_gives_identity_map(self):
        witness = inner_twist_witness(alpha(1), (0, 0))
        rng = random.Random(1)
        for _ in range(50):
            x = tuple(rng.randint(-10, 10) for _ in range(3))
            assert witness.forward(x) == x
            assert witness.backward(x) == x

    def test_alpha_3_to_alpha_1(self):
        witness = inner_twist_witness(alpha(1), (1, 0))
        assert witness.source_twist.matrix == Aut2(family=Family.ALPHA, a=3).matrix()
        assert witness.target_twist.matrix == Aut2(family=Family.ALPHA, a=1).matrix()
        report = verify_witness(witness, sample_count=1000, exponent_bound=10, seed=4)
        assert report.ok
        assert report.sample_count == 1000

    def test_beta_0_twist_is_a_direct_product(self):
        identity = Automorphism.identity(G2)
        witness = inner_twist_witness(identity, (0, 1))
        assert witness.source.phi(2) == Aut2(family=Family.BETA, a=0).matrix()
        assert witness.target.phi(2) == AutMatrix.identity(2)
        assert verify_witness(witness, sample_count=300, exponent_bound=10, seed=2).ok

    def test_b1_witness(self):
        f = Aut3(variant=Variant.B1, family=Family.GAMMA, a=1, block=Pattern2x2.of(((1, 2), (0, 1))))
        witness = inner_twist_witness(b1_automorphism(f), (1, -1, 2))
        assert witness.source.n == 4
        assert verify_witness(witness, sample_count=200, exponent_bound=6, seed=9).ok

    def test_every_inner_twist_of_g2_verifies(self):
        """The semidirect product only depends on the twist up to inner automorphisms."""
        rng = random.Random(12)
        for family in Family:
            for a in (0, 1, -3):
                for _ in range(3):
                    h = (rng.randint(-4, 4), rng.randint(-4, 4))
                    witness = inner_twist_witness(aut2_automorphism(Aut2(family=family, a=a)), h)
                    assert verify_witness(witness, sample_count=60, exponent_bound=8, seed=rng.randint(0, 999)).ok


class TestConjugationWitness:
    def test_identity_psi(self):
        witness = conjugation_witness(alpha(2), Automorphism.identity(G2))
        assert witness.forward((3, -1, 4)) == (3, -1, 4)
        assert witness.target_twist == witness.source_twist

    def test_klein_bottle_example(self):
        psi = aut2_automorphism(Aut2(family=Family.GAMMA, a=1))
        witness = conjugation_witness(alpha(0), psi)
        assert witness.target.phi(2) == Aut2(family=Family.ALPHA, a=0).matrix()
        assert verify_witness(witness, sample_count=500, exponent_bound=10, seed=3).ok

    def test_torus_bundles(self):
        swap = Automorphism(ZXZ, AutMatrix(rows=((0, 1), (1, 0))), [(0, 1), (1, 0)])
        shear = Automorphism(ZXZ, AutMatrix(rows=((1, 1), (0, 1))), [(1, 0), (-1, 1)])
        witness = conjugation_witness(swap, shear)
        assert witness.target.phi(2) == AutMatrix(rows=((1, 0), (1, -1)))
        assert verify_witness(witness, sample_count=500, exponent_bound=10, seed=5).ok

    def test_towers_must_match(self):
        with pytest.raises(DimensionMismatchError):
            conjugation_witness(alpha(0), Automorphism.identity(ZXZ))


class TestVerifyWitness:
    def test_corrupted_forward_map_is_caught(self):
        witness = inner_twist_witness(alpha(1), (1, 0))
        g1 = (1, 0, 0)

        def off_by_g1(x):
            image = witness.forward(x)
            return witness.target.mul(g1, image) if x[-1] == 1 else image

        corrupted = witness.model_copy(update={"forward": off_by_g1})
        report = verify_witness(corrupted, sample_count=1000, exponent_bound=10, seed=4)
        assert not report.ok
        assert len(report.multiplicativity_failures) >= 1

    def test_seed_makes_reports_reproducible(self):
        witness = inner_twist_witness(alpha(1), (2, 1))
        first = verify_witness(witness, sample_count=50, exponent_bound=5, seed=77)
        second = verify_witness(witness, sample_count=50, exponent_bound=5, seed=77)
        assert first == second
        assert first.seed == 77

    def test_defaults_come_from_settings(self, monkeypatch):
        monkeypatch.setenv("POLYZ_SAMPLE_COUNT", "12")
        monkeypatch.setenv("POLYZ_EXPONENT_BOUND", "3")
        monkeypatch.setenv("POLYZ_SEED", "5")
        report = verify_witness(inner_twist_witness(alpha(1), (1, 0)))
        assert (report.sample_count, report.exponent_bound, report.seed) == (12, 3, 5)

    def test_concurrent_verification(self):
        witness = inner_twist_witness(alpha(1), (3, 1))
        with ThreadPoolExecutor(max_workers=4) as pool:
            reports = list(pool.map(lambda seed: verify_witness(witness, 200, 10, seed), [1, 1, 1, 1]))
        assert all(r == reports[0] for r in reports)
        assert reports[0].ok


class TestSupplements:
    def test_twist_power_identity(self):
        assert twist_power_identity(alpha(1), (1, 0), range(-6, 7)) == []
        f = Aut3(variant=Variant.B1, family=Family.ALPHA, a=2, block=Pattern2x2.of(((0, 1), (1, 0))))
        assert twist_power_identity(b1_automorphism(f), (0, 1, 1), range(-4, 5), samples=10) == []

    def test_coset_witness(self):
        witness = g2_coset_witness(Aut2(family=Family.ALPHA, a=1), Aut2(family=Family.DELTA, a=-3))
        assert witness.source.phi(2) == Aut2(family=Family.ALPHA, a=1).matrix()
        assert witness.target.phi(2) == Aut2(family=Family.DELTA, a=-3).matrix()
        assert verify_witness(witness, sample_count=300, exponent_bound=10, seed=6).ok

    def test_coset_witness_needs_same_class(self):
        with pytest.raises(ClassificationError):
            g2_coset_witness(Aut2(family=Family.ALPHA, a=0), Aut2(family=Family.ALPHA, a=1))

    def test_describe(self):
        witness = inner_twist_witness(alpha(1), (1, 0))
        record = witness.describe()
        assert record["kind"] == "inner_twist"
        assert record["a"] == ["1", "0"]
        assert record["alpha"] == [["1", "1"], ["0", "-1"]]
        assert record["source"]["phis"][-1] == [["1", "3"], ["0", "-1"]]
        json.dumps(record)

    def test_rejects_non_automorphism(self):
        with pytest.raises(NotAnAutomorphismError):
            Automorphism(G2, AutMatrix(rows=((2, 0), (0, 1))), [(1, 0), (0, 1)])


@pytest.mark.slow
class TestAcceptanceScale:
    def test_twist_identities_hundred_configurations(self):
        rng = random.Random(2024)
        for _ in range(100):
            alpha_aut, a = random_configuration(rng)
            check_twist_identities(alpha_aut, a, range(-12, 13), range(-8, 9))

    def test_witnesses_thousand_samples(self):
        psi = aut2_automorphism(Aut2(family=Family.GAMMA, a=1))
        witnesses = [
            inner_twist_witness(alpha(1), (1, 0)),
            inner_twist_witness(Automorphism.identity(G2), (0, 1)),
            conjugation_witness(alpha(0), psi),
        ]
        for witness in witnesses:
            assert verify_witness(witness, sample_count=1000, exponent_bound=10, seed=1).ok
