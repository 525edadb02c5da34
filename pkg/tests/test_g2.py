import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyz.engine import AutMatrix, Automorphism
from polyz.errors import ClassificationError, PolyZParseError
from polyz.g2 import (
    IDENTITY,
    Aut2,
    Family,
    OutClass2,
    aut2_apply,
    aut2_compose,
    aut2_from_matrix,
    aut2_inverse,
    aut2_is_inner,
    aut2_out_class,
    conjugator_g2,
    g2_inv,
    g2_mul,
    g2_pow,
    g2_semidirect,
    inner_from_element_g2,
    inner_subgroup_window,
    mu,
    out_class_witness_g2,
    out_compose_g2,
    variant_for_out_class,
)
from polyz.presets import G2

pair = st.tuples(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
families = st.sampled_from(list(Family))
auts = st.builds(Aut2, family=families, a=st.integers(-50, 50))


def alpha(a):
    return Aut2(family=Family.ALPHA, a=a)


def beta(a):
    return Aut2(family=Family.BETA, a=a)


def gamma(a):
    return Aut2(family=Family.GAMMA, a=a)


def delta(a):
    return Aut2(family=Family.DELTA, a=a)


class TestKernels:
    def test_mu(self):
        assert [mu(x) for x in (-3, -2, 0, 1, 4)] == [1, 0, 0, 1, 0]

    @given(pair, pair)
    def test_mul_matches_engine(self, x, y):
        assert g2_mul(x, y) == G2.mul(x, y)

    @given(pair, st.integers(-10**6, 10**6))
    def test_pow_matches_engine(self, x, m):
        assert g2_pow(x, m) == G2.pow(x, m)

    @given(pair)
    def test_inv_matches_engine(self, x):
        assert g2_inv(x) == G2.inv(x)

    def test_pow_examples(self):
        assert g2_pow((1, 1), 2) == (0, 2)
        assert g2_pow((5, 3), 7) == (5, 21)
        assert g2_pow((5, 4), -3) == (-15, -12)


class TestAut2:
    def test_matrix_shapes(self):
        assert alpha(3).matrix() == AutMatrix(rows=((1, 3), (0, -1)))
        assert beta(1).matrix() == AutMatrix(rows=((-1, 1), (0, 1)))
        assert gamma(0).matrix() == AutMatrix.identity(2)
        assert delta(-2).matrix() == AutMatrix(rows=((-1, -2), (0, -1)))

    def test_from_matrix(self):
        assert aut2_from_matrix(AutMatrix(rows=((1, 3), (0, -1)))) == alpha(3)
        assert aut2_from_matrix(AutMatrix(rows=((1, 0), (1, 1)))) is None
        assert aut2_from_matrix(AutMatrix(rows=((2, 0), (0, 1)))) is None
        assert aut2_from_matrix(AutMatrix.identity(3)) is None

    @given(auts)
    def test_every_family_member_is_an_automorphism(self, f):
        assert G2.is_automorphism(f.matrix(), aut2_inverse(f).matrix().columns)

    def test_box_membership_agrees_with_engine(self):
        """Family members pass the engine; everything else has a lower entry or a non-unit diagonal."""
        for s in range(-3, 4):
            for a in range(-3, 4):
                for r in range(-3, 4):
                    for u in range(-3, 4):
                        m = AutMatrix(rows=((s, a), (r, u)))
                        found = aut2_from_matrix(m)
                        if found is None:
                            assert not (r == 0 and s in (1, -1) and u in (1, -1))
                        else:
                            assert G2.is_automorphism(m, aut2_inverse(found).matrix().columns)

    @given(auts, auts)
    def test_compose_matches_engine(self, f, g):
        assert aut2_compose(f, g).matrix() == G2.compose_aut(f.matrix(), g.matrix())

    def test_composition_table_entries(self):
        assert aut2_compose(alpha(1), alpha(1)) == gamma(2)
        assert aut2_compose(alpha(2), beta(5)) == delta(7)
        assert aut2_compose(beta(2), alpha(5)) == delta(-3)
        assert aut2_compose(delta(1), delta(1)) == gamma(0)

    @given(auts)
    def test_inverse(self, f):
        assert aut2_compose(f, aut2_inverse(f)) == IDENTITY
        assert aut2_compose(aut2_inverse(f), f) == IDENTITY

    def test_beta_is_an_involution(self):
        assert aut2_inverse(beta(7)) == beta(7)
        assert aut2_inverse(alpha(7)) == alpha(-7)

    @given(auts, pair)
    def test_apply_matches_engine(self, f, x):
        assert aut2_apply(f, x) == G2.apply_aut(f.matrix(), x)

    def test_parse(self):
        assert Aut2.parse("alpha(3)") == alpha(3)
        assert Aut2.parse(" delta( -2 ) ") == delta(-2)
        assert Aut2.parse("[[-1,1],[0,1]]") == beta(1)
        assert str(gamma(-4)) == "gamma(-4)"

    def test_parse_errors(self):
        with pytest.raises(PolyZParseError):
            Aut2.parse("epsilon(1)")
        with pytest.raises(ClassificationError):
            Aut2.parse("[[2,0],[0,1]]")


class TestInner:
    def test_inner_automorphisms(self):
        assert aut2_is_inner(beta(0))
        assert aut2_is_inner(gamma(-4))
        assert not aut2_is_inner(beta(1))
        assert not aut2_is_inner(alpha(0))
        assert not aut2_is_inner(delta(2))

    @given(pair)
    def test_inner_from_element_matches_conjugation(self, h):
        f = inner_from_element_g2(h)
        assert f.matrix() == Automorphism.inner(G2, h).matrix
        assert aut2_is_inner(f)

    @given(st.sampled_from([Family.BETA, Family.GAMMA]), st.integers(-40, 40))
    def test_conjugator(self, family, k):
        f = Aut2(family=family, a=2 * k)
        assert inner_from_element_g2(conjugator_g2(f)) == f

    def test_conjugator_rejects_outer(self):
        with pytest.raises(ClassificationError):
            conjugator_g2(alpha(2))

    def test_generated_by_alpha_1_squared_and_beta_0(self):
        window = inner_subgroup_window(6)
        expected = {Aut2(family=fam, a=2 * k) for fam in (Family.BETA, Family.GAMMA) for k in range(-3, 4)}
        assert window == expected
        assert all(aut2_is_inner(f) for f in window)


class TestOut:
    def test_four_classes(self):
        classes = {aut2_out_class(Aut2(family=fam, a=a)) for fam in Family for a in range(-5, 6)}
        assert {str(c) for c in classes} == {"[alpha(0)]", "[alpha(1)]", "[beta(0)]", "[beta(1)]"}

    def test_class_examples(self):
        assert aut2_out_class(alpha(3)).representative == alpha(1)
        assert aut2_out_class(gamma(5)).representative == beta(1)
        assert aut2_out_class(delta(4)).representative == alpha(0)
        assert aut2_out_class(gamma(0)).is_identity

    @given(auts)
    def test_witness_reduces_to_representative(self, f):
        found_class, h = out_class_witness_g2(f)
        assert aut2_compose(inner_from_element_g2(h), f) == found_class.representative

    def test_out_is_klein_four_group(self):
        classes = [OutClass2(representative=r) for r in (alpha(0), alpha(1), beta(0), beta(1))]
        identity = OutClass2(representative=beta(0))
        for c in classes:
            assert out_compose_g2(c, c) == identity
            assert out_compose_g2(c, identity) == c
        assert out_compose_g2(classes[0], classes[1]) == classes[3]

    @given(auts, auts)
    def test_out_compose_is_well_defined(self, f, g):
        composed = out_compose_g2(aut2_out_class(f), aut2_out_class(g))
        assert composed == aut2_out_class(aut2_compose(f, g))

    def test_rejects_non_canonical_representative(self):
        with pytest.raises(ValueError):
            OutClass2(representative=gamma(0))


class TestSemidirect:
    def test_variant_for_out_class(self):
        assert variant_for_out_class(aut2_out_class(beta(1))) == "b1"
        assert variant_for_out_class(aut2_out_class(alpha(0))) == "a0"
        assert variant_for_out_class(aut2_out_class(alpha(5))) == "a1"
        assert variant_for_out_class(aut2_out_class(gamma(2))) == "b0"

    def test_g2_semidirect(self):
        tower = g2_semidirect(alpha(3), name="g2_alpha_3")
        assert tower.n == 3
        assert tower.phi(2) == alpha(3).matrix()
        assert tower.mul((0, 0, 1), (0, 1, 0)) == (3, -1, 1)


@pytest.mark.slow
class TestAcceptanceScale:
    def test_kernels_exhaustive(self):
        grid = [(a, b) for a in range(-20, 21) for b in range(-20, 21)]
        for x in grid:
            for y in grid:
                assert g2_mul(x, y) == G2.mul(x, y)
            for m in range(-30, 31):
                assert g2_pow(x, m) == G2.pow(x, m)

    def test_composition_table_exhaustive(self):
        for f_family in Family:
            for g_family in Family:
                for a in range(-6, 7):
                    for b in range(-6, 7):
                        f, g = Aut2(family=f_family, a=a), Aut2(family=g_family, a=b)
                        assert aut2_compose(f, g).matrix() == G2.compose_aut(f.matrix(), g.matrix())

    def test_out_class_constant_on_inner_orbits(self):
        rng = random.Random(34)
        for _ in range(1000):
            f = Aut2(family=rng.choice(list(Family)), a=rng.randint(-20, 20))
            h = (rng.randint(-20, 20), rng.randint(-20, 20))
            assert aut2_out_class(aut2_compose(inner_from_element_g2(h), f)) == aut2_out_class(f)
        representatives = [alpha(0), alpha(1), beta(0), beta(1)]
        assert len({aut2_out_class(r) for r in representatives}) == 4

    def test_inner_subgroup_window_ten(self):
        expected = {Aut2(family=fam, a=2 * k) for fam in (Family.BETA, Family.GAMMA) for k in range(-5, 6)}
        assert inner_subgroup_window(10) == expected
