import math
import random

import pytest

from k3aut import aut
from k3aut.aut import (
    DegenerateQuartic,
    Finite,
    InfiniteCyclic,
    InfiniteDihedral,
    classify,
    entropy,
    infinite_generator,
    involutions,
    lattice_from_quartic,
    minimal_hyperbolic,
    relation_isometries,
)
from k3aut.errors import NotRealizableError, SquareDiscriminantError
from k3aut.lattice import (
    Isometry2,
    disc_action,
    identity,
    is_isometry,
    make_lattice,
    preserves_positive_cone,
)


def M(rows):
    return Isometry2.from_rows(rows)


class TestMinimalHyperbolic:
    def test_golden_matrices(self):
        assert minimal_hyperbolic(make_lattice(1, 4, 1)) == M([[4, 1], [-1, 0]])
        assert minimal_hyperbolic(make_lattice(2, 6, 2)) == M([[3, 1], [-1, 0]])
        assert minimal_hyperbolic(make_lattice(1, 0, -3)) == M([[2, 3], [1, 2]])

    def test_contract(self):
        for abc in [(1, 4, 1), (2, 6, 2), (1, 0, -3), (3, 5, -1), (1, 5, 3)]:
            lat = make_lattice(*abc)
            h = minimal_hyperbolic(lat)
            assert is_isometry(lat, h)
            assert h.det == 1
            assert h.trace > 2
            assert h.beta > 0
            assert preserves_positive_cone(lat, h)

    def test_square_discriminant_rejected(self):
        with pytest.raises(SquareDiscriminantError):
            minimal_hyperbolic(make_lattice(1, 3, 2))

    def test_family_recurrence(self):
        # first rows of successive powers obey the bilinear recurrence
        # alpha_{k+1} = alpha_1 alpha_k - (a/c) beta_1 beta_k,
        # beta_{k+1} = alpha_1 beta_k + alpha_k beta_1 - (b/c) beta_1 beta_k
        for abc in [(1, 4, 1), (2, 6, 2), (1, 0, -3)]:
            lat = make_lattice(*abc)
            a, b, c = lat.a, lat.b, lat.c
            h = minimal_hyperbolic(lat)
            a1, b1 = h.alpha, h.beta
            cur = h
            for _ in range(5):
                nxt = cur @ h
                assert c * nxt.alpha == c * a1 * cur.alpha - a * b1 * cur.beta
                assert c * nxt.beta == c * a1 * cur.beta + c * cur.alpha * b1 - b * b1 * cur.beta
                cur = nxt

    def test_relation_identities_scaled_by_c(self):
        for abc in [(1, 4, 1), (2, 6, 2), (1, 0, -3), (2, 10, 2)]:
            lat = make_lattice(*abc)
            a, b, c = lat.a, lat.b, lat.c
            for m in (minimal_hyperbolic(lat), infinite_generator(lat).generator):
                assert c * m.gamma == -a * m.beta
                assert c * m.delta == c * m.alpha - b * m.beta
                assert c * m.alpha**2 - b * m.alpha * m.beta + a * m.beta**2 == c

    def test_opposite_trace_reflects_cone(self):
        for abc in [(1, 4, 1), (2, 6, 2), (1, 0, -3)]:
            lat = make_lattice(*abc)
            h = minimal_hyperbolic(lat)
            assert not preserves_positive_cone(lat, -h)


class TestPowerClosure:
    @pytest.mark.parametrize("abc", [(1, 4, 1), (2, 6, 2), (1, 0, -3), (1, 5, 3)])
    def test_family_members_are_powers(self, abc):
        lat = make_lattice(*abc)
        h = minimal_hyperbolic(lat)
        got = {m.rows() for m in relation_isometries(lat, 5)}
        want = set()
        for j in list(range(1, 6)) + list(range(-5, 0)):
            want.add((h**j).rows())
            want.add((-(h**j)).rows())
        assert got == want

    def test_positive_chamber_is_exactly_the_powers(self, subtests=None):
        lat = make_lattice(2, 6, 2)
        h = minimal_hyperbolic(lat)
        chamber = sorted(
            (m.rows() for m in relation_isometries(lat, 5) if m.trace > 0 and m.beta > 0)
        )
        assert chamber == sorted((h**j).rows() for j in range(1, 6))


class TestGenerator:
    def test_example_family(self):
        rep = infinite_generator(make_lattice(2, 8, 2))
        assert rep.power == 4 and rep.epsilon == 1
        rep = infinite_generator(make_lattice(2, 10, 2))
        assert rep.power == 6 and rep.epsilon == 1
        rep = infinite_generator(make_lattice(2, 6, 2))
        assert rep.power == 3 and rep.epsilon == -1
        assert rep.generator == M([[21, 8], [-8, -3]])

    def test_generator_is_power_of_base(self):
        rep = infinite_generator(make_lattice(1, 4, 1))
        assert rep.generator == rep.base**rep.power
        assert rep.power == 2 and rep.epsilon == 1

    def test_intermediate_powers_act_as_neither(self):
        for abc in [(2, 8, 2), (2, 10, 2), (1, 4, 1)]:
            lat = make_lattice(*abc)
            rep = infinite_generator(lat)
            for j in range(1, rep.power):
                assert disc_action(lat, rep.base**j).epsilon is None
                assert disc_action(lat, -(rep.base**j)).epsilon is None

    def test_pell_data_matches_norm4_fundamental_when_c_is_1(self):
        from k3aut.pell import pell4_fundamental

        for abc in [(1, 4, 1), (1, 5, 1), (1, 7, 1)]:
            lat = make_lattice(*abc)
            rep = infinite_generator(lat)
            s4 = pell4_fundamental(lat.d)
            assert (rep.base.trace, rep.base.beta) == (s4.u, s4.v)
            assert rep.pell_data.m == 4 * lat.c * lat.c

    def test_entropy_consistency(self):
        rep = infinite_generator(make_lattice(2, 6, 2))
        assert abs(rep.entropy - rep.power * entropy(rep.base)) < 1e-12


class TestInvolutions:
    def test_golden_pair(self):
        lat = make_lattice(1, 4, 1)
        rep = infinite_generator(lat)
        invs = involutions(lat, rep)
        assert [m.rows() for m in invs] == [((1, 4), (0, -1)), ((-1, 0), (4, 1))]
        sigma, tau = invs
        assert sigma @ tau == rep.generator

    def test_golden_pair_family(self):
        for n in (5, 6, 7):
            lat = make_lattice(1, n, 1)
            rep = infinite_generator(lat)
            sigma, tau = involutions(lat, rep)
            assert sigma == M([[1, n], [0, -1]])
            assert tau == M([[-1, 0], [n, 1]])

    def test_empty_for_cyclic_family(self):
        for n in (3, 4, 5, 8):
            lat = make_lattice(2, 2 * n, 2)
            rep = infinite_generator(lat)
            assert involutions(lat, rep) == []

    def test_involution_algebra(self):
        lat = make_lattice(1, 4, 1)
        rep = infinite_generator(lat)
        for m in involutions(lat, rep):
            assert m.trace == 0 and m.det == -1
            assert m @ m == identity()
            assert disc_action(lat, m).epsilon == -1
            assert preserves_positive_cone(lat, m)
            # reflections invert the base isometry
            assert m @ rep.base @ m == rep.base.inverse()


class TestClassify:
    def test_examples(self):
        result = classify(make_lattice(2, 6, 2))
        assert isinstance(result, InfiniteCyclic)
        assert result.report.generator == M([[21, 8], [-8, -3]])
        assert result.report.epsilon == -1

        result = classify(make_lattice(1, 4, 1))
        assert isinstance(result, InfiniteDihedral)
        assert result.pair.sigma @ result.pair.tau == result.report.generator
        assert result.report.generator == result.report.base**2
        assert disc_action(make_lattice(1, 4, 1), result.report.generator).epsilon == 1

        result = classify(make_lattice(1, 3, 1))
        assert isinstance(result, Finite)
        assert (result.witness.x, result.witness.y) == (1, -1)
        assert result.witness.square == -2

    def test_square_discriminant_is_finite(self):
        result = classify(make_lattice(1, 3, 2))
        assert isinstance(result, Finite)
        assert result.reason == "isotropic-class"
        assert result.witness.square == 0

    def test_variant_tags(self):
        assert classify(make_lattice(2, 6, 2)).variant == "cyclic"
        assert classify(make_lattice(1, 4, 1)).variant == "dihedral"
        assert classify(make_lattice(1, 3, 1)).variant == "finite"

    def test_dihedral_coherence_random_lattices(self):
        rng = random.Random(7)
        found_dihedral = 0
        tried = 0
        while tried < 60:
            a = rng.randint(1, 4)
            b = rng.randint(-8, 8)
            c = rng.randint(-4, 4)
            d = b * b - 4 * a * c
            if d <= 0 or math.isqrt(d) ** 2 == d:
                continue
            tried += 1
            lat = make_lattice(a, b, c)
            result = classify(lat)
            if isinstance(result, InfiniteDihedral):
                found_dihedral += 1
                g = result.report.generator
                sigma, tau = result.pair.sigma, result.pair.tau
                assert sigma @ tau == g
                assert sigma @ g @ sigma == g.inverse()
        assert found_dihedral >= 1


class TestEntropy:
    def test_involutions_have_zero_entropy(self):
        assert entropy(M([[1, 4], [0, -1]])) == 0.0
        assert entropy(M([[0, 1], [1, 0]])) == 0.0

    def test_identity_and_finite_order(self):
        assert entropy(identity()) == 0.0
        assert entropy(-identity()) == 0.0
        assert entropy(M([[0, -1], [1, 0]])) == 0.0

    def test_golden_values(self):
        h = M([[4, 1], [-1, 0]])
        assert abs(entropy(h) - math.log(2 + math.sqrt(3))) < 1e-12
        assert abs(entropy(h @ h) - 2 * math.log(2 + math.sqrt(3))) < 1e-12

    def test_large_trace_stays_accurate(self):
        h = M([[4, 1], [-1, 0]])
        k = 40
        assert abs(entropy(h**k) - k * entropy(h)) < 1e-9

    def test_det_minus_one_infinite_order(self):
        g = M([[1, 1], [1, 0]])  # det -1, trace 1: radius golden ratio
        assert g.det == -1
        expected = math.log((1 + math.sqrt(5)) / 2)
        assert abs(entropy(g) - expected) < 1e-12


class TestQuarticBuilder:
    def test_example_lattice(self):
        lat = lattice_from_quartic(6, 3)
        assert (lat.a, lat.b, lat.c) == (2, 6, 2)
        assert classify(lat).variant == "cyclic"

    def test_excluded_pair(self):
        with pytest.raises(NotRealizableError):
            lattice_from_quartic(5, 3)

    def test_degenerate_boundary(self):
        report = lattice_from_quartic(4, 3)
        assert isinstance(report, DegenerateQuartic)
        assert report.variant == "degenerate"

    def test_out_of_range(self):
        with pytest.raises(NotRealizableError):
            lattice_from_quartic(3, 2)  # 8g > d^2 and not on the boundary
        with pytest.raises(NotRealizableError):
            lattice_from_quartic(0, 1)
