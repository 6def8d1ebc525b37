import math
from fractions import Fraction

import pytest

from k3aut import divisors
from k3aut.divisors import (
    has_minus_two_class,
    has_zero_class,
    orbit_ratio_sequence,
    represent,
)
from k3aut.errors import SquareDiscriminantError, ZeroClassError, ZeroKError
from k3aut.lattice import Isometry2, make_lattice

from oracles import brute_classes, brute_classes_fast


def M(rows):
    return Isometry2.from_rows(rows)


class TestRepresent:
    def test_square_of_basis_vector(self):
        lat = make_lattice(1, 4, 1)
        classes = represent(lat, 1)
        assert (1, 0) in {(c.x, c.y) for c in classes}
        for c in classes:
            assert c.square == 2

    def test_no_minus_two_on_2_6_2(self):
        lat = make_lattice(2, 6, 2)
        assert represent(lat, -1) == []

    def test_minus_two_on_1_3_1(self):
        # brute force confirms (1, -1) has square -2
        assert (1, -1) in brute_classes(1, 3, 1, -1, 3)
        lat = make_lattice(1, 3, 1)
        classes = represent(lat, -1)
        assert (1, -1) in {(c.x, c.y) for c in classes}

    def test_zero_k_rejected(self):
        with pytest.raises(ZeroKError):
            represent(make_lattice(1, 4, 1), 0)

    def test_square_discriminant_rejected(self):
        with pytest.raises(SquareDiscriminantError):
            represent(make_lattice(1, 3, 2), 1)

    @pytest.mark.parametrize(
        "abc",
        [(1, 3, 1), (1, 4, 1), (2, 6, 2), (2, 8, 2), (1, 0, -2), (3, 1, -3), (1, 5, 2)],
    )
    @pytest.mark.parametrize("k", [-3, -2, -1, 1, 2, 3])
    def test_emptiness_matches_brute_force(self, abc, k):
        a, b, c = abc
        d = b * b - 4 * a * c
        if d <= 0 or math.isqrt(d) ** 2 == d:
            pytest.skip("not a valid non-square lattice")
        lat = make_lattice(a, b, c)
        got = represent(lat, k)
        brute = brute_classes_fast(lat.a, lat.b, lat.c, k, 120)
        assert bool(got) == bool(brute)
        # every returned class really lies on the brute-force list region
        for cls in got:
            assert lat.square(cls.x, cls.y) == 2 * k

    def test_classes_cover_all_small_solutions(self):
        # every small solution must be reachable from some representative by
        # the unit action upstairs; spot-check via squares only
        lat = make_lattice(1, 3, 1)
        for k in (-1, 1, 2):
            got = {(c.x, c.y) for c in represent(lat, k)}
            if got:
                for x, y in brute_classes(1, 3, 1, k, 8):
                    assert lat.square(x, y) == 2 * k


class TestZeroClass:
    def test_square_discriminant_has_witness(self):
        lat = make_lattice(1, 3, 2)  # d = 1
        w = has_zero_class(lat)
        assert w is not None
        assert (w.x, w.y) == (-1, 1)
        assert w.square == 0

    def test_non_square_has_none(self):
        assert has_zero_class(make_lattice(2, 6, 2)) is None
        assert has_zero_class(make_lattice(1, 4, 1)) is None

    def test_degenerate_direction_when_c_zero(self):
        lat = make_lattice(1, 2, 0)  # d = 4, isotropic (0, 1)
        w = has_zero_class(lat)
        assert w is not None and w.square == 0

    @pytest.mark.parametrize("abc", [(1, 3, 2), (1, 5, 4), (2, 6, 2), (1, 4, 1), (3, 5, 2)])
    def test_iff_square(self, abc):
        lat = make_lattice(*abc)
        assert (has_zero_class(lat) is not None) == lat.is_square_disc


class TestMinusTwoClass:
    def test_examples(self):
        w = has_minus_two_class(make_lattice(1, 3, 1))
        assert w is not None and w.square == -2
        assert has_minus_two_class(make_lattice(2, 6, 2)) is None
        assert has_minus_two_class(make_lattice(2, 8, 2)) is None


class TestOrbitRatioSequence:
    def test_frozen_iteration(self):
        lat = make_lattice(1, 4, 1)
        h = M([[4, 1], [-1, 0]])
        steps = orbit_ratio_sequence(lat, (1, 0), h, 3)
        assert [(s.x, s.y) for s in steps] == [(1, 0), (4, -1), (15, -4), (56, -15)]
        assert steps[0].ratio is None
        assert steps[3].ratio == Fraction(56, -15)

    def test_limit_is_quadratic_root(self):
        lat = make_lattice(1, 4, 1)
        h = M([[4, 1], [-1, 0]])
        last = orbit_ratio_sequence(lat, (1, 0), h, 25)[-1]
        r = float(last.ratio)
        assert abs(r - (-2 - math.sqrt(3))) < 1e-12
        assert abs(r * r + 4 * r + 1) < 1e-9

    def test_squares_constant_along_orbit(self):
        lat = make_lattice(2, 6, 2)
        h3 = M([[21, 8], [-8, -3]])
        steps = orbit_ratio_sequence(lat, (1, 0), h3, 10)
        assert {lat.square(s.x, s.y) for s in steps} == {4}
        last = float(steps[-1].ratio)
        roots = [(-3 + math.sqrt(5)) / 2, (-3 - math.sqrt(5)) / 2]
        assert min(abs(last - r) for r in roots) < 1e-9

    def test_zero_seed_rejected(self):
        lat = make_lattice(1, 4, 1)
        with pytest.raises(ZeroClassError):
            orbit_ratio_sequence(lat, (0, 0), M([[4, 1], [-1, 0]]), 3)

    def test_single_row_for_zero_steps(self):
        lat = make_lattice(1, 4, 1)
        steps = orbit_ratio_sequence(lat, (2, 1), M([[4, 1], [-1, 0]]), 0)
        assert len(steps) == 1 and (steps[0].x, steps[0].y) == (2, 1)

    def test_residual_contracts_at_squared_radius(self):
        # |r_n - r*| shrinks by rho^-2 per step, rho = (2 + sqrt 3)
        lat = make_lattice(1, 4, 1)
        h = M([[4, 1], [-1, 0]])
        steps = orbit_ratio_sequence(lat, (1, 0), h, 12)
        rstar = -2 - math.sqrt(3)
        errs = [abs(float(s.ratio) - rstar) for s in steps[1:]]
        target = (2 + math.sqrt(3)) ** -2
        for n in range(5, len(errs) - 1):
            assert abs(errs[n + 1] / errs[n] - target) / target < 0.05
