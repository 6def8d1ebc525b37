"""Divisor classes of a given self-intersection, and orbit ratio sequences.

A class (x, y) with a x^2 + b x y + c y^2 = k lifts to the Pell solution
(z, y) = (2a x + b y, y) of z^2 - d y^2 = 4 a k, and conversely every such
solution with 2a | z - b y descends.  Unit-orbit structure upstairs therefore
organizes the classes downstairs; `represent` returns one class per unit
orbit that meets the divisibility condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import pell
from .errors import (
    NotIsometryError,
    SquareDiscriminantError,
    ZeroClassError,
    ZeroKError,
)
from .lattice import Isometry2, Rank2Lattice, is_isometry


@dataclass(frozen=True)
class DivisorClass:
    x: int
    y: int
    lattice: Rank2Lattice

    @property
    def square(self) -> int:
        return self.lattice.square(self.x, self.y)

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


def _class_order(xy: tuple[int, int]) -> tuple:
    x, y = xy
    return (abs(y), 0 if x > 0 else 1, 0 if y >= 0 else 1, x, y)


def represent(lat: Rank2Lattice, k: int) -> list[DivisorClass]:
    """One class per unit orbit with self-intersection 2k; [] iff none exist.

    Each Pell orbit of z^2 - d y^2 = 4ak is scanned over one full period of
    its residues mod 2a (the unit has determinant 1, so the residue walk is
    purely periodic and one period is exhaustive); integral descents are then
    minimized over |y| within their progression.
    """
    if k == 0:
        raise ZeroKError("k = 0 is decided by has_zero_class")
    if lat.is_square_disc:
        raise SquareDiscriminantError(
            f"square discriminant {lat.d}: use has_zero_class"
        )
    a, b, d = lat.a, lat.b, lat.d
    orbits = pell.general_pell_orbits(d, 4 * a * k)
    mod = 2 * a
    unit = orbits.unit
    out = []
    for rep in orbits.representatives:
        hits, period = pell.residue_hits(
            rep, unit, mod, lambda zu, zv: (zu - b * zv) % mod == 0
        )
        if not hits:
            continue
        step = pell.pell_power(unit, period)
        cands: set[tuple[int, int]] = set()
        for n in hits:
            s = pell.pell_multiply(rep, pell.pell_power(unit, n))
            s = pell._descend(s, step, lambda t: abs(t.v))
            near = [s, pell.pell_multiply(s, step), pell.pell_multiply(s, step.conjugate())]
            low = min(abs(t.v) for t in near)
            for t in near:
                if abs(t.v) == low:
                    cands.add(((t.u - b * t.v) // mod, t.v))
                    cands.add((-(t.u - b * t.v) // mod, -t.v))
        best = min(cands, key=_class_order)
        out.append(DivisorClass(best[0], best[1], lat))
    out.sort(key=lambda c: _class_order((c.x, c.y)))
    return out


def has_zero_class(lat: Rank2Lattice) -> DivisorClass | None:
    """A primitive isotropic class, which exists iff d is a perfect square."""
    if not lat.is_square_disc:
        return None
    s = math.isqrt(lat.d)
    x, y = s - lat.b, 2 * lat.a
    g = math.gcd(x, y)
    witness = DivisorClass(x // g, y // g, lat)
    assert witness.square == 0
    return witness


def has_minus_two_class(lat: Rank2Lattice) -> DivisorClass | None:
    """A class of self-intersection -2, or None; requires non-square d."""
    classes = represent(lat, -1)
    return classes[0] if classes else None


class OrbitStep(NamedTuple):
    x: int
    y: int
    ratio: Fraction | None


def orbit_ratio_sequence(
    lat: Rank2Lattice,
    seed: tuple[int, int],
    m: Isometry2,
    steps: int,
) -> list[OrbitStep]:
    """(x_n, y_n) = M^n seed for n = 0..steps with exact ratios x_n / y_n.

    For a hyperbolic M the ratios converge to a root of a t^2 + b t + c = 0,
    the eigenray of M; which of the two roots depends on iterating M versus
    its inverse.
    """
    if seed == (0, 0):
        raise ZeroClassError("orbit seed must be a nonzero class")
    if not is_isometry(lat, m):
        raise NotIsometryError(f"{m} does not preserve the form of {lat}")
    x, y = seed
    rows = []
    for _ in range(steps + 1):
        rows.append(OrbitStep(x, y, Fraction(x, y) if y else None))
        x, y = m.apply(x, y)
    return rows
