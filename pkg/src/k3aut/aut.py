"""Classification of the automorphism group of a rank-2 even hyperbolic
lattice: finite, infinite cyclic, or infinite dihedral.

Every infinite-order isometry in O+(L) is constrained to the one-parameter
family

    gamma = -(a/c) beta,  delta = alpha - (b/c) beta,
    alpha^2 - (b/c) alpha beta + (a/c) beta^2 = 1,

whose integral points correspond, via w = 2 c alpha - b beta, to solutions
of w^2 - d beta^2 = 4 c^2 with divisibility side conditions.  The member
with the smallest spectral radius > 1 generates all the others up to sign
and inversion; its minimal power acting as +-id on the discriminant group
generates the infinite part of the automorphism group.  Anti-symplectic
involutions live on the same conic with the trace-zero matrix assembly
(delta = -alpha); when any survive the discriminant and cone filters the
group is infinite dihedral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Union

from . import pell
from .errors import (
    NoHyperbolicIsometryError,
    NotRealizableError,
    SquareDiscriminantError,
)
from .divisors import DivisorClass, has_minus_two_class, has_zero_class
from .lattice import (
    Isometry2,
    Rank2Lattice,
    disc_action,
    disc_action_oracle,
    make_lattice,
    preserves_positive_cone,
)


def entropy(m: Isometry2) -> float:
    """log of the spectral radius of a 2x2 integer matrix of determinant +-1.

    Zero exactly when the eigenvalues lie on the unit circle: |trace| <= 2
    for determinant +1, trace = 0 for determinant -1.
    """
    det = m.det
    t = abs(m.trace)
    if det == 1:
        if t <= 2:
            return 0.0
        disc = t * t - 4
    elif det == -1:
        if t == 0:
            return 0.0
        disc = t * t + 4
    else:
        raise ValueError(f"determinant must be +-1, got {det}")
    if t < 10**8:
        return math.log((t + math.sqrt(disc)) / 2)
    # (|t| + sqrt(t^2 -+ 4))/2 = |t| (1 + O(1/t^2)); the dropped term is
    # below 1e-16 here, and math.log takes big ints exactly
    return math.log(t)


def _conic_orbits(lat: Rank2Lattice) -> pell.OrbitSet:
    return pell.general_pell_orbits(lat.d, 4 * lat.c * lat.c)


def _power_matrix(lat: Rank2Lattice, w: int, beta: int) -> Isometry2 | None:
    """Determinant +1 family member from a conic point, or None if the
    divisibility side conditions fail."""
    a, b, c = lat.a, lat.b, lat.c
    if (w + b * beta) % (2 * c) or (a * beta) % c or (b * beta) % c:
        return None
    alpha = (w + b * beta) // (2 * c)
    return Isometry2(alpha, beta, -(a * beta) // c, alpha - (b * beta) // c)


def _reflection_matrix(lat: Rank2Lattice, w: int, beta: int) -> Isometry2 | None:
    """Trace-zero determinant -1 family member from a conic point, or None."""
    a, b, c = lat.a, lat.b, lat.c
    if (w + b * beta) % (2 * c):
        return None
    alpha = (w + b * beta) // (2 * c)
    if (a * beta - b * alpha) % c:
        return None
    return Isometry2(alpha, beta, (a * beta - b * alpha) // c, -alpha)


def minimal_hyperbolic(lat: Rank2Lattice) -> Isometry2:
    """The integral det +1 family member with the smallest spectral radius
    greater than 1, normalized to positive trace and beta > 0.

    Its trace is w/c for the conic point (w, beta), so minimizing the radius
    means minimizing |w| over integral nontrivial points; |w| is unimodal
    along each unit orbit, so a descent per residue progression is exact.
    """
    if lat.is_square_disc:
        raise SquareDiscriminantError(
            f"square discriminant {lat.d}: the lattice has isotropic classes"
        )
    a, b, c = lat.a, lat.b, lat.c
    orbits = _conic_orbits(lat)
    mod = 2 * abs(c)

    def integral(wr: int, br: int) -> bool:
        return (
            (wr + b * br) % (2 * c) == 0
            and (a * br) % c == 0
            and (b * br) % c == 0
        )

    best: tuple[tuple, Isometry2] | None = None
    for rep in orbits.representatives:
        hits, period = pell.residue_hits(rep, orbits.unit, mod, integral)
        if not hits:
            continue
        step = pell.pell_power(orbits.unit, period)
        for n in hits:
            s = pell.pell_multiply(rep, pell.pell_power(orbits.unit, n))
            s = pell._descend(s, step, lambda t: abs(t.u))
            near = [s, pell.pell_multiply(s, step), pell.pell_multiply(s, step.conjugate())]
            low = min(abs(t.u) for t in near)
            for t in near:
                if abs(t.u) != low or t.v == 0:
                    continue
                w, beta = t.u, t.v
                if (w > 0) != (c > 0):  # positive trace means sign(w) = sign(c)
                    w, beta = -w, -beta
                key = (abs(w), 0 if beta > 0 else 1)
                if best is None or key < best[0]:
                    mat = _power_matrix(lat, w, beta)
                    assert mat is not None
                    best = (key, mat)
    if best is None:
        raise NoHyperbolicIsometryError(
            f"no hyperbolic family member found for {lat}"
        )
    return best[1]


@dataclass(frozen=True)
class GeneratorReport:
    """Generator of the infinite part of the automorphism group.

    generator = base ** power, where base is the minimal hyperbolic family
    member and power is the least exponent acting as +-id on A(L); epsilon
    is that sign (+1 extends symplectically, -1 anti-symplectically).
    pell_data is the conic point (w, beta) behind base, of norm 4c^2 (the
    norm-4 fundamental solution whenever |c| = 1).
    """

    base: Isometry2
    power: int
    epsilon: int
    generator: Isometry2
    entropy: float
    pell_data: pell.PellSolution


def infinite_generator(lat: Rank2Lattice) -> GeneratorReport:
    """Least power of the minimal hyperbolic isometry acting as +-id on the
    discriminant group.  The induced action on A(L) has finite order, which
    caps the search, so termination is guaranteed."""
    base = minimal_hyperbolic(lat)
    bound = disc_action_oracle(lat, base).order()
    cur = base
    for k in range(1, bound + 1):
        eps = disc_action(lat, cur).epsilon
        if eps is not None:
            w = 2 * lat.c * base.alpha - lat.b * base.beta
            return GeneratorReport(
                base=base,
                power=k,
                epsilon=eps,
                generator=cur,
                entropy=entropy(cur),
                pell_data=pell.PellSolution(w, base.beta, lat.d),
            )
        cur = cur @ base
    raise AssertionError("induced action of order n must land in +-id by n")


@dataclass(frozen=True)
class InvolutionPair:
    """Adjacent anti-symplectic involutions generating the dihedral group;
    sigma composed with tau is the infinite-part generator."""

    sigma: Isometry2
    tau: Isometry2

    def __post_init__(self) -> None:
        for m in (self.sigma, self.tau):
            if m.trace != 0 or m.det != -1:
                raise ValueError(f"{m} is not a trace-zero determinant -1 involution")


def _reflection_key(m: Isometry2) -> tuple:
    return (abs(m.beta), 0 if m.beta >= 0 else 1, 0 if m.alpha > 0 else 1, m.alpha, m.beta)


def _reflection_seed(lat: Rank2Lattice) -> Isometry2 | None:
    """Some integral trace-zero family member, ignoring the discriminant and
    cone filters; None when the lattice has none at all."""
    a, b, c = lat.a, lat.b, lat.c
    orbits = _conic_orbits(lat)
    mod = 2 * c * c

    def integral(wr: int, br: int) -> bool:
        return (
            (wr + b * br) % (2 * c) == 0
            and (b * wr + (b * b - 2 * a * c) * br) % (2 * c * c) == 0
        )

    best = None
    for rep in orbits.representatives:
        hits, period = pell.residue_hits(rep, orbits.unit, mod, integral)
        if not hits:
            continue
        step = pell.pell_power(orbits.unit, period)
        for n in hits:
            s = pell.pell_multiply(rep, pell.pell_power(orbits.unit, n))
            s = pell._descend(s, step, lambda t: abs(t.v))
            mat = _reflection_matrix(lat, s.u, s.v)
            assert mat is not None
            if best is None or _reflection_key(mat) < _reflection_key(best):
                best = mat
    return best


def involutions(lat: Rank2Lattice, report: GeneratorReport) -> list[Isometry2]:
    """Anti-symplectic cone-preserving involutions, as the adjacent pair
    [sigma, tau] with sigma @ tau == report.generator; [] if none exist.

    Every integral trace-zero family member is seed @ base^s up to sign, so
    the search solves for s on the discriminant group first (cheap modular
    arithmetic) and only then builds candidate matrices.  Validity is stable
    under composition with the generator, which makes the |beta| descent to
    the adjacent pair safe.
    """
    seed = _reflection_seed(lat)
    if seed is None:
        return []
    base, g = report.base, report.generator
    t_base = disc_action_oracle(lat, base)
    t_seed = disc_action_oracle(lat, seed)
    order = t_base.order()
    valid = []
    cur = t_seed
    for s in range(order):
        if cur.is_identity(1) or cur.is_identity(-1):
            for shift in (s, s + order):
                m = seed @ base**shift
                for cand in (m, -m):
                    if (
                        disc_action(lat, cand).epsilon == -1
                        and preserves_positive_cone(lat, cand)
                    ):
                        valid.append(cand)
        cur = cur.compose(t_base)
    if not valid:
        return []
    sigma = min(valid, key=_reflection_key)
    # composing with g preserves validity exactly, so descend |beta|
    while True:
        fwd, bwd = sigma @ g, sigma @ g.inverse()
        if abs(fwd.beta) < abs(sigma.beta):
            sigma = fwd
        elif abs(bwd.beta) < abs(sigma.beta):
            sigma = bwd
        else:
            break
    plateau = {sigma}
    for nb in (sigma @ g, sigma @ g.inverse()):
        if abs(nb.beta) == abs(sigma.beta):
            plateau.add(nb)
    sigma = min(plateau, key=_reflection_key)
    tau = min((sigma @ g, sigma @ g.inverse()), key=_reflection_key)
    first, second = (sigma, tau) if sigma @ tau == g else (tau, sigma)
    assert first @ second == g
    return [first, second]


@dataclass(frozen=True)
class Finite:
    """Finite automorphism group, witnessed by an isotropic class (square
    discriminant) or a class of self-intersection -2."""

    witness: DivisorClass
    reason: str  # "isotropic-class" or "minus-two-class"
    variant: ClassVar[str] = "finite"


@dataclass(frozen=True)
class InfiniteCyclic:
    report: GeneratorReport
    variant: ClassVar[str] = "cyclic"


@dataclass(frozen=True)
class InfiniteDihedral:
    report: GeneratorReport
    pair: InvolutionPair
    variant: ClassVar[str] = "dihedral"


AutClassification = Union[Finite, InfiniteCyclic, InfiniteDihedral]


def classify(lat: Rank2Lattice) -> AutClassification:
    """Full trichotomy for the automorphism group of the lattice."""
    zero = has_zero_class(lat)
    if zero is not None:
        return Finite(zero, "isotropic-class")
    minus_two = has_minus_two_class(lat)
    if minus_two is not None:
        return Finite(minus_two, "minus-two-class")
    report = infinite_generator(lat)
    invs = involutions(lat, report)
    if invs:
        return InfiniteDihedral(report, InvolutionPair(invs[0], invs[1]))
    return InfiniteCyclic(report)


@dataclass(frozen=True)
class DegenerateQuartic:
    """Degree/genus pair on the discriminant-zero boundary: the surface
    exists but its rank-2 form is degenerate and the automorphism group is
    finite."""

    deg: int
    genus: int
    variant: ClassVar[str] = "degenerate"


def lattice_from_quartic(deg: int, genus: int) -> Rank2Lattice | DegenerateQuartic:
    """Picard form ((4, deg), (deg, 2 genus - 2)) of a quartic surface
    containing a smooth curve of this degree and genus.

    Realizable exactly when 8 genus < deg^2 with (deg, genus) != (5, 3), or
    on the boundary 8 (genus - 1) = deg^2, where the form degenerates and
    the automorphism group is finite.
    """
    if deg < 1 or genus < 0:
        raise NotRealizableError(f"degree {deg} and genus {genus} out of range")
    if 8 * (genus - 1) == deg * deg:
        return DegenerateQuartic(deg, genus)
    if 8 * genus < deg * deg and (deg, genus) != (5, 3):
        return make_lattice(2, deg, genus - 1)
    raise NotRealizableError(
        f"no smooth curve of degree {deg} and genus {genus} on a quartic surface"
    )


def relation_isometries(lat: Rank2Lattice, radius_power: int) -> list[Isometry2]:
    """All nontrivial integral det +1 family members with spectral radius at
    most rho(base)^radius_power, both signs and both orientations.

    rho^k + rho^-k is exactly the trace of base^k, so the radius cut is an
    exact integer comparison |w| <= |c| * trace(base^radius_power).
    """
    base = minimal_hyperbolic(lat)
    a, b, c = lat.a, lat.b, lat.c
    wmax = abs(c) * (base**radius_power).trace
    orbits = _conic_orbits(lat)
    mod = 2 * abs(c)

    def integral(wr: int, br: int) -> bool:
        return (
            (wr + b * br) % (2 * c) == 0
            and (a * br) % c == 0
            and (b * br) % c == 0
        )

    found = set()
    for rep in orbits.representatives:
        hits, period = pell.residue_hits(rep, orbits.unit, mod, integral)
        if not hits:
            continue
        step = pell.pell_power(orbits.unit, period)
        for n in hits:
            s0 = pell.pell_multiply(rep, pell.pell_power(orbits.unit, n))
            s0 = pell._descend(s0, step, lambda t: abs(t.u))
            for direction in (step, step.conjugate()):
                s = s0 if direction is step else pell.pell_multiply(s0, direction)
                while abs(s.u) <= wmax:
                    if s.v != 0:
                        found.add((s.u, s.v))
                        found.add((-s.u, -s.v))
                    s = pell.pell_multiply(s, direction)
    out = []
    for w, beta in found:
        mat = _power_matrix(lat, w, beta)
        assert mat is not None
        out.append(mat)
    return out
