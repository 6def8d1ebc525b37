"""Exact solvers for Pell equations u^2 - d v^2 = m.

Everything here is plain Python integer arithmetic.  Fundamental solutions
grow exponentially in sqrt(d), so no floating point is used anywhere in the
solvers; decimal rendering is left to callers.

The central objects: fundamental solutions of u^2 - d v^2 = 1 and = 4
(continued fractions), multiplication of solutions in Z[sqrt(d)], and the
decomposition of the full solution set of u^2 - d v^2 = m into finitely many
orbits under the unit group {+-rho^n}, rho = u1 + v1 sqrt(d).

Orbit representatives are found with the PQa continued-fraction expansion of
(z + sqrt(d))/|m| over the square roots z of d mod |m|, with square divisors
f^2 | m split off first.  This finds one member per solution class without
ever enumerating up to the fundamental unit, whose size is exponential in
sqrt(d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .errors import (
    DomainError,
    MismatchedDError,
    OnlyTrivialError,
    SquareInputError,
    ZeroMError,
)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _check_d(d: int) -> None:
    if d <= 0:
        raise DomainError(f"d must be a positive integer, got {d}")


@dataclass(frozen=True)
class PellSolution:
    """A point (u, v) on u^2 - d v^2 = m; the norm m is derived, never stale."""

    u: int
    v: int
    d: int
    m: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", self.u * self.u - self.d * self.v * self.v)

    def conjugate(self) -> "PellSolution":
        return PellSolution(self.u, -self.v, self.d)

    def __neg__(self) -> "PellSolution":
        return PellSolution(-self.u, -self.v, self.d)

    def __str__(self) -> str:
        return f"({self.u}, {self.v})"


def pell_multiply(s: PellSolution, t: PellSolution) -> PellSolution:
    """Coefficients of (s.u + s.v sqrt(d)) (t.u + t.v sqrt(d)); norms multiply."""
    if s.d != t.d:
        raise MismatchedDError(f"cannot multiply solutions over d={s.d} and d={t.d}")
    return PellSolution(s.u * t.u + s.d * s.v * t.v, s.u * t.v + s.v * t.u, s.d)


def pell_power(s: PellSolution, n: int) -> PellSolution:
    """s raised to the n-th power in Z[sqrt(d)]; n < 0 needs norm +-1."""
    if n < 0:
        if s.m == 1:
            s = s.conjugate()
        elif s.m == -1:
            s = -s.conjugate()
        else:
            raise DomainError(f"negative powers need a unit, norm is {s.m}")
        n = -n
    result = PellSolution(1, 0, s.d)
    base = s
    while n:
        if n & 1:
            result = pell_multiply(result, base)
        n >>= 1
        if n:
            base = pell_multiply(base, base)
    return result


def cf_sqrt_period(d: int) -> tuple[int, list[int]]:
    """Continued fraction sqrt(d) = [a0; period repeating], minimal period."""
    _check_d(d)
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        raise SquareInputError(f"{d} is a perfect square")
    period = []
    m, q, a = 0, 1, a0
    while True:
        m = a * q - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        period.append(a)
        if q == 1:
            return a0, period


def pell1_fundamental(d: int) -> PellSolution:
    """Smallest solution of u^2 - d v^2 = 1 with u, v > 0."""
    _check_d(d)
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        raise OnlyTrivialError(
            f"d={d} is a perfect square; the only solutions are (+-1, 0)"
        )
    # convergents of sqrt(d); the fundamental solution appears within two
    # periods of the expansion
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    m, qq, a = 0, 1, a0
    while p * p - d * q * q != 1:
        m = a * qq - m
        qq = (d - m * m) // qq
        a = (a0 + m) // qq
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return PellSolution(p, q, d)


def negative_pell_fundamental(d: int) -> PellSolution | None:
    """Smallest positive solution of u^2 - d v^2 = -1, or None if unsolvable."""
    _check_d(d)
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        return None
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    m, qq, a = 0, 1, a0
    while True:
        norm = p * p - d * q * q
        if norm == -1:
            return PellSolution(p, q, d)
        if norm == 1:
            # reached the positive fundamental unit first: -1 is unsolvable
            return None
        m = a * qq - m
        qq = (d - m * m) // qq
        a = (a0 + m) // qq
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q


def _sign_in_reals(s: PellSolution) -> int:
    """Sign of u + v sqrt(d) as a real number (never zero: norm != 0)."""
    if s.u >= 0 and s.v >= 0:
        return 1
    if s.u <= 0 and s.v <= 0:
        return -1
    # mixed signs: the larger of u^2 and d v^2 decides
    if s.u * s.u > s.d * s.v * s.v:
        return 1 if s.u > 0 else -1
    return 1 if s.v > 0 else -1


def _descend(s: PellSolution, step: PellSolution, size: Callable[[PellSolution], int]) -> PellSolution:
    """Walk the orbit of s under multiplication by step to a local (= global,
    by unimodality) minimum of the size function."""
    inv = step.conjugate() if step.m == 1 else -step.conjugate()
    while True:
        fwd = pell_multiply(s, step)
        bwd = pell_multiply(s, inv)
        if size(fwd) < size(s):
            s = fwd
        elif size(bwd) < size(s):
            s = bwd
        else:
            return s


def _rep_order(s: PellSolution) -> tuple:
    # minimal |v| first; ties broken by u > 0, then v >= 0
    return (abs(s.v), 0 if s.u > 0 else 1, 0 if s.v >= 0 else 1, s.u, s.v)


def canonical_representative(s: PellSolution, unit: PellSolution) -> PellSolution:
    """The orbit element of s minimizing |v|, ties broken by u > 0 then v >= 0.

    |v| along an orbit is unimodal, so steepest descent finds the minimum and
    the plateau around it has width at most two.
    """
    s = _descend(s, unit, lambda t: abs(t.v))
    cands = {(s.u, s.v), (-s.u, -s.v)}
    for nb in (pell_multiply(s, unit), pell_multiply(s, unit.conjugate())):
        if abs(nb.v) == abs(s.v):
            cands.add((nb.u, nb.v))
            cands.add((-nb.u, -nb.v))
    best = min((PellSolution(u, v, s.d) for u, v in cands), key=_rep_order)
    return best


def same_orbit(s: PellSolution, t: PellSolution, unit: PellSolution) -> bool:
    """True iff s and t differ by a unit factor +-rho^n."""
    if s.d != t.d or s.m != t.m:
        return False
    return canonical_representative(s, unit) == canonical_representative(t, unit)


def _pqa_norm_hits(d: int, z: int, q0: int, target: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Expand (z + sqrt(d))/q0 by PQa and collect convergent pairs (G, B)
    with G^2 - d B^2 = +-target.  Runs through the preperiod plus one full
    period of the expansion (states (P, Q) repeat exactly there)."""
    a0 = math.isqrt(d)
    g2, g1 = -z, q0  # G_{-2}, G_{-1}
    b2, b1 = 1, 0    # B_{-2}, B_{-1}
    hits_pos: list[tuple[int, int]] = []
    hits_neg: list[tuple[int, int]] = []
    p_cur, q_cur = z, q0
    seen: set[tuple[int, int]] = set()
    while (p_cur, q_cur) not in seen:
        seen.add((p_cur, q_cur))
        if q_cur > 0:
            a = (p_cur + a0) // q_cur
        else:
            # floor((P + sqrt(d))/Q) for Q < 0; the argument is irrational
            a = -((p_cur + a0) // (-q_cur) + 1)
        g = a * g1 + g2
        b = a * b1 + b2
        val = g * g - d * b * b
        if val == target:
            hits_pos.append((g, b))
        elif val == -target:
            hits_neg.append((g, b))
        g2, g1 = g1, g
        b2, b1 = b1, b
        p_cur = a * q_cur - p_cur
        q_cur = (d - p_cur * p_cur) // q_cur
    return hits_pos, hits_neg


def _primitive_solutions(d: int, m: int, neg_unit: PellSolution | None) -> list[PellSolution]:
    """One solution of u^2 - d v^2 = m per class of primitive solutions.

    Classes correspond to square roots z of d mod |m| (z = u v^{-1}); the PQa
    expansion of (z + sqrt(d))/|m| meets each nonempty class.  Duplicate or
    imprimitive finds are harmless: the caller dedups by orbit.
    """
    am = abs(m)
    if am == 1:
        if m == 1:
            return [PellSolution(1, 0, d)]
        return [neg_unit] if neg_unit is not None else []
    out = []
    for z in range(am):
        if (z * z - d) % am:
            continue
        pos, neg = _pqa_norm_hits(d, z, am, am if m > 0 else -am)
        for u, v in pos:
            out.append(PellSolution(u, v, d))
        if neg_unit is not None:
            for u, v in neg:
                out.append(pell_multiply(PellSolution(u, v, d), neg_unit))
    return out


@dataclass(frozen=True)
class OrbitSet:
    """Finitely many orbit representatives of u^2 - d v^2 = m under the unit
    group, together with the acting fundamental unit."""

    d: int
    m: int
    representatives: tuple[PellSolution, ...]
    unit: PellSolution

    def __bool__(self) -> bool:
        return bool(self.representatives)

    def solutions_below(self, vbound: int) -> list[PellSolution]:
        """All solutions with |v| <= vbound, both signs, sorted."""
        found = set()
        for rep in self.representatives:
            for direction in (self.unit, self.unit.conjugate()):
                s = rep
                while abs(s.v) <= vbound:
                    found.add((s.u, s.v))
                    found.add((-s.u, -s.v))
                    s = pell_multiply(s, direction)
        sols = [PellSolution(u, v, self.d) for u, v in found]
        sols.sort(key=lambda s: (abs(s.v), s.v < 0, abs(s.u), s.u < 0))
        return sols


def general_pell_orbits(d: int, m: int) -> OrbitSet:
    """All orbits of {(u, v) : u^2 - d v^2 = m} under the unit group.

    An empty representative list means the equation has no solutions.
    """
    _check_d(d)
    if is_square(d):
        raise SquareInputError(f"d={d} is a perfect square")
    if m == 0:
        raise ZeroMError("m must be nonzero")
    unit = pell1_fundamental(d)
    neg_unit = negative_pell_fundamental(d)
    reps = set()
    f = 1
    while f * f <= abs(m):
        if m % (f * f) == 0:
            for sol in _primitive_solutions(d, m // (f * f), neg_unit):
                scaled = PellSolution(f * sol.u, f * sol.v, d)
                reps.add(canonical_representative(scaled, unit))
        f += 1
    ordered = sorted(reps, key=_rep_order)
    return OrbitSet(d=d, m=m, representatives=tuple(ordered), unit=unit)


def pell4_fundamental(d: int) -> PellSolution:
    """Smallest solution of u^2 - d v^2 = 4 with u, v > 0."""
    _check_d(d)
    if is_square(d):
        raise SquareInputError(f"{d} is a perfect square")
    best = None
    orbits = general_pell_orbits(d, 4)
    for rep in orbits.representatives:
        s = _min_positive_in_orbit(rep, orbits.unit)
        if best is None or (s.u, s.v) < (best.u, best.v):
            best = s
    if best is None:  # unreachable: (2 u1, 2 v1) always solves = 4
        raise AssertionError("norm-4 equation lost its doubled unit")
    return best


def _min_positive_in_orbit(rep: PellSolution, unit: PellSolution) -> PellSolution:
    """Smallest element with u, v > 0 in the orbit of rep (norm > 0 required;
    the positive elements form a ray under multiplication by the unit)."""
    s = rep if _sign_in_reals(rep) > 0 else -rep
    while not (s.u > 0 and s.v > 0):
        s = pell_multiply(s, unit)
    while True:
        back = pell_multiply(s, unit.conjugate())
        if back.u > 0 and back.v > 0:
            s = back
        else:
            return s


def residue_hits(
    rep: PellSolution,
    unit: PellSolution,
    modulus: int,
    keep: Callable[[int, int], bool],
) -> tuple[list[int], int]:
    """Indices n in one period with keep(u_n mod modulus, v_n mod modulus)
    true along the orbit rep * unit^n, plus the residue period P.

    Multiplication by the unit has determinant 1, hence is invertible mod
    any modulus, so the residue walk is purely periodic and one period is
    exhaustive.
    """
    modulus = abs(modulus)
    d = rep.d
    u1, v1 = unit.u % modulus, unit.v % modulus
    dm = d % modulus
    start = (rep.u % modulus, rep.v % modulus)
    hits = []
    cur = start
    n = 0
    while True:
        if keep(cur[0], cur[1]):
            hits.append(n)
        cur = (
            (u1 * cur[0] + dm * v1 * cur[1]) % modulus,
            (v1 * cur[0] + u1 * cur[1]) % modulus,
        )
        n += 1
        if cur == start:
            return hits, n


def iter_orbit(rep: PellSolution, unit: PellSolution, backwards: bool = False) -> Iterator[PellSolution]:
    """Yield rep, rep*rho, rep*rho^2, ... (or conjugate direction)."""
    step = unit.conjugate() if backwards else unit
    s = rep
    while True:
        yield s
        s = pell_multiply(s, step)
