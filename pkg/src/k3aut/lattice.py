"""Rank-2 even lattices ((2a, b), (b, 2c)) and their isometries.

The discriminant group A(L) = L*/L is handled two ways: a fast integrality
criterion ((M -+ I) Q^{-1} integral decides whether M acts as +-id on A(L))
and an independent Smith-normal-form oracle that computes the induced map on
A(L) in invariant-factor coordinates.  The two must always agree; the test
suite enforces that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import count

from .errors import DegenerateError, NotIsometryError

Matrix = tuple[tuple[int, int], tuple[int, int]]

_IDENTITY: Matrix = ((1, 0), (0, 1))


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) >= 0 and a x + b y = g."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _mat_mul(m: Matrix, n: Matrix) -> Matrix:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def _mat_det(m: Matrix) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _mat_inv_unimodular(m: Matrix) -> Matrix:
    det = _mat_det(m)
    if det == 1:
        return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))
    if det == -1:
        return ((-m[1][1], m[0][1]), (m[1][0], -m[0][0]))
    raise ValueError(f"matrix with determinant {det} has no integer inverse")


@dataclass(frozen=True)
class Isometry2:
    """A 2x2 integer matrix ((alpha, beta), (gamma, delta))."""

    alpha: int
    beta: int
    gamma: int
    delta: int

    @property
    def trace(self) -> int:
        return self.alpha + self.delta

    @property
    def det(self) -> int:
        return self.alpha * self.delta - self.beta * self.gamma

    def rows(self) -> Matrix:
        return ((self.alpha, self.beta), (self.gamma, self.delta))

    def apply(self, x: int, y: int) -> tuple[int, int]:
        return (self.alpha * x + self.beta * y, self.gamma * x + self.delta * y)

    def __matmul__(self, other: "Isometry2") -> "Isometry2":
        return Isometry2(
            self.alpha * other.alpha + self.beta * other.gamma,
            self.alpha * other.beta + self.beta * other.delta,
            self.gamma * other.alpha + self.delta * other.gamma,
            self.gamma * other.beta + self.delta * other.delta,
        )

    def __neg__(self) -> "Isometry2":
        return Isometry2(-self.alpha, -self.beta, -self.gamma, -self.delta)

    def inverse(self) -> "Isometry2":
        det = self.det
        if det == 1:
            return Isometry2(self.delta, -self.beta, -self.gamma, self.alpha)
        if det == -1:
            return Isometry2(-self.delta, self.beta, self.gamma, -self.alpha)
        raise ValueError(f"determinant {det}: no integer inverse")

    def __pow__(self, n: int) -> "Isometry2":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = identity()
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    @classmethod
    def from_rows(cls, rows) -> "Isometry2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def __str__(self) -> str:
        return f"[[{self.alpha}, {self.beta}], [{self.gamma}, {self.delta}]]"


def identity() -> Isometry2:
    return Isometry2(1, 0, 0, 1)


@dataclass(frozen=True)
class Rank2Lattice:
    """Even lattice with Gram matrix ((2a, b), (b, 2c)), d = b^2 - 4ac > 0.

    Instances are produced by make_lattice, which also normalizes the basis
    so that a > 0; basis_change U satisfies Gram_here = U^T Gram_input U.
    """

    a: int
    b: int
    c: int
    basis_change: Matrix = _IDENTITY

    def __post_init__(self) -> None:
        if self.d <= 0:
            raise DegenerateError(f"degenerate: discriminant {self.d}")
        if self.a <= 0:
            raise DegenerateError(
                "lattice must have a > 0; build it with make_lattice"
            )

    @property
    def d(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_square_disc(self) -> bool:
        r = math.isqrt(self.d)
        return r * r == self.d

    def gram(self) -> Matrix:
        return ((2 * self.a, self.b), (self.b, 2 * self.c))

    def square(self, x: int, y: int) -> int:
        """Self-intersection of (x, y): always even."""
        return 2 * (self.a * x * x + self.b * x * y + self.c * y * y)

    def bilinear(self, v: tuple[int, int], w: tuple[int, int]) -> int:
        return (
            2 * self.a * v[0] * w[0]
            + self.b * (v[0] * w[1] + v[1] * w[0])
            + 2 * self.c * v[1] * w[1]
        )

    def to_input_basis(self, m: Isometry2) -> Isometry2:
        """Conjugate an isometry back to the caller's original basis."""
        u = self.basis_change
        rows = _mat_mul(_mat_mul(u, m.rows()), _mat_inv_unimodular(u))
        return Isometry2.from_rows(rows)

    def __str__(self) -> str:
        return f"lattice(a={self.a}, b={self.b}, c={self.c}, d={self.d})"


def make_lattice(a: int, b: int, c: int) -> Rank2Lattice:
    """Validated lattice with d > 0, basis-normalized so that a > 0."""
    d = b * b - 4 * a * c
    if d <= 0:
        raise DegenerateError(f"degenerate: discriminant {d}")
    if a > 0:
        return Rank2Lattice(a, b, c)
    if c > 0:
        return Rank2Lattice(c, b, a, basis_change=((0, 1), (1, 0)))
    # indefinite form with a, c <= 0: hunt a primitive vector of positive
    # square and extend it to a basis
    for bound in count(1):
        found = None
        for p in range(-bound, bound + 1):
            for q in range(-bound, bound + 1):
                if max(abs(p), abs(q)) != bound:
                    continue
                if a * p * p + b * p * q + c * q * q > 0:
                    found = (p, q)
                    break
            if found:
                break
        if found:
            p, q = found
            g, x, y = _ext_gcd(p, q)
            p, q = p // g, q // g
            g, x, y = _ext_gcd(p, q)
            # columns (p, q) and (r, s) with ps - qr = 1
            r, s = -y, x
            a2 = a * p * p + b * p * q + c * q * q
            b2 = 2 * a * p * r + b * (p * s + q * r) + 2 * c * q * s
            c2 = a * r * r + b * r * s + c * s * s
            return Rank2Lattice(a2, b2, c2, basis_change=((p, r), (q, s)))


def is_isometry(lat: Rank2Lattice, m: Isometry2) -> bool:
    """True iff M^T Q M = Q (determinant +-1 then follows)."""
    al, be, ga, de = m.alpha, m.beta, m.gamma, m.delta
    a, b, c = lat.a, lat.b, lat.c
    return (
        a * al * al + b * al * ga + c * ga * ga == a
        and a * be * be + b * be * de + c * de * de == c
        and 2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de == b
    )


def _require_isometry(lat: Rank2Lattice, m: Isometry2) -> None:
    if not is_isometry(lat, m):
        raise NotIsometryError(f"{m} does not preserve the form of {lat}")


@dataclass(frozen=True)
class DiscAction:
    """How an isometry acts on the discriminant group A(L):
    epsilon = +1 (fixes every element), -1 (negates every element), or
    None (neither)."""

    epsilon: int | None


def _acts_as(lat: Rank2Lattice, m: Isometry2, eps: int) -> bool:
    # (M - eps I) Q^{-1} integral <=> (M - eps I) adj(Q) == 0 mod det(Q),
    # with adj(Q) = ((2c, -b), (-b, 2a)) and |det Q| = d
    a, b, c, d = lat.a, lat.b, lat.c, lat.d
    al, be, ga, de = m.alpha - eps, m.beta, m.gamma, m.delta - eps
    return (
        (al * 2 * c - be * b) % d == 0
        and (-al * b + be * 2 * a) % d == 0
        and (ga * 2 * c - de * b) % d == 0
        and (-ga * b + de * 2 * a) % d == 0
    )


def disc_action(lat: Rank2Lattice, m: Isometry2) -> DiscAction:
    """Sign of the action on A(L); +1 is checked before -1, so on 2-torsion
    groups (where both hold) the answer is +1."""
    _require_isometry(lat, m)
    for eps in (1, -1):
        if _acts_as(lat, m, eps):
            return DiscAction(eps)
    return DiscAction(None)


def smith_normal_form(mat: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """(U, S, V) with U @ mat @ V = S = diag(s1, s2), |det U| = |det V| = 1,
    and 0 <= s1 | s2."""
    m = [list(mat[0]), list(mat[1])]
    u: Matrix = _IDENTITY
    v: Matrix = _IDENTITY
    while True:
        while m[1][0] != 0 or m[0][1] != 0:
            if m[1][0] != 0:
                if m[0][0] != 0 and m[1][0] % m[0][0] == 0:
                    # plain elimination keeps the corner; the gcd transform
                    # below could rotate rows forever once the corner is
                    # already the gcd
                    q = m[1][0] // m[0][0]
                    rowop: Matrix = ((1, 0), (-q, 1))
                else:
                    g, x, y = _ext_gcd(m[0][0], m[1][0])
                    p, q = m[0][0] // g, m[1][0] // g
                    rowop = ((x, y), (-q, p))  # det = x p + y q = 1
                m = [list(r) for r in _mat_mul(rowop, (tuple(m[0]), tuple(m[1])))]
                u = _mat_mul(rowop, u)
            if m[0][1] != 0:
                if m[0][0] != 0 and m[0][1] % m[0][0] == 0:
                    q = m[0][1] // m[0][0]
                    colop: Matrix = ((1, -q), (0, 1))
                else:
                    g, x, y = _ext_gcd(m[0][0], m[0][1])
                    p, q = m[0][0] // g, m[0][1] // g
                    colop = ((x, -q), (y, p))
                m = [list(r) for r in _mat_mul((tuple(m[0]), tuple(m[1])), colop)]
                v = _mat_mul(v, colop)
        if m[0][0] == 0 and m[1][1] != 0:
            swap: Matrix = ((0, 1), (1, 0))
            m = [list(r) for r in _mat_mul(swap, _mat_mul((tuple(m[0]), tuple(m[1])), swap))]
            u = _mat_mul(swap, u)
            v = _mat_mul(v, swap)
        if m[0][0] != 0 and m[1][1] % m[0][0] != 0:
            # fold s2 back into the working corner and reduce again
            colop = ((1, 0), (1, 1))
            m = [list(r) for r in _mat_mul((tuple(m[0]), tuple(m[1])), colop)]
            v = _mat_mul(v, colop)
            continue
        break
    if m[0][0] < 0:
        u = _mat_mul(((-1, 0), (0, 1)), u)
        m[0][0] = -m[0][0]
    if m[1][1] < 0:
        u = _mat_mul(((1, 0), (0, -1)), u)
        m[1][1] = -m[1][1]
    s: Matrix = ((m[0][0], 0), (0, m[1][1]))
    assert _mat_mul(_mat_mul(u, mat), v) == s
    return u, s, v


def disc_group_snf(lat: Rank2Lattice) -> tuple[int, int]:
    """Invariant factors (d1, d2) of A(L) = Z/d1 x Z/d2, d1 | d2, d1 d2 = d."""
    _, s, _ = smith_normal_form(lat.gram())
    return s[0][0], s[1][1]


@dataclass(frozen=True)
class DiscMap:
    """The automorphism of A(L) = Z/d1 x Z/d2 induced by an isometry, in
    Smith-normal-form coordinates.  Row i of the matrix is read mod
    invariants[i]."""

    invariants: tuple[int, int]
    matrix: Matrix

    def _reduced(self) -> Matrix:
        d1, d2 = self.invariants
        return (
            (self.matrix[0][0] % d1, self.matrix[0][1] % d1),
            (self.matrix[1][0] % d2, self.matrix[1][1] % d2),
        )

    def is_identity(self, sign: int = 1) -> bool:
        d1, d2 = self.invariants
        m = self.matrix
        return (
            (m[0][0] - sign) % d1 == 0
            and m[0][1] % d1 == 0
            and m[1][0] % d2 == 0
            and (m[1][1] - sign) % d2 == 0
        )

    def compose(self, other: "DiscMap") -> "DiscMap":
        assert self.invariants == other.invariants
        return DiscMap(self.invariants, _mat_mul(self.matrix, other.matrix))._normalize()

    def _normalize(self) -> "DiscMap":
        return DiscMap(self.invariants, self._reduced())

    def order(self) -> int:
        """Multiplicative order in Aut(A(L)); A(L) is finite so this exists."""
        d1, d2 = self.invariants
        cap = 4 * (d1 * d2) ** 2 + 16
        cur = self
        for n in range(1, cap + 1):
            if cur.is_identity(1):
                return n
            cur = cur.compose(self)
        raise AssertionError("order search exceeded the group size bound")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscMap):
            return NotImplemented
        return (
            self.invariants == other.invariants
            and self._reduced() == other._reduced()
        )

    def __hash__(self) -> int:
        return hash((self.invariants, self._reduced()))


def disc_action_oracle(lat: Rank2Lattice, m: Isometry2) -> DiscMap:
    """Induced map on A(L), computed independently of the integrality
    criterion: A(L) = Z^2 / Q Z^2 via x -> Qx, where M acts by Q M Q^{-1}
    = M^{-T}; Smith coordinates then split off the invariant factors."""
    _require_isometry(lat, m)
    u, s, _ = smith_normal_form(lat.gram())
    minv_t = m.inverse().rows()
    n: Matrix = ((minv_t[0][0], minv_t[1][0]), (minv_t[0][1], minv_t[1][1]))
    t = _mat_mul(_mat_mul(u, n), _mat_inv_unimodular(u))
    return DiscMap((s[0][0], s[1][1]), t)._normalize()


def preserves_positive_cone(lat: Rank2Lattice, m: Isometry2) -> bool:
    """True iff M keeps the positive-cone component of (1, 0).

    (1, 0) has positive square (a > 0 after normalization), and positive
    vectors lie in the same component exactly when their pairing is
    positive, so one exact pairing sign decides.
    """
    _require_isometry(lat, m)
    return 2 * lat.a * m.alpha + lat.b * m.gamma > 0
