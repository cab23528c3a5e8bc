"""Exact sphere moments, quadratic sphere variables, and the rotation-group oracle.

A sparse multivariate polynomial ring with rational coefficients carries the
Euler-Rodrigues parametrization of the 3x3 rotations by unit quaternions;
integrating its monomials over the 3-sphere gives an independent exact oracle
for rotation-group integrals.  Structured orthogonal matrices with a global
1/sqrt(2) scale produce the quadratic-form variables xi(U) whose joint sphere
moments model the matrix entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import dfact
from .matrices import ExponentMatrix
from .integrals import one_row

__all__ = [
    "SparsePolynomial",
    "IrrationalCoefficientError",
    "ModelMatrix",
    "sphere_moment",
    "integrate_sphere_poly",
    "xi_polynomial",
    "euler_rodrigues_matrix",
    "integrate_so3",
    "exact_model_moment",
    "model_battery",
    "identity_model",
    "rho_2x2",
    "rho_inv_2x2",
    "swap_2x2",
    "rho_4",
    "rho_inv_4",
    "tau_4",
    "tau_inv_4",
    "rho_block",
    "model_solution_n1",
    "model_solution_n2",
    "dihedral_group_16",
]


class IrrationalCoefficientError(ValueError):
    """Rows of mixed scale would produce irrational polynomial coefficients."""


class SparsePolynomial:
    """Multivariate polynomial: exponent tuples -> exact rational coefficients.

    Zero coefficients are never stored.  Instances are treated as immutable;
    arithmetic returns fresh objects.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], Fraction] | None = None):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff == 0:
                    continue
                if len(exps) != nvars:
                    raise ValueError("exponent vector length mismatch")
                clean[tuple(int(e) for e in exps)] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "SparsePolynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "SparsePolynomial":
        return cls(nvars, {tuple([0] * nvars): Fraction(value)})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "SparsePolynomial":
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparsePolynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return SparsePolynomial(self.nvars, out)

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def __mul__(self, other) -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            return SparsePolynomial(
                self.nvars, {e: c * Fraction(other) for e, c in self.terms.items()}
            )
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return SparsePolynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "SparsePolynomial":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = SparsePolynomial.constant(self.nvars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def term_count(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = "xyzt" if self.nvars <= 4 else None
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            vars_str = "".join(
                (names[i] if names else f"x{i}") + (f"^{p}" if p > 1 else "")
                for i, p in enumerate(e)
                if p
            )
            parts.append(f"{c}{'*' if vars_str else ''}{vars_str}")
        return " + ".join(parts).replace("+ -", "- ")


_SPHERE_CACHE: dict[tuple[tuple[int, ...], int], Fraction] = {}


def sphere_moment(exponents: Sequence[int], big_n: int) -> Fraction:
    """Exact moment E[prod x_i^{a_i}] of the uniform measure on S^(N-1)."""
    if big_n < 2:
        raise ValueError("the sphere model needs N >= 2")
    if len(exponents) > big_n:
        raise ValueError("more exponents than coordinates")
    key = (tuple(exponents), big_n)
    got = _SPHERE_CACHE.get(key)
    if got is None:
        got = one_row(tuple(exponents), big_n)
        _SPHERE_CACHE[key] = got
    return got


def integrate_sphere_poly(poly: SparsePolynomial) -> Fraction:
    """Integrate a polynomial over the unit sphere of its variable count."""
    total = Fraction(0)
    for exps, coeff in poly.terms.items():
        total += coeff * sphere_moment(exps, poly.nvars)
    return total


# --- structured orthogonal matrices -----------------------------------------

@dataclass(frozen=True)
class ModelMatrix:
    """An orthogonal matrix of the form M / sqrt(2)^e with integer M.

    The uniform scale keeps every same-row entry product rational, so the
    quadratic sphere variables expand with exact coefficients.  Products of
    such matrices stay in the class (exponents add); a matrix whose rows need
    different scales is rejected at construction.
    """

    entries: tuple[tuple[int, ...], ...]
    sqrt2_exp: int = 0

    def __init__(self, entries: Iterable[Iterable[int]], sqrt2_exp: int = 0):
        rows = tuple(tuple(int(v) for v in r) for r in entries)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "sqrt2_exp", int(sqrt2_exp))
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ValueError("model matrix must be square")
        if self.sqrt2_exp < 0:
            raise ValueError("scale exponent must be >= 0")
        scale = 2**self.sqrt2_exp
        for i in range(dim):
            for j in range(dim):
                dot = sum(rows[i][k] * rows[j][k] for k in range(dim))
                if dot != (scale if i == j else 0):
                    raise ValueError(
                        f"rows {i},{j} are not orthonormal under scale sqrt(2)^-{self.sqrt2_exp}"
                    )

    @classmethod
    def from_scaled_rows(
        cls, rows: Iterable[Iterable[int]], row_scales: Sequence[int]
    ) -> "ModelMatrix":
        """Build from per-row scale flags (0 = unscaled, 1 = 1/sqrt(2) row).

        Mixed flags cannot be expressed with one global scale and would make
        cross-row products irrational: they are rejected.
        """
        flags = set(row_scales)
        if len(flags) > 1:
            raise IrrationalCoefficientError(
                "rows mix scales 1 and 1/sqrt(2); entry products would be irrational"
            )
        return cls(rows, row_scales[0] if row_scales else 0)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def reduce(self) -> "ModelMatrix":
        """Divide out factors of 2 absorbed by the sqrt(2) scale."""
        rows = [list(r) for r in self.entries]
        e = self.sqrt2_exp
        while e >= 2 and all(v % 2 == 0 for r in rows for v in r):
            rows = [[v // 2 for v in r] for r in rows]
            e -= 2
        return ModelMatrix(rows, e)

    def __matmul__(self, other: "ModelMatrix") -> "ModelMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        prod = [
            [
                sum(self.entries[i][k] * other.entries[k][j] for k in range(self.dim))
                for j in range(self.dim)
            ]
            for i in range(self.dim)
        ]
        return ModelMatrix(prod, self.sqrt2_exp + other.sqrt2_exp).reduce()

    def row_polynomial(self, i: int) -> SparsePolynomial:
        """The linear form row_i . v as a polynomial (unscaled integer part)."""
        terms = {}
        for j, v in enumerate(self.entries[i]):
            if v:
                e = [0] * self.dim
                e[j] = 1
                terms[tuple(e)] = Fraction(v)
        return SparsePolynomial(self.dim, terms)


def xi_polynomial(u: ModelMatrix) -> SparsePolynomial:
    """Quadratic sphere variable: sum of the first half of squared rows minus
    the second half, with the 1/2^e scale applied exactly."""
    if u.dim % 2 != 0:
        raise ValueError("xi needs an even-dimensional matrix")
    half = u.dim // 2
    out = SparsePolynomial.zero(u.dim)
    for i in range(u.dim):
        sq = u.row_polynomial(i)
        sq = sq * sq
        out = out + sq if i < half else out - sq
    return out * Fraction(1, 2**u.sqrt2_exp)


# --- the quaternion parametrization of rotations ----------------------------

def euler_rodrigues_matrix() -> list[list[SparsePolynomial]]:
    """The 3x3 rotation entries as quadratic forms in (x, y, z, t) on S^3."""
    x = SparsePolynomial.variable(0, 4)
    y = SparsePolynomial.variable(1, 4)
    z = SparsePolynomial.variable(2, 4)
    t = SparsePolynomial.variable(3, 4)
    two = Fraction(2)
    return [
        [x * x + y * y - z * z - t * t, two * (y * z - x * t), two * (x * z + y * t)],
        [two * (x * t + y * z), x * x + z * z - y * y - t * t, two * (z * t - x * y)],
        [two * (y * t - x * z), two * (x * y + z * t), x * x + t * t - y * y - z * z],
    ]


DEFAULT_SO3_DEGREE_CAP = 12


def integrate_so3(
    a: ExponentMatrix | Sequence[Sequence[int]],
    degree_cap: int = DEFAULT_SO3_DEGREE_CAP,
) -> Fraction:
    """Exact integral of prod u_ij^{a_ij} over the 3x3 rotation group.

    Expands the quaternion parametrization and integrates monomials over S^3.
    Independent of the pairing/Gram machinery, so it serves as the geometric
    oracle for every n = 3 value.
    """
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    if a.p > 3 or a.q > 3:
        raise ValueError("exponent matrix must be at most 3x3")
    if a.total > degree_cap:
        raise ValueError(
            f"total degree {a.total} exceeds cap {degree_cap}; raise degree_cap"
        )
    er = euler_rodrigues_matrix()
    poly = SparsePolynomial.constant(4, 1)
    for i in range(a.p):
        for j in range(a.q):
            e = a.entry(i, j)
            if e:
                poly = poly * er[i][j] ** e
    return integrate_sphere_poly(poly)


def exact_model_moment(
    us: Sequence[ModelMatrix], exponents: Sequence[int]
) -> Fraction:
    """Exact joint moment E[prod xi(U_m)^{e_m}] on the sphere S^(2n-1)."""
    if len(us) != len(exponents):
        raise ValueError("one exponent per matrix required")
    if not us:
        return Fraction(1)
    dim = us[0].dim
    poly = SparsePolynomial.constant(dim, 1)
    for u, e in zip(us, exponents):
        if u.dim != dim:
            raise ValueError("all matrices must share a dimension")
        if e:
            poly = poly * xi_polynomial(u) ** e
    return integrate_sphere_poly(poly)


# --- the concrete matrices ---------------------------------------------------

def identity_model(dim: int) -> ModelMatrix:
    return ModelMatrix([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])


def rho_2x2() -> ModelMatrix:
    """45-degree counterclockwise plane rotation."""
    return ModelMatrix([[1, 1], [-1, 1]], 1)


def rho_inv_2x2() -> ModelMatrix:
    return ModelMatrix([[1, -1], [1, 1]], 1)


def swap_2x2() -> ModelMatrix:
    return ModelMatrix([[0, 1], [1, 0]])


def rho_4() -> ModelMatrix:
    """45-degree rotation in each complex-coordinate plane of R^4."""
    return ModelMatrix(
        [[1, 1, 0, 0], [-1, 1, 0, 0], [0, 0, 1, 1], [0, 0, -1, 1]], 1
    )


def rho_inv_4() -> ModelMatrix:
    return ModelMatrix(
        [[1, -1, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 1, 1]], 1
    )


def tau_4() -> ModelMatrix:
    """3-cycle on the last three coordinates."""
    return ModelMatrix(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]]
    )


def tau_inv_4() -> ModelMatrix:
    return ModelMatrix(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]]
    )


_RHO_BLOCKS = {
    (1, 2): [[0, 1, 1, 0], [1, 0, 0, -1], [0, 1, -1, 0], [1, 0, 0, 1]],
    (1, 3): [[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, -1, 0], [0, 1, 0, -1]],
    (2, 3): [[0, 0, 1, 1], [1, -1, 0, 0], [0, 0, 1, -1], [1, 1, 0, 0]],
    (2, 1): [[0, 1, 1, 0], [1, 0, 0, 1], [0, 1, -1, 0], [1, 0, 0, -1]],
    (3, 1): [[1, 0, -1, 0], [0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
    (3, 2): [[0, 0, 1, 1], [1, 1, 0, 0], [0, 0, 1, -1], [1, -1, 0, 0]],
}


def rho_block(i: int, j: int) -> ModelMatrix:
    """Off-diagonal solution matrices of the 3x3 modelling array."""
    return ModelMatrix(_RHO_BLOCKS[(i, j)], 1)


def model_solution_n1() -> list[list[ModelMatrix]]:
    """2x2 array modelling the plane-rotation entries on S^1."""
    return [
        [identity_model(2), rho_2x2()],
        [rho_inv_2x2(), identity_model(2)],
    ]


def model_solution_n2() -> list[list[ModelMatrix]]:
    """3x3 array modelling the rotation-group entries on S^3."""
    return [
        [identity_model(4), rho_block(1, 2), rho_block(1, 3)],
        [rho_block(2, 1), tau_4(), rho_block(2, 3)],
        [rho_block(3, 1), rho_block(3, 2), tau_inv_4()],
    ]


def dihedral_group_16() -> list[ModelMatrix]:
    """The 16-element subgroup of the plane orthogonal group generated by the
    coordinate swap and the 45-degree rotation."""
    rho = rho_2x2()
    sigma = swap_2x2()
    elems = []
    power = identity_model(2)
    for _ in range(8):
        elems.append(power)
        elems.append(sigma @ power)
        power = (rho @ power).reduce()
    return elems


# --- the battery -------------------------------------------------------------

def _so2_moment(e11: int, e12: int, e21: int, e22: int) -> Fraction:
    """Joint entry moments of a Haar plane rotation [[cos,sin],[-sin,cos]]."""
    sign = (-1) ** e21
    return sign * sphere_moment((e11 + e22, e12 + e21), 2)


def model_battery(n: int, max_degree: int = 6) -> dict:
    """Exact modelling checks at n = 1 or n = 2.

    (i) the xi array reproduces the target polynomial matrix exactly,
    (ii) the 16-element dihedral orbit gives each of the four plane forms
         four times (n = 1),
    (iii) joint xi moments match the group-side integrals for every exponent
          pattern of total degree <= max_degree.
    """
    if n not in (1, 2):
        raise ValueError("modelling solutions exist for n = 1 and n = 2 only")
    report: dict = {"n": n, "checks": {}}

    if n == 1:
        arr = model_solution_n1()
        x = SparsePolynomial.variable(0, 2)
        y = SparsePolynomial.variable(1, 2)
        cos2 = x * x - y * y
        sin2 = Fraction(2) * x * y
        target = [[cos2, sin2], [-sin2, cos2]]
        xi_arr = [[xi_polynomial(u) for u in row] for row in arr]
        report["checks"]["xi_matrix"] = xi_arr == target

        counts: dict[SparsePolynomial, int] = {}
        for u in dihedral_group_16():
            p = xi_polynomial(u)
            counts[p] = counts.get(p, 0) + 1
        expected = {cos2: 4, -cos2: 4, sin2: 4, -sin2: 4}
        report["checks"]["dihedral_multiset"] = counts == expected

        flat = [arr[0][0], arr[0][1], arr[1][0], arr[1][1]]
        xi_flat = [xi_polynomial(u) for u in flat]
        ok = True
        first_bad = None
        for exps, moment in _joint_moments(xi_flat, max_degree):
            rhs = _so2_moment(*exps)
            if moment != rhs:
                ok = False
                first_bad = {"exponents": exps, "model": str(moment), "group": str(rhs)}
                break
        report["checks"]["joint_moments"] = ok
        if first_bad:
            report["first_mismatch"] = first_bad
        report["pass"] = all(report["checks"].values())
        return report

    arr = model_solution_n2()
    er = euler_rodrigues_matrix()
    xi_arr = [[xi_polynomial(u) for u in row] for row in arr]
    report["checks"]["xi_matrix"] = xi_arr == er

    norm = SparsePolynomial.variable(0, 4) ** 2
    for i in range(1, 4):
        norm = norm + SparsePolynomial.variable(i, 4) ** 2
    norm_sq = norm * norm
    rows_ok = all(
        er[i][0] ** 2 + er[i][1] ** 2 + er[i][2] ** 2 == norm_sq for i in range(3)
    )
    cols_ok = all(
        er[0][j] ** 2 + er[1][j] ** 2 + er[2][j] ** 2 == norm_sq for j in range(3)
    )
    det = (
        er[0][0] * (er[1][1] * er[2][2] - er[1][2] * er[2][1])
        - er[0][1] * (er[1][0] * er[2][2] - er[1][2] * er[2][0])
        + er[0][2] * (er[1][0] * er[2][1] - er[1][1] * er[2][0])
    )
    report["checks"]["row_col_norms"] = rows_ok and cols_ok
    report["checks"]["determinant"] = det == norm * norm_sq

    flat_us = [arr[i][j] for i in range(3) for j in range(3)]
    xi_flat = [xi_polynomial(u) for u in flat_us]
    er_flat = [er[i][j] for i in range(3) for j in range(3)]
    ok = True
    first_bad = None
    group_scan = dict(_joint_moments(er_flat, max_degree))
    for exps, moment in _joint_moments(xi_flat, max_degree):
        rhs = group_scan[exps]
        if moment != rhs:
            ok = False
            first_bad = {"exponents": exps, "model": str(moment), "group": str(rhs)}
            break
    report["checks"]["joint_moments"] = ok
    if first_bad:
        report["first_mismatch"] = first_bad
    report["pass"] = all(report["checks"].values())
    return report


def _joint_moments(polys: list[SparsePolynomial], max_total: int):
    """(exponents, sphere moment of the product) for all patterns of bounded degree.

    Walks the exponent tree carrying the partial product, so each pattern
    costs one polynomial multiplication.
    """
    nvars = polys[0].nvars
    slots = len(polys)

    def rec(i: int, remaining: int, acc: list[int], poly: SparsePolynomial):
        if i == slots:
            yield tuple(acc), integrate_sphere_poly(poly)
            return
        current = poly
        for v in range(remaining + 1):
            acc.append(v)
            yield from rec(i + 1, remaining - v, acc, current)
            acc.pop()
            if v < remaining:
                current = current * polys[i]

    yield from rec(0, max_total, [], SparsePolynomial.constant(nvars, 1))
