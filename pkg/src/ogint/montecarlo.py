"""Seeded Monte Carlo oracles: Haar orthogonal sampling and sphere-law comparisons.

Floating point lives only here; the exact core never sees it.  Every sampler
takes an explicit seed and verdicts use 4-sigma two-sided intervals from the
sample variance (about 6e-5 false-alarm probability per check).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .matrices import ExponentMatrix
from .spheremodel import sphere_moment

__all__ = [
    "DEFAULT_SEED",
    "SampleBatch",
    "haar_sample",
    "sphere_sample",
    "monomial_estimate",
    "MomentCheck",
    "haar_moment_check",
    "law_compare_81",
]

DEFAULT_SEED = 42
_ORTHO_TOL = 1e-12
_CHUNK = 200_000


@dataclass
class SampleBatch:
    """A reproducible batch of float samples with its provenance.

    data has shape (count, n, n) for group samples or (count, dim) for sphere
    points; sphere points are unit vectors to within 1e-12.
    """

    kind: str
    seed: int
    count: int
    data: np.ndarray
    special: bool = False

    @property
    def dim(self) -> int:
        return self.data.shape[-1]


def haar_sample(n: int, count: int, seed: int = DEFAULT_SEED, special: bool = False) -> SampleBatch:
    """Haar-distributed orthogonal matrices via Gaussian QR.

    The triangular factor's diagonal is made positive so the factorization is
    unique and the law exactly invariant.  With special=True the first row is
    multiplied by the determinant, landing in the rotation subgroup.
    """
    rng = np.random.default_rng(seed)
    chunks = []
    remaining = count
    while remaining > 0:
        m = min(remaining, _CHUNK)
        g = rng.standard_normal((m, n, n))
        q, r = np.linalg.qr(g)
        d = np.sign(np.einsum("...ii->...i", r))
        d[d == 0] = 1.0
        q = q * d[:, None, :]
        if special:
            det = np.linalg.det(q)
            q[:, 0, :] *= det[:, None]
        chunks.append(q)
        remaining -= m
    return SampleBatch("haar_special" if special else "haar", seed, count,
                       np.concatenate(chunks) if len(chunks) > 1 else chunks[0],
                       special)


def sphere_sample(dim: int, count: int, seed: int = DEFAULT_SEED) -> SampleBatch:
    """Uniform points on the unit sphere of the given ambient dimension."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return SampleBatch("sphere", seed, count, g)


def orthogonality_defect(batch: SampleBatch) -> float:
    """Max |U^T U - I| entry over the batch (haar batches only)."""
    u = batch.data
    eye = np.eye(u.shape[-1])
    prod = np.einsum("sij,sik->sjk", u, u)
    return float(np.max(np.abs(prod - eye)))


@dataclass
class MomentCheck:
    name: str
    estimate: float
    stderr: float
    target: float
    sigmas: float
    ok: bool


def _verdict(name: str, values: np.ndarray, target: float) -> MomentCheck:
    est = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(len(values)))
    if stderr == 0.0:
        sig = 0.0 if est == target else float("inf")
    else:
        sig = abs(est - target) / stderr
    return MomentCheck(name, est, stderr, target, sig, sig <= 4.0)


def monomial_estimate(batch: SampleBatch, a: ExponentMatrix | Sequence[Sequence[int]]) -> MomentCheck:
    """Sampled E[prod u_ij^{a_ij}] with its standard error (no target)."""
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    u = batch.data
    vals = np.ones(len(u))
    for i in range(a.p):
        for j in range(a.q):
            e = a.entry(i, j)
            if e:
                vals = vals * u[:, i, j] ** e
    est = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(len(vals)))
    return MomentCheck(f"monomial {a}", est, stderr, float("nan"), float("nan"), True)


def haar_moment_check(
    n: int,
    a: ExponentMatrix | Sequence[Sequence[int]],
    exact: Fraction,
    count: int = 1_000_000,
    seed: int = DEFAULT_SEED,
    special: bool = False,
) -> MomentCheck:
    """4-sigma comparison of a sampled monomial mean against an exact value."""
    if not isinstance(a, ExponentMatrix):
        a = ExponentMatrix(a)
    batch = haar_sample(n, count, seed, special)
    u = batch.data
    vals = np.ones(len(u))
    for i in range(a.p):
        for j in range(a.q):
            e = a.entry(i, j)
            if e:
                vals = vals * u[:, i, j] ** e
    return _verdict(f"n={n} {a}", vals, float(exact))


def _complex_square_moment(p: int, q: int, big_n: int) -> complex:
    """Exact E[z^p conj(z)^q] for z = x1 + i x2 on the sphere S^(N-1)."""
    re = Fraction(0)
    im = Fraction(0)
    from math import comb

    for j in range(p + 1):
        for k in range(q + 1):
            # x^(p-j) (iy)^j * x^(q-k) (-iy)^k ; (-i)^k = i^(-k)
            power_i = (j - k) % 4
            coeff = Fraction(comb(p, j) * comb(q, k))
            mom = sphere_moment((p - j + q - k, j + k), big_n)
            if power_i == 0:
                re += coeff * mom
            elif power_i == 1:
                im += coeff * mom
            elif power_i == 2:
                re -= coeff * mom
            else:
                im -= coeff * mom
    return complex(float(re), float(im))


def law_compare_81(n: int, count: int = 1_000_000, seed: int = DEFAULT_SEED, max_moment: int = 6) -> dict:
    """Sampled sphere-variable laws against exact single-coordinate moments.

    Real part: moments 1..max_moment of sum(x_i^2) - sum(y_i^2) on S^(2n-1)
    against E[x^m] on S^n.  Complex part: E[w^p conj(w)^q] for w = sum z_i^2
    against E[z^p conj(z)^q] for a complex coordinate of S^n.
    """
    batch = sphere_sample(2 * n, count, seed)
    pts = batch.data
    v = (pts[:, :n] ** 2).sum(axis=1) - (pts[:, n:] ** 2).sum(axis=1)
    checks: list[MomentCheck] = []
    for m in range(1, max_moment + 1):
        target = float(sphere_moment((m,), n + 1))
        checks.append(_verdict(f"real moment {m}", v**m, target))

    w = (pts[:, :n] + 1j * pts[:, n:])
    w = (w**2).sum(axis=1)
    for p in range(0, max_moment + 1):
        for q in range(0, max_moment + 1 - p):
            if p + q == 0 or p < q:
                continue  # conjugate-symmetric pairs carry the same content
            target = _complex_square_moment(p, q, n + 1)
            vals = (w**p) * (np.conj(w) ** q)
            checks.append(_verdict(f"complex ({p},{q}) re", vals.real, target.real))
            checks.append(_verdict(f"complex ({p},{q}) im", vals.imag, target.imag))
    return {
        "n": n,
        "count": count,
        "seed": seed,
        "checks": checks,
        "pass": all(c.ok for c in checks),
    }
