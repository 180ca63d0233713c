"""Trigonometric R-matrices on C^N (x) C^N and their defining identities.

Rows and columns of an R-matrix are indexed by pairs ``(i, k)`` flattened to
``i * N + k`` (0-based), so entry ``((i, k), (j, l))`` is the coefficient of
``E_ij (x) E_kl``.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from itertools import product

from .errors import PoleError
from .linalg import Matrix
from .scalars import ScalarContext, to_rational


class Variant(enum.Enum):
    ORIGINAL = "orig"
    TWISTED = "twist"

    @classmethod
    def parse(cls, value: "Variant | str") -> "Variant":
        if isinstance(value, Variant):
            return value
        text = str(value).strip().lower()
        aliases = {"orig": cls.ORIGINAL, "original": cls.ORIGINAL, "twist": cls.TWISTED, "twisted": cls.TWISTED}
        try:
            return aliases[text]
        except KeyError:
            raise ValueError(f"unknown variant {value!r}; expected 'orig' or 'twist'") from None


def build_r(ctx: ScalarContext, variant: Variant | str, N: int, u, v) -> Matrix:
    """R(u, v) for the given variant.

    The two variants differ only in which spectral parameter weights the
    ``E_ij (x) E_ji`` and ``E_ji (x) E_ij`` terms.
    """
    variant = Variant.parse(variant)
    if N < 2:
        raise ValueError("N must be >= 2")
    u, v = to_rational(u), to_rational(v)
    q, qi = ctx.q, ctx.qinv
    den = q * u - qi * v
    if den == 0:
        raise PoleError("q*u - q^-1*v vanishes")
    diag_off = (u - v) / den
    upper, lower = (v, u) if variant is Variant.ORIGINAL else (u, v)
    c_up = ctx.nu * upper / den  # coefficient of E_ij (x) E_ji, i < j
    c_lo = ctx.nu * lower / den  # coefficient of E_ji (x) E_ij, i < j
    rows: dict[int, dict[int, Fraction]] = {}

    def put(i, k, j, l, val):
        if val != 0:
            rows.setdefault(i * N + k, {})[j * N + l] = val

    for i in range(N):
        put(i, i, i, i, Fraction(1))
    for i in range(N):
        for j in range(i + 1, N):
            put(i, j, i, j, diag_off)
            put(j, i, j, i, diag_off)
            put(i, j, j, i, c_up)
            put(j, i, i, j, c_lo)
    return Matrix(N * N, N * N, rows)


def flip(N: int) -> Matrix:
    """Permutation P of the two tensor legs of C^N (x) C^N."""
    return Matrix(N * N, N * N, {i * N + k: {k * N + i: Fraction(1)} for i in range(N) for k in range(N)})


def r21(R: Matrix, N: int) -> Matrix:
    P = flip(N)
    return P @ R @ P


def satisfies_ice_rule(R: Matrix, N: int) -> bool:
    for row, cols in R.rows.items():
        i, k = divmod(row, N)
        for col in cols:
            j, l = divmod(col, N)
            if sorted((i, k)) != sorted((j, l)):
                return False
    return True


def embed_two_site(R: Matrix, N: int, m: int, site_a: int, site_b: int) -> Matrix:
    """Act with ``R`` on legs ``site_a``, ``site_b`` (1-based) of (C^N)^{(x) m}.

    ``site_a`` plays the role of the first tensor factor of ``R``.
    """
    if not (1 <= site_a <= m and 1 <= site_b <= m) or site_a == site_b:
        raise IndexError(f"invalid sites ({site_a}, {site_b}) for m={m}")
    a, b = site_a - 1, site_b - 1
    dim = N ** m
    strides = [N ** (m - 1 - s) for s in range(m)]
    rows: dict[int, dict[int, Fraction]] = {}
    for idx in range(dim):
        ia = (idx // strides[a]) % N
        ib = (idx // strides[b]) % N
        rest = idx - ia * strides[a] - ib * strides[b]
        rrow = R.rows.get(ia * N + ib)
        if not rrow:
            continue
        out = {}
        for col, val in rrow.items():
            ja, jb = divmod(col, N)
            out[rest + ja * strides[a] + jb * strides[b]] = val
        rows[idx] = out
    return Matrix(dim, dim, rows)


def yang_baxter_sides(R12: Matrix, R13: Matrix, R23: Matrix) -> tuple[Matrix, Matrix]:
    return R12 @ R13 @ R23, R23 @ R13 @ R12


def check_yang_baxter(ctx: ScalarContext, variant: Variant | str, N: int, u1, u2, u3) -> bool:
    R12 = embed_two_site(build_r(ctx, variant, N, u1, u2), N, 3, 1, 2)
    R13 = embed_two_site(build_r(ctx, variant, N, u1, u3), N, 3, 1, 3)
    R23 = embed_two_site(build_r(ctx, variant, N, u2, u3), N, 3, 2, 3)
    lhs, rhs = yang_baxter_sides(R12, R13, R23)
    return lhs == rhs


def unitarity_product(R_u1u2: Matrix, R_u2u1: Matrix, N: int) -> Matrix:
    return R_u1u2 @ r21(R_u2u1, N)


def check_unitarity(ctx: ScalarContext, variant: Variant | str, N: int, u1, u2) -> bool:
    prod = unitarity_product(build_r(ctx, variant, N, u1, u2), build_r(ctx, variant, N, u2, u1), N)
    return prod == Matrix.identity(N * N)


def index_pairs(N: int):
    """Row labels ``(i, k)`` in storage order, 1-based."""
    return [(i + 1, k + 1) for i, k in product(range(N), repeat=2)]
