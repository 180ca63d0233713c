from __future__ import annotations

from fractions import Fraction as F

import pytest

from uqbethe.errors import PoleError
from uqbethe.linalg import Matrix
from uqbethe.rmatrix import (
    Variant,
    build_r,
    check_unitarity,
    check_yang_baxter,
    embed_two_site,
    flip,
    index_pairs,
    r21,
    satisfies_ice_rule,
    unitarity_product,
    yang_baxter_sides,
)
from uqbethe.scalars import sample_generic

VARIANTS = list(Variant)


def idx(N, i, k):
    """Flattened 0-based index of the 1-based pair (i, k)."""
    return (i - 1) * N + (k - 1)


@pytest.mark.parametrize("variant", VARIANTS)
def test_diagonal_entries_are_one(ctx, variant):
    N = 3
    R = build_r(ctx, variant, N, F(2), F(5))
    for i in range(1, N + 1):
        assert R[idx(N, i, i), idx(N, i, i)] == 1


def test_u_equals_v_kills_off_diagonal_weight(ctx):
    R = build_r(ctx, "orig", 3, F(2), F(2))
    for i in range(1, 4):
        for j in range(i + 1, 4):
            assert R[idx(3, i, j), idx(3, i, j)] == 0
            assert R[idx(3, j, i), idx(3, j, i)] == 0


def test_explicit_entries(ctx):
    q, qi, nu = ctx.q, ctx.qinv, ctx.nu
    u, v = F(2), F(5)
    den = q * u - qi * v
    R = build_r(ctx, "orig", 2, u, v)
    assert R[idx(2, 1, 2), idx(2, 1, 2)] == (u - v) / den
    # coefficient of E_12 (x) E_21 sits at row (1,2), column (2,1)
    assert R[idx(2, 1, 2), idx(2, 2, 1)] == nu * v / den
    assert R[idx(2, 2, 1), idx(2, 1, 2)] == nu * u / den
    T = build_r(ctx, "twist", 2, u, v)
    assert T[idx(2, 1, 2), idx(2, 2, 1)] == nu * u / den
    assert T[idx(2, 2, 1), idx(2, 1, 2)] == nu * v / den


def test_variants_differ_only_in_exchange_terms(ctx):
    N = 3
    R = build_r(ctx, "orig", N, F(2), F(7, 3))
    T = build_r(ctx, "twist", N, F(2), F(7, 3))
    for row in range(N * N):
        for col in range(N * N):
            if R[row, col] != T[row, col]:
                i, k = divmod(row, N)
                j, l = divmod(col, N)
                assert (i, k) == (l, j) and i != k


@pytest.mark.parametrize("variant", VARIANTS)
def test_ice_rule(ctx, variant):
    assert satisfies_ice_rule(build_r(ctx, variant, 4, F(3), F(-2)), 4)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("N", [2, 3, 4])
def test_yang_baxter(ctx, variant, N):
    for salt in range(4):
        u1, u2, u3 = sample_generic(ctx, 3, salt=salt)
        assert check_yang_baxter(ctx, variant, N, u1, u2, u3)


@pytest.mark.parametrize("variant", VARIANTS)
def test_yang_baxter_equal_arguments(ctx, variant):
    assert check_yang_baxter(ctx, variant, 3, F(5), F(5), F(5))


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("N", [2, 3, 4])
def test_unitarity(ctx, variant, N):
    for salt in range(4):
        u1, u2 = sample_generic(ctx, 2, salt=salt)
        assert check_unitarity(ctx, variant, N, u1, u2)


def test_unitarity_small_exact(ctx):
    assert check_unitarity(ctx, "orig", 2, F(1), F(4))
    assert check_unitarity(ctx, "twist", 2, F(1), F(4))


def test_corrupted_entry_breaks_yang_baxter(ctx):
    N = 2
    u1, u2, u3 = F(2), F(-3), F(5, 4)
    bad = build_r(ctx, "twist", N, u1, u2)
    bad = bad.with_entry(1, 2, 2 * bad[1, 2])
    R12 = embed_two_site(bad, N, 3, 1, 2)
    R13 = embed_two_site(build_r(ctx, "twist", N, u1, u3), N, 3, 1, 3)
    R23 = embed_two_site(build_r(ctx, "twist", N, u2, u3), N, 3, 2, 3)
    lhs, rhs = yang_baxter_sides(R12, R13, R23)
    assert lhs != rhs


def test_corrupted_matrix_breaks_unitarity(ctx):
    R = build_r(ctx, "orig", 2, F(2), F(3))
    prod = unitarity_product(R.scale(2), build_r(ctx, "orig", 2, F(3), F(2)), 2)
    assert prod != Matrix.identity(4)


def test_pole_detected(ctx):
    u = F(2)
    with pytest.raises(PoleError):
        build_r(ctx, "orig", 2, u, ctx.q ** 2 * u)


def test_rank_one_rejected(ctx):
    with pytest.raises(ValueError):
        build_r(ctx, "orig", 1, F(1), F(2))


def test_embed_two_site_trivial_cases(ctx):
    R = build_r(ctx, "orig", 2, F(2), F(3))
    assert embed_two_site(R, 2, 2, 1, 2) == R
    assert embed_two_site(Matrix.identity(4), 2, 3, 1, 3) == Matrix.identity(8)
    # swapping the legs is conjugation by the flip
    assert embed_two_site(R, 2, 2, 2, 1) == r21(R, 2)


def test_embed_two_site_bad_sites(ctx):
    R = build_r(ctx, "orig", 2, F(2), F(3))
    with pytest.raises(IndexError):
        embed_two_site(R, 2, 3, 1, 1)


def test_flip_is_involution():
    P = flip(3)
    assert P @ P == Matrix.identity(9)


def test_index_pairs_order():
    assert index_pairs(2) == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_variant_parse():
    assert Variant.parse("twisted") is Variant.TWISTED
    with pytest.raises(ValueError):
        Variant.parse("other")
