from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from uqbethe.errors import PoleError
from uqbethe.scalars import (
    ScalarContext,
    beta_fn,
    format_rational,
    gamma_fn,
    is_generic_pair,
    q_factorial,
    q_int,
    sample_generic,
    tilde_gamma_fn,
    to_rational,
)


def test_q_int_small_values(ctx):
    assert q_int(ctx, 0) == 0
    assert q_int(ctx, 1) == 1
    assert q_int(ctx, 2) == ctx.q + ctx.qinv


def test_q_int_at_two(ctx2):
    assert q_int(ctx2, 3) == F(21, 4)


def test_q_int_rejects_negative(ctx):
    with pytest.raises(ValueError):
        q_int(ctx, -1)


def test_q_factorial_values(ctx, ctx2):
    assert q_factorial(ctx, 0) == 1
    assert q_factorial(ctx, 1) == 1
    assert q_factorial(ctx2, 3) == F(105, 8)


@pytest.mark.parametrize("n", range(9))
def test_q_factorial_is_product(ctx, n):
    prod = F(1)
    for k in range(1, n + 1):
        prod *= q_int(ctx, k)
    assert q_factorial(ctx, n) == prod


def test_gamma_branches(ctx, ctx2):
    assert gamma_fn(ctx, 2, 5, 1, 3) == 1
    assert gamma_fn(ctx, F(4, 3), F(4, 3), 2, 2) == -1
    assert gamma_fn(ctx2, 1, 3, 1, 1) == F(-1, 11)


def test_gamma_reciprocal_symmetry(ctx):
    for t, s in [(F(2), F(5, 3)), (F(-1, 4), F(7)), (F(9, 2), F(-3, 8))]:
        assert gamma_fn(ctx, t, s, 1, 1) * gamma_fn(ctx, s, t, 1, 1) == 1


def test_tilde_gamma(ctx, ctx2):
    assert tilde_gamma_fn(ctx, 2, 5, 1, 1) == 1
    assert tilde_gamma_fn(ctx, 2, 2, 2, 1) == 0
    assert tilde_gamma_fn(ctx2, 1, 2, 1, 2) == F(7, 2)


def test_beta(ctx, ctx2):
    assert beta_fn(ctx, 2, 5, 1, 2) == 1
    assert beta_fn(ctx2, 1, 3, 1, 1) == F(11, 4)
    assert beta_fn(ctx, 5, 0, 1, 1) == ctx.qinv


def test_beta_pole_raises(ctx):
    with pytest.raises(PoleError):
        beta_fn(ctx, 3, 3, 1, 1)


def test_sample_generic_properties(ctx):
    assert sample_generic(ctx, 0) == []
    vals = sample_generic(ctx, 3)
    assert len(set(vals)) == 3
    for i, a in enumerate(vals):
        for b in vals[i + 1:]:
            assert is_generic_pair(ctx, a, b)
    assert all(v != 0 for v in sample_generic(ctx, 2, forbidden=[F(0)]))


def test_sample_generic_deterministic(ctx):
    assert sample_generic(ctx, 5, salt=3) == sample_generic(ctx, 5, salt=3)
    assert sample_generic(ctx, 5, salt=3) != sample_generic(ScalarContext(ctx.q, 2), 5, salt=3)


def test_sample_generic_avoids_forbidden(ctx):
    bad = [F(1, 2) * ctx.q ** (2 * k) for k in range(-3, 4)]
    for v in sample_generic(ctx, 10, forbidden=bad):
        assert all(is_generic_pair(ctx, v, f) for f in bad)


def test_exact_arithmetic():
    rng = random.Random(0)
    for _ in range(10_000):
        a = F(rng.randint(-999, 999), rng.randint(1, 999))
        b = F(rng.randint(-999, 999), rng.randint(1, 999))
        assert (a + b) - b == a


def test_rational_io():
    assert to_rational("3/7") == F(3, 7)
    assert to_rational("-4") == -4
    assert to_rational(F(1, 2)) == F(1, 2)
    assert format_rational(F(6, 14)) == "3/7"
    assert format_rational(F(2)) == "2/1"


@pytest.mark.parametrize("q", [0, 1, -1])
def test_context_rejects_degenerate_q(q):
    with pytest.raises(ValueError):
        ScalarContext(q)


def test_context_defaults():
    ctx = ScalarContext()
    assert ctx.q == F(3, 7)
    assert ctx.nu == F(3, 7) - F(7, 3)
