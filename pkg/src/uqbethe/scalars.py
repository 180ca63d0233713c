"""Exact scalars: q-numbers, the elementary two-point functions and generic sampling.

All arithmetic uses :class:`fractions.Fraction`.  Spectral parameters carry a
*type* (a simple-root index); the two-point functions below branch on the
relative position of the two types.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import PoleError

Rational = Fraction

DEFAULT_Q = Fraction(3, 7)


def to_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Canonical ``"p/q"`` form; the denominator is always written."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _div(num: Fraction, den: Fraction) -> Fraction:
    if den == 0:
        raise PoleError(f"denominator vanishes (numerator {num})")
    return num / den


@dataclass(frozen=True)
class ScalarContext:
    """Deformation parameter ``q`` and the seed for generic sampling."""

    q: Fraction = DEFAULT_Q
    rng_seed: int = 0
    _qinv: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = to_rational(self.q)
        if q in (0, 1, -1):
            raise ValueError(f"q must avoid 0 and +-1, got {q}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "_qinv", 1 / q)
        object.__setattr__(self, "rng_seed", int(self.rng_seed) & 0xFFFFFFFFFFFFFFFF)

    @property
    def qinv(self) -> Fraction:
        return self._qinv

    @property
    def nu(self) -> Fraction:
        """``q - q^{-1}``."""
        return self.q - self._qinv

    def qpow(self, k: int) -> Fraction:
        return self.q ** k

    def rng(self, salt: int = 0) -> random.Random:
        return random.Random((self.rng_seed << 16) ^ salt)


def q_int(ctx: ScalarContext, n: int) -> Fraction:
    """``[n]_q = (q^n - q^{-n}) / (q - q^{-1})``."""
    if n < 0:
        raise ValueError("q_int expects n >= 0")
    return (ctx.q ** n - ctx.qinv ** n) / ctx.nu


def q_factorial(ctx: ScalarContext, n: int) -> Fraction:
    if n < 0:
        raise ValueError("q_factorial expects n >= 0")
    result = Fraction(1)
    for k in range(1, n + 1):
        result *= q_int(ctx, k)
    return result


def gamma_fn(ctx: ScalarContext, t_i, t_j, type_i: int, type_j: int) -> Fraction:
    q, qi = ctx.q, ctx.qinv
    if type_i == type_j + 1:
        return _div(t_i - t_j, q * t_i - qi * t_j)
    if type_j == type_i + 1:
        return _div(qi * t_i - q * t_j, t_i - t_j)
    if type_i == type_j:
        return _div(q * t_i - qi * t_j, qi * t_i - q * t_j)
    return Fraction(1)


def tilde_gamma_fn(ctx: ScalarContext, t_i, t_j, type_i: int, type_j: int) -> Fraction:
    """Like :func:`gamma_fn` without the equal-type branch."""
    if type_i == type_j:
        return Fraction(1)
    return gamma_fn(ctx, t_i, t_j, type_i, type_j)


def beta_fn(ctx: ScalarContext, t_i, t_j, type_i: int, type_j: int) -> Fraction:
    if type_i != type_j:
        return Fraction(1)
    return _div(ctx.qinv * t_i - ctx.q * t_j, t_i - t_j)


def _pole_ratios(ctx: ScalarContext) -> tuple[Fraction, ...]:
    q2 = ctx.q * ctx.q
    return (Fraction(1), q2, 1 / q2)


def is_generic_pair(ctx: ScalarContext, a: Fraction, b: Fraction) -> bool:
    """True when ``a/b`` avoids ``1`` and ``q^{+-2}``."""
    if a == 0 or b == 0:
        return False
    return a / b not in _pole_ratios(ctx)


def sample_generic(
    ctx: ScalarContext,
    count: int,
    forbidden: Iterable[Fraction] = (),
    *,
    salt: int = 0,
    height: int = 60,
) -> list[Fraction]:
    """Draw ``count`` nonzero rationals off every pole locus.

    No two returned values, and no returned value and forbidden value, have a
    ratio in ``{1, q^2, q^-2}``.  The draw is a deterministic function of
    ``ctx.rng_seed`` and ``salt``.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = ctx.rng(salt)
    blocked = [to_rational(f) for f in forbidden]
    nonzero_blocked = [f for f in blocked if f != 0]
    out: list[Fraction] = []
    while len(out) < count:
        num = rng.randint(1, height) * rng.choice((1, -1))
        den = rng.randint(1, height)
        cand = Fraction(num, den)
        if cand in blocked:
            continue
        if all(is_generic_pair(ctx, cand, other) for other in nonzero_blocked + out):
            out.append(cand)
    return out
