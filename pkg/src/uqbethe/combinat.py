"""Typed variable sets, admissible matrices, q-symmetrization and coefficient series."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .errors import AdmissibilityError, LengthError, PoleError
from .scalars import ScalarContext, beta_fn, gamma_fn, sample_generic, tilde_gamma_fn, to_rational


def _div(num, den) -> Fraction:
    if den == 0:
        raise PoleError("denominator vanishes")
    return num / den


def _ratio_factor(ctx: ScalarContext, x: Fraction) -> Fraction:
    """``(q - q^-1 x) / (1 - x)``, the building block of most series below."""
    return _div(ctx.q - ctx.qinv * x, 1 - x)


# ---------------------------------------------------------------------------
# Typed variables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypedVariables:
    """Spectral parameters ``t^a_l`` grouped by type ``a = 1..N-1``.

    ``values[a-1]`` lists ``t^a_1, ..., t^a_{n_a}``.  The ordered multiset
    runs through type 1 first, then type 2, and so on.
    """

    N: int
    values: tuple

    def __post_init__(self):
        vals = tuple(tuple(to_rational(x) for x in row) for row in self.values)
        if len(vals) != self.N - 1:
            raise LengthError(f"expected {self.N - 1} variable types, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_counts(cls, N: int, counts: Sequence[int], flat: Sequence) -> "TypedVariables":
        it = iter(flat)
        return cls(N, tuple(tuple(next(it) for _ in range(n)) for n in counts))

    @classmethod
    def sample(cls, ctx: ScalarContext, counts: Sequence[int], forbidden: Sequence = (), salt: int = 0) -> "TypedVariables":
        flat = sample_generic(ctx, sum(counts), forbidden, salt=salt)
        return cls.from_counts(len(counts) + 1, counts, flat)

    @property
    def counts(self) -> tuple:
        return tuple(len(r) for r in self.values)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def t(self, a: int, l: int) -> Fraction:
        """``t^a_l`` with 1-based ``a`` and ``l``."""
        if l < 1:
            raise IndexError(f"t^{a}_{l}")
        return self.values[a - 1][l - 1]

    def items(self) -> list:
        """The ordered multiset as ``(type, value)`` pairs."""
        return [(a + 1, x) for a, row in enumerate(self.values) for x in row]

    def flat(self) -> list:
        return [x for row in self.values for x in row]

    def permuted(self, perms: Sequence[Sequence[int]]) -> "TypedVariables":
        """New variables with ``t^a_l`` replaced by ``t^a_{perm_a(l)}`` (0-based perms)."""
        return TypedVariables(self.N, tuple(tuple(row[p] for p in perm) for row, perm in zip(self.values, perms)))

    def prefix(self, counts: Sequence[int]) -> "TypedVariables":
        """The first ``counts[a-1]`` variables of each type."""
        return TypedVariables(self.N, tuple(row[:k] for row, k in zip(self.values, counts)))

    def truncate_rank(self) -> "TypedVariables":
        """Drop the last type (moving to rank ``N-1``)."""
        return TypedVariables(self.N - 1, self.values[:-1])

    def is_generic(self, ctx: ScalarContext) -> bool:
        flat = self.flat()
        q2 = ctx.q * ctx.q
        for i, x in enumerate(flat):
            if x == 0:
                return False
            for y in flat[i + 1:]:
                if x == y or x == q2 * y or y == q2 * x:
                    return False
        return True


# ---------------------------------------------------------------------------
# Admissible matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class AdmissibleMatrix:
    """Lower-triangular matrix ``s^b_a``, ``1 <= a <= b <= N-1``; ``rows[b-1]`` is row ``b``."""

    N: int
    rows: tuple

    def s(self, b: int, a: int) -> int:
        if a == 0:
            return 0
        if not (1 <= a <= b <= self.N - 1):
            raise IndexError(f"s^{b}_{a}")
        return self.rows[b - 1][a - 1]

    def entries(self) -> tuple:
        return tuple(x for row in self.rows for x in row)

    def column_sums(self) -> tuple:
        return tuple(sum(self.rows[b - 1][a - 1] for b in range(a, self.N)) for a in range(1, self.N))

    def is_monotone(self) -> bool:
        return all(all(x <= y for x, y in zip(row, row[1:])) for row in self.rows)

    def to_json(self) -> list:
        return [list(r) for r in self.rows]


def enumerate_admissible(n_bar: Sequence[int]) -> list[AdmissibleMatrix]:
    """All admissible matrices for the column sums ``n_bar``, in lexicographic order."""
    n_bar = tuple(int(x) for x in n_bar)
    if any(x < 0 for x in n_bar):
        raise ValueError("excitation numbers must be nonnegative")
    N = len(n_bar) + 1
    out: list[AdmissibleMatrix] = []

    def rows_for(b: int, rem: tuple) -> Iterator[tuple]:
        # row b has entries s^b_1..s^b_b, non-decreasing, bounded by remaining column sums
        def rec(a: int, lo: int, acc: tuple):
            if a > b:
                yield acc
                return
            cap = rem[a - 1]
            for x in range(lo, cap + 1):
                yield from rec(a + 1, x, acc + (x,))
        yield from rec(1, 0, ())

    def build(b: int, rem: tuple, acc: tuple):
        if b == N:
            if all(r == 0 for r in rem):
                out.append(AdmissibleMatrix(N, acc))
            return
        for row in rows_for(b, rem):
            new_rem = tuple(rem[a] - (row[a] if a < b else 0) for a in range(N - 1))
            build(b + 1, new_rem, acc + (row,))

    build(1, n_bar, ())
    out.sort(key=lambda m: m.entries())
    return out


def brute_force_admissible(n_bar: Sequence[int]) -> list[AdmissibleMatrix]:
    """Reference enumeration: filter every bounded triangular matrix."""
    n_bar = tuple(n_bar)
    N = len(n_bar) + 1
    cells = [(b, a) for b in range(1, N) for a in range(1, b + 1)]
    ranges = [range(n_bar[a - 1] + 1) for (_, a) in cells]
    out = []
    for combo in itertools.product(*ranges):
        rows = []
        k = 0
        for b in range(1, N):
            rows.append(tuple(combo[k:k + b]))
            k += b
        m = AdmissibleMatrix(N, tuple(rows))
        if m.is_monotone() and m.column_sums() == n_bar:
            out.append(m)
    out.sort(key=lambda m: m.entries())
    return out


def p_tilde(s: AdmissibleMatrix, a: int, b: int) -> int:
    """``s^a_a + ... + s^{b-1}_a``."""
    if not (1 <= a <= b <= s.N - 1):
        raise IndexError(f"p_tilde({a},{b}) outside 1 <= a <= b <= {s.N - 1}")
    return sum(s.s(c, a) for c in range(a, b))


def p_vector(s: AdmissibleMatrix, j: int) -> tuple:
    """Row sums ``s^j + ... + s^{N-1}`` as a length ``N-1`` vector; zero for ``j = N``."""
    N = s.N
    out = [0] * (N - 1)
    for b in range(j, N):
        for a in range(1, b + 1):
            out[a - 1] += s.s(b, a)
    return tuple(out)


# ---------------------------------------------------------------------------
# q-symmetrization
# ---------------------------------------------------------------------------


def _perm_inversion_weight(ctx: ScalarContext, row: Sequence[Fraction], perm: Sequence[int]) -> Fraction:
    w = Fraction(1)
    n = len(perm)
    for l in range(n):
        for lp in range(l + 1, n):
            if perm[l] > perm[lp]:
                x = _div(row[perm[lp]], row[perm[l]])
                w *= _div(ctx.qinv - ctx.q * x, ctx.q - ctx.qinv * x)
    return w


def symmetrization_weight(ctx: ScalarContext, vars: TypedVariables, perms: Sequence[Sequence[int]]) -> Fraction:
    """Weight of the permutation ``perms`` in :func:`q_symmetrize`.

    Equal to ``phi(sigma t) / phi(t)``.
    """
    w = Fraction(1)
    for row, perm in zip(vars.values, perms):
        w *= _perm_inversion_weight(ctx, row, perm)
    return w


def type_permutations(counts: Sequence[int]) -> Iterator[tuple]:
    return itertools.product(*(itertools.permutations(range(n)) for n in counts))


def _accumulate(acc, w: Fraction, val):
    if isinstance(val, tuple):
        if acc is None:
            return [w * x for x in val]
        for i, x in enumerate(val):
            if x:
                acc[i] += w * x
        return acc
    return w * val if acc is None else acc + w * val


def q_symmetrize(ctx: ScalarContext, G: Callable[[TypedVariables], object], vars: TypedVariables):
    """Weighted sum of ``G`` over all type-preserving permutations of ``vars``.

    ``G`` may return a Fraction or a tuple of Fractions.
    """
    acc = None
    for perms in type_permutations(vars.counts):
        w = symmetrization_weight(ctx, vars, perms)
        acc = _accumulate(acc, w, G(vars.permuted(perms)))
    return tuple(acc) if isinstance(acc, list) else acc


def coeff_phi_sym(ctx: ScalarContext, vars: TypedVariables) -> Fraction:
    """``prod_a prod_{l<l'} (q - q^-1 t^a_l/t^a_l') / (1 - t^a_l/t^a_l')``."""
    w = Fraction(1)
    for row in vars.values:
        for i in range(len(row)):
            for j in range(i + 1, len(row)):
                w *= _ratio_factor(ctx, _div(row[i], row[j]))
    return w


def q_symmetrize_renorm(ctx: ScalarContext, G: Callable[[TypedVariables], object], vars: TypedVariables):
    """Renormalized symmetrization: ``phi(t) * q_symmetrize(G)``."""
    phi = coeff_phi_sym(ctx, vars)
    val = q_symmetrize(ctx, G, vars)
    if isinstance(val, tuple):
        return tuple(phi * x for x in val)
    return phi * val


def q_symmetrize_renorm_direct(ctx: ScalarContext, G: Callable[[TypedVariables], object], vars: TypedVariables):
    """Same as :func:`q_symmetrize_renorm`, summing ``phi(sigma t) G(sigma t)`` directly."""
    acc = None
    for perms in type_permutations(vars.counts):
        pv = vars.permuted(perms)
        acc = _accumulate(acc, coeff_phi_sym(ctx, pv), G(pv))
    return tuple(acc) if isinstance(acc, list) else acc


# ---------------------------------------------------------------------------
# Coefficient series
# ---------------------------------------------------------------------------


def coeff_Z(ctx: ScalarContext, s_bar: Sequence[int], vars: TypedVariables,
            r: Sequence[int] | None = None, l: Sequence[int] | None = None) -> Fraction:
    """Cross-type series for a split ``s_bar`` of the segments ``(l, r]``.

    Defaults: ``r`` = variable counts, ``l`` = 0.
    """
    N = vars.N
    r = vars.counts if r is None else tuple(r)
    l = (0,) * (N - 1) if l is None else tuple(l)
    if not (len(s_bar) == len(r) == len(l) == N - 1):
        raise LengthError("split and segment bounds must have length N-1")
    out = Fraction(1)
    for a in range(1, N - 1):
        for li in range(r[a - 1] - s_bar[a - 1] + 1, r[a - 1] + 1):
            for lp in range(l[a] + 1, r[a] - s_bar[a] + 1):
                out *= _ratio_factor(ctx, _div(vars.t(a, li), vars.t(a + 1, lp)))
    return out


def coeff_Y(ctx: ScalarContext, us: Sequence, vs: Sequence, twisted: bool = False) -> Fraction:
    """``prod_m 1/(1 - v_m/u_m) prod_{m'>m} (q - q^-1 v_m'/u_m)/(1 - v_m'/u_m)``.

    The twisted series carries the extra factor ``prod_m v_m/u_m``.
    """
    if len(us) != len(vs):
        raise LengthError("u and v lists differ in length")
    k = len(us)
    out = Fraction(1)
    for m in range(k):
        out *= _div(1, 1 - _div(vs[m], us[m]))
        for mp in range(m + 1, k):
            out *= _ratio_factor(ctx, _div(vs[mp], us[m]))
        if twisted:
            out *= _div(vs[m], us[m])
    return out


def coeff_Y_alt(ctx: ScalarContext, us: Sequence, vs: Sequence, twisted: bool = False) -> Fraction:
    """The same series with the inner product reindexed over ``m' < m``."""
    if len(us) != len(vs):
        raise LengthError("u and v lists differ in length")
    out = Fraction(1)
    for m in range(len(us)):
        out *= _div(1, 1 - _div(vs[m], us[m]))
        for mp in range(m):
            out *= _ratio_factor(ctx, _div(vs[m], us[mp]))
        if twisted:
            out *= _div(vs[m], us[m])
    return out


def coeff_X(ctx: ScalarContext, s_bar: Sequence[int], vars: TypedVariables,
            r: Sequence[int] | None = None, l: Sequence[int] | None = None, twisted: bool = False) -> Fraction:
    """Product of Y-series pairing the top ``s_a`` variables of consecutive types."""
    N = vars.N
    r = vars.counts if r is None else tuple(r)
    l = (0,) * (N - 1) if l is None else tuple(l)
    s_bar = tuple(s_bar)
    if not (len(s_bar) == len(r) == len(l) == N - 1):
        raise LengthError("split and segment bounds must have length N-1")
    nonempty = [a for a in range(1, N) if r[a - 1] != l[a - 1]]
    j = max(nonempty) if nonempty else 1
    for a in range(1, j + 1):
        if not (0 <= s_bar[a - 1] <= r[a - 1] - l[a - 1]):
            raise AdmissibilityError(f"s_{a}={s_bar[a - 1]} outside segment of length {r[a - 1] - l[a - 1]}")
    chain = (0,) + s_bar[:j]
    if any(x > y for x, y in zip(chain, chain[1:])) or s_bar[j - 1] != r[j - 1] - l[j - 1]:
        raise AdmissibilityError(f"split {s_bar} is not admissible for segments {l}..{r}")
    out = Fraction(1)
    for a in range(1, j):
        sa = s_bar[a - 1]
        us = [vars.t(a + 1, r[a] - s_bar[a] + m) for m in range(1, sa + 1)]
        vs = [vars.t(a, r[a - 1] - sa + m) for m in range(1, sa + 1)]
        out *= coeff_Y(ctx, us, vs, twisted)
    return out


def coeff_calZ(ctx: ScalarContext, s: AdmissibleMatrix, vars: TypedVariables, twisted: bool = False) -> Fraction:
    """Closed product over ``b, a, l, l'`` collecting all Z and X series of ``s``."""
    N = s.N
    if vars.counts != s.column_sums():
        raise LengthError(f"variable counts {vars.counts} do not match {s.column_sums()}")
    out = Fraction(1)
    for b in range(2, N):
        for a in range(1, b):
            pa, pa1 = p_tilde(s, a, b), p_tilde(s, a + 1, b)
            for l in range(1, s.s(b, a) + 1):
                x = vars.t(a, l + pa)
                y = _div(x, vars.t(a + 1, l + pa1))
                out *= _div(y if twisted else 1, 1 - y)
                for lp in range(1, l + pa1):
                    out *= _ratio_factor(ctx, _div(x, vars.t(a + 1, lp)))
    return out


def coeff_calZ_factored(ctx: ScalarContext, s: AdmissibleMatrix, vars: TypedVariables, twisted: bool = False) -> Fraction:
    """The same series assembled from Z and X over the row segments of ``s``."""
    N = s.N
    n = vars.counts
    out = Fraction(1)
    for j in range(3, N):
        bound = tuple(n[a] - p_vector(s, j + 1)[a] for a in range(N - 1))
        row = tuple(s.s(j, a) if a <= j else 0 for a in range(1, N))
        out *= coeff_Z(ctx, row, vars, r=bound, l=(0,) * (N - 1))
    for j in range(2, N):
        r = tuple(n[a] - p_vector(s, j + 1)[a] for a in range(N - 1))
        l = tuple(n[a] - p_vector(s, j)[a] for a in range(N - 1))
        row = tuple(s.s(j, a) if a <= j else 0 for a in range(1, N))
        out *= coeff_X(ctx, row, vars, r=r, l=l, twisted=twisted)
    return out


def coeff_eta(ctx: ScalarContext, vars: TypedVariables) -> Fraction:
    """``prod_{a<b} prod_{j,i} (q t^b_j - q^-1 t^a_i) / (t^b_j - t^a_i)``."""
    out = Fraction(1)
    N = vars.N
    for a in range(1, N):
        for b in range(a + 1, N):
            for tb in vars.values[b - 1]:
                for ta in vars.values[a - 1]:
                    out *= _div(ctx.q * tb - ctx.qinv * ta, tb - ta)
    return out


def coeff_phi(ctx: ScalarContext, split: tuple, items: Sequence[tuple], modified: bool = False) -> Fraction:
    """Splitting coefficient for ``I = I1 u I2`` over the ordered multiset ``items``.

    ``split`` holds two collections of positions into ``items``; ``items`` are
    ``(type, value)`` pairs in multiset order.
    """
    I1, I2 = (set(x) for x in split)
    if I1 & I2 or (I1 | I2) != set(range(len(items))):
        raise ValueError("split must partition the multiset")
    out = Fraction(1)
    if modified:
        for i in I1:
            for j in I2:
                out *= beta_fn(ctx, items[i][1], items[j][1], items[i][0], items[j][0])
    fn = tilde_gamma_fn if modified else gamma_fn
    for i in I2:
        for j in I1:
            if i < j:
                out *= fn(ctx, items[i][1], items[j][1], items[i][0], items[j][0])
    return out


def pullback_weight(ctx: ScalarContext, sigma: Sequence[int], items: Sequence[tuple]) -> Fraction:
    """``prod_{i<j, sigma(j)<sigma(i)} gamma(t_i, t_j)`` for a type-preserving ``sigma``."""
    if sorted(sigma) != list(range(len(items))):
        raise ValueError("sigma must be a permutation of the positions")
    if any(items[i][0] != items[sigma[i]][0] for i in range(len(items))):
        raise ValueError("sigma must preserve types")
    out = Fraction(1)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if sigma[j] < sigma[i]:
                out *= gamma_fn(ctx, items[i][1], items[j][1], items[i][0], items[j][0])
    return out
