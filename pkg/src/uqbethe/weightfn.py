"""Off-shell Bethe vectors: three constructions and the identities relating them.

* ``direct``: closed sum over admissible matrices of ordered L-entry products.
* ``recurrence``: peel off the last simple root and recurse on the embedded
  lower-rank module.
* ``tv``: auxiliary-space trace of a monodromy times an ordered R-matrix product
  (twisted variant only).
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinat import (
    AdmissibleMatrix,
    TypedVariables,
    coeff_calZ,
    coeff_eta,
    coeff_phi,
    coeff_phi_sym,
    coeff_X,
    coeff_Z,
    enumerate_admissible,
    p_tilde,
    pullback_weight,
    q_symmetrize_renorm,
)
from .errors import LengthError, PoleError, VariantError, ZeroLambdaError
from .linalg import ZERO, Matrix, vec_kron
from .representations import (
    GlnGenerators,
    Module,
    check_truncation,
    embedded_module,
    evaluation_module,
    tensor_module,
)
from .rmatrix import Variant, build_r
from .scalars import ScalarContext, beta_fn, q_factorial


class Method(enum.Enum):
    DIRECT = "direct"
    RECURRENCE = "recurrence"
    TV = "tv"

    @classmethod
    def parse(cls, value: "Method | str") -> "Method":
        if isinstance(value, Method):
            return value
        text = str(value).strip().lower()
        aliases = {"direct": cls.DIRECT, "directsum": cls.DIRECT, "recurrence": cls.RECURRENCE,
                   "rec": cls.RECURRENCE, "tv": cls.TV, "tvtrace": cls.TV}
        try:
            return aliases[text]
        except KeyError:
            raise ValueError(f"unknown method {value!r}") from None


@dataclass
class WeightResult:
    vector: tuple
    method: Method
    terms: int = 0
    seconds: float = field(default=0.0, compare=False)

    def meta(self) -> dict:
        return {"method": self.method.value, "terms": self.terms}


def _check_request(module: Module, vars: TypedVariables) -> None:
    if vars.N != module.N:
        raise LengthError(f"variables are for N={vars.N}, module has N={module.N}")
    check_truncation(module, vars.total)


def apply_ops(module: Module, factors: Sequence[tuple], vec: tuple) -> tuple:
    """Apply ``L^+_{ij}(t)`` factors, listed left to right, to ``vec``."""
    for i, j, t in reversed(factors):
        vec = module.l_entry("+", i, j, t).apply(vec)
        if not any(vec):
            return vec
    return vec


def _scale_add(acc: list, c: Fraction, vec: tuple) -> None:
    if c == 0:
        return
    for k, x in enumerate(vec):
        if x:
            acc[k] += c * x


# ---------------------------------------------------------------------------
# Direct sum over admissible matrices
# ---------------------------------------------------------------------------


def admissible_prefactor(ctx: ScalarContext, s: AdmissibleMatrix, n_bar: Sequence[int]) -> Fraction:
    N = s.N
    power = sum(n_bar[b - 1] - s.s(b, b) for b in range(1, N))
    c = ctx.nu ** power
    for b in range(1, N):
        for a in range(1, b + 1):
            c /= q_factorial(ctx, s.s(b, a) - s.s(b, a - 1))
    return c


def direct_factors(s: AdmissibleMatrix, vars: TypedVariables) -> list[tuple]:
    """Ordered ``(i, j, t)`` list of L-entries for one admissible matrix."""
    N = s.N
    out = []
    for b in range(N - 1, 0, -1):
        for a in range(1, b + 1):
            for l in range(s.s(b, a - 1) + 1, s.s(b, a) + 1):
                out.append((a, b + 1, vars.t(b, l)))
        for l in range(s.s(b, b) + 1, vars.counts[b - 1] + 1):
            out.append((b + 1, b + 1, vars.t(b, l)))
    return out


def direct_modified_weight(module: Module, vars: TypedVariables) -> WeightResult:
    start = time.perf_counter()
    _check_request(module, vars)
    ctx = module.ctx
    n_bar = vars.counts
    mats = enumerate_admissible(n_bar)
    twisted = module.variant is Variant.TWISTED
    prefactors = [admissible_prefactor(ctx, s, n_bar) for s in mats]
    v = module.singular_vector

    def integrand(tv: TypedVariables) -> tuple:
        acc = [ZERO] * module.dim
        for s, c in zip(mats, prefactors):
            coeff = c * coeff_calZ(ctx, s, tv, twisted)
            if coeff == 0:
                continue
            _scale_add(acc, coeff, apply_ops(module, direct_factors(s, tv), v))
        return tuple(acc)

    vec = q_symmetrize_renorm(ctx, integrand, vars)
    return WeightResult(tuple(vec), Method.DIRECT, len(mats), time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Recurrence through the embedded module
# ---------------------------------------------------------------------------


def first_rows(n_bar: Sequence[int]) -> list[tuple]:
    """Non-decreasing ``s_1 <= ... <= s_{N-1} = n_{N-1}`` with ``s_a <= n_a``."""
    n_bar = tuple(n_bar)
    k = len(n_bar)
    if k == 0:
        return [()]
    out = []
    for head in itertools.product(*(range(n + 1) for n in n_bar[:-1])):
        row = head + (n_bar[-1],)
        if all(x <= y for x, y in zip(row, row[1:])):
            out.append(row)
    return out


def _embedded(module: Module) -> Module:
    emb = getattr(module, "_embedded_cache", None)
    if emb is None:
        emb = embedded_module(module)
        module._embedded_cache = emb
    return emb


def _recurrence_vector(module: Module, vars: TypedVariables) -> tuple:
    ctx = module.ctx
    N = module.N
    if N == 1 or vars.total == 0:
        return module.singular_vector
    n = vars.counts
    twisted = module.variant is Variant.TWISTED
    sub_module = _embedded(module)
    total = [ZERO] * module.dim
    for s in first_rows(n):
        coef = 1 / q_factorial(ctx, s[0])
        for a in range(1, N - 1):
            coef *= ctx.nu ** s[a - 1]
            coef /= q_factorial(ctx, s[a] - s[a - 1]) * q_factorial(ctx, n[a - 1] - s[a - 1])
        sub_counts = tuple(n[a] - s[a] for a in range(N - 1))
        lower = tuple(n[a] - s[a] for a in range(N - 1))

        def integrand(tv: TypedVariables, s=s, sub_counts=sub_counts, lower=lower) -> tuple:
            c = coeff_X(ctx, s, tv, r=tv.counts, l=lower, twisted=twisted) * coeff_Z(ctx, s, tv)
            for a in range(1, N - 1):
                for l in range(n[a - 1] - s[a - 1] + 1, n[a - 1] + 1):
                    c *= module.lam(a + 1, tv.t(a, l))
            if c == 0:
                return (ZERO,) * module.dim
            sub_vars = tv.prefix(sub_counts).truncate_rank()
            w = _recurrence_vector(sub_module, sub_vars)
            factors = []
            for a in range(1, N):
                prev = s[a - 2] if a > 1 else 0
                for l in range(prev + 1, s[a - 1] + 1):
                    factors.append((a, N, tv.t(N - 1, l)))
            w = apply_ops(module, factors, w)
            return tuple(c * x for x in w)

        _scale_add(total, coef, q_symmetrize_renorm(ctx, integrand, vars))
    return tuple(total)


def recurrence_modified_weight(module: Module, vars: TypedVariables) -> WeightResult:
    start = time.perf_counter()
    _check_request(module, vars)
    vec = _recurrence_vector(module, vars)
    return WeightResult(tuple(vec), Method.RECURRENCE, len(first_rows(vars.counts)), time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Trace of monodromy times R-matrix product
# ---------------------------------------------------------------------------


def r_product_column(ctx: ScalarContext, N: int, us: Sequence[Fraction], column: tuple,
                     variant: Variant = Variant.TWISTED) -> dict:
    """Column ``column`` of the ordered product of two-leg R-matrices.

    The factor on legs ``(j, i)`` with ``j > i`` stands left of ``(m, l)`` when
    ``(j, i) > (m, l)`` lexicographically; the result maps leg-index tuples
    (0-based) to coefficients.
    """
    M = len(us)
    state = {tuple(column): Fraction(1)}
    pairs = [(j, i) for j in range(M) for i in range(j)]  # ascending = right to left
    for j, i in pairs:
        R = build_r(ctx, variant, N, us[j], us[i])
        new: dict = {}
        for idx, c in state.items():
            col = idx[j] * N + idx[i]
            for row in range(N * N):
                r = R[row, col]
                if r == 0:
                    continue
                xj, xi = divmod(row, N)
                key = list(idx)
                key[j], key[i] = xj, xi
                key = tuple(key)
                new[key] = new.get(key, ZERO) + r * c
        state = {k: v for k, v in new.items() if v != 0}
    return state


def tv_weight(module: Module, vars: TypedVariables, *, allow_original: bool = False) -> WeightResult:
    """Trace construction; ``allow_original`` runs the same recipe with the original R-matrix."""
    start = time.perf_counter()
    if module.variant is not Variant.TWISTED and not allow_original:
        raise VariantError("the trace construction is defined for the twisted variant only")
    _check_request(module, vars)
    ctx, N = module.ctx, module.N
    items = vars.items()
    us = [x for _, x in items]
    rows = [a - 1 for a, _ in items]
    cols = tuple(a for a, _ in items)  # 0-based index of a+1
    column = r_product_column(ctx, N, us, cols, module.variant)
    acc = [ZERO] * module.dim
    v = module.singular_vector
    for K in sorted(column):
        factors = [(rows[m] + 1, K[m] + 1, us[m]) for m in range(len(us))]
        _scale_add(acc, column[K], apply_ops(module, factors, v))
    return WeightResult(tuple(acc), Method.TV, len(column), time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Dispatch, conversions and identity checks
# ---------------------------------------------------------------------------


def compute_weight(module: Module, vars: TypedVariables, method: Method | str = Method.DIRECT) -> WeightResult:
    method = Method.parse(method)
    if method is Method.DIRECT:
        return direct_modified_weight(module, vars)
    if method is Method.RECURRENCE:
        return recurrence_modified_weight(module, vars)
    return tv_weight(module, vars)


def modification_factor(module: Module, vars: TypedVariables) -> Fraction:
    """``prod_{i<j} beta(t_i, t_j) * prod_i lambda_{type(i)+1}(t_i)``."""
    ctx = module.ctx
    items = vars.items()
    f = Fraction(1)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            f *= beta_fn(ctx, items[i][1], items[j][1], items[i][0], items[j][0])
    for a, t in items:
        lam = module.lam(a + 1, t)
        if lam == 0:
            raise ZeroLambdaError(f"lambda_{a + 1}({t}) vanishes")
        f *= lam
    return f


def modified_from_plain(module: Module, vars: TypedVariables, plain: Sequence[Fraction]) -> tuple:
    f = modification_factor(module, vars)
    return tuple(f * x for x in plain)


def plain_from_modified(module: Module, vars: TypedVariables, modified: Sequence[Fraction]) -> tuple:
    f = modification_factor(module, vars)
    if f == 0:
        raise ZeroLambdaError("modification factor vanishes")
    return tuple(x / f for x in modified)


def coincidence_sides(module: Module, vars: TypedVariables) -> tuple[tuple, tuple]:
    direct = direct_modified_weight(module, vars).vector
    eta = coeff_eta(module.ctx, vars)
    tv = tv_weight(module, vars).vector
    return direct, tuple(eta * x for x in tv)


def check_coincidence(module: Module, vars: TypedVariables) -> bool:
    lhs, rhs = coincidence_sides(module, vars)
    return lhs == rhs


def _sub_vars(vars: TypedVariables, positions: Sequence[int]) -> TypedVariables:
    items = vars.items()
    rows: list[list] = [[] for _ in range(vars.N - 1)]
    for p in sorted(positions):
        a, t = items[p]
        rows[a - 1].append(t)
    return TypedVariables(vars.N, tuple(tuple(r) for r in rows))


def coproduct_sides(ctx: ScalarContext, m1: Module, m2: Module, vars: TypedVariables,
                    method: Method | str = Method.DIRECT, tensor: Module | None = None) -> tuple[tuple, tuple]:
    """Weight on ``m1 (x) m2`` and the sum over all splittings of the variables."""
    if tensor is None:
        tensor = tensor_module(ctx, [m1, m2])
    lhs = compute_weight(tensor, vars, method).vector
    items = vars.items()
    M = len(items)
    acc = [ZERO] * tensor.dim
    for mask in range(1 << M):
        I1 = [p for p in range(M) if mask >> p & 1]
        I2 = [p for p in range(M) if not mask >> p & 1]
        c = coeff_phi(ctx, (I1, I2), items, modified=True)
        for p in I1:
            a, t = items[p]
            c *= m2.lam(a, t)
        for p in I2:
            a, t = items[p]
            c *= m1.lam(a + 1, t)
        if c == 0:
            continue
        w1 = compute_weight(m1, _sub_vars(vars, I1), method).vector
        w2 = compute_weight(m2, _sub_vars(vars, I2), method).vector
        _scale_add(acc, c, vec_kron(w1, w2))
    return lhs, tuple(acc)


def check_coproduct(ctx: ScalarContext, m1: Module, m2: Module, vars: TypedVariables,
                    method: Method | str = Method.DIRECT) -> bool:
    lhs, rhs = coproduct_sides(ctx, m1, m2, vars, method)
    return lhs == rhs


def permute_positions(vars: TypedVariables, sigma: Sequence[int]) -> TypedVariables:
    """Variables whose slot ``sigma[i]`` holds the old value at position ``i``."""
    items = vars.items()
    if sorted(sigma) != list(range(len(items))):
        raise ValueError("sigma must be a permutation of the positions")
    if any(items[i][0] != items[sigma[i]][0] for i in range(len(items))):
        raise ValueError("sigma must preserve types")
    flat = [None] * len(items)
    for i, (_, t) in enumerate(items):
        flat[sigma[i]] = t
    return TypedVariables.from_counts(vars.N, vars.counts, flat)


def qsymmetry_sides(module: Module, vars: TypedVariables, sigma: Sequence[int],
                    method: Method | str = Method.DIRECT) -> tuple[tuple, tuple]:
    """Pulled-back plain weight and the plain weight itself."""
    ctx = module.ctx
    moved = permute_positions(vars, sigma)
    w_moved = plain_from_modified(module, moved, compute_weight(module, moved, method).vector)
    w = plain_from_modified(module, vars, compute_weight(module, vars, method).vector)
    pb = pullback_weight(ctx, sigma, vars.items())
    return tuple(pb * x for x in w_moved), w


def check_qsymmetry(module: Module, vars: TypedVariables, sigma: Sequence[int],
                    method: Method | str = Method.DIRECT) -> bool:
    lhs, rhs = qsymmetry_sides(module, vars, sigma, method)
    return lhs == rhs


def adjacent_transpositions(vars: TypedVariables) -> list[list[int]]:
    """Swaps of neighbouring positions of equal type."""
    items = vars.items()
    out = []
    for p in range(len(items) - 1):
        if items[p][0] == items[p + 1][0]:
            sigma = list(range(len(items)))
            sigma[p], sigma[p + 1] = p + 1, p
            out.append(sigma)
    return out


# ---------------------------------------------------------------------------
# Generator-side closed formula on highest-weight evaluation modules
# ---------------------------------------------------------------------------


def _generator_scalar(ctx: ScalarContext, s: AdmissibleMatrix, tv: TypedVariables, lam: Sequence[int], z: Fraction,
                      twisted: bool) -> Fraction:
    N = s.N
    q, qi = ctx.q, ctx.qinv
    out = Fraction(1)
    for b in range(2, N):
        for a in range(1, b):
            pa, pa1 = p_tilde(s, a, b), p_tilde(s, a + 1, b)
            qa = q ** lam[a]
            for l in range(1, s.s(b, a) + 1):
                x = tv.t(a, l + pa)
                y = tv.t(a + 1, l + pa1)
                num = qa * x - z / qa
                den = (y - x) if twisted else (1 - x / y)
                if den == 0:
                    raise PoleError("generator formula denominator vanishes")
                out *= num / den
                for lp in range(1, l + pa1):
                    w = tv.t(a + 1, lp)
                    if twisted:
                        f_num, f_den = q * w - qi * x, w - x
                    else:
                        f_num, f_den = q - qi * x / w, 1 - x / w
                    if f_den == 0:
                        raise PoleError("generator formula denominator vanishes")
                    out *= f_num / f_den
    return out


def generator_operator_factors(gens: GlnGenerators, s: AdmissibleMatrix, z: Fraction) -> list[tuple[Fraction, Matrix, int]]:
    """Ordered ``(scalar, operator, power)`` list for one admissible matrix.

    Original: ``prod_b (desc) prod_a (asc) (z E_{b+1,a} E_{b+1,b+1}^-1)^{ds}``.
    Twisted: ``prod over (b, a) descending of q^{...} Ec_{b+1,a}^{ds}``.
    """
    ctx = gens.ctx
    N = s.N
    out = []
    if gens.variant is Variant.ORIGINAL:
        for b in range(N - 1, 0, -1):
            for a in range(1, b + 1):
                d = s.s(b, a) - s.s(b, a - 1)
                if d:
                    op = (gens.gen(b + 1, a) @ gens.gen_inv(b + 1)).scale(z)
                    out.append((1 / q_factorial(ctx, d), op, d))
    else:
        for b in range(N - 1, 0, -1):
            for a in range(b, 0, -1):
                d = s.s(b, a) - s.s(b, a - 1)
                prev = s.s(b, a - 1)
                c = ctx.q ** (prev * (prev - s.s(b, a))) / q_factorial(ctx, d)
                if d:
                    op = gens.gen(b + 1, a) @ gens.gen(b + 1, b + 1)
                    out.append((c, op, d))
                else:
                    out.append((c, None, 0))
    return out


def generator_formula_weight(ctx: ScalarContext, gens: GlnGenerators, z, vars: TypedVariables,
                         lam: Sequence[int] | None = None, module: Module | None = None) -> WeightResult:
    """Closed generator-side expression on the evaluation module of ``gens`` at ``z``.

    ``lam`` is the highest weight (exponents of ``q``); defaults to ``gens.weight``.
    """
    start = time.perf_counter()
    z = Fraction(z)
    if lam is None:
        lam = gens.weight
    if lam is None:
        raise ValueError("highest weight unknown; pass lam explicitly")
    if module is None:
        module = evaluation_module(ctx, gens, z)
    _check_request(module, vars)
    twisted = gens.variant is Variant.TWISTED
    n_bar = vars.counts
    mats = enumerate_admissible(n_bar)
    v = module.singular_vector
    prefactor = ctx.nu ** sum(n_bar)
    if not twisted:
        for t in vars.flat():
            prefactor /= t
    acc = [ZERO] * module.dim
    for s in mats:
        scalar = q_symmetrize_renorm(ctx, lambda tv, s=s: _generator_scalar(ctx, s, tv, lam, z, twisted), vars)
        if scalar == 0:
            continue
        vec = v
        coef = prefactor * scalar
        for c, op, d in reversed(generator_operator_factors(gens, s, z)):
            coef *= c
            for _ in range(d):
                vec = op.apply(vec)
        _scale_add(acc, coef, vec)
    return WeightResult(tuple(acc), Method.DIRECT, len(mats), time.perf_counter() - start)


def weight_support_levels(module: Module, vec: Sequence[Fraction]) -> set:
    """Indices of the nonzero coordinates of ``vec``."""
    return {k for k, x in enumerate(vec) if x}
