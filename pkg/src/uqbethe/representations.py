"""Generator matrices, evaluation L-operators, tensor monodromies and Gauss coordinates.

A :class:`Module` is a concrete finite-dimensional space together with a rule
producing the ``N x N`` grid of operators ``L^{+-}(u)`` at any rational ``u``.
Everything else (tensor products, embedded lower-rank modules, weight
functions) is built on top of that single rule.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Sequence

from .errors import (
    AmbiguityError,
    MismatchError,
    PivotError,
    PoleError,
    RelationError,
    SingularVectorError,
    TruncationError,
)
from .linalg import IntMatrix, Matrix, basis_vector, int_combination_rows, is_zero_vector, kron, op_matmul
from .rmatrix import Variant, build_r
from .scalars import ScalarContext, format_rational, sample_generic, to_rational

OpGrid = list  # list[list[Matrix]], 0-based


def q_number(ctx: ScalarContext, n: int) -> Fraction:
    """``[n]_q`` for any integer ``n``."""
    return (ctx.q ** n - ctx.qinv ** n) / ctx.nu


# ---------------------------------------------------------------------------
# U_q(gl_N) generators
# ---------------------------------------------------------------------------


@dataclass
class GlnGenerators:
    """Images ``gen(a, b)`` of the Cartan-Weyl generators, 1-based indices.

    ``valid_columns`` restricts relation checks to basis vectors whose images
    stay inside a truncated space; ``None`` means every column is valid.
    """

    ctx: ScalarContext
    N: int
    dim: int
    variant: Variant
    gens: dict
    cartan_inv: dict
    valid_columns: tuple | None = None
    weight: tuple | None = None

    def gen(self, a: int, b: int) -> Matrix:
        return self.gens[(a, b)]

    def gen_inv(self, a: int) -> Matrix:
        return self.cartan_inv[a]

    def composition_coeffs(self) -> tuple[Fraction, Fraction]:
        """Coefficients for lowering and raising composed generators."""
        q, qi = self.ctx.q, self.ctx.qinv
        return (q, qi) if self.variant is Variant.ORIGINAL else (qi, q)

    # relation checks -------------------------------------------------------
    def _vanishes(self, m: Matrix) -> bool:
        if self.valid_columns is None:
            return m.is_zero()
        cols = set(self.valid_columns)
        return all(not (set(row) & cols) for row in m.rows.values())

    def relation_failures(self) -> list[str]:
        ctx, N = self.ctx, self.N
        q, nu = ctx.q, ctx.nu
        bad: list[str] = []
        g = self.gen
        for a in range(1, N + 1):
            if not (g(a, a) @ self.gen_inv(a)).__eq__(Matrix.identity(self.dim)):
                bad.append(f"cartan inverse {a}")
            for b in range(1, N + 1):
                for c in range(1, N + 1):
                    if b == c:
                        continue
                    lhs = g(a, a) @ g(b, c) @ self.gen_inv(a)
                    k = (a == b) - (a == c)
                    if not self._vanishes(lhs - g(b, c).scale(q ** k)):
                        bad.append(f"cartan conjugation ({a};{b},{c})")
        for a in range(1, N):
            for b in range(1, N):
                comm = g(a, a + 1) @ g(b + 1, b) - g(b + 1, b) @ g(a, a + 1)
                if a == b:
                    kk = g(a, a) @ self.gen_inv(a + 1)
                    kki = self.gen_inv(a) @ g(a + 1, a + 1)
                    rhs = (kk - kki).scale(1 / nu)
                else:
                    rhs = Matrix.zero(self.dim)
                if not self._vanishes(comm - rhs):
                    bad.append(f"commutator ({a},{b})")
        qq = q + ctx.qinv
        for kind in ("raise", "lower"):
            for i in range(1, N):
                for j in range(1, N):
                    x = g(i, i + 1) if kind == "raise" else g(i + 1, i)
                    y = g(j, j + 1) if kind == "raise" else g(j + 1, j)
                    if abs(i - j) == 1:
                        serre = x @ x @ y - (x @ y @ x).scale(qq) + y @ x @ x
                        if not self._vanishes(serre):
                            bad.append(f"serre {kind} ({i},{j})")
                    elif abs(i - j) > 1:
                        if not self._vanishes(x @ y - y @ x):
                            bad.append(f"far commutation {kind} ({i},{j})")
        # composed generators must not depend on the intermediate index
        lo, hi = self.composition_coeffs()
        for a in range(1, N + 1):
            for c in range(a + 2, N + 1):
                for b in range(a + 1, c):
                    low = g(c, b) @ g(b, a) - (g(b, a) @ g(c, b)).scale(lo)
                    up = g(a, b) @ g(b, c) - (g(b, c) @ g(a, b)).scale(hi)
                    if not self._vanishes(low - g(c, a)):
                        bad.append(f"composed ({c},{a}) via {b}")
                    if not self._vanishes(up - g(a, c)):
                        bad.append(f"composed ({a},{c}) via {b}")
        return bad

    def check(self) -> None:
        bad = self.relation_failures()
        if bad:
            raise RelationError("generator relations violated: " + ", ".join(bad[:5]))


def generators_from_chevalley(
    ctx: ScalarContext,
    N: int,
    variant: Variant | str,
    cartan: Sequence[Matrix],
    raising: Sequence[Matrix],
    lowering: Sequence[Matrix],
    *,
    valid_columns: Iterable[int] | None = None,
    weight: tuple | None = None,
    check: bool = True,
) -> GlnGenerators:
    """Complete Chevalley data to all ``gen(a, b)`` and self-check the relations.

    ``cartan[a-1]`` is the image of ``E_aa``; ``raising[a-1]`` of ``E_{a,a+1}``
    and ``lowering[a-1]`` of ``E_{a+1,a}``.
    """
    variant = Variant.parse(variant)
    dim = cartan[0].nrows
    gens: dict = {}
    for a in range(1, N + 1):
        gens[(a, a)] = cartan[a - 1]
    for a in range(1, N):
        gens[(a, a + 1)] = raising[a - 1]
        gens[(a + 1, a)] = lowering[a - 1]
    q, qi = ctx.q, ctx.qinv
    lo, hi = (q, qi) if variant is Variant.ORIGINAL else (qi, q)
    for gap in range(2, N):
        for a in range(1, N - gap + 1):
            c, b = a + gap, a + 1
            gens[(c, a)] = gens[(c, b)] @ gens[(b, a)] - (gens[(b, a)] @ gens[(c, b)]).scale(lo)
            gens[(a, c)] = gens[(a, b)] @ gens[(b, c)] - (gens[(b, c)] @ gens[(a, b)]).scale(hi)
    cartan_inv = {a: cartan[a - 1].inverse() for a in range(1, N + 1)}
    out = GlnGenerators(
        ctx, N, dim, variant, gens, cartan_inv,
        None if valid_columns is None else tuple(valid_columns), weight,
    )
    if check:
        out.check()
    return out


def vector_rep(ctx: ScalarContext, N: int, variant: Variant | str) -> GlnGenerators:
    """The N-dimensional vector representation."""
    if N < 2:
        raise ValueError("N must be >= 2")
    cartan = [Matrix.identity(N).with_entry(a, a, ctx.q) for a in range(N)]
    raising = [Matrix.unit(N, a, a + 1) for a in range(N - 1)]
    lowering = [Matrix.unit(N, a + 1, a) for a in range(N - 1)]
    return generators_from_chevalley(ctx, N, variant, cartan, raising, lowering, weight=(1,) + (0,) * (N - 1))


def verma2_generators(ctx: ScalarContext, lam1: int, lam2: int, k_trunc: int, variant: Variant | str) -> GlnGenerators:
    """Highest-weight module of U_q(gl_2) truncated to levels ``0..k_trunc``.

    Basis vector ``k`` is ``F^k v`` with ``F = E_21``.
    """
    if k_trunc < 0:
        raise ValueError("k_trunc must be >= 0")
    dim = k_trunc + 1
    q = ctx.q
    lam = lam1 - lam2
    e11 = Matrix.diagonal([q ** (lam1 - k) for k in range(dim)])
    e22 = Matrix.diagonal([q ** (lam2 + k) for k in range(dim)])
    f = Matrix(dim, dim, {k + 1: {k: Fraction(1)} for k in range(dim - 1)})
    e = Matrix(dim, dim, {k - 1: {k: q_number(ctx, k) * q_number(ctx, lam - k + 1)} for k in range(1, dim)})
    return generators_from_chevalley(
        ctx, 2, variant, [e11, e22], [e], [f], valid_columns=range(k_trunc), weight=(lam1, lam2)
    )


def coproduct_grid(g1: OpGrid, g2: OpGrid) -> OpGrid:
    """Entry ``(i, j)`` is ``sum_k g1[k][j] (x) g2[i][k]``."""
    N = len(g1)
    dim = g1[0][0].nrows * g2[0][0].nrows
    out = []
    for i in range(N):
        row = []
        for j in range(N):
            acc = Matrix.zero(dim)
            for k in range(N):
                if not g1[k][j].is_zero() and not g2[i][k].is_zero():
                    acc = acc + kron(g1[k][j], g2[i][k])
            row.append(acc)
        out.append(row)
    return out


def generators_from_zero_modes(ctx: ScalarContext, variant: Variant | str, lp0: OpGrid, lm0: OpGrid,
                               weight: tuple | None = None) -> GlnGenerators:
    """Read Chevalley generators off zero-mode grids and rebuild the full set.

    The composed generators recovered from the grids are compared with the
    ones produced by the composition rule.
    """
    variant = Variant.parse(variant)
    N = len(lp0)
    nu = ctx.nu
    cartan = [lp0[a][a] for a in range(N)]
    inv = [c.inverse() for c in cartan]
    read: dict = {}
    for a in range(N):
        for b in range(a + 1, N):
            if variant is Variant.ORIGINAL:
                read[(a + 1, b + 1)] = (inv[b] @ lp0[b][a]).scale(1 / nu)
                read[(b + 1, a + 1)] = (lm0[a][b] @ cartan[b]).scale(-1 / nu)
            else:
                read[(b + 1, a + 1)] = (lp0[a][b] @ inv[b]).scale(1 / nu)
                read[(a + 1, b + 1)] = (cartan[b] @ lm0[b][a]).scale(-1 / nu)
    gens = generators_from_chevalley(
        ctx, N, variant, cartan,
        [read[(a, a + 1)] for a in range(1, N)],
        [read[(a + 1, a)] for a in range(1, N)],
        weight=weight,
    )
    for key, m in read.items():
        if gens.gen(*key) != m:
            raise RelationError(f"composed generator {key} disagrees with the zero modes")
    return gens


def tensor_generators(ctx: ScalarContext, g1: GlnGenerators, g2: GlnGenerators) -> GlnGenerators:
    """U_q(gl_N) generators on ``V1 (x) V2`` through the coproduct of zero modes."""
    if g1.N != g2.N or g1.variant is not g2.variant:
        raise MismatchError("generator sets must share N and variant")
    weight = None
    if g1.weight is not None and g2.weight is not None:
        weight = tuple(x + y for x, y in zip(g1.weight, g2.weight))
    lp = coproduct_grid(zero_mode_l(g1, "+"), zero_mode_l(g2, "+"))
    lm = coproduct_grid(zero_mode_l(g1, "-"), zero_mode_l(g2, "-"))
    return generators_from_zero_modes(ctx, g1.variant, lp, lm, weight)


def zero_mode_l(gens: GlnGenerators, sign: str) -> OpGrid:
    """Zero modes of ``L^+`` (``sign='+'``) or ``L^-`` as operator grids (0-based)."""
    N, dim, nu = gens.N, gens.dim, gens.ctx.nu
    Z = Matrix.zero(dim)
    grid = [[Z for _ in range(N)] for _ in range(N)]
    g, gi = gens.gen, gens.gen_inv
    if gens.variant is Variant.ORIGINAL:
        for a in range(1, N + 1):
            grid[a - 1][a - 1] = g(a, a) if sign == "+" else gi(a)
            for b in range(a + 1, N + 1):
                if sign == "+":
                    grid[b - 1][a - 1] = (g(b, b) @ g(a, b)).scale(nu)
                else:
                    grid[a - 1][b - 1] = (g(b, a) @ gi(b)).scale(-nu)
    else:
        for a in range(1, N + 1):
            grid[a - 1][a - 1] = g(a, a) if sign == "+" else gi(a)
            for c in range(a + 1, N + 1):
                if sign == "+":
                    grid[a - 1][c - 1] = (g(c, a) @ g(c, c)).scale(nu)
                else:
                    grid[c - 1][a - 1] = (gi(c) @ g(a, c)).scale(-nu)
    return grid


def unipotent_zero_modes(gens: GlnGenerators) -> tuple[OpGrid, OpGrid]:
    """The unipotent factors of the original zero modes: ``L^+ = K L^+_0``, ``L^- = L^-_0 K^-1``."""
    if gens.variant is not Variant.ORIGINAL:
        raise ValueError("unipotent factors are defined for the original generators")
    N, dim, nu = gens.N, gens.dim, gens.ctx.nu
    I, Z = Matrix.identity(dim), Matrix.zero(dim)
    plus = [[I if i == j else Z for j in range(N)] for i in range(N)]
    minus = [[I if i == j else Z for j in range(N)] for i in range(N)]
    for a in range(1, N + 1):
        for b in range(a + 1, N + 1):
            plus[b - 1][a - 1] = gens.gen(a, b).scale(nu)
            minus[a - 1][b - 1] = gens.gen(b, a).scale(-nu)
    return plus, minus


def invert_unitriangular(grid: OpGrid) -> OpGrid:
    """Inverse of a unipotent triangular operator grid (upper or lower)."""
    N = len(grid)
    dim = grid[0][0].nrows
    I, Z = Matrix.identity(dim), Matrix.zero(dim)
    # (1 + X)^-1 = sum_k (-X)^k with X nilpotent
    nil = [[(grid[i][j] - (I if i == j else Z)) for j in range(N)] for i in range(N)]
    ident = [[I if i == j else Z for j in range(N)] for i in range(N)]
    result = ident
    power = ident
    for _ in range(N - 1):
        power = op_matmul(power, nil)
        power = [[-x for x in row] for row in power]
        result = [[result[i][j] + power[i][j] for j in range(N)] for i in range(N)]
    return result


# ---------------------------------------------------------------------------
# Modules
# ---------------------------------------------------------------------------


class Module:
    """A representation exposing L-operator entries and its singular vector.

    ``lgrid(sign, u)`` returns the 0-based grid of operators ``L^{sign}(u)``.
    The singular vector is located by :func:`singular_scan` unless given.
    ``capacity`` bounds the excitation level the module represents faithfully
    (``None`` for an honest finite-dimensional module).
    """

    def __init__(
        self,
        ctx: ScalarContext,
        N: int,
        dim: int,
        variant: Variant,
        lgrid: Callable[[str, Fraction], OpGrid],
        description: dict,
        *,
        capacity: int | None = None,
        singular_index: int | None = None,
        forbidden: Sequence[Fraction] = (),
        rll_columns: Sequence[int] | None = None,
    ):
        self.ctx = ctx
        self.N = N
        self.dim = dim
        self.variant = Variant.parse(variant)
        self._lgrid = lgrid
        self._cache: dict = {}
        self.description = description
        self.capacity = capacity
        self.forbidden = tuple(forbidden)
        self.rll_columns = None if rll_columns is None else tuple(rll_columns)
        if singular_index is None:
            singular_index = singular_scan(self)
        self.singular_index = singular_index

    @property
    def singular_vector(self) -> tuple:
        return basis_vector(self.dim, self.singular_index)

    def l_matrix(self, sign: str, u) -> OpGrid:
        if sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")
        u = to_rational(u)
        key = (sign, u)
        grid = self._cache.get(key)
        if grid is None:
            if u == 0:
                raise PoleError("spectral parameter 0")
            grid = self._lgrid(sign, u)
            if len(self._cache) > 4096:
                self._cache.clear()
            self._cache[key] = grid
        return grid

    def l_entry(self, sign: str, i: int, j: int, u) -> Matrix:
        """Operator ``L^{sign}_{ij}(u)``, 1-based indices."""
        if not (1 <= i <= self.N and 1 <= j <= self.N):
            raise IndexError(f"entry ({i},{j}) outside 1..{self.N}")
        return self.l_matrix(sign, u)[i - 1][j - 1]

    def lam(self, b: int, u) -> Fraction:
        """Eigenvalue of ``L^+_{bb}(u)`` on the singular vector."""
        op = self.l_entry("+", b, b, u)
        s = self.singular_index
        return op[s, s]

    def sample_points(self, count: int, salt: int = 0) -> list[Fraction]:
        return sample_generic(self.ctx, count, self.forbidden, salt=salt)

    def recipe(self) -> str:
        return recipe_string(self.description)

    def __repr__(self) -> str:
        return f"Module({self.recipe()}, N={self.N}, dim={self.dim}, variant={self.variant.value})"


def singular_scan(module: Module, probes: Sequence[Fraction] | None = None) -> int:
    """Index of the unique basis vector on which ``L^+(u)`` acts triangularly.

    Lower entries must annihilate it and diagonal entries must preserve its
    line, at every probe point.
    """
    if probes is None:
        probes = sample_generic(module.ctx, 2, module.forbidden, salt=0x5CA)
    hits = []
    for k in range(module.dim):
        ok = True
        for u in probes:
            grid = module.l_matrix("+", u)
            for i in range(module.N):
                for j in range(i + 1):
                    col = grid[i][j].transpose().rows.get(k, {})
                    if i > j and col:
                        ok = False
                    elif i == j and any(r != k for r in col):
                        ok = False
                    if not ok:
                        break
                if not ok:
                    break
            if ok and any(module.l_matrix("+", u)[b][b][k, k] == 0 for b in range(module.N)):
                ok = False
            if not ok:
                break
        if ok:
            hits.append(k)
    if not hits:
        raise SingularVectorError("no basis vector is annihilated by the lower L-entries")
    if len(hits) > 1:
        raise AmbiguityError(f"several singular basis vectors: {hits}", hits)
    return hits[0]


def evaluation_module(ctx: ScalarContext, gens: GlnGenerators, z, *, description: dict | None = None,
                      capacity: int | None = None) -> Module:
    """Promote a U_q(gl_N)-module to the quantum affine algebra at the point ``z``."""
    z = to_rational(z)
    if z == 0:
        raise ValueError("evaluation point must be nonzero")
    lp = zero_mode_l(gens, "+")
    lm = zero_mode_l(gens, "-")
    N = gens.N

    def lgrid(sign: str, u: Fraction) -> OpGrid:
        if sign == "+":
            c = -z / u
            return [[lp[i][j] + lm[i][j].scale(c) for j in range(N)] for i in range(N)]
        c = -u / z
        return [[lm[i][j] + lp[i][j].scale(c) for j in range(N)] for i in range(N)]

    if description is None:
        description = {"kind": "vec", "z": z}
    q2 = ctx.q * ctx.q
    forbidden = [z * q2 ** k for k in range(-3, 4)]
    rll_columns = None
    if gens.valid_columns is not None:
        rll_columns = [k for k in gens.valid_columns if k + 1 in gens.valid_columns]
    return Module(ctx, N, gens.dim, gens.variant, lgrid, description, capacity=capacity,
                  forbidden=forbidden, rll_columns=rll_columns)


def vector_module(ctx: ScalarContext, N: int, variant: Variant | str, z) -> Module:
    return evaluation_module(ctx, vector_rep(ctx, N, variant), z, description={"kind": "vec", "z": to_rational(z)})


def verma2_module(ctx: ScalarContext, lam1: int, lam2: int, k_trunc: int, z, variant: Variant | str) -> Module:
    gens = verma2_generators(ctx, lam1, lam2, k_trunc, variant)
    desc = {"kind": "verma2", "lam": (int(lam1), int(lam2)), "K": int(k_trunc), "z": to_rational(z)}
    return evaluation_module(ctx, gens, z, description=desc, capacity=k_trunc)


def tensor_module(ctx: ScalarContext, factors: Sequence[Module]) -> Module:
    """Tensor product via the coproduct ``L_ij -> sum_k L_kj (x) L_ik``.

    The first factor carries the major index of the Kronecker product.
    """
    factors = list(factors)
    if not factors:
        raise MismatchError("empty tensor product")
    if len(factors) == 1:
        return factors[0]
    first = factors[0]
    for f in factors[1:]:
        if f.N != first.N or f.variant is not first.variant or f.ctx != first.ctx:
            raise MismatchError("tensor factors must share N, variant and q")
    return reduce(lambda a, b: _tensor_pair(ctx, a, b), factors)


def _tensor_pair(ctx: ScalarContext, m1: Module, m2: Module) -> Module:
    N = m1.N

    def lgrid(sign: str, u: Fraction) -> OpGrid:
        g1, g2 = m1.l_matrix(sign, u), m2.l_matrix(sign, u)
        out = []
        for i in range(N):
            row = []
            for j in range(N):
                acc = None
                for k in range(N):
                    a, b = g1[k][j], g2[i][k]
                    if a.is_zero() or b.is_zero():
                        continue
                    term = kron(a, b)
                    acc = term if acc is None else acc + term
                row.append(acc if acc is not None else Matrix.zero(m1.dim * m2.dim))
            out.append(row)
        return out

    parts = _tensor_parts(m1) + _tensor_parts(m2)
    desc = {"kind": "tensor", "factors": parts}
    caps = [c for c in (m1.capacity, m2.capacity) if c is not None]
    sing = m1.singular_index * m2.dim + m2.singular_index
    rll_columns = None
    if m1.rll_columns is not None or m2.rll_columns is not None:
        c1 = m1.rll_columns if m1.rll_columns is not None else range(m1.dim)
        c2 = m2.rll_columns if m2.rll_columns is not None else range(m2.dim)
        rll_columns = [a * m2.dim + b for a in c1 for b in c2]
    mod = Module(ctx, N, m1.dim * m2.dim, m1.variant, lgrid, desc,
                 capacity=min(caps) if caps else None, singular_index=sing,
                 forbidden=m1.forbidden + m2.forbidden, rll_columns=rll_columns)
    mod.factors = _flat_factors(m1) + _flat_factors(m2)
    return mod


def _tensor_parts(m: Module) -> list:
    if m.description.get("kind") == "tensor":
        return list(m.description["factors"])
    return [m.description]


def _flat_factors(m: Module) -> list:
    return list(getattr(m, "factors", [m]))


# ---------------------------------------------------------------------------
# RLL and related checks
# ---------------------------------------------------------------------------


def _split_pair(mp: int, N: int, j: int, l: int) -> tuple:
    m, p = divmod(mp, N)
    return m, j, p, l


def rll_violations(module: Module, u, v, signs: tuple[str, str] = ("+", "+"), R: Matrix | None = None) -> list:
    """Entry positions where the RLL exchange relation fails.

    Checks ``sum_{m,p} R_{(i,k),(m,p)} L_mj(u) L_pl(v) =
    sum_{m,p} L_kp(v) L_im(u) R_{(m,p),(j,l)}`` for all ``i,j,k,l``.
    """
    N = module.N
    if R is None:
        R = build_r(module.ctx, module.variant, N, u, v) if N > 1 else Matrix.identity(1)
    A = module.l_matrix(signs[0], u)
    B = module.l_matrix(signs[1], v)
    cols = module.rll_columns
    RT = R.transpose()
    iA = [[IntMatrix.from_matrix(x) for x in row] for row in A]
    iB = [[IntMatrix.from_matrix(x) for x in row] for row in B]
    ab: dict = {}
    ba: dict = {}

    def prod_ab(m, j, p, l):
        key = (m, j, p, l)
        if key not in ab:
            ab[key] = iA[m][j] @ iB[p][l]
        return ab[key]

    def prod_ba(k, p, i, m):
        key = (k, p, i, m)
        if key not in ba:
            ba[key] = iB[k][p] @ iA[i][m]
        return ba[key]

    bad = []
    for i in range(N):
        for k in range(N):
            rrow = R.rows.get(i * N + k, {})
            for j in range(N):
                for l in range(N):
                    terms = [(c, prod_ab(*_split_pair(mp, N, j, l))) for mp, c in rrow.items()]
                    terms += [(-c, prod_ba(k, mp % N, i, mp // N)) for mp, c in RT.rows.get(j * N + l, {}).items()]
                    diff_rows = int_combination_rows(terms)
                    if cols is None:
                        failed = bool(diff_rows)
                    else:
                        cs = set(cols)
                        failed = any(set(r) & cs for r in diff_rows.values())
                    if failed:
                        bad.append((i + 1, j + 1, k + 1, l + 1))
    return bad


def check_rll(module: Module, u, v, signs: tuple[str, str] = ("+", "+")) -> bool:
    return not rll_violations(module, u, v, signs)


def check_same_entry_commute(module: Module, u, v) -> bool:
    for i in range(1, module.N + 1):
        for j in range(1, module.N + 1):
            a, b = module.l_entry("+", i, j, u), module.l_entry("+", i, j, v)
            if not (a @ b - b @ a).is_zero():
                return False
    return True


def twist_relation_sides(ctx: ScalarContext, gens_orig: GlnGenerators, gens_twist: GlnGenerators, z, u, sign: str = "+"):
    """Both sides of ``Lt(u) = (L^-_0)^-1 L(u) (L^+_0)^-1`` as operator grids."""
    mo = evaluation_module(ctx, gens_orig, z)
    mt = evaluation_module(ctx, gens_twist, z)
    plus0, minus0 = unipotent_zero_modes(gens_orig)
    lhs = mt.l_matrix(sign, u)
    rhs = op_matmul(op_matmul(invert_unitriangular(minus0), mo.l_matrix(sign, u)), invert_unitriangular(plus0))
    return lhs, rhs


def check_twist_relation(ctx: ScalarContext, gens_orig: GlnGenerators, gens_twist: GlnGenerators, z, u) -> bool:
    for sign in ("+", "-"):
        lhs, rhs = twist_relation_sides(ctx, gens_orig, gens_twist, z, u, sign)
        if any(lhs[i][j] != rhs[i][j] for i in range(len(lhs)) for j in range(len(lhs))):
            return False
    return True


# ---------------------------------------------------------------------------
# Gauss coordinates and the embedded lower-rank module
# ---------------------------------------------------------------------------


@dataclass
class GaussCoordinates:
    """``L = (1 + F) K (1 + E)``; ``F[i][j]`` sits above the diagonal (i < j)
    and ``E[j][i]`` below it, following the layout of the Gauss product."""

    F: OpGrid
    K: list
    E: OpGrid
    K_inv: list = field(default_factory=list)

    def reconstruct(self) -> OpGrid:
        N = len(self.K)
        dim = self.K[0].nrows
        I, Z = Matrix.identity(dim), Matrix.zero(dim)
        upper = [[I if i == j else (self.F[i][j] if i < j else Z) for j in range(N)] for i in range(N)]
        diag = [[self.K[i] if i == j else Z for j in range(N)] for i in range(N)]
        lower = [[I if i == j else (self.E[i][j] if i > j else Z) for j in range(N)] for i in range(N)]
        return op_matmul(op_matmul(upper, diag), lower)


def gauss_decompose_grid(grid: OpGrid) -> GaussCoordinates:
    """Operator-valued Gauss decomposition, eliminating from the last index up."""
    N = len(grid)
    dim = grid[0][0].nrows
    Z = Matrix.zero(dim)
    A = [list(row) for row in grid]
    F = [[Z] * N for _ in range(N)]
    E = [[Z] * N for _ in range(N)]
    K: list = [None] * N
    K_inv: list = [None] * N
    for m in range(N - 1, -1, -1):
        K[m] = A[m][m]
        try:
            K_inv[m] = A[m][m].inverse()
        except PivotError as exc:
            raise PivotError(f"Gauss coordinate k_{m + 1} is singular") from exc
        for i in range(m):
            F[i][m] = A[i][m] @ K_inv[m]
            E[m][i] = K_inv[m] @ A[m][i]
        for i in range(m):
            if F[i][m].is_zero():
                continue
            for j in range(m):
                if A[m][j].is_zero():
                    continue
                A[i][j] = A[i][j] - F[i][m] @ A[m][j]
    return GaussCoordinates(F, K, E, K_inv)


def gauss_decompose(module: Module, u, sign: str = "+") -> GaussCoordinates:
    return gauss_decompose_grid(module.l_matrix(sign, u))


def embedded_l_grid(grid: OpGrid) -> OpGrid:
    """Top-left block rebuilt from the Gauss coordinates with indices below N."""
    N = len(grid)
    g = gauss_decompose_grid(grid)
    dim = grid[0][0].nrows
    n = N - 1
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = Matrix.zero(dim)
            for m in range(max(a, b), n):
                left = g.F[a][m] if a < m else None
                right = g.E[m][b] if b < m else None
                term = g.K[m]
                if left is not None:
                    term = left @ term
                if right is not None:
                    term = term @ right
                acc = acc + term
            row.append(acc)
        out.append(row)
    return out


def embedded_module(module: Module) -> Module:
    """The rank ``N-1`` module obtained by dropping the last Gauss index.

    Acts on the same space with the same singular vector.
    """
    if module.N < 2:
        raise ValueError("cannot embed a rank-1 module")

    def lgrid(sign: str, u: Fraction) -> OpGrid:
        return embedded_l_grid(module.l_matrix(sign, u))

    desc = {"kind": "embedded", "parent": module.description}
    emb = Module(module.ctx, module.N - 1, module.dim, module.variant, lgrid, desc,
                 capacity=module.capacity, singular_index=module.singular_index,
                 forbidden=module.forbidden, rll_columns=module.rll_columns)
    emb.parent = module
    return emb


# ---------------------------------------------------------------------------
# Recipes
# ---------------------------------------------------------------------------


_RAT = r"[-+]?\d+(?:/\d+)?"


def parse_recipe(ctx: ScalarContext, text: str, N: int, variant: Variant | str) -> Module:
    """Build a module from ``vec@z``, ``tensor(vec@z1,...)`` or ``verma2(L1,L2,K,z)``."""
    variant = Variant.parse(variant)
    s = text.replace(" ", "")
    m = re.fullmatch(r"tensor\((.*)\)", s)
    if m:
        parts = _split_top(m.group(1))
        if not parts:
            raise ValueError("empty tensor recipe")
        return tensor_module(ctx, [parse_recipe(ctx, p, N, variant) for p in parts])
    m = re.fullmatch(rf"vec@({_RAT})", s)
    if m:
        return vector_module(ctx, N, variant, to_rational(m.group(1)))
    m = re.fullmatch(rf"verma2\(([-+]?\d+),([-+]?\d+),(\d+),({_RAT})\)", s)
    if m:
        if N != 2:
            raise ValueError("verma2 modules exist only for N=2")
        return verma2_module(ctx, int(m.group(1)), int(m.group(2)), int(m.group(3)), to_rational(m.group(4)), variant)
    raise ValueError(f"cannot parse module recipe {text!r}")


def _split_top(s: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur:
        parts.append(cur)
    return parts


def recipe_string(desc: dict) -> str:
    kind = desc.get("kind")
    if kind == "vec":
        return f"vec@{_fmt(desc['z'])}"
    if kind == "verma2":
        l1, l2 = desc["lam"]
        return f"verma2({l1},{l2},{desc['K']},{_fmt(desc['z'])})"
    if kind == "tensor":
        return "tensor(" + ",".join(recipe_string(d) for d in desc["factors"]) + ")"
    if kind == "embedded":
        return "embedded(" + recipe_string(desc["parent"]) + ")"
    return str(desc)


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else format_rational(x)


def check_truncation(module: Module, level: int) -> None:
    if module.capacity is not None and level > module.capacity:
        raise TruncationError(f"excitation level {level} exceeds truncation {module.capacity}")
