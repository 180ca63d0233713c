"""Verification suites with deterministic JSON reports.

A suite is a list of small, picklable task descriptions.  Each task rebuilds
its inputs from ``(q, seed, params)``, so a failing entry in a report can be
replayed exactly.  Tasks may run in a process pool; results are collected in
plan order, so reports do not depend on the worker count.
"""

from __future__ import annotations

import contextlib
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence
from unittest import mock

from . import representations, rmatrix, weightfn
from .combinat import (
    TypedVariables,
    brute_force_admissible,
    coeff_calZ,
    coeff_calZ_factored,
    coeff_phi_sym,
    coeff_Y,
    coeff_Y_alt,
    coeff_eta,
    enumerate_admissible,
    q_symmetrize,
    q_symmetrize_renorm,
    q_symmetrize_renorm_direct,
)
from .errors import UqBetheError
from .linalg import Matrix
from .representations import (
    check_twist_relation,
    embedded_module,
    evaluation_module,
    gauss_decompose,
    parse_recipe,
    rll_violations,
    tensor_generators,
    tensor_module,
    vector_rep,
    verma2_generators,
    verma2_module,
)
from .rmatrix import (
    Variant,
    build_r,
    embed_two_site,
    r21,
    yang_baxter_sides,
)
from .scalars import ScalarContext, format_rational, q_factorial, sample_generic
from .weightfn import (
    adjacent_transpositions,
    coincidence_sides,
    coproduct_sides,
    direct_modified_weight,
    qsymmetry_sides,
    recurrence_modified_weight,
    tv_weight,
    generator_formula_weight,
)

GROUPS = {
    "reps": ("relations", "rll", "twist"),
    "combinat": ("enumeration", "y-forms", "factorization", "po-sim", "exa3"),
}
BASIC_SUITES = (
    "yang-baxter",
    "unitarity",
    "relations",
    "rll",
    "twist",
    "gauss",
    "enumeration",
    "y-forms",
    "factorization",
    "po-sim",
    "exa3",
    "method-agreement",
    "coincidence",
    "coproduct",
    "qsymmetry",
    "generator-formula",
)
# run on request only; not part of ``all``
EXPLORATORY_SUITES = ("coincidence-orig",)
SUITE_NAMES = BASIC_SUITES + EXPLORATORY_SUITES + tuple(GROUPS) + ("all",)
CORRUPTIONS = ("rmatrix",)
MAX_DIFFS = 12


@dataclass(frozen=True)
class SuiteConfig:
    """Sizes and seeds for a suite run.

    ``N`` is the largest rank exercised; ``max_excitations`` bounds ``|n|``
    for the weight-function suites (``None`` uses each suite's default).
    """

    q: Fraction = Fraction(3, 7)
    seeds: tuple = (1, 2, 3)
    N: int = 4
    max_excitations: int | None = None
    corrupt: str | None = None
    workers: int = 1
    spectral_tuples: int = 20
    extra: dict = field(default_factory=dict)

    def header(self) -> dict:
        return {
            "q": format_rational(self.q),
            "seeds": list(self.seeds),
            "N": self.N,
            "max_excitations": self.max_excitations,
            "corrupt": self.corrupt,
        }


def default_workers() -> int:
    raw = os.environ.get("UQBETHE_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _fr(x) -> str:
    return format_rational(Fraction(x))


def _vec(v: Sequence[Fraction]) -> list[str]:
    return [_fr(x) for x in v]


def _vars_json(vars: TypedVariables) -> dict:
    return {str(a + 1): [_fr(t) for t in row] for a, row in enumerate(vars.values)}


def _matrix_diffs(lhs, rhs) -> list[dict]:
    out = []
    for i in range(lhs.nrows):
        for j in range(lhs.ncols):
            if lhs[i, j] != rhs[i, j]:
                out.append({"row": i, "col": j, "lhs": _fr(lhs[i, j]), "rhs": _fr(rhs[i, j])})
                if len(out) >= MAX_DIFFS:
                    return out
    return out


def compositions(parts: int, max_total: int, min_total: int = 1) -> list[tuple]:
    """All ``parts``-tuples of nonnegative integers with total in range."""
    out = []
    for total in range(min_total, max_total + 1):
        for combo in itertools.product(range(total + 1), repeat=parts):
            if sum(combo) == total:
                out.append(combo)
    return out


def vec_tensor_recipe(ctx: ScalarContext, factors: int, salt: int) -> str:
    zs = sample_generic(ctx, factors, salt=salt)
    parts = [f"vec@{_fr(z)}" for z in zs]
    return parts[0] if factors == 1 else "tensor(" + ",".join(parts) + ")"


def _factor_count(n_bar: Sequence[int]) -> int:
    return max(2, max(n_bar) if n_bar else 1)


@contextlib.contextmanager
def corrupted(kind: str | None) -> Iterator[None]:
    """Deliberately break the build for mutation testing.

    ``"rmatrix"`` doubles every exchange coefficient ``E_ij (x) E_ji``
    (``i != j``) of every R-matrix.
    """
    if kind is None:
        yield
        return
    if kind != "rmatrix":
        raise ValueError(f"unknown corruption {kind!r}")
    original = rmatrix.build_r

    def broken(ctx, variant, N, u, v):
        R = original(ctx, variant, N, u, v)
        rows = {i: {j: (2 * x if i != j else x) for j, x in row.items()} for i, row in R.rows.items()}
        return Matrix(R.nrows, R.ncols, rows)

    with contextlib.ExitStack() as stack:
        for mod in (rmatrix, representations, weightfn):
            stack.enter_context(mock.patch.object(mod, "build_r", broken))
        stack.enter_context(mock.patch(f"{__name__}.build_r", broken))
        yield


def _vector_outcome(inputs: dict, lhs, rhs) -> tuple[bool, dict, dict]:
    ok = tuple(lhs) == tuple(rhs)
    info = {"nonzero": any(lhs)}
    detail = {} if ok else {"inputs": inputs, "lhs": _vec(lhs), "rhs": _vec(rhs)}
    return ok, info, detail


# ---------------------------------------------------------------------------
# checks: each takes (ctx, params) and returns (passed, info, detail)
# ---------------------------------------------------------------------------


def _check_yang_baxter(ctx: ScalarContext, p: dict):
    N, variant = p["N"], p["variant"]
    for k in range(p["tuples"]):
        u1, u2, u3 = sample_generic(ctx, 3, salt=k)
        R12 = embed_two_site(build_r(ctx, variant, N, u1, u2), N, 3, 1, 2)
        R13 = embed_two_site(build_r(ctx, variant, N, u1, u3), N, 3, 1, 3)
        R23 = embed_two_site(build_r(ctx, variant, N, u2, u3), N, 3, 2, 3)
        lhs, rhs = yang_baxter_sides(R12, R13, R23)
        if lhs != rhs:
            return False, {}, {"inputs": {"u": [_fr(u1), _fr(u2), _fr(u3)]}, "diffs": _matrix_diffs(lhs, rhs)}
    return True, {"tuples": p["tuples"]}, {}


def _check_unitarity(ctx: ScalarContext, p: dict):
    N, variant = p["N"], p["variant"]
    ident = Matrix.identity(N * N)
    for k in range(p["tuples"]):
        u1, u2 = sample_generic(ctx, 2, salt=k)
        prod = build_r(ctx, variant, N, u1, u2) @ r21(build_r(ctx, variant, N, u2, u1), N)
        if prod != ident:
            return False, {}, {"inputs": {"u": [_fr(u1), _fr(u2)]}, "diffs": _matrix_diffs(prod, ident)}
    return True, {"tuples": p["tuples"]}, {}


def _gens_for(ctx: ScalarContext, p: dict):
    kind = p["rep"]
    if kind == "vector":
        return vector_rep(ctx, p["N"], p["variant"])
    if kind == "verma2":
        return verma2_generators(ctx, p["lam"][0], p["lam"][1], p["K"], p["variant"])
    if kind == "vector-tensor":
        g = vector_rep(ctx, p["N"], p["variant"])
        out = g
        for _ in range(p["factors"] - 1):
            out = tensor_generators(ctx, out, g)
        return out
    raise ValueError(f"unknown representation {kind!r}")


def _check_relations(ctx: ScalarContext, p: dict):
    failures = _gens_for(ctx, p).relation_failures()
    return not failures, {}, ({"failures": failures} if failures else {})


def _check_rll(ctx: ScalarContext, p: dict):
    module = parse_recipe(ctx, p["recipe"], p["N"], p["variant"])
    if p.get("embedded"):
        for _ in range(p["embedded"]):
            module = embedded_module(module)
    u, v = module.sample_points(2, salt=7)
    for signs in p["signs"]:
        bad = rll_violations(module, u, v, tuple(signs))
        if bad:
            return False, {}, {"inputs": {"u": _fr(u), "v": _fr(v), "signs": signs}, "entries": [list(b) for b in bad[:MAX_DIFFS]]}
    return True, {"dim": module.dim}, {}


def _check_twist(ctx: ScalarContext, p: dict):
    z, u = sample_generic(ctx, 2, salt=3)
    go = _gens_for(ctx, dict(p, variant="orig"))
    gt = _gens_for(ctx, dict(p, variant="twist"))
    ok = check_twist_relation(ctx, go, gt, z, u)
    return ok, {}, ({} if ok else {"inputs": {"z": _fr(z), "u": _fr(u)}})


def _check_gauss(ctx: ScalarContext, p: dict):
    module = parse_recipe(ctx, p["recipe"], p["N"], p["variant"])
    u, v = module.sample_points(2, salt=5)
    for sign in ("+", "-"):
        rec = gauss_decompose(module, u, sign).reconstruct()
        L = module.l_matrix(sign, u)
        for i in range(module.N):
            for j in range(module.N):
                if rec[i][j] != L[i][j]:
                    return False, {}, {"inputs": {"u": _fr(u), "sign": sign}, "entry": [i + 1, j + 1],
                                       "diffs": _matrix_diffs(rec[i][j], L[i][j])}
    levels = []
    current = module
    while current.N > 1:
        emb = embedded_module(current)
        for signs in (("+", "+"), ("-", "-"), ("+", "-")):
            bad = rll_violations(emb, u, v, signs)
            if bad:
                return False, {}, {"inputs": {"u": _fr(u), "v": _fr(v), "signs": list(signs), "rank": emb.N},
                                   "entries": [list(b) for b in bad[:MAX_DIFFS]]}
        for b in range(1, emb.N + 1):
            if emb.lam(b, u) != current.lam(b, u):
                return False, {}, {"inputs": {"u": _fr(u), "rank": emb.N, "b": b},
                                   "lhs": _fr(emb.lam(b, u)), "rhs": _fr(current.lam(b, u))}
        levels.append(emb.N)
        if not p.get("deep"):
            break
        current = emb
    return True, {"dim": module.dim, "ranks": levels}, {}


def _check_enumeration(ctx: ScalarContext, p: dict):
    a = enumerate_admissible(p["n"])
    b = brute_force_admissible(p["n"])
    ok = a == b
    detail = {} if ok else {"enumerated": [s.to_json() for s in a], "brute_force": [s.to_json() for s in b]}
    return ok, {"count": len(a)}, detail


def _check_y_forms(ctx: ScalarContext, p: dict):
    k = p["k"]
    pts = sample_generic(ctx, 2 * k, salt=k)
    us, vs = pts[:k], pts[k:]
    lhs = coeff_Y(ctx, us, vs, p["twisted"])
    rhs = coeff_Y_alt(ctx, us, vs, p["twisted"])
    ok = lhs == rhs
    detail = {} if ok else {"inputs": {"u": [_fr(x) for x in us], "v": [_fr(x) for x in vs]}, "lhs": _fr(lhs), "rhs": _fr(rhs)}
    return ok, {}, detail


def _check_factorization(ctx: ScalarContext, p: dict):
    vars = TypedVariables.sample(ctx, p["n"], salt=5)
    mats = enumerate_admissible(p["n"])
    for s in mats:
        lhs = coeff_calZ(ctx, s, vars, p["twisted"])
        rhs = coeff_calZ_factored(ctx, s, vars, p["twisted"])
        if lhs != rhs:
            return False, {}, {"inputs": {"t": _vars_json(vars), "s": s.to_json()}, "lhs": _fr(lhs), "rhs": _fr(rhs)}
    return True, {"matrices": len(mats)}, {}


def _symmetric_sample(tv: TypedVariables) -> Fraction:
    xs = tv.values[0]
    power = sum(x * x for x in xs)
    elem = math.prod(xs) if xs else Fraction(1)
    return power + 7 * sum(xs) + 3 * elem


def _asymmetric_sample(tv: TypedVariables) -> Fraction:
    xs = tv.values[0]
    return xs[0] ** 2 + 3 * xs[-1] + xs[0] * xs[-1] ** 2


def _check_renormalized_average(ctx: ScalarContext, p: dict):
    n = p["n"]
    vars = TypedVariables.sample(ctx, (n,), salt=n)
    lhs = q_symmetrize_renorm(ctx, lambda tv: _symmetric_sample(tv) / coeff_phi_sym(ctx, tv), vars) / math.factorial(n)
    rhs = q_symmetrize_renorm(ctx, _symmetric_sample, vars) / q_factorial(ctx, n)
    ok = lhs == rhs
    detail = {} if ok else {"inputs": {"t": _vars_json(vars)}, "lhs": _fr(lhs), "rhs": _fr(rhs)}
    return ok, {}, detail


def _check_symmetrized_fixed(ctx: ScalarContext, p: dict):
    n = p["n"]
    vars = TypedVariables.sample(ctx, (n,), salt=n)

    def H(tv):
        return q_symmetrize(ctx, _asymmetric_sample, tv)

    lhs = q_symmetrize(ctx, H, vars)
    rhs = math.factorial(n) * H(vars)
    if lhs != rhs:
        return False, {}, {"inputs": {"t": _vars_json(vars)}, "lhs": _fr(lhs), "rhs": _fr(rhs)}
    a = q_symmetrize_renorm(ctx, _asymmetric_sample, vars)
    b = q_symmetrize_renorm_direct(ctx, _asymmetric_sample, vars)
    ok = a == b
    return ok, {}, ({} if ok else {"inputs": {"t": _vars_json(vars)}, "renorm": _fr(a), "renorm_direct": _fr(b)})


def _module_and_vars(ctx: ScalarContext, p: dict):
    module = parse_recipe(ctx, p["recipe"], p["N"], p["variant"])
    vars = TypedVariables.sample(ctx, p["n"], module.forbidden, salt=11)
    return module, vars


def _check_method_agreement(ctx: ScalarContext, p: dict):
    module, vars = _module_and_vars(ctx, p)
    lhs = direct_modified_weight(module, vars).vector
    rhs = recurrence_modified_weight(module, vars).vector
    return _vector_outcome({"recipe": p["recipe"], "t": _vars_json(vars)}, lhs, rhs)


def _check_coincidence(ctx: ScalarContext, p: dict):
    module, vars = _module_and_vars(ctx, p)
    lhs, rhs = coincidence_sides(module, vars)
    return _vector_outcome({"recipe": p["recipe"], "t": _vars_json(vars)}, lhs, rhs)


def _check_coincidence_orig(ctx: ScalarContext, p: dict):
    module, vars = _module_and_vars(ctx, p)
    lhs = direct_modified_weight(module, vars).vector
    eta = coeff_eta(ctx, vars)
    rhs = tuple(eta * x for x in tv_weight(module, vars, allow_original=True).vector)
    return _vector_outcome({"recipe": p["recipe"], "t": _vars_json(vars)}, lhs, rhs)


def _check_coproduct(ctx: ScalarContext, p: dict):
    N, variant = p["N"], p["variant"]
    zs = sample_generic(ctx, sum(p["split"]), salt=13)
    singles = [representations.vector_module(ctx, N, variant, z) for z in zs]
    groups, pos = [], 0
    for size in p["split"]:
        part = singles[pos:pos + size]
        groups.append(part[0] if size == 1 else tensor_module(ctx, part))
        pos += size
    full = tensor_module(ctx, singles)
    vars = TypedVariables.sample(ctx, p["n"], full.forbidden, salt=11)
    lhs, rhs = coproduct_sides(ctx, groups[0], groups[1], vars, tensor=full)
    return _vector_outcome({"recipe": full.recipe(), "split": p["split"], "t": _vars_json(vars)}, lhs, rhs)


def _check_qsymmetry(ctx: ScalarContext, p: dict):
    module, vars = _module_and_vars(ctx, p)
    swaps = adjacent_transpositions(vars)
    nonzero = False
    for sigma in swaps:
        lhs, rhs = qsymmetry_sides(module, vars, sigma)
        nonzero = nonzero or any(rhs)
        if lhs != rhs:
            return False, {}, {"inputs": {"recipe": p["recipe"], "t": _vars_json(vars), "sigma": sigma},
                               "lhs": _vec(lhs), "rhs": _vec(rhs)}
    return True, {"transpositions": len(swaps), "nonzero": nonzero}, {}


def _check_generator_formula(ctx: ScalarContext, p: dict):
    gens = _gens_for(ctx, p)
    (z,) = sample_generic(ctx, 1, salt=17)
    if p["rep"] == "verma2":
        module = verma2_module(ctx, p["lam"][0], p["lam"][1], p["K"], z, p["variant"])
    else:
        module = evaluation_module(ctx, gens, z)
    vars = TypedVariables.sample(ctx, p["n"], module.forbidden, salt=11)
    lhs = generator_formula_weight(ctx, gens, z, vars, module=module).vector
    rhs = direct_modified_weight(module, vars).vector
    return _vector_outcome({"module": module.recipe(), "z": _fr(z), "t": _vars_json(vars)}, lhs, rhs)


CHECKS: dict[str, Callable] = {
    "yang-baxter": _check_yang_baxter,
    "unitarity": _check_unitarity,
    "relations": _check_relations,
    "rll": _check_rll,
    "twist": _check_twist,
    "gauss": _check_gauss,
    "enumeration": _check_enumeration,
    "y-forms": _check_y_forms,
    "factorization": _check_factorization,
    "po-sim": _check_renormalized_average,
    "exa3": _check_symmetrized_fixed,
    "method-agreement": _check_method_agreement,
    "coincidence": _check_coincidence,
    "coincidence-orig": _check_coincidence_orig,
    "coproduct": _check_coproduct,
    "qsymmetry": _check_qsymmetry,
    "generator-formula": _check_generator_formula,
}


# ---------------------------------------------------------------------------
# planning
# ---------------------------------------------------------------------------


def _ranks(cfg: SuiteConfig, lo: int = 2, hi: int = 4) -> range:
    return range(lo, min(cfg.N, hi) + 1)


def _variants() -> tuple[str, str]:
    return ("orig", "twist")


def _excitations(cfg: SuiteConfig, default: int) -> int:
    return default if cfg.max_excitations is None else cfg.max_excitations


def _plan_seeded(cfg: SuiteConfig, suite: str) -> Iterator[tuple[int, dict]]:
    """Yield ``(seed, params)`` pairs for one basic suite."""
    seeds = cfg.seeds
    if suite in ("yang-baxter", "unitarity"):
        for seed in seeds:
            for variant in _variants():
                for N in _ranks(cfg):
                    yield seed, {"variant": variant, "N": N, "tuples": cfg.spectral_tuples}
    elif suite == "relations":
        for variant in _variants():
            for N in _ranks(cfg):
                yield seeds[0], {"rep": "vector", "variant": variant, "N": N}
            yield seeds[0], {"rep": "verma2", "variant": variant, "N": 2, "lam": [3, -2], "K": 4}
            if cfg.N >= 3:
                yield seeds[0], {"rep": "vector-tensor", "variant": variant, "N": 3, "factors": 2}
    elif suite == "rll":
        all_signs = [["+", "+"], ["-", "-"], ["+", "-"]]
        for seed in seeds:
            for variant in _variants():
                for N in _ranks(cfg):
                    for factors in (1, 2, 3):
                        if N == 4 and factors == 3 and seed != seeds[0]:
                            continue
                        recipe = vec_tensor_recipe(ScalarContext(cfg.q, seed), factors, salt=factors)
                        yield seed, {"recipe": recipe, "N": N, "variant": variant, "signs": all_signs}
                yield seed, {"recipe": f"verma2(3,-2,4,{_fr(sample_generic(ScalarContext(cfg.q, seed), 1, salt=9)[0])})",
                             "N": 2, "variant": variant, "signs": all_signs}
    elif suite == "twist":
        for seed in seeds:
            for N in _ranks(cfg):
                yield seed, {"rep": "vector", "N": N}
    elif suite == "gauss":
        shapes = {2: (2, 3), 3: (2, 3, 4), 4: (2, 3)}
        for seed in seeds:
            for variant in _variants():
                for N in _ranks(cfg):
                    for factors in shapes[N]:
                        if N ** factors > 81 or (factors == 4 and seed != seeds[0]):
                            continue
                        recipe = vec_tensor_recipe(ScalarContext(cfg.q, seed), factors, salt=factors)
                        yield seed, {"recipe": recipe, "N": N, "variant": variant, "deep": factors == 2}
    elif suite == "enumeration":
        for N in _ranks(cfg):
            for n in compositions(N - 1, 5, 0):
                yield seeds[0], {"n": list(n)}
    elif suite == "y-forms":
        for seed in seeds:
            for k in range(0, 5):
                for twisted in (False, True):
                    yield seed, {"k": k, "twisted": twisted}
    elif suite == "factorization":
        for seed in seeds:
            for N in _ranks(cfg, hi=4):
                for n in compositions(N - 1, 3 if N < 4 else 2):
                    for twisted in (False, True):
                        yield seed, {"n": list(n), "twisted": twisted}
    elif suite in ("po-sim", "exa3"):
        for seed in seeds:
            for n in range(1, 5):
                yield seed, {"n": n}
    elif suite == "method-agreement":
        kmax = _excitations(cfg, 4)
        for seed in seeds:
            ctx = ScalarContext(cfg.q, seed)
            for variant in _variants():
                for N in _ranks(cfg, hi=3):
                    for n in compositions(N - 1, kmax):
                        recipe = vec_tensor_recipe(ctx, _factor_count(n), salt=len(n) * 10 + sum(n))
                        yield seed, {"recipe": recipe, "N": N, "variant": variant, "n": list(n)}
                if cfg.N >= 4:
                    yield seed, {"recipe": vec_tensor_recipe(ctx, 2, salt=40), "N": 4, "variant": variant, "n": [1, 1, 1]}
    elif suite in ("coincidence", "coincidence-orig"):
        kmax = _excitations(cfg, 4)
        variant = "twist" if suite == "coincidence" else "orig"
        for seed in seeds:
            ctx = ScalarContext(cfg.q, seed)
            for N in _ranks(cfg, hi=3):
                cases = compositions(N - 1, kmax)
                if N == 3 and (2, 2) not in cases:
                    cases.append((2, 2))
                for n in cases:
                    recipe = vec_tensor_recipe(ctx, _factor_count(n), salt=len(n) * 10 + sum(n))
                    yield seed, {"recipe": recipe, "N": N, "variant": variant, "n": list(n)}
    elif suite == "coproduct":
        kmax = _excitations(cfg, 3)
        for seed in seeds:
            for variant in _variants():
                for N in _ranks(cfg, hi=3):
                    for n in compositions(N - 1, kmax):
                        yield seed, {"N": N, "variant": variant, "n": list(n), "split": [1, 1]}
                        if n[0] > 2:
                            yield seed, {"N": N, "variant": variant, "n": list(n), "split": [2, 1]}
                if cfg.N >= 3:
                    for split in ([2, 1], [1, 2]):
                        yield seed, {"N": 3, "variant": variant, "n": [1, 1], "split": split}
    elif suite == "qsymmetry":
        kmax = _excitations(cfg, 4)
        for seed in seeds:
            ctx = ScalarContext(cfg.q, seed)
            for variant in _variants():
                for N in _ranks(cfg, hi=3):
                    for n in compositions(N - 1, kmax):
                        if max(n) < 2:
                            continue
                        recipe = vec_tensor_recipe(ctx, _factor_count(n), salt=len(n) * 10 + sum(n))
                        yield seed, {"recipe": recipe, "N": N, "variant": variant, "n": list(n)}
    elif suite == "generator-formula":
        for seed in seeds:
            lam = _generic_highest_weight(ScalarContext(cfg.q, seed), 4)
            for variant in _variants():
                yield seed, {"rep": "vector", "N": 2, "variant": variant, "n": [1]}
                for n in (1, 2, 3):
                    yield seed, {"rep": "verma2", "N": 2, "variant": variant, "lam": lam, "K": 4, "n": [n]}
                if cfg.N >= 3:
                    for n in ([1, 1], [2, 1], [2, 2]):
                        yield seed, {"rep": "vector-tensor", "N": 3, "factors": 2, "variant": variant, "n": n}
    else:
        raise ValueError(f"unknown suite {suite!r}")


def _generic_highest_weight(ctx: ScalarContext, k_trunc: int) -> list[int]:
    """Integer weight whose difference stays clear of the truncation window."""
    rng = ctx.rng(23)
    while True:
        l1, l2 = rng.randint(-6, 6), rng.randint(-6, 6)
        if not 0 <= l1 - l2 <= 2 * k_trunc:
            return [l1, l2]


def expand_suite(name: str) -> tuple[str, ...]:
    if name == "all":
        return BASIC_SUITES
    if name in GROUPS:
        return GROUPS[name]
    if name in BASIC_SUITES or name in EXPLORATORY_SUITES:
        return (name,)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")


def plan(name: str, cfg: SuiteConfig) -> list[dict]:
    tasks = []
    for suite in expand_suite(name):
        for seed, params in _plan_seeded(cfg, suite):
            tasks.append({"suite": suite, "seed": seed, "params": params})
    return tasks


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------


def run_task(task: dict, q: Fraction, corrupt: str | None = None) -> dict:
    ctx = ScalarContext(q, task["seed"])
    entry = {"suite": task["suite"], "seed": task["seed"], "params": task["params"]}
    try:
        with corrupted(corrupt):
            passed, info, detail = CHECKS[task["suite"]](ctx, task["params"])
    except (UqBetheError, ZeroDivisionError, ValueError) as exc:
        passed, info, detail = False, {}, {"error": type(exc).__name__, "message": str(exc)}
    entry["passed"] = bool(passed)
    entry["info"] = info
    if not passed:
        entry["counterexample"] = detail
    return entry


def _run_one(args):
    return run_task(*args)


def run_suite(name: str, cfg: SuiteConfig | None = None) -> dict:
    """Run a suite (or group, or ``all``) and return its report."""
    cfg = cfg or SuiteConfig()
    tasks = plan(name, cfg)
    args = [(t, cfg.q, cfg.corrupt) for t in tasks]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_one, args, chunksize=1))
    else:
        results = [run_task(*a) for a in args]
    failed = [r for r in results if not r["passed"]]
    by_suite: dict[str, dict] = {}
    for r in results:
        s = by_suite.setdefault(r["suite"], {"total": 0, "passed": 0})
        s["total"] += 1
        s["passed"] += r["passed"]
    report = {"suite": name}
    report.update(cfg.header())
    report.update(
        {
            "passed": not failed,
            "summary": {"total": len(results), "passed": len(results) - len(failed), "failed": len(failed),
                        "by_suite": by_suite},
            "counterexample": failed[0] if failed else None,
            "checks": results,
        }
    )
    return report


def parse_seeds(text: str | int | Sequence[int]) -> tuple[int, ...]:
    """``"3"`` means seeds 1..3; ``"4,9"`` lists seeds explicitly."""
    if isinstance(text, int):
        return tuple(range(1, text + 1))
    if not isinstance(text, str):
        return tuple(int(s) for s in text)
    text = text.strip()
    if "," in text:
        return tuple(int(s) for s in text.split(",") if s.strip())
    count = int(text)
    if count < 1:
        raise ValueError("need at least one seed")
    return tuple(range(1, count + 1))


__all__ = [
    "SuiteConfig",
    "SUITE_NAMES",
    "BASIC_SUITES",
    "GROUPS",
    "plan",
    "run_task",
    "run_suite",
    "parse_seeds",
    "expand_suite",
    "compositions",
    "corrupted",
    "default_workers",
]
