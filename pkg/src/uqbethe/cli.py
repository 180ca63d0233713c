"""Command-line front end.

Subcommands::

    uqbethe rmatrix dump --variant twist --N 2 --u 2 --v 3
    uqbethe weight compute --N 3 --n 2,1 --module "tensor(vec@2,vec@5/3)" --method direct
    uqbethe weight verify coincidence --seeds 3
    uqbethe verify all --N 3 --max-excitations 3 --seeds 3
    uqbethe module inspect --module "verma2(3,-2,4,5/2)" --N 2

All numbers are read and written as ``p/q`` strings.  Exit status is 0 on
success, 1 on a failed check or a computation error (with an error JSON on
stdout), and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from .combinat import TypedVariables, coeff_eta
from .errors import UqBetheError
from .representations import parse_recipe
from .rmatrix import Variant, build_r, index_pairs
from .scalars import DEFAULT_Q, ScalarContext, format_rational, sample_generic, to_rational
from .suites import SUITE_NAMES, SuiteConfig, default_workers, parse_seeds, run_suite
from .weightfn import Method, compute_weight

MAX_RANK = 4
MAX_EXCITATIONS = 4
MAX_EXCITATIONS_RANK2 = 6


class UsageError(Exception):
    """Invalid command-line configuration (exit status 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _q_value(text: str) -> Fraction:
    q = _rational(text)
    if q in (0, 1, -1):
        raise argparse.ArgumentTypeError("q must avoid 0 and +-1")
    return q


def _counts(text: str) -> tuple[int, ...]:
    try:
        counts = tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"excitation counts must be integers: {text!r}") from exc
    if not counts or any(c < 0 for c in counts):
        raise argparse.ArgumentTypeError(f"excitation counts must be nonnegative: {text!r}")
    return counts


def _seeds(text: str) -> tuple[int, ...]:
    try:
        return parse_seeds(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


_T_ITEM = re.compile(r"^\s*(\d+)\s*:\s*(\d+)\s*=\s*([-+]?\d+(?:/\d+)?)\s*$")


def parse_assignments(text: str) -> dict[tuple[int, int], Fraction]:
    """Parse ``"a:l=p/q,..."`` into ``{(a, l): value}`` (both indices 1-based)."""
    out: dict[tuple[int, int], Fraction] = {}
    for item in text.split(","):
        if not item.strip():
            continue
        m = _T_ITEM.match(item)
        if not m:
            raise UsageError(f"cannot parse variable assignment {item!r}; expected a:l=p/q")
        key = (int(m.group(1)), int(m.group(2)))
        if key in out:
            raise UsageError(f"variable t^{key[0]}_{key[1]} assigned twice")
        out[key] = to_rational(m.group(3))
    return out


def build_variables(ctx: ScalarContext, N: int, counts: Sequence[int], assigned: dict, forbidden: Sequence) -> TypedVariables:
    """Fill explicit assignments and sample the rest generically."""
    for a, l in assigned:
        if not (1 <= a <= N - 1) or not (1 <= l <= counts[a - 1]):
            raise UsageError(f"assignment t^{a}_{l} is outside n={list(counts)}")
    missing = sum(counts) - len(assigned)
    fresh = iter(sample_generic(ctx, missing, list(forbidden) + list(assigned.values())))
    rows = []
    for a in range(1, N):
        rows.append(tuple(assigned[(a, l)] if (a, l) in assigned else next(fresh) for l in range(1, counts[a - 1] + 1)))
    return TypedVariables(N, tuple(rows))


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_payload(exc: BaseException, context: dict) -> dict:
    return {"error": type(exc).__name__, "message": str(exc), "config": context}


def _check_rank(N: int, force: bool) -> None:
    if N < 2:
        raise UsageError("N must be at least 2")
    if N > MAX_RANK and not force:
        raise UsageError(f"N={N} exceeds the desk-scale bound {MAX_RANK}; pass --force to override")


def _check_excitations(N: int, total: int, force: bool) -> None:
    bound = MAX_EXCITATIONS_RANK2 if N == 2 else MAX_EXCITATIONS
    if total > bound and not force:
        raise UsageError(f"|n|={total} exceeds the desk-scale bound {bound} for N={N}; pass --force to override")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_rmatrix_dump(args) -> int:
    _check_rank(args.N, args.force)
    ctx = ScalarContext(args.q)
    R = build_r(ctx, args.variant, args.N, args.u, args.v)
    payload = {
        "variant": Variant.parse(args.variant).value,
        "N": args.N,
        "q": format_rational(ctx.q),
        "u": format_rational(args.u),
        "v": format_rational(args.v),
        "index": [list(p) for p in index_pairs(args.N)],
        "matrix": [[format_rational(x) for x in row] for row in R.to_dense()],
    }
    _emit(payload, args.out)
    return 0


def cmd_compute(args) -> int:
    N, counts = args.N, args.n
    if len(counts) != N - 1:
        raise UsageError(f"--n needs N-1={N - 1} counts, got {len(counts)}")
    _check_rank(N, args.force)
    _check_excitations(N, sum(counts), args.force)
    assigned = parse_assignments(args.t) if args.t else {}
    ctx = ScalarContext(args.q, args.seed)
    try:
        module = parse_recipe(ctx, args.module, N, args.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    vars = build_variables(ctx, N, counts, assigned, module.forbidden)
    method = Method.parse(args.method)
    result = compute_weight(module, vars, method)
    meta = {
        "q": format_rational(ctx.q),
        "seed": args.seed,
        "dim": module.dim,
        "singular_index": module.singular_index,
        "terms": result.terms,
    }
    if method is Method.TV:
        meta["eta"] = format_rational(coeff_eta(ctx, vars))
    payload = {
        "module": module.recipe(),
        "variant": module.variant.value,
        "method": method.value,
        "n": list(counts),
        "t": {str(a + 1): [format_rational(x) for x in row] for a, row in enumerate(vars.values)},
        "vector": [format_rational(x) for x in result.vector],
        "meta": meta,
    }
    _emit(payload, args.out)
    return 0


def cmd_verify(args) -> int:
    _check_rank(args.N, args.force)
    if args.max_excitations is not None:
        _check_excitations(2 if args.N == 2 else 3, args.max_excitations, args.force)
    cfg = SuiteConfig(
        q=args.q,
        seeds=args.seeds,
        N=args.N,
        max_excitations=args.max_excitations,
        corrupt=args.corrupt,
        workers=args.workers,
    )
    report = run_suite(args.suite, cfg)
    _emit(report, args.out)
    return 0 if report["passed"] else 1


def cmd_inspect(args) -> int:
    _check_rank(args.N, args.force)
    ctx = ScalarContext(args.q, args.seed)
    try:
        module = parse_recipe(ctx, args.module, args.N, args.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    (u,) = [args.u] if args.u is not None else module.sample_points(1, salt=1)
    payload = {
        "module": module.recipe(),
        "variant": module.variant.value,
        "N": module.N,
        "dim": module.dim,
        "capacity": module.capacity,
        "singular_index": module.singular_index,
        "forbidden": [format_rational(x) for x in module.forbidden],
        "u": format_rational(u),
        "lambda": [format_rational(module.lam(b, u)) for b in range(1, module.N + 1)],
    }
    _emit(payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, *, seed: bool = True) -> None:
    p.add_argument("--q", type=_q_value, default=DEFAULT_Q, help="deformation parameter (default 3/7)")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="seed for generic sampling")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--force", action="store_true", help="lift the desk-scale size bounds")


def _add_verify(p: argparse.ArgumentParser) -> None:
    p.add_argument("suite", choices=SUITE_NAMES)
    p.add_argument("--N", type=int, default=4, help="largest rank exercised (default 4)")
    p.add_argument("--max-excitations", type=int, default=None, help="bound on |n| for weight suites")
    p.add_argument("--seeds", type=_seeds, default=(1, 2, 3), help="seed count, or a comma-separated list")
    p.add_argument("--workers", type=int, default=default_workers(), help="process count (env UQBETHE_WORKERS)")
    p.add_argument("--corrupt", choices=("rmatrix",), default=None, help=argparse.SUPPRESS)
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_verify)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uqbethe", description="Exact off-shell Bethe vectors for U_q(gl_N^).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rm = sub.add_parser("rmatrix", help="R-matrix utilities")
    rm_sub = rm.add_subparsers(dest="action", required=True, parser_class=_Parser)
    dump = rm_sub.add_parser("dump", help="print R(u, v) as JSON")
    dump.add_argument("--variant", choices=("orig", "twist"), required=True)
    dump.add_argument("--N", type=int, required=True)
    dump.add_argument("--u", type=_rational, required=True)
    dump.add_argument("--v", type=_rational, required=True)
    _add_common(dump, seed=False)
    dump.set_defaults(func=cmd_rmatrix_dump)

    wt = sub.add_parser("weight", help="weight functions")
    wt_sub = wt.add_subparsers(dest="action", required=True, parser_class=_Parser)
    comp = wt_sub.add_parser("compute", help="compute one weight vector")
    comp.add_argument("--N", type=int, required=True)
    comp.add_argument("--n", type=_counts, required=True, help="comma-separated counts n_1,...,n_{N-1}")
    comp.add_argument("--module", required=True, help="vec@z, tensor(...), or verma2(L1,L2,K,z)")
    comp.add_argument("--variant", choices=("orig", "twist"), default="twist")
    comp.add_argument("--method", choices=("direct", "recurrence", "tv"), default="direct")
    comp.add_argument("--t", help='explicit variables "a:l=p/q,..."; the rest are sampled')
    _add_common(comp)
    comp.set_defaults(func=cmd_compute)
    _add_verify(wt_sub.add_parser("verify", help="run a verification suite"))

    _add_verify(sub.add_parser("verify", help="run a verification suite"))

    mod = sub.add_parser("module", help="module utilities")
    mod_sub = mod.add_subparsers(dest="action", required=True, parser_class=_Parser)
    insp = mod_sub.add_parser("inspect", help="describe a module recipe")
    insp.add_argument("--module", required=True)
    insp.add_argument("--N", type=int, required=True)
    insp.add_argument("--variant", choices=("orig", "twist"), default="twist")
    insp.add_argument("--u", type=_rational, default=None, help="point for the lambda eigenvalues")
    _add_common(insp)
    insp.set_defaults(func=cmd_inspect)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"uqbethe: error: {exc}\n")
        return 2
    except (UqBetheError, ZeroDivisionError, ValueError) as exc:
        context = {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k != "func"}
        _emit(_error_payload(exc, context), None)
        return 1


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    return value


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
