"""Command-line front end: ``circleop <subcommand> [options]``.

Symbols use the literal language of :func:`circleop.symbol.parse_symbol`
(``"0:2;1:1"`` is ``2 + z``; ``one``, ``z``, ``zbar``, ``zero`` are reserved).
JSON output carries ``"schema": 1`` and sorted keys so repeated runs are
byte-identical.  Exit codes: 0 success, 1 selftest failure, 2 bad input,
3 numerical non-convergence (with a diagnostic JSON document).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import acceptance
from .algebra import commute_check, product_form, zero_product_class
from .errors import CircleOpError, SymbolParseError
from .norm import norm_bounds, norm_case_classifier, ny_norm_estimate, operator_norm
from .operators import build_matrix, matrix_to_csv
from .spectral import GridSpec, spectrum_continuous
from .structure import (
    BlaschkeProduct, canonical_subspace, invariance_residual, invariant_subspace_basis, kernel_basis,
    reducing_check,
)
from .symbol import format_complex, parse_complex, format_symbol, parse_symbol, winding_number

SCHEMA = 1


class NotConverged(Exception):
    def __init__(self, payload):
        super().__init__("computation did not converge")
        self.payload = payload


def _symbol(text, flag):
    try:
        return parse_symbol(text)
    except SymbolParseError as exc:
        raise SymbolParseError(f"{flag}: {exc.args[0].rsplit(' (at position', 1)[0]}", exc.position) from None


def _pairs(args, need):
    alphas, betas = args.alpha or [], args.beta or []
    alphas = [alphas] if isinstance(alphas, str) else alphas
    betas = [betas] if isinstance(betas, str) else betas
    if len(alphas) != need or len(betas) != need:
        raise CircleOpError(f"expected {need} --alpha and {need} --beta options")
    return [(_symbol(a, "--alpha"), _symbol(b, "--beta")) for a, b in zip(alphas, betas)]


def _json(payload) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, indent=2) + "\n"


def _blaschke(zeros: str | None, power: int) -> BlaschkeProduct:
    zs = [parse_complex(t) for t in zeros.split(",")] if zeros else []
    return BlaschkeProduct(1.0, power, tuple(zs))


# -- subcommands ---------------------------------------------------------------------

def cmd_matrix(args):
    (a, b), = _pairs(args, 1)
    T = build_matrix(a, b, args.M, args.mode)
    if args.format == "json":
        return _json({"in_modes": T.in_modes.tolist(), "out_modes": T.out_modes.tolist(),
                      "entries": [[format_complex(c) for c in row] for row in T.entries]})
    return matrix_to_csv(T)


def cmd_norm(args):
    (a, b), = _pairs(args, 1)
    est = operator_norm(a, b, args.M)
    lo, hi = norm_bounds(a, b)
    out = {"alpha": format_symbol(a), "beta": format_symbol(b), "M": args.M,
           "svd_estimate": est.value, "svd_previous": est.previous, "converged": est.converged,
           "lower": lo, "upper": hi, "case": norm_case_classifier(a, b).value}
    if args.deg is not None:
        # the NY infimum approximates the squared norm
        ny = ny_norm_estimate(a, b, deg=args.deg, seed=args.seed)
        out.update(ny_estimate=ny.value, ny_norm=ny.norm, ny_converged=ny.converged)
    if not est.converged:
        raise NotConverged(out)
    return _json(out)


def cmd_spectrum(args):
    (a, b), = _pairs(args, 1)
    grid = GridSpec.parse(args.grid)
    report = spectrum_continuous(a, b, grid, N=args.N, eps=args.eps, M=args.M)
    if args.format == "json":
        rows = [{"lam": format_complex(lam), "in_spectrum": bool(report.in_spectrum[i]),
                 "ind_a": report.ind_a[i], "ind_b": report.ind_b[i], "flagged": bool(report.flagged[i])}
                for i, lam in enumerate(report.points)]
        return _json({"grid": args.grid, "eps": args.eps, "points": rows})
    return report.to_csv()


def cmd_product(args):
    (a1, b1), (a2, b2) = _pairs(args, 2)
    pv = product_form(a1, b1, a2, b2)
    zv = zero_product_class(a1, b1, a2, b2, seed=args.seed)
    out = {"is_product": pv.is_product, "zero_product": zv.kind.value, "zero_residual": zv.residual}
    if pv.is_product:
        out.update(alpha=format_symbol(pv.alpha), beta=format_symbol(pv.beta))
    return _json(out)


def cmd_commute(args):
    (a1, b1), (a2, b2) = _pairs(args, 2)
    v = commute_check(a1, b1, a2, b2, args.M)
    out = {"verdict": v.kind.value, "commutes": v.commutes, "residual": v.residual}
    if v.a is not None:
        out.update(a=format_complex(v.a), b=format_complex(v.b), c=format_complex(v.c))
    return _json(out)


def cmd_kernel(args):
    (a, b), = _pairs(args, 1)
    vecs = kernel_basis(a, b, args.M, args.tol, adjoint=args.adjoint)
    return _json({"operator": "adjoint" if args.adjoint else "S", "M": args.M, "tol": args.tol,
                  "dimension": len(vecs),
                  "vectors": [format_symbol(v.to_symbol().chop(1e-14)) for v in vecs]})


def cmd_subspace(args):
    if args.canonical:
        B = canonical_subspace(args.canonical, args.M)
        label = args.canonical
    else:
        phi = None if args.no_phi else _blaschke(args.phi_zeros, args.phi_power)
        psi = None if args.no_psi else _blaschke(args.psi_zeros, args.psi_power)
        B = invariant_subspace_basis(phi, psi, args.M)
        label = "blaschke"
    red = reducing_check(B)
    return _json({"subspace": label, "M": args.M, "dimension": B.dim, "gram_error": B.gram_error(),
                  "invariance_residual": invariance_residual(B), "adjoint_residual": red.adjoint_residual,
                  "verdict": red.label})


def cmd_winding(args):
    s = _symbol(args.symbol, "--symbol")
    at = parse_complex(args.at)
    w = winding_number(s, at, args.N)
    if args.format == "json":
        return _json({"symbol": format_symbol(s), "at": format_complex(at), "winding": w})
    return f"{w}\n"


def cmd_selftest(args):
    numbers = None
    if args.only:
        numbers = {int(t) for t in args.only.split(",")}
    results = acceptance.run_all(seed=args.seed, numbers=numbers)
    text = "\n".join(r.line() for r in results) + "\n\n" + acceptance.format_table(results) + "\n"
    return text, 0 if all(r.passed for r in results) else 1


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circleop", description="Numerics for S_{alpha,beta} = alpha P + beta Q.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, pair=True, repeat=False):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        if pair:
            action = "append" if repeat else None
            sp.add_argument("--alpha", action=action, required=True, help="symbol literal")
            sp.add_argument("--beta", action=action, required=True, help="symbol literal")
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--seed", type=int, default=42)
        return sp

    sp = add("matrix", cmd_matrix, "truncated matrix of S_{alpha,beta}")
    sp.add_argument("--M", type=int, default=8)
    sp.add_argument("--mode", choices=["exact", "square"], default="exact")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = add("norm", cmd_norm, "operator norm (SVD) and optional NY estimate")
    sp.add_argument("--M", type=int, default=64)
    sp.add_argument("--deg", type=int, help="also minimize the NY objective over degree <= DEG")

    sp = add("spectrum", cmd_spectrum, "winding-number spectrum classification on a grid")
    sp.add_argument("--grid", default="-2,2,-2,2,41", help="re0,re1,im0,im1,n")
    sp.add_argument("--eps", type=float, default=1e-3)
    sp.add_argument("--N", type=int, default=1024)
    sp.add_argument("--M", type=int, help="attach min singular values at this truncation")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    add("product", cmd_product, "product form and zero-product class (two --alpha/--beta pairs)", repeat=True)

    sp = add("commute", cmd_commute, "commutativity verdict (two --alpha/--beta pairs)", repeat=True)
    sp.add_argument("--M", type=int)

    sp = add("kernel", cmd_kernel, "kernel of the exact truncation")
    sp.add_argument("--M", type=int, default=32)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--adjoint", action="store_true")

    sp = add("subspace", cmd_subspace, "invariance/reducing check for phi H2 + conj(psi) H2perp", pair=False)
    sp.add_argument("--M", type=int, default=128)
    sp.add_argument("--canonical", choices=["0", "H2", "H2perp", "L2"])
    sp.add_argument("--phi-zeros", help="comma-separated zeros of phi")
    sp.add_argument("--phi-power", type=int, default=0)
    sp.add_argument("--psi-zeros", help="comma-separated zeros of psi")
    sp.add_argument("--psi-power", type=int, default=0)
    sp.add_argument("--no-phi", action="store_true", help="phi = 0")
    sp.add_argument("--no-psi", action="store_true", help="psi = 0")

    sp = add("winding", cmd_winding, "winding number of a symbol around a point", pair=False)
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--at", default="0")
    sp.add_argument("--N", type=int, default=1024)
    sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = add("selftest", cmd_selftest, "run the acceptance suite", pair=False)
    sp.add_argument("--only", help="comma-separated criterion numbers")
    return p


def _emit(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_VALUE_FLAGS = {"--alpha", "--beta", "--symbol", "--grid", "--at", "--phi-zeros", "--psi-zeros"}


def _glue_values(argv):
    # let values such as "-2,2,-2,2,41" or "-1:1" follow their flag without '='
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_values(argv))
    try:
        result = args.fn(args)
    except NotConverged as exc:
        _emit(_json({"error": "not converged", "diagnostic": exc.payload}), args.out)
        return 3
    except CircleOpError as exc:
        print(f"circleop {args.command}: error: {exc}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
    _emit(result, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
