"""Command-line frontend with JSON output.

Exit codes: 0 for definite answers (certificate, refutation, report,
witness), 2 for inconclusive runs, 1 for usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .certify import CertifyOptions, GramCertificate, Refutation, Unknown, archimedean_search, certify_sos
from .conics import ConicInput, classify_conic, classify_conic_approx
from .hereditary import (MatrixTuple, hbi_check, hereditary_eval, kernel_up_to_degree, shift_commutator, tuple_diagnostics,
                         witness_degenerate_tuple, witness_diamond_tuple)
from .ideals import (DegenerateSpec, DiamondSpec, WitnessSearchConfig, degenerate_residual, diamond_residual,
                     g_witness_search)
from .poly import PolySyntaxError, format_poly, infer_nvars, parse_poly
from .refute import leading_form_obstruction, radial_refute
from .serialize import cmat, cvec, to_jsonable
from .spectral import FactorizationError, riesz_fejer, trig_coefficients

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2

TOLERANCE_FLAGS = ("certify_tol", "psd_tol", "rank_tol", "comm_tol")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input parsing

def parse_number(text: str):
    """Rationals stay exact (``"5/8"``, ``"-1"``); everything else goes through ``complex``."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        z = complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"not a number: {text!r}") from exc
    return z.real if z.imag == 0 else z


def _num(text):
    v = parse_number(text)
    return complex(v) if isinstance(v, complex) else v


def parse_vector(text: str) -> np.ndarray:
    return np.array([complex(parse_number(t)) for t in text.split(",") if t.strip()], dtype=complex)


def _entry(x):
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        return complex(parse_number(x))
    return complex(x)


def parse_matrix(text: str) -> np.ndarray:
    """JSON rows; entries are numbers, ``[re, im]`` pairs or strings like ``"1-2j"``."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"matrix must be JSON: {exc}") from exc
    return np.array([[_entry(x) for x in row] for row in rows], dtype=complex)


def load_tuple(args) -> MatrixTuple:
    if args.tuple_file:
        with open(args.tuple_file) as fh:
            doc = json.load(fh)
        mats = doc["mats"] if isinstance(doc, dict) else doc
    elif args.mats:
        try:
            mats = json.loads(args.mats)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--mats must be JSON: {exc}") from exc
    else:
        raise UsageError("give --mats or --tuple-file")
    mats = [np.array([[_entry(x) for x in row] for row in M], dtype=complex) for M in mats]
    return MatrixTuple(mats, comm_tol=args.comm_tol)


def _polys(texts, n=None):
    texts = [t for t in texts if t is not None]
    n = n or infer_nvars(*texts)
    return [parse_poly(t, n) for t in texts], n


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, result dict)

def _status_code(result) -> int:
    return EXIT_UNKNOWN if isinstance(result, Unknown) else EXIT_OK


def cmd_classify_conic(args):
    if args.poly is not None:
        if any(v is not None for v in (args.a, args.alpha, args.beta, args.c)):
            raise UsageError("give either --poly or the coefficients, not both")
        inp = ConicInput.from_poly(parse_poly(args.poly, 1))
    else:
        inp = ConicInput(_num(args.a or "0"), complex(_num(args.alpha or "0")),
                         complex(_num(args.beta or "0")), _num(args.c or "0"))
    rep = classify_conic_approx(inp, args.zero_tol) if args.approx else classify_conic(inp)
    return EXIT_OK, {"status": "report", **rep.to_dict(), "polynomial": format_poly(inp.to_poly())}


def cmd_certify(args):
    texts = [args.f] + list(args.ideal) + list(args.module)
    polys, n = _polys(texts, args.n)
    f = polys[0]
    ideal = polys[1:1 + len(args.ideal)]
    module = polys[1 + len(args.ideal):]
    opts = CertifyOptions(certify_tol=args.certify_tol, psd_tol=args.psd_tol)
    if module:
        res = certify_sos(f, module, "module", args.degree, opts, ideal_gens=ideal)
    else:
        res = certify_sos(f, ideal, "ideal", args.degree, opts)
    if isinstance(res, Unknown) and args.leading_form and n == 1 and not module:
        lf = leading_form_obstruction(f, ideal)
        if lf is not None:
            res = lf
    out = res.to_dict()
    if isinstance(res, GramCertificate):
        out["hermitian_squares"] = [[format_poly(h) for h in res.hermitian_squares(b, args.psd_tol)]
                                    for b in range(len(res.gram_blocks))]
    return _status_code(res), out


def cmd_archimedean(args):
    gens, _ = _polys(args.ideal, args.n)
    res = archimedean_search(gens, args.degree, CertifyOptions(certify_tol=args.certify_tol,
                                                               psd_tol=args.psd_tol))
    return _status_code(res), res.to_dict()


def cmd_membership(args):
    f = parse_poly(args.f, args.n or infer_nvars(args.f))
    a = parse_vector(args.a)
    if args.b is not None:
        spec = DiamondSpec(a, parse_vector(args.b))
        res, fam = diamond_residual(f, spec), "diamond"
        extra = {"a": cvec(spec.a), "b": cvec(spec.b)}
    elif args.U is not None or args.W is not None:
        spec = DegenerateSpec(a, parse_matrix(args.U)) if args.U is not None else \
            DegenerateSpec.from_factor(a, parse_matrix(args.W))
        res, fam = degenerate_residual(f, spec), "degenerate"
        extra = {"a": cvec(spec.a), "U": cmat(spec.U)}
    else:
        raise UsageError("give --b (diamond) or --U / --W (degenerate)")
    return EXIT_OK, {"status": "report", "family": fam, **extra, "member": bool(res <= args.tol),
                     "residual": res}


def cmd_witness(args):
    gens, _ = _polys(args.ideal, args.n)
    cfg = WitnessSearchConfig(seed=args.seed, starts=args.starts, max_iter=args.max_iter, tol=args.tol)
    w = g_witness_search(gens, cfg)
    doc = w.to_dict()
    if w.kind == "none":
        return EXIT_UNKNOWN, {"status": "unknown", **doc}
    return EXIT_OK, {"status": "witness", **doc}


def cmd_tuple_diagnose(args):
    T = load_tuple(args)
    rep = tuple_diagnostics(T, args.tol)
    return EXIT_OK, {"status": "report", **rep.to_dict()}


def cmd_tuple_kernel(args):
    T = load_tuple(args)
    kb = kernel_up_to_degree(T, args.degree, args.rank_tol)
    out = {"status": "report", "degree": kb.degree, "dim": kb.dim,
           "basis": [format_poly(p) for p in kb.polys(T.n)],
           "singular_values": kb.singular_values}
    if args.check:
        polys, _ = _polys(args.check, T.n)
        out["distances"] = {t: kb.contains(p) for t, p in zip(args.check, polys)}
    return EXIT_OK, out


def cmd_witness_tuple(args):
    a = parse_vector(args.a)
    if args.b is not None:
        T = witness_diamond_tuple(a, parse_vector(args.b))
    elif args.W is not None:
        T = witness_degenerate_tuple(a, parse_matrix(args.W))
    else:
        raise UsageError("give --b (diamond) or --W (degenerate)")
    out = {"status": "report", "tuple": T.to_dict(), "diagnostics": tuple_diagnostics(T).to_dict()}
    if args.f is not None:
        f = parse_poly(args.f, T.n)
        out["hereditary_norm"] = float(np.linalg.norm(hereditary_eval(f, T), 2))
    return EXIT_OK, out


def cmd_hbi(args):
    T = load_tuple(args)
    res = hbi_check(T, args.degree, args.psd_tol)
    return EXIT_OK, {"status": "report", "degree": args.degree, **res}


def cmd_riesz_fejer(args):
    if args.p is not None:
        c = trig_coefficients(parse_poly(args.p, 1))
    elif args.coeffs is not None:
        c = list(parse_vector(args.coeffs))
    else:
        raise UsageError("give --p or --coeffs")
    try:
        res = riesz_fejer(c, tol=args.certify_tol)
    except FactorizationError as exc:
        raise UsageError(f"{exc} (condition estimate {exc.condition:.3e})") from exc
    h = [res.h.coeff((k,), (0,)) for k in range(max(res.h.degree, 0) + 1)]
    return EXIT_OK, {"status": "report", "h": format_poly(res.h), "h_coefficients": cvec(h),
                     "g": format_poly(res.g), "residual": res.residual}


def cmd_refute_radial(args):
    a = [Fraction(t.strip()) for t in args.a.split(",") if t.strip()]
    res = radial_refute(args.m, a, args.g_degree)
    return _status_code(res), res.to_dict()


def cmd_shift_commutator(args):
    M = shift_commutator(args.N)
    return EXIT_OK, {"status": "report", "N": args.N, "matrix": M,
                     "min_eig": float(np.linalg.eigvalsh(M)[0])}


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, allow_abbrev=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--certify-tol", type=float, default=1e-8)
    common.add_argument("--psd-tol", type=float, default=1e-9)
    common.add_argument("--rank-tol", type=float, default=1e-9)
    common.add_argument("--comm-tol", type=float, default=1e-10)
    common.add_argument("--output", "-o", help="write the JSON document here instead of stdout")
    common.add_argument("--n", type=int, help="number of variables (default: inferred)")

    p = _Parser(prog="hermsos", description=__doc__.splitlines()[0], allow_abbrev=False)
    p.add_argument("--version", action="version", version=f"hermsos {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        s = sub.add_parser(name, parents=[common], help=help_, allow_abbrev=False)
        s.set_defaults(func=func)
        return s

    s = add("classify-conic", cmd_classify_conic, "decide the conic properties")
    for flag in ("--a", "--alpha", "--beta", "--c"):
        s.add_argument(flag)
    s.add_argument("--poly", help="conic as polynomial text instead of coefficients")
    s.add_argument("--approx", action="store_true", help="tolerance-based zero tests")
    s.add_argument("--zero-tol", type=float, default=1e-12)

    s = add("certify", cmd_certify, "hermitian SOS certificate modulo an ideal or in a module")
    s.add_argument("--f", required=True)
    s.add_argument("--ideal", action="append", default=[])
    s.add_argument("--module", action="append", default=[])
    s.add_argument("--degree", type=int)
    s.add_argument("--leading-form", action="store_true",
                   help="on an inconclusive search in one variable, try the leading-form obstruction")

    s = add("archimedean", cmd_archimedean, "search for |z|^2 + p + a in Sigma_h + I")
    s.add_argument("--ideal", action="append", required=True)
    s.add_argument("--degree", type=int, default=1)

    s = add("membership", cmd_membership, "test f against a diamond or degenerate ideal")
    s.add_argument("--f", required=True)
    s.add_argument("--a", required=True, help="comma separated point")
    s.add_argument("--b")
    s.add_argument("--U", help="JSON positive semidefinite matrix")
    s.add_argument("--W", help="JSON factor with U = W^H W")
    s.add_argument("--tol", type=float, default=1e-9)

    s = add("witness", cmd_witness, "search for a diamond or degenerate ideal containing the generators")
    s.add_argument("--ideal", action="append", required=True)
    s.add_argument("--starts", type=int, default=64)
    s.add_argument("--max-iter", type=int, default=200)
    s.add_argument("--tol", type=float, default=1e-9)

    for name, func, help_ in (("tuple-diagnose", cmd_tuple_diagnose, "commutation and normality report"),
                              ("tuple-kernel", cmd_tuple_kernel, "kernel of the hereditary calculus"),
                              ("hbi", cmd_hbi, "block positivity test")):
        s = add(name, func, help_)
        s.add_argument("--mats", help="JSON list of matrices")
        s.add_argument("--tuple-file")
        if name == "tuple-diagnose":
            s.add_argument("--tol", type=float, default=1e-10)
        else:
            s.add_argument("--degree", type=int, default=1 if name == "hbi" else 2)
        if name == "tuple-kernel":
            s.add_argument("--check", action="append", default=[], help="polynomial to test against the kernel")

    s = add("witness-tuple", cmd_witness_tuple, "explicit matrix tuple annihilating a witness ideal")
    s.add_argument("--a", required=True)
    s.add_argument("--b")
    s.add_argument("--W")
    s.add_argument("--f", help="also report the norm of f(T)")

    s = add("riesz-fejer", cmd_riesz_fejer, "factor p = |h|^2 + (1 - z zbar) g")
    s.add_argument("--p", help="polynomial text in one variable")
    s.add_argument("--coeffs", help="comma separated c_-m..c_m")

    s = add("refute-radial", cmd_refute_radial, "exact LP refutation for radial f")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--a", required=True, help="comma separated a_0..a_{m-1}")
    s.add_argument("--g-degree", type=int, default=8)

    s = add("shift-commutator", cmd_shift_commutator, "self-commutator of the truncated shift formula")
    s.add_argument("--N", type=int, required=True)
    return p


def emit_report(result: dict, meta: dict) -> str:
    """Serialize ``result`` followed by the ``meta`` block."""
    doc = dict(to_jsonable(result))
    doc["meta"] = to_jsonable(meta)
    return json.dumps(doc, indent=2, allow_nan=False)


def _meta(args, command, wall):
    tols = {k: getattr(args, k, None) for k in TOLERANCE_FLAGS} if args else {}
    # rejected values are reported as null so the document stays schema-valid
    tols = {k: (v if v is not None and v > 0 else None) for k, v in tols.items()}
    return {"tool": "hermsos", "version": __version__, "command": command,
            "seed": getattr(args, "seed", 0), "tolerances": tols, "wall_time": wall}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    t0 = time.perf_counter()
    args = None
    try:
        args = build_parser().parse_args(argv)
        for k in TOLERANCE_FLAGS:
            if getattr(args, k) <= 0:
                raise UsageError(f"--{k.replace('_', '-')} must be positive")
        code, result = args.func(args)
    except (UsageError, PolySyntaxError, ValueError, OSError, KeyError) as exc:
        code, result = EXIT_ERROR, {"status": "error", "error": str(exc)}
    text = emit_report(result, _meta(args, getattr(args, "command", None), time.perf_counter() - t0))
    out_path = getattr(args, "output", None)
    if out_path and code != EXIT_ERROR:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        stdout.write(text + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
