"""Command line front end: diagnose, solve, intersect, gen, and demo.

Every command prints a structured report (JSON with ``--json``, aligned
text otherwise) containing each residual and range decision relevant to
the answer.  Exit codes: 0 the equation is solved or the property holds,
2 the instance is diagnosed unsolvable (the certificate is still printed),
1 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import congruence, douglas, harness, sylvester
from .exceptions import (
    EmptyIntersection,
    IntersectionNotInRangeC,
    NotSolvable,
    OpeqError,
    RangeNotContained,
)
from .kernel import ToleranceConfig, pinv, svd
from .matrixio import load_matrix, matrix_to_obj, save_matrix
from .projections import RangeDecision, numerical_rank

__all__ = ["run_command", "main", "make_truncated_shift", "truncated_shift_demo"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSOLVABLE = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; the report contract reserves
    # 2 for "diagnosed unsolvable", so route usage errors through exit 1.
    def error(self, message):
        raise _UsageError(message)


def make_truncated_shift(n: int) -> np.ndarray:
    """2n-by-2n truncation of the weighted shift sending entry 2j to entry 2j / j."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    t = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    for j in range(1, n + 1):
        t[2 * j - 1, 2 * j - 1] = 1.0 / j
    return t


def truncated_shift_demo(n: int, tol: ToleranceConfig | None = None) -> dict:
    """Numerical closed-range failure study of the truncated weighted shift.

    The min nonzero singular value of the size-j truncation is 1/j and the
    pseudoinverse norm is j, so both degrade linearly: the limit operator
    has non-closed range even though every truncation is perfectly tame.
    """
    tol = tol or ToleranceConfig()
    rows = []
    for j in range(1, n + 1):
        t = make_truncated_shift(j)
        sigma = svd(t).singular_values
        rank = numerical_rank(t, tol)
        rows.append({
            "n": j,
            "dim": 2 * j,
            "numerical_rank": rank,
            "min_nonzero_singular_value": float(sigma[rank - 1]),
            "pinv_norm": float(np.linalg.norm(pinv(t, tol), 2)),
        })
    full = rows[-1]
    return {
        "demo": "truncated-shift",
        "n": n,
        "singular_values": [float(s) for s in svd(make_truncated_shift(n)).singular_values],
        "numerical_rank": full["numerical_rank"],
        "min_nonzero_singular_value": full["min_nonzero_singular_value"],
        "pinv_norm": full["pinv_norm"],
        "rows": rows,
    }


def _tol(args) -> ToleranceConfig:
    return ToleranceConfig(rank_rel=args.tol_rank, residual_rel=args.tol_residual)


def _decision(dec: RangeDecision) -> dict:
    return {"holds": dec.holds, "residual": dec.residual, "rank_data": dict(dec.rank_data)}


def _certificate(cert: harness.Certificate) -> dict:
    return {
        "equation": cert.equation,
        "residuals": dict(cert.residuals),
        "decisions": {k: _decision(v) for k, v in cert.decisions.items()},
        "passed": cert.passed,
        "failures": list(cert.failures),
    }


def _render_text(obj, indent=0, key=None):
    pad = "  " * indent
    label = f"{pad}{key}: " if key is not None else pad
    if isinstance(obj, dict):
        if "rows" in obj and "cols" in obj and "data" in obj:
            print(f"{label}matrix {obj['rows']}x{obj['cols']}")
            return
        if key is not None:
            print(f"{pad}{key}:")
        for k, v in obj.items():
            _render_text(v, indent + (key is not None), k)
    elif isinstance(obj, list):
        if obj and all(isinstance(v, dict) for v in obj):
            print(f"{pad}{key}:")
            for v in obj:
                cells = "  ".join(f"{kk}={_fmt(vv)}" for kk, vv in v.items())
                print(f"{pad}  {cells}")
        else:
            print(f"{label}{', '.join(_fmt(v) for v in obj) if obj else 'none'}")
    else:
        print(f"{label}{_fmt(obj)}")


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        _render_text(report)


def _write_solutions(out_dir, mats: dict) -> dict:
    written = {}
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        for name, m in mats.items():
            path = os.path.join(out_dir, f"{name}.json")
            save_matrix(path, m)
            written[name] = path
    return written


def _cmd_diagnose(args) -> int:
    tol = _tol(args)
    a = load_matrix(args.A)
    b = load_matrix(args.B)
    c = load_matrix(args.C)
    if args.equation == "sylvester":
        diag = sylvester.diagnose_ax_yb(a, b, c, tol)
        report = {
            "command": "diagnose sylvester",
            "solvable": diag.solvable,
            "anomaly": diag.anomaly,
            "residuals": {"classical_residual": diag.classical_residual},
            "decisions": {
                "cond_range_cnb": _decision(diag.cond_range_cnb),
                "cond_range_pbc": _decision(diag.cond_range_pbc),
            },
        }
        _emit(report, args.json)
        return EXIT_OK if diag.solvable else EXIT_UNSOLVABLE
    diag = congruence.diagnose_congruence(a, b, c, tol)
    if diag.solvable:
        status = "solvable"
    elif diag.cond_cnbstar_in_a.holds and diag.cond_cstar_nastar_in_b.holds:
        status = "inconclusive"
    else:
        status = "unsolvable"
    report = {
        "command": "diagnose congruence",
        "status": status,
        "hypotheses_hold": diag.hypotheses_hold,
        "solvable": diag.solvable,
        "residuals": {"hyp_cstar_pa_in_nbstar": diag.hyp_cstar_pa_in_nbstar},
        "decisions": {
            "hyp_c_in_b": _decision(diag.hyp_c_in_b),
            "hyp_cstar_in_a": _decision(diag.hyp_cstar_in_a),
            "cond_cnbstar_in_a": _decision(diag.cond_cnbstar_in_a),
            "cond_cstar_nastar_in_b": _decision(diag.cond_cstar_nastar_in_b),
        },
    }
    _emit(report, args.json)
    return EXIT_OK if diag.solvable else EXIT_UNSOLVABLE


def _cmd_solve(args) -> int:
    tol = _tol(args)
    eq = args.equation
    if eq == "douglas":
        a = load_matrix(args.A)
        c = load_matrix(args.C)
        rep = douglas.reduced_solution(a, c, tol)
        cert = harness.verify("douglas", {"A": a, "C": c}, {"X": rep.d}, tol)
        report = {
            "command": "solve douglas",
            "residuals": {
                "residual": rep.residual,
                "reduced_certificate": rep.reduced_certificate,
            },
            "lambda_factor": rep.lambda_factor,
            "certificate": _certificate(cert),
            "solution": {"X": matrix_to_obj(rep.d)},
        }
        report["files"] = _write_solutions(args.out, {"X": rep.d})
        _emit(report, args.json)
        return EXIT_OK if cert.passed else EXIT_UNSOLVABLE
    a = load_matrix(args.A)
    b = load_matrix(args.B)
    c = load_matrix(args.C)
    if eq == "sylvester":
        params = sylvester.random_params(a, b, args.seed) if args.seed is not None else None
        sol = sylvester.solve_ax_yb(a, b, c, params=params, tol=tol)
        cert = harness.verify("sylvester", {"A": a, "B": b, "C": c}, {"X": sol.x, "Y": sol.y}, tol)
        report = {
            "command": "solve sylvester",
            "residuals": {"residual": sol.residual},
            "certificate": _certificate(cert),
            "solution": {"X": matrix_to_obj(sol.x), "Y": matrix_to_obj(sol.y)},
        }
        report["files"] = _write_solutions(args.out, {"X": sol.x, "Y": sol.y})
        _emit(report, args.json)
        return EXIT_OK if cert.passed else EXIT_UNSOLVABLE
    if eq == "orthogonal":
        x, y, lam = sylvester.solve_ax_by_orthogonal(a, b, c, tol)
        cert = harness.verify("orthogonal", {"A": a, "B": b, "C": c},
                              {"X": x, "Y": y, "lam": lam}, tol)
        report = {
            "command": "solve orthogonal",
            "lambda_factor": lam,
            "certificate": _certificate(cert),
            "solution": {"X": matrix_to_obj(x), "Y": matrix_to_obj(y)},
        }
        report["files"] = _write_solutions(args.out, {"X": x, "Y": y})
        _emit(report, args.json)
        return EXIT_OK if cert.passed else EXIT_UNSOLVABLE
    if eq == "congruence":
        x, y, diag = congruence.solve_congruence(a, b, c, tol)
        cert = harness.verify("congruence", {"A": a, "B": b, "C": c}, {"X": x, "Y": y}, tol)
        report = {
            "command": "solve congruence",
            "residuals": {
                "residual": diag.residual,
                "hyp_cstar_pa_in_nbstar": diag.hyp_cstar_pa_in_nbstar,
            },
            "certificate": _certificate(cert),
            "solution": {"X": matrix_to_obj(x), "Y": matrix_to_obj(y)},
        }
        report["files"] = _write_solutions(args.out, {"X": x, "Y": y})
        _emit(report, args.json)
        return EXIT_OK if cert.passed else EXIT_UNSOLVABLE
    x, y, z, rep = congruence.solve_congruence_cz(a, b, c, tol)
    cert = harness.verify("congruence-cz", {"A": a, "B": b, "C": c},
                          {"X": x, "Y": y, "Z": z}, tol)
    report = {
        "command": "solve congruence-cz",
        "residuals": {
            "residual": rep.residual,
            "pn_s_residual": rep.intersection.pn_s_residual,
        },
        "norms": {"x": rep.x_norm, "y": rep.y_norm, "z": rep.z_norm},
        "intersection_dim": rep.intersection.dim,
        "decisions": {"basis_in_range_c": _decision(rep.basis_in_range_c)},
        "certificate": _certificate(cert),
        "solution": {"X": matrix_to_obj(x), "Y": matrix_to_obj(y), "Z": matrix_to_obj(z)},
    }
    report["files"] = _write_solutions(args.out, {"X": x, "Y": y, "Z": z})
    _emit(report, args.json)
    return EXIT_OK if cert.passed else EXIT_UNSOLVABLE


def _cmd_intersect(args) -> int:
    tol = _tol(args)
    rep = congruence.range_intersection(load_matrix(args.A), load_matrix(args.B), tol)
    report = {
        "command": "intersect",
        "dim": rep.dim,
        "dim_rank_formula": rep.dim_rank_formula,
        "ranks": {"A": rep.rank_a, "B": rep.rank_b, "stacked": rep.rank_stacked},
        "residuals": {
            "pn_s_residual": rep.pn_s_residual,
            "ax_eq_bz": rep.ax_eq_bz_residual,
            "azstar_eq_by": rep.azstar_eq_by_residual,
        },
        "decisions": {"sqrt_range_in_basis": _decision(rep.sqrt_range_in_basis)},
        "basis": matrix_to_obj(rep.basis),
    }
    report["files"] = _write_solutions(args.out, {
        "basis": rep.basis, "X": rep.x_block, "Z": rep.z_block, "Y": rep.y_block,
    })
    _emit(report, args.json)
    return EXIT_OK


def _parse_ranks(text):
    ranks = {}
    if not text:
        return ranks
    for item in text.split(","):
        name, _, value = item.partition("=")
        if not value:
            raise _UsageError(f"--ranks entries look like NAME=INT, got {item!r}")
        try:
            ranks[name.strip()] = int(value)
        except ValueError:
            raise _UsageError(f"--ranks value for {name!r} is not an integer: {value!r}")
    return ranks


def _cmd_gen(args) -> int:
    shape = tuple(int(v) for v in args.shape.split(","))
    params = {}
    if args.lam is not None:
        params["lam"] = args.lam
    spec = harness.InstanceSpec(seed=args.seed, family=args.family, shape=shape,
                                ranks=_parse_ranks(args.ranks), params=params)
    out = harness.generate(spec)
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    block_k = shape[4] if len(shape) == 5 and shape[4] > 1 else None
    files = {}
    scalars = {}
    for name, value in sorted(out.items()):
        if isinstance(value, np.ndarray):
            path = os.path.join(out_dir, f"{name}.json")
            save_matrix(path, value, block_k=block_k)
            files[name] = path
        else:
            scalars[name] = value
    report = {
        "command": "gen",
        "family": args.family,
        "seed": args.seed,
        "shape": list(shape),
        "files": files,
    }
    if scalars:
        report["params"] = scalars
    _emit(report, args.json)
    return EXIT_OK


def _cmd_demo(args) -> int:
    report = truncated_shift_demo(args.n, _tol(args))
    _emit(report, args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol-rank", type=float, default=1e-10,
                        help="relative singular value cutoff for rank decisions")
    common.add_argument("--tol-residual", type=float, default=1e-8,
                        help="relative residual below which an equation or inclusion is accepted")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--out", default=None, help="directory for solution matrix files")

    parser = _Parser(prog="opeq",
                     description="Certified solvers for operator equations over "
                                 "finite-dimensional Hilbert C*-modules.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagnose", parents=[common], help="solvability diagnosis with certificate")
    p.add_argument("equation", choices=["sylvester", "congruence"])
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--C", required=True)
    p.set_defaults(fn=_cmd_diagnose)

    p = sub.add_parser("solve", parents=[common], help="solve one equation and certify the answer")
    p.add_argument("equation",
                   choices=["douglas", "sylvester", "orthogonal", "congruence", "congruence-cz"])
    p.add_argument("--A", required=True)
    p.add_argument("--B", default=None)
    p.add_argument("--C", required=True)
    p.add_argument("--seed", type=int, default=None,
                   help="draw random homogeneous parameters (sylvester only)")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("intersect", parents=[common], help="range intersection with PSD blocks")
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.set_defaults(fn=_cmd_intersect)

    p = sub.add_parser("gen", parents=[common], help="generate a seeded instance family")
    p.add_argument("--family", required=True, choices=list(harness.FAMILIES))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--shape", default="6,5,4,3,1", help="m,n,p,q,k block dimensions")
    p.add_argument("--ranks", default=None, help="rank targets, e.g. A=3,B=2")
    p.add_argument("--lam", type=float, default=None,
                   help="scale factor for the scaled-equality family")
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("demo", parents=[common], help="built-in demonstrations")
    p.add_argument("name", choices=["truncated-shift"])
    p.add_argument("--n", type=int, default=10)
    p.set_defaults(fn=_cmd_demo)

    return parser


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.command == "solve" and args.equation != "douglas" and args.B is None:
        print("error: --B is required for this equation", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.fn(args)
    except (NotSolvable, RangeNotContained, EmptyIntersection, IntersectionNotInRangeC) as exc:
        report = {"command": args.command, "status": "unsolvable",
                  "error": type(exc).__name__, "message": str(exc)}
        decision = getattr(exc, "decision", None) or getattr(exc, "diagnosis", None)
        if isinstance(decision, RangeDecision):
            report["decisions"] = {"failing": _decision(decision)}
        elif isinstance(decision, sylvester.SylvesterDiagnosis):
            report["decisions"] = {
                "cond_range_cnb": _decision(decision.cond_range_cnb),
                "cond_range_pbc": _decision(decision.cond_range_pbc),
            }
            report["residuals"] = {"classical_residual": decision.classical_residual}
        elif isinstance(decision, congruence.CongruenceDiagnosis):
            report["decisions"] = {
                "cond_cnbstar_in_a": _decision(decision.cond_cnbstar_in_a),
                "cond_cstar_nastar_in_b": _decision(decision.cond_cstar_nastar_in_b),
            }
        _emit(report, args.json)
        return EXIT_UNSOLVABLE
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OpeqError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
