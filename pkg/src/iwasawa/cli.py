"""Command-line interface.

Exit status: 0 on success, 1 on domain errors (JSON on stderr), 2 on format errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import algebra as alg
from . import catalog, satake
from .compact import PipelineError, maximal_compact_derivations
from .config import RunConfig
from .derivations import derivation_algebra, pre_einstein_derivation
from .einstein import einstein_solve
from .reconstruct import StageError, compare_iwasawa, reconstruct_from_iwasawa

log = logging.getLogger("iwasawa")


def _q(v) -> str:
    return alg._fmt(v)


def _matrix_json(M) -> list:
    return [[_q(v) for v in row] for row in M]


def _load(path: str) -> alg.LieAlgebra:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise alg.FormatError(f"cannot read {path}: {e.strerror}") from None
    return alg.loads(text)


def _load_valid(path: str) -> alg.LieAlgebra:
    L = _load(path)
    rep = alg.validate(L)
    if not rep.ok:
        raise alg.FormatError(f"{path}: structure violates antisymmetry or Jacobi ({len(rep.violations)} violations)")
    return L


def cmd_validate(args, cfg):
    L = _load(args.input)
    rep = alg.validate(L)
    out = {
        "ok": rep.ok,
        "dim": L.dim,
        "antisymmetry": [list(v) for v in rep.antisymmetry],
        "jacobi": [list(v) for v in rep.jacobi],
    }
    return out, 0 if rep.ok else 2


def cmd_analyze(args, cfg):
    L = _load_valid(args.input)
    nil = alg.nilradical(L)
    out = {
        "dim": L.dim,
        "hash": L.hash(),
        "derived_series": [s.dim for s in alg.derived_series(L)],
        "lower_central_series": [s.dim for s in alg.lower_central_series(L)],
        "solvable": alg.is_solvable(L),
        "nilpotent": alg.is_nilpotent(L),
        "completely_solvable": alg.is_completely_solvable(L) if alg.is_solvable(L) else False,
        "center_dim": alg.center(L).dim,
        "nilradical_dim": nil.dim,
        "killing_signature": list(alg.killing_form(L).signature()),
    }
    return out, 0


def cmd_derive(args, cfg):
    L = _load_valid(args.input)
    D = derivation_algebra(L)
    return {"dim": D.dim, "basis": [_matrix_json(M) for M in D.basis]}, 0


def cmd_pre_einstein(args, cfg):
    L = _load_valid(args.input)
    phi = pre_einstein_derivation(L)
    return {"phi": _matrix_json(phi)}, 0


def cmd_einstein(args, cfg):
    L = _load_valid(args.input)
    res = einstein_solve(L, cfg.seed, cfg.solver_params())
    out = res.to_json(full_precision=True)
    out["precision_bits"] = cfg.precision_bits
    if not res.converged:
        raise PipelineError(f"no convergence: residual {res.residual:.3e}")
    return out, 0


def cmd_recover_m(args, cfg):
    L = _load_valid(args.input)
    rec = maximal_compact_derivations(L, cfg.seeds, cfg.solver_params())
    return rec.to_json(), 0


def cmd_reconstruct(args, cfg):
    L = _load_valid(args.input)
    rep = reconstruct_from_iwasawa(L, cfg.seeds, cfg.solver_params())
    if args.json:
        return rep.to_json(), 0
    return (rep.label or "unlabeled") + "\n", 0


def cmd_satake(args, cfg):
    if args.label:
        d = satake.expected_satake(args.label)
    elif args.input:
        d = reconstruct_from_iwasawa(_load_valid(args.input), cfg.seeds, cfg.solver_params()).satake
    else:
        raise alg.FormatError("satake needs --label or --input")
    return satake.render(d, args.format), 0


def cmd_compare(args, cfg):
    A, B = _load_valid(args.a), _load_valid(args.b)
    res = compare_iwasawa(A, B, cfg.seeds, cfg.solver_params())
    return res.to_json(), 0


def cmd_catalog(args, cfg):
    if args.action == "list":
        rows = []
        for label in catalog.CATALOG_LABELS:
            e = catalog.entry(label)
            rows.append({"label": label, "dim_g": e.g.dim, "dim_iwasawa": e.iwasawa.dim, "rank": e.a.dim, "dim_m": e.m.dim})
        return rows, 0
    if not args.label:
        raise alg.FormatError("catalog emit needs a label")
    L = catalog.emit(args.label, args.part)
    return alg.to_json(L), 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iwasawa", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None, dest="n_seeds", help="number of Einstein seeds")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--precision-bits", type=int, default=None)
    p.add_argument("--output", "-o", default=None, help="write the result here instead of stdout")
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(name, fn, positional=True):
        sp = sub.add_parser(name)
        if positional:
            sp.add_argument("input", nargs="?")
            sp.add_argument("--input", dest="input_flag")
        sp.set_defaults(fn=fn)
        return sp

    for name, fn in [
        ("validate", cmd_validate),
        ("analyze", cmd_analyze),
        ("derive", cmd_derive),
        ("pre-einstein", cmd_pre_einstein),
        ("einstein", cmd_einstein),
        ("recover-m", cmd_recover_m),
    ]:
        with_input(name, fn)
    sp = with_input("reconstruct", cmd_reconstruct)
    sp.add_argument("--json", action="store_true", help="print the full report")
    sp = with_input("satake", cmd_satake)
    sp.add_argument("--label")
    sp.add_argument("--format", choices=("text", "dot", "json"), default="text")
    sp = sub.add_parser("compare")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.set_defaults(fn=cmd_compare)
    sp = sub.add_parser("catalog")
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("label", nargs="?")
    sp.add_argument("--part", choices=("g", "iwasawa", "nilradical"), default="iwasawa")
    sp.set_defaults(fn=cmd_catalog)
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig.from_env()
    updates = {k: getattr(args, k) for k in ("seed", "n_seeds", "tol", "max_iters", "precision_bits", "output")}
    return replace(cfg, **{k: v for k, v in updates.items() if v is not None})


def _emit(result, cfg: RunConfig) -> None:
    text = result if isinstance(result, str) else json.dumps(result, sort_keys=True, indent=2) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, exc: Exception) -> None:
    payload = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, StageError):
        payload["stage"] = exc.stage
        payload["cause"] = type(exc.cause).__name__
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.WARNING), stream=sys.stderr)
    if getattr(args, "input_flag", None):
        args.input = args.input_flag
    if hasattr(args, "input") and args.fn not in (cmd_satake,) and not args.input:
        parser.error(f"{args.command} needs an input file")
    try:
        cfg = _config(args)
        result, status = args.fn(args, cfg)
    except alg.FormatError as e:
        _error("format", e)
        return 2
    except (alg.UnsupportedInput, alg.InconsistencyError, PipelineError, KeyError, np.linalg.LinAlgError) as e:
        _error("domain", e)
        return 1
    except ValueError as e:
        _error("format", e)
        return 2
    _emit(result, cfg)
    return status


if __name__ == "__main__":
    sys.exit(main())
