"""Command-line front end.

Exit codes: 0 the property holds, 1 it fails (the report carries a
witness), 2 the input or the arguments are invalid.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .constructions import (
    PLANAR_FAMILIES,
    TorusFunction,
    check_planarity,
    half_square_function,
    mub_from_function,
    planar_family,
    prime_power_mub,
    square_function,
    with_identity,
)
from .errors import DomainError, MubkitError, PreconditionError, StructuralError
from .field import FiniteField, prime_power
from .flatmat import DEFAULT_TOL, EXACT, FLOAT, FlatMatrix, VectorSystem, matrix_from_json, matrix_to_json
from .lgraph import chromatic_number, clique_number, covers_complete, k_graph, l_graph
from .mubcheck import MUH_STANDARD, RAW, BasisSystem, is_mub_system
from .rds import RelativeDifferenceSet, is_splitting, planar_to_rds, rds_to_planar, verify_rds
from .welch import attains_welch, welch_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    backend: str = EXACT
    tol: float = DEFAULT_TOL
    seed: int = 0
    out: Path | None = None

    def __post_init__(self):
        if self.backend not in (EXACT, FLOAT):
            raise DomainError(f"unknown backend {self.backend!r}")
        if not self.tol > 0:
            raise DomainError("tolerance must be positive")


class UsageError(Exception):
    pass


# serialization


def _plain(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else [obj.numerator, obj.denominator]
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def _emit(cfg: RunConfig, obj: Any, out: Path | None = None) -> None:
    text = dumps(obj)
    target = out or cfg.out
    if target is None:
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def _load(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StructuralError(f"{path} is not valid JSON: {exc}") from exc


def system_from_json(obj: Any) -> tuple[BasisSystem, list | None]:
    """A list of matrix objects, or {"bases": [...], "form": ..., "weights": [...]}."""
    if isinstance(obj, list):
        obj = {"bases": obj}
    if not isinstance(obj, dict) or "bases" not in obj:
        raise StructuralError("system must be a list of matrices or an object with 'bases'")
    bases = [matrix_from_json(m) for m in obj["bases"]]
    weights = obj.get("weights")
    if weights is not None:
        weights = [Fraction(int(w[0]), int(w[1])) if isinstance(w, list) else w for w in weights]
    return BasisSystem(bases, obj.get("form", RAW)), weights


def system_to_json(S: BasisSystem, extra: dict | None = None) -> dict:
    out = {"form": S.form, "n": S.n, "bases": [matrix_to_json(b) for b in S.bases]}
    out.update(extra or {})
    return out


# commands


def _scramble(S: BasisSystem, seed: int) -> BasisSystem:
    """Permute the Hadamards and the columns of each one; the result is an equivalent system."""
    rng = np.random.default_rng(seed)
    first, rest = S.bases[0], list(S.bases[1:])
    order = rng.permutation(len(rest))
    mats = []
    for i in order:
        H = rest[i]
        perm = rng.permutation(H.shape[1])
        mats.append(FlatMatrix(H.phases[:, perm], H.nroot, H.normalized))
    return BasisSystem([first] + mats, S.form)


def cmd_gen(args, cfg: RunConfig) -> int:
    n = args.dim
    if n < 2:
        raise UsageError("dimension must be at least 2")
    pk = prime_power(n)
    if pk is None:
        raise UsageError(f"{n} is not a prime power")
    p, k = pk
    if args.family:
        if p == 2:
            raise UsageError(f"family {args.family} needs an odd prime power, got {n}")
        f = planar_family(args.family, p, k, alpha=args.alpha, u=args.u)
        label = {"construction": args.family, "alpha": args.alpha, "u": args.u}
    elif args.odd_square:
        if p == 2:
            raise UsageError("--odd-square needs an odd prime power")
        f = square_function(FiniteField(p, k))
        label = {"construction": "square"}
    elif args.even_halfsquare:
        if p != 2:
            raise UsageError("--even-halfsquare needs a power of two")
        f = half_square_function(FiniteField(p, k))
        label = {"construction": "half-square"}
    else:
        S = prime_power_mub(n, verify=False)
        label = {"construction": "square" if p != 2 else "half-square"}
        f = None
    if f is not None:
        S = with_identity(mub_from_function(f))
    if args.scramble:
        S = _scramble(S, cfg.seed)
        label["seed"] = cfg.seed
    verdict = is_mub_system(S, cfg.backend, cfg.tol)
    if not verdict.is_complete:
        sys.stderr.write(dumps({"error": "self-verification failed", "verdict": verdict.to_json()}))
        return EXIT_FAIL
    _emit(cfg, system_to_json(S, label))
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    S, _ = system_from_json(_load(args.file))
    verdict = is_mub_system(S, cfg.backend, cfg.tol, require_orthonormal=False)
    _emit(cfg, verdict.to_json())
    return EXIT_OK if verdict.is_complete else EXIT_FAIL


def cmd_welch(args, cfg: RunConfig) -> int:
    if args.k < 1:
        raise UsageError("k must be at least 1")
    S, weights = system_from_json(_load(args.file))
    X = VectorSystem.from_bases(S.bases, weights)
    report = welch_report(X, args.k, cfg.backend, cfg.tol)
    verdict = attains_welch(X, args.k, cfg.backend, cfg.tol)
    out = report.to_json()
    out["witness"] = verdict.witness
    out["wset_attained"] = verdict.ok
    _emit(cfg, out)
    return EXIT_OK if report.attained else EXIT_FAIL


def _single_matrix(obj: Any):
    if isinstance(obj, dict) and "bases" in obj:
        raise StructuralError("expected a single matrix object, got a system")
    return matrix_from_json(obj)


def cmd_lgraph(args, cfg: RunConfig) -> int:
    A = _single_matrix(_load(args.file))
    graph = k_graph(A, cfg.backend, cfg.tol) if args.weighted else l_graph(A, cfg.backend, cfg.tol)
    if args.dot:
        Path(args.dot).write_text(graph.to_dot(weighted=args.weighted))
    report: dict = {"n": graph.n, "vertices": graph.order, "edges": graph.edge_count()}
    if args.numbers:
        report["clique_number"] = clique_number(graph)
        report["chromatic_number"] = chromatic_number(graph)
    code = EXIT_OK
    if args.against:
        H = _single_matrix(_load(args.against))
        cover = covers_complete(l_graph(A, cfg.backend, cfg.tol), l_graph(H, cfg.backend, cfg.tol))
        report["covers_complete"] = cover.ok
        report["missing"] = cover.witness
        code = EXIT_OK if cover.ok else EXIT_FAIL
    _emit(cfg, report)
    return code


def _function(path: str) -> TorusFunction:
    return TorusFunction.from_json(_load(path))


def cmd_planar_check(args, cfg: RunConfig) -> int:
    f = _function(args.file)
    verdict = check_planarity(f, args.condition, cfg.tol)
    _emit(cfg, {"condition": args.condition, "holds": verdict.ok, "witness": verdict.witness})
    return EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_planar_make(args, cfg: RunConfig) -> int:
    if args.kind == "square":
        f = square_function(FiniteField(args.p, args.k))
    elif args.kind == "half-square":
        f = half_square_function(FiniteField(args.p, args.k))
    else:
        f = planar_family(args.kind, args.p, args.k, alpha=args.alpha, u=args.u)
    _emit(cfg, f.to_json())
    return EXIT_OK


def _rds_report(D: RelativeDifferenceSet) -> dict:
    rep = verify_rds(D)
    out = {"valid": rep.ok, "witness": rep.witness, "zero_count": rep.zero_count, "params": list(D.params)}
    out["semiregular"] = D.semiregular
    if rep.ok and D.semiregular:
        out["splitting"] = is_splitting(D)
    return out


def cmd_rds_check(args, cfg: RunConfig) -> int:
    D = RelativeDifferenceSet.from_json(_load(args.file))
    report = _rds_report(D)
    _emit(cfg, report)
    return EXIT_OK if report["valid"] else EXIT_FAIL


def cmd_rds_from_planar(args, cfg: RunConfig) -> int:
    D = planar_to_rds(_function(args.file))
    ok = verify_rds(D).ok
    _emit(cfg, D.to_json())
    return EXIT_OK if ok else EXIT_FAIL


def cmd_rds_to_planar(args, cfg: RunConfig) -> int:
    D = RelativeDifferenceSet.from_json(_load(args.file))
    rep = verify_rds(D)
    if not rep.ok:
        sys.stderr.write(dumps({"error": "not a relative difference set", "witness": rep.witness}))
        return EXIT_FAIL
    f = rds_to_planar(D, args.group, args.subgroup)
    _emit(cfg, f.to_json())
    return EXIT_OK


# parser


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--backend", choices=[EXACT, FLOAT], default=d(EXACT))
    p.add_argument("--tol", type=float, default=d(DEFAULT_TOL), help="float backend tolerance")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--out", type=Path, default=d(None), help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mubkit", description="Mutually unbiased bases: construction and verification.")
    _common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="complete MUH system for a prime-power dimension")
    g.add_argument("--dim", type=int, required=True)
    how = g.add_mutually_exclusive_group()
    how.add_argument("--odd-square", action="store_true", help="f(x) = x^2, odd characteristic")
    how.add_argument("--even-halfsquare", action="store_true", help="f(x) = x^2 / 2, characteristic 2")
    how.add_argument("--family", choices=PLANAR_FAMILIES)
    g.add_argument("--alpha", type=int)
    g.add_argument("--u", type=int, help="ding-yuan parameter as a base-p integer")
    g.add_argument("--scramble", action="store_true", help="permute bases and columns using --seed")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="check a basis system")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("welch", parents=[common], help="Welch bound report")
    w.add_argument("file")
    w.add_argument("--k", type=int, default=2)
    w.set_defaults(func=cmd_welch)

    lg = sub.add_parser("lgraph", parents=[common], help="L-graph (or weighted K-graph) of a flat matrix")
    lg.add_argument("file")
    lg.add_argument("--dot", type=Path)
    lg.add_argument("--weighted", action="store_true")
    lg.add_argument("--numbers", action="store_true", help="exact clique and chromatic numbers")
    lg.add_argument("--against", help="Hadamard matrix file; test that the two L-graphs cover the complete graph")
    lg.set_defaults(func=cmd_lgraph)

    pl = sub.add_parser("planar", help="planarity conditions")
    plsub = pl.add_subparsers(dest="planar_command", required=True)
    pc = plsub.add_parser("check", parents=[common])
    pc.add_argument("file")
    pc.add_argument("--condition", choices=["uslovie", "general", "most-general", "most_general"], default="uslovie")
    pc.set_defaults(func=cmd_planar_check)
    pm = plsub.add_parser("make", parents=[common], help="write a function table")
    pm.add_argument("kind", choices=["square", "half-square", *PLANAR_FAMILIES])
    pm.add_argument("--p", type=int, required=True)
    pm.add_argument("--k", type=int, default=1)
    pm.add_argument("--alpha", type=int)
    pm.add_argument("--u", type=int)
    pm.set_defaults(func=cmd_planar_make)

    r = sub.add_parser("rds", help="relative difference sets")
    rsub = r.add_subparsers(dest="rds_command", required=True)
    rc = rsub.add_parser("check", parents=[common])
    rc.add_argument("file")
    rc.set_defaults(func=cmd_rds_check)
    rf = rsub.add_parser("from-planar", parents=[common])
    rf.add_argument("file")
    rf.set_defaults(func=cmd_rds_from_planar)
    rt = rsub.add_parser("to-planar", parents=[common])
    rt.add_argument("file")
    rt.add_argument("--group", type=int, nargs="+", help="moduli for K/N")
    rt.add_argument("--subgroup", type=int, nargs="+", help="moduli for N")
    rt.set_defaults(func=cmd_rds_to_planar)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = RunConfig(args.backend, args.tol, args.seed, args.out)
        return args.func(args, cfg)
    except (UsageError, StructuralError, DomainError) as exc:
        sys.stderr.write(f"mubkit: {exc}\n")
        return EXIT_USAGE
    except PreconditionError as exc:
        sys.stderr.write(dumps({"error": str(exc), "witness": exc.witness}))
        return EXIT_FAIL
    except MubkitError as exc:
        sys.stderr.write(f"mubkit: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
