"""Command-line front end.

Exit codes: 0 success, 1 analytic failure (an axiom or a demo claim does
not hold), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import analysis, config
from .demo import paper_demo
from .distfn import GridSpec
from .errors import ConfigError, DomainError, PhiRejected
from .phi import check_quasi_inverse_inequalities
from .pnspace import check_axioms, check_phi_serstnev, check_serstnev, is_characteristic, random_points
from .reports import _plain
from .triangle import triangle_by_id

log = logging.getLogger("pnspaces")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="seed of the single random generator")
    p.add_argument("--mesh", type=float, help="grid spacing (overrides PNSPACE_GRID)")
    p.add_argument("--xmax", type=float, help="grid extent (overrides PNSPACE_GRID)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="pnspaces", description="Probabilistic normed space toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", parents=[common], help="audit the PN axioms of a space")
    p.add_argument("--space", required=True)
    p.add_argument("--samples", type=int, default=20)

    for name in ("classify", "radius"):
        p = sub.add_parser(name, parents=[common], help=f"{name} a point set")
        p.add_argument("--space", required=True)
        p.add_argument("--set", required=True, dest="set_file")
        if name == "radius":
            p.add_argument("--csv", help="write the radius on the grid to this file")

    p = sub.add_parser("convolve", parents=[common], help="apply a triangle function")
    p.add_argument("--tau", required=True, help="tauM, tauT:M|pi or tauTstar:max|psum")
    p.add_argument("--lhs", "--F", dest="lhs", required=True, help="JSON file or <family>:<r>[:a]")
    p.add_argument("--rhs", "--G", dest="rhs", required=True, help="JSON file or <family>:<r>[:a]")
    p.add_argument("--out", help="also write the result as JSON to this file")

    p = sub.add_parser("quasi-inverse", parents=[common], help="quasi-inverse of a phi-transform")
    p.add_argument("--phi", required=True, help="JSON file, or identity|square|flat")

    p = sub.add_parser("probe", parents=[common], help="boundedness and compactness probes")
    p.add_argument("kind", choices=("compact", "topo-bounded", "absorb"))
    p.add_argument("--space", required=True)
    p.add_argument("--set", required=True, dest="set_file")
    p.add_argument("--sequences", help="JSON {'sequences': [...], 'candidates': [...]} (compact)")
    p.add_argument("--n", type=int, nargs="+", default=[1, 2, 5, 10], help="absorb: values of n")
    p.add_argument("--kmax", type=int, default=10**6, help="absorb: largest k tried")

    sub.add_parser("paper-demo", parents=[common], help="reproduce both worked examples")
    return parser


def _grid(args) -> GridSpec:
    return GridSpec.resolve(args.mesh, args.xmax)


def cmd_audit(args, grid, out):
    space = config.space_from_json(config.load_json(args.space))
    if args.samples < 1:
        raise ConfigError("--samples must be >= 1")
    rng = np.random.default_rng(args.seed)
    points = random_points(space.dim, args.samples, rng)
    axioms = check_axioms(space, points, grid=grid, seed=args.seed)
    lambdas = [2.0, -1.0, 0.5] + rng.uniform(-3, 3, 3).tolist()
    xs = grid.points()[:: max(1, grid.points().size // 256)]
    result = {
        "command": "audit",
        "grid": grid.to_dict(),
        "seed": args.seed,
        "space": space.to_json(),
        "axioms": axioms,
        "serstnev": check_serstnev(space, points[:5], lambdas, grid, xs),
        "characteristic": bool(is_characteristic(space, points)),
    }
    passed = axioms.passed
    if space.phi is not None:
        law = check_phi_serstnev(space, points[:5], lambdas, grid, xs)
        result["phi_serstnev"] = law
        passed = passed and law.passed
    result["passed"] = passed
    out.write(_dump(result))
    return EXIT_OK if passed else EXIT_FAIL


def _space_and_set(args):
    space = config.space_from_json(config.load_json(args.space))
    A = config.set_from_json(config.load_json(args.set_file))
    return space, A


def _radius_summary(rep: analysis.RadiusReport) -> dict:
    R = rep.radius
    return {
        "class": rep.cls,
        "d_bounded": rep.d_bounded,
        "witness": rep.witness,
        "exactness": rep.exactness,
        "diagnostics": rep.diagnostics,
        "radius_left_limit": R.value_at_inf,
        "radius_knots": len(R.xs),
    }


def cmd_classify(args, grid, out):
    space, A = _space_and_set(args)
    rep = analysis.radius_report(space, A, grid)
    out.write(_dump({"command": "classify", "grid": grid.to_dict(), "set": A, **_radius_summary(rep)}))
    return EXIT_OK


def cmd_radius(args, grid, out):
    space, A = _space_and_set(args)
    rep = analysis.radius_report(space, A, grid)
    csv = rep.radius.to_csv(grid)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(csv)
    if args.format == "csv":
        out.write(csv)
    else:
        out.write(_dump({"command": "radius", "grid": grid.to_dict(), "set": A, **_radius_summary(rep)}))
    return EXIT_OK


def cmd_convolve(args, grid, out):
    tau = triangle_by_id(args.tau)
    F = config.distribution_spec(args.lhs, grid)
    G = config.distribution_spec(args.rhs, grid)
    H = tau(F, G, grid)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(_dump(H))
    if args.format == "csv":
        out.write(H.to_csv(grid))
    else:
        out.write(_dump({"command": "convolve", "grid": grid.to_dict(), "tau": tau.name, "result": H}))
    return EXIT_OK


def cmd_quasi_inverse(args, grid, out):
    spec = args.phi if args.phi in ("identity", "square", "flat") else config.load_json(args.phi)
    phi = config.phi_spec(spec)
    report = check_quasi_inverse_inequalities(phi, seed=args.seed)
    hat = phi.phi_hat
    out.write(
        _dump(
            {
                "command": "quasi-inverse",
                "grid": grid.to_dict(),
                "phi": phi.to_json(),
                "phi_hat": {"knots": [list(k) for k in hat.knots], "tail": hat.tail_json()},
                "bijective": phi.bijective,
                "m_b": phi.m_b,
                "inequalities": report,
            }
        )
    )
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_probe(args, grid, out):
    space, A = _space_and_set(args)
    if args.kind == "absorb":
        result = analysis.absorption_check(space, A, args.n, args.kmax)
    elif args.kind == "topo-bounded":
        result = analysis.topological_boundedness_probe(space, A)
    else:
        if not args.sequences:
            raise ConfigError("probe compact needs --sequences")
        data = config.load_json(args.sequences)
        if not isinstance(data, dict) or "sequences" not in data or "candidates" not in data:
            raise ConfigError("sequences file needs 'sequences' and 'candidates'")
        seqs = [config.sequence_from_json(s, A) for s in data["sequences"]]
        cands = [config.vector(c) for c in data["candidates"]]
        result = analysis.d_compactness_probe(space, A, seqs, cands, grid=grid)
    out.write(_dump({"command": f"probe {args.kind}", "grid": grid.to_dict(), "set": A, "result": result}))
    return EXIT_OK


def cmd_paper_demo(args, grid, out, radius_formula=None):
    ok, report = paper_demo(grid, args.seed, radius_formula)
    out.write(_dump({"command": "paper-demo", **report}))
    if not ok:
        sys.stderr.write("claims not reproduced: " + "; ".join(report["failed"]) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "audit": cmd_audit,
    "classify": cmd_classify,
    "radius": cmd_radius,
    "convolve": cmd_convolve,
    "quasi-inverse": cmd_quasi_inverse,
    "probe": cmd_probe,
}


def main(argv=None, out=None, radius_formula=None) -> int:
    """Entry point.  ``radius_formula`` replaces the expected radius in
    ``paper-demo`` (test hook)."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        grid = _grid(args)
        log.debug("grid %s, seed %d", grid.to_dict(), args.seed)
        if args.command == "paper-demo":
            return cmd_paper_demo(args, grid, out, radius_formula)
        return COMMANDS[args.command](args, grid, out)
    except (ConfigError, DomainError, PhiRejected) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
