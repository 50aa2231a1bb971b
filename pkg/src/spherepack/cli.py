"""Command-line interface.

Every subcommand reads JSON documents, writes a JSON report (stdout or
--out) whose header embeds the tool version, input digests and the
seed, and exits 0 on success, 1 on usage or input errors, and 2 on
domain failures (inadmissible metrics, non-convergence, failed
experiments or selftests).
"""

import argparse
import dataclasses
import sys

import numpy as np

from . import __version__
from .curvature import (
    PackingMetric,
    alpha_curvature,
    curvature_jacobian,
    scalar_curvature,
)
from .degeneracy import (
    NoFiniteRootError,
    boundary_radius,
    classify,
)
from .mesh import (
    MeshFormatError,
    parse_mesh,
    parse_radii,
    validate_closed,
)
from .report import render_json, sha256_hex
from .solver import (
    PrescribedTarget,
    QuadratureError,
    SolveOptions,
    rigidity_certificate,
    rigidity_experiment,
    solve_prescribed,
)
from .selftest import DEFAULT_SEED, run_selftest
from .tetgeom import AdmissibilityError, Geometry, NumericDomainError, q_value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # Usage problems exit 1; argparse's default of 2 is reserved
        # for domain failures here.
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spherepack", description=__doc__)
    parser.add_argument("--version", action="version", version=f"spherepack {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, geometry=True, alpha=False, out=True):
        if geometry:
            p.add_argument("--geometry", default="euclidean", choices=["euclidean", "hyperbolic"])
        if alpha:
            p.add_argument("--alpha", type=float, default=0.0)
        if out:
            p.add_argument("--out", help="write the JSON report to this path instead of stdout")

    p = sub.add_parser("validate", help="closedness and connectivity of a mesh")
    p.add_argument("mesh")
    add_common(p, geometry=False)

    p = sub.add_parser("curvature", help="per-vertex curvature of a packing metric")
    p.add_argument("mesh")
    p.add_argument("radii")
    add_common(p, alpha=True)
    p.add_argument("--jacobian", action="store_true", help="include the curvature Jacobian spectrum")

    p = sub.add_parser("admissible", help="per-tetrahedron nondegeneracy of a metric")
    p.add_argument("mesh")
    p.add_argument("radii")
    add_common(p)

    p = sub.add_parser("classify", help="region label of four radii for one tetrahedron")
    p.add_argument("r", type=float, nargs=4)
    add_common(p)

    p = sub.add_parser("boundary", help="critical fourth radius for three given radii")
    p.add_argument("r", type=float, nargs=3)
    add_common(p)

    p = sub.add_parser("solve", help="solve for a metric with prescribed curvature")
    p.add_argument("mesh")
    p.add_argument("--target", required=True, help="JSON file {\"target\": [...]}")
    p.add_argument("--init", help="initial radii document (defaults to all ones)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iterations", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    add_common(p, alpha=True)

    p = sub.add_parser("rigidity", help="spectral certificate at an admissible metric")
    p.add_argument("mesh")
    p.add_argument("radii")
    p.add_argument("--target", help="JSON file {\"target\": [...]}; defaults to the metric's own curvature")
    add_common(p, alpha=True)

    p = sub.add_parser("experiment", help="multistart uniqueness experiment")
    p.add_argument("mesh")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    add_common(p, alpha=True)

    p = sub.add_parser("selftest", help="run every built-in verification suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_common(p, geometry=False)

    return parser


def _read(path: str, inputs: dict) -> str:
    try:
        with open(path, "rb") as handle:
            data = handle.read()
    except OSError as exc:
        raise MeshFormatError(f"cannot read {path}: {exc}") from None
    inputs[path] = {"path": path, "sha256": sha256_hex(data)}
    return data.decode("utf-8")


def _parse_target(text: str, vertex_count: int) -> np.ndarray:
    import json

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeshFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "target" not in doc:
        raise MeshFormatError("target document must be an object with a 'target' key")
    values = doc["target"]
    if not isinstance(values, list) or len(values) != vertex_count:
        raise MeshFormatError(f"'target' must be a list of {vertex_count} numbers")
    out = np.array([float(x) for x in values])
    if not np.all(np.isfinite(out)):
        raise MeshFormatError("target entries must be finite")
    return out


def _emit(envelope: dict, out_path: str | None) -> None:
    text = render_json(envelope) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _envelope(args, inputs: dict, report, seed=None) -> dict:
    return {
        "tool": "spherepack",
        "version": __version__,
        "command": args.command,
        "geometry": getattr(args, "geometry", None),
        "alpha": getattr(args, "alpha", None),
        "seed": seed,
        "inputs": inputs,
        "report": report,
    }


def _solve_result_dict(result) -> dict:
    return {
        "radii": result.radii,
        "converged": result.converged,
        "status": result.status,
        "final_gradient_norm": result.final_gradient_norm,
        "iterations": result.iterations,
        "trajectory": [
            {"iteration": it, "gradient_norm": gn, "potential": pv}
            for it, gn, pv in result.trajectory_summary
        ],
    }


def _run(args) -> int:
    inputs: dict = {}
    geometry = Geometry.parse(args.geometry) if getattr(args, "geometry", None) else None

    if args.command == "validate":
        c = parse_mesh(_read(args.mesh, inputs))
        rep = validate_closed(c)
        report = {
            "is_closed": rep.is_closed,
            "is_connected": rep.is_connected,
            "counts": {
                "vertices": rep.counts[0],
                "edges": rep.counts[1],
                "faces": rep.counts[2],
                "tetrahedra": rep.counts[3],
            },
            "offending_faces": [{"face": list(f), "count": n} for f, n in rep.offending_faces],
        }
        _emit(_envelope(args, inputs, report), args.out)
        return 0

    if args.command == "curvature":
        c = parse_mesh(_read(args.mesh, inputs))
        radii = parse_radii(_read(args.radii, inputs), c.vertex_count)
        metric = PackingMetric(radii, geometry)
        k = scalar_curvature(c, metric).values
        report = {"K": k, "alpha": args.alpha}
        if args.alpha != 0.0:
            report["R_alpha"] = alpha_curvature(c, metric, args.alpha).values
        if args.jacobian:
            jac = curvature_jacobian(c, metric)
            report["eigenvalues"] = jac.eigenvalues
            report["kernel_residual"] = jac.kernel_residual
        _emit(_envelope(args, inputs, report), args.out)
        return 0

    if args.command == "admissible":
        c = parse_mesh(_read(args.mesh, inputs))
        radii = parse_radii(_read(args.radii, inputs), c.vertex_count)
        radii_list = radii.tolist()
        tets = []
        all_ok = True
        for t, tet in enumerate(c.tetrahedra):
            rt = tuple(radii_list[v] for v in tet)
            label = classify(rt, geometry)
            all_ok = all_ok and label.admissible
            tets.append(
                {
                    "index": t,
                    "vertices": list(tet),
                    "q": q_value(rt, geometry),
                    "label": str(label),
                }
            )
        report = {"admissible": all_ok, "tetrahedra": tets}
        _emit(_envelope(args, inputs, report), args.out)
        return 0 if all_ok else 2

    if args.command == "classify":
        label = classify(tuple(args.r), geometry)
        report = {
            "label": str(label),
            "admissible": label.admissible,
            "vertex": label.vertex,
            "q": q_value(tuple(args.r), geometry),
        }
        _emit(_envelope(args, inputs, report), args.out)
        return 0

    if args.command == "boundary":
        value = boundary_radius(*args.r, geometry)
        _emit(_envelope(args, inputs, {"radius": value}), args.out)
        return 0

    if args.command == "solve":
        c = parse_mesh(_read(args.mesh, inputs))
        target_values = _parse_target(_read(args.target, inputs), c.vertex_count)
        init = None
        if args.init:
            init = parse_radii(_read(args.init, inputs), c.vertex_count)
        target = PrescribedTarget(target_values, args.alpha, geometry)
        opts = SolveOptions(
            max_iterations=args.max_iterations,
            gradient_tolerance=args.tol,
            initial_radii=init,
            rng_seed=args.seed,
        )
        result = solve_prescribed(c, target, opts)
        _emit(_envelope(args, inputs, _solve_result_dict(result), seed=args.seed), args.out)
        return 0 if result.converged else 2

    if args.command == "rigidity":
        c = parse_mesh(_read(args.mesh, inputs))
        radii = parse_radii(_read(args.radii, inputs), c.vertex_count)
        metric = PackingMetric(radii, geometry)
        if args.target:
            target_values = _parse_target(_read(args.target, inputs), c.vertex_count)
        else:
            target_values = alpha_curvature(c, metric, args.alpha).values
        cert = rigidity_certificate(c, metric, PrescribedTarget(target_values, args.alpha, geometry))
        report = {
            "regime": cert.regime,
            "certified": cert.certified,
            "eigenvalues": cert.eigenvalues,
            "kernel_residual": cert.kernel_residual,
            "kernel_cosine": cert.kernel_cosine,
        }
        _emit(_envelope(args, inputs, report), args.out)
        return 0

    if args.command == "experiment":
        c = parse_mesh(_read(args.mesh, inputs))
        opts = SolveOptions(gradient_tolerance=args.tol, rng_seed=args.seed)
        rep = rigidity_experiment(c, geometry, args.alpha, trials=args.trials, seed=args.seed, opts=opts)
        report = dataclasses.asdict(rep)
        report["passed"] = rep.passed
        _emit(_envelope(args, inputs, report, seed=args.seed), args.out)
        return 0 if rep.passed else 2

    if args.command == "selftest":
        results = run_selftest(args.seed)
        for res in results:
            print(f"{'PASS' if res.passed else 'FAIL'}  {res.name}")
        overall = all(res.passed for res in results)
        report = {
            "passed": overall,
            "suites": [
                {"name": res.name, "passed": res.passed, "details": res.details}
                for res in results
            ],
        }
        _emit(_envelope(args, inputs, report, seed=args.seed), args.out)
        return 0 if overall else 2

    raise AssertionError(f"unhandled command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except (AdmissibilityError, NumericDomainError, NoFiniteRootError, QuadratureError) as exc:
        _emit(
            {
                "tool": "spherepack",
                "version": __version__,
                "command": args.command,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            },
            getattr(args, "out", None),
        )
        return 2
    except (MeshFormatError, ValueError, IndexError) as exc:
        print(f"spherepack: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
