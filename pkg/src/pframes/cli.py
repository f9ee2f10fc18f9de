"""Command-line front end.

Subcommands: frame-report, canonical-dual, transport-dual, wasserstein,
monotone, geodesic-profile, gaussian-w2, gaussian-path, semidiscrete-adapt,
reconstruct.  Outputs are JSON (floats printed with 17 significant digits so
they round-trip exactly) or CSV for profiles; every run is reproducible from
its inputs plus the seed, and each JSON output echoes the run configuration.
Exit codes: 0 ok, 2 input error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import duality, geodesics, measures, semidiscrete, transport
from .errors import NumericError


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = (f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in value.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, np.ndarray):
        return _fmt(value.tolist())
    raise ValueError(f"cannot serialize {type(value).__name__}")


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out_path: str | None) -> None:
    _emit(_fmt(payload) + "\n", out_path)


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_discrete(path: str) -> measures.DiscreteMeasure:
    m = measures.measure_from_payload(_load_json(path))
    if not isinstance(m, measures.DiscreteMeasure):
        raise ValueError(f"{path}: expected a discrete measure")
    return m


def _load_gaussian(path: str) -> measures.GaussianMeasure:
    m = measures.measure_from_payload(_load_json(path))
    if not isinstance(m, measures.GaussianMeasure):
        raise ValueError(f"{path}: expected a gaussian measure")
    return m


def _reference_from_payload(payload) -> semidiscrete.Reference:
    if not isinstance(payload, dict) or "type" not in payload:
        raise ValueError("reference must be an object with a 'type' field")
    kind = payload["type"]
    if kind == "gaussian":
        return semidiscrete.GaussianReference(dim=int(payload["dim"]))
    if kind == "box":
        return semidiscrete.BoxReference(lower=payload["lo"], upper=payload["hi"])
    raise ValueError(f"unknown reference type '{kind}' (expected 'gaussian' or 'box')")


def cmd_frame_report(args) -> None:
    report = measures.frame_report(measures.load_measure(args.measure))
    _emit_json(
        {
            "lower": report.lower_bound,
            "upper": report.upper_bound,
            "second_moment": report.second_moment,
            "is_frame": report.is_frame,
            "config": {"command": "frame-report", "inputs": [args.measure]},
        },
        args.out,
    )


def cmd_canonical_dual(args) -> None:
    dual = duality.canonical_dual(_load_discrete(args.measure))
    payload = measures.measure_to_payload(dual)
    payload["config"] = {"command": "canonical-dual", "inputs": [args.measure]}
    _emit_json(payload, args.out)


def cmd_transport_dual(args) -> None:
    result = duality.find_transport_dual(_load_discrete(args.mu), _load_discrete(args.nu))
    config = {"command": "transport-dual", "inputs": [args.mu, args.nu]}
    if isinstance(result, duality.TransportPlan):
        payload = {"status": "dual", **duality.plan_to_payload(result), "config": config}
    else:
        payload = {
            "status": "not-dual",
            "certificate": duality.certificate_to_payload(result),
            "config": config,
        }
    _emit_json(payload, args.out)


def cmd_wasserstein(args) -> None:
    solution = transport.wasserstein2(_load_discrete(args.mu), _load_discrete(args.nu))
    _emit_json(
        {
            "w2_squared": solution.distance_squared,
            **duality.plan_to_payload(solution.plan),
            "permutation": None if solution.permutation is None else solution.permutation.tolist(),
            "config": {"command": "wasserstein", "inputs": [args.mu, args.nu]},
        },
        args.out,
    )


def cmd_monotone(args) -> None:
    payload = _load_json(args.pairs)
    if not isinstance(payload, dict) or "xs" not in payload or "ys" not in payload:
        raise ValueError("pairs file must contain 'xs' and 'ys' arrays")
    xs = np.asarray(payload["xs"], dtype=float)
    ys = np.asarray(payload["ys"], dtype=float)
    if xs.shape != ys.shape or xs.ndim != 2:
        raise ValueError("'xs' and 'ys' must be equal-shape lists of vectors")
    monotone, witness = transport.is_cyclically_monotone(list(zip(xs, ys)))
    _emit_json(
        {
            "cyclically_monotone": monotone,
            "witness": None if witness is None else witness.tolist(),
            "config": {"command": "monotone", "inputs": [args.pairs]},
        },
        args.out,
    )


def cmd_geodesic_profile(args) -> None:
    profile = geodesics.geodesic_profile(
        _load_discrete(args.mu), _load_discrete(args.nu), grid_size=args.grid
    )
    _emit(geodesics.profile_csv_text(profile), args.out)


def cmd_gaussian_w2(args) -> None:
    value = geodesics.gaussian_w2(_load_gaussian(args.g0), _load_gaussian(args.g1))
    _emit_json(
        {
            "w2_squared": value,
            "config": {"command": "gaussian-w2", "inputs": [args.g0, args.g1]},
        },
        args.out,
    )


def cmd_gaussian_path(args) -> None:
    path = geodesics.gaussian_path(
        _load_gaussian(args.g0), _load_gaussian(args.g1), grid_size=args.grid
    )
    _emit(geodesics.profile_csv_text(path), args.out)


def _load_sites_spec(path: str):
    payload = _load_json(path)
    if not isinstance(payload, dict):
        raise ValueError("sites file must be a JSON object")
    for key in ("sites", "targets", "reference"):
        if key not in payload:
            raise ValueError(f"sites file missing '{key}'")
    return payload


def cmd_semidiscrete_adapt(args) -> None:
    payload = _load_sites_spec(args.sites)
    coupling = semidiscrete.adapt_weights(
        payload["sites"],
        payload["targets"],
        _reference_from_payload(payload["reference"]),
        sample_count=args.samples,
        seed=args.seed,
        adapt_tol=args.tol,
    )
    out = semidiscrete.coupling_to_payload(coupling)
    out["config"] = {
        "command": "semidiscrete-adapt",
        "inputs": [args.sites],
        "samples": args.samples,
        "seed": args.seed,
        "tol": args.tol,
    }
    _emit_json(out, args.out)


def cmd_reconstruct(args) -> None:
    payload = _load_sites_spec(args.spec)
    coupling = semidiscrete.adapt_weights(
        payload["sites"],
        payload["targets"],
        _reference_from_payload(payload["reference"]),
        sample_count=args.samples,
        seed=args.seed,
        adapt_tol=args.tol,
    )
    frame = np.asarray(payload.get("frame", payload["sites"]), dtype=float)
    targets = coupling.target_weights
    if "dual" in payload:
        dual = np.asarray(payload["dual"], dtype=float)
    else:
        weighted = frame.T @ (targets[:, None] * frame)
        dual = np.linalg.solve(weighted, frame.T).T
    analysis_side = semidiscrete.with_site_map(coupling, frame)
    synthesis_side = semidiscrete.with_site_map(coupling, dual)
    if "xs" in payload:
        xs = np.asarray(payload["xs"], dtype=float)
    else:
        xs = np.eye(frame.shape[1])
    recons, errors = [], []
    for x in xs:
        rec = semidiscrete.reconstruct(x, analysis_side, synthesis_side)
        recons.append(rec.tolist())
        errors.append(float(np.linalg.norm(rec - x)))
    _emit_json(
        {
            "reconstructions": recons,
            "errors": errors,
            "max_error": max(errors),
            "config": {
                "command": "reconstruct",
                "inputs": [args.spec],
                "samples": args.samples,
                "seed": args.seed,
                "tol": args.tol,
            },
        },
        args.out,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pframes", description="Probabilistic frames in the 2-Wasserstein space"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, *positionals, grid=False, sampling=False):
        p = sub.add_parser(name)
        for pos in positionals:
            p.add_argument(pos)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if grid:
            p.add_argument("--grid", type=int, default=geodesics.DEFAULT_GRID)
        if sampling:
            p.add_argument("--samples", type=int, default=semidiscrete.DEFAULT_SAMPLES)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--tol", type=float, default=semidiscrete.ADAPT_TOL)
        p.set_defaults(fn=fn)
        return p

    add("frame-report", cmd_frame_report, "measure")
    add("canonical-dual", cmd_canonical_dual, "measure")
    add("transport-dual", cmd_transport_dual, "mu", "nu")
    add("wasserstein", cmd_wasserstein, "mu", "nu")
    add("monotone", cmd_monotone, "pairs")
    add("geodesic-profile", cmd_geodesic_profile, "mu", "nu", grid=True)
    add("gaussian-w2", cmd_gaussian_w2, "g0", "g1")
    add("gaussian-path", cmd_gaussian_path, "g0", "g1", grid=True)
    add("semidiscrete-adapt", cmd_semidiscrete_adapt, "sites", sampling=True)
    add("reconstruct", cmd_reconstruct, "spec", sampling=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.fn(args)
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except (
        ValueError,
        KeyError,
        TypeError,
        OSError,
        json.JSONDecodeError,
        np.linalg.LinAlgError,
    ) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
