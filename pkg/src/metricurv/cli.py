"""Command-line front end.

Subcommands: build | hyperbolicity | four-point | rcat | weak-rcat |
bolicity | cn | lemmas | convert.  Spaces come from --space (JSON/CSV file)
or --make (inline constructor spec, e.g. "grid:norm=l2,halfwidth=4,step=0.5").
Reports are canonical JSON (sorted keys, 12 significant digits) or an
aligned table; identical configs give byte-identical payloads.

Exit codes: 0 success, 2 input validation failure, 1 internal failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from metricurv import __version__
from metricurv import conditions as C
from metricurv import lemma_oracles as L
from metricurv import spaces as S
from metricurv.model_plane import Curvature, GeometryError


class InputError(ValueError):
    pass


def _parse_make(spec: str) -> S.SpaceHandle:
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not _:
                raise InputError(f"constructor parameter {item!r} needs key=value")
            params[key.strip()] = val.strip()

    def fget(key, default=None, cast=float):
        if key in params:
            return cast(params.pop(key))
        if default is None:
            raise InputError(f"constructor {name!r} needs parameter {key!r}")
        return default

    try:
        if name == "grid":
            norm = str(params.pop("norm", "l2"))
            out = S.make_grid_plane(
                fget("halfwidth"), fget("step"), norm, str(params.pop("moves", "wide"))
            )
        elif name == "tree":
            shape = str(params.pop("shape", "random"))
            kw = {k: (int(v) if v.lstrip("-").isdigit() else float(v)) for k, v in params.items()}
            params.clear()
            out = S.make_tree(shape, **kw)
        elif name == "circle":
            out = S.make_circle(fget("n", cast=int), fget("circumference"))
        elif name == "hyperbolic":
            out = S.make_hyperbolic_sample(
                fget("kappa"), fget("radius"), fget("count", cast=int), fget("seed", 0, int)
            )
        elif name == "ladder":
            out = S.make_warped_ladder(fget("n_max", cast=int), fget("depth"), fget("step", 0.25))
        else:
            raise InputError(f"unknown constructor {name!r}")
    except (S.SpaceError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if params:
        raise InputError(f"unused constructor parameters: {sorted(params)}")
    return out


def _load_space(args) -> S.SpaceHandle:
    if getattr(args, "space", None):
        try:
            return S.load_space(args.space)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read space file {args.space}: {exc}") from exc
        except S.MetricError as exc:
            raise InputError(f"space file {args.space}: {exc}") from exc
    if getattr(args, "make", None):
        return _parse_make(args.make)
    raise InputError("need --space FILE or --make SPEC")


def _curvature(args) -> Curvature:
    try:
        return Curvature.from_kappa(getattr(args, "kappa", "0"))
    except (GeometryError, ValueError) as exc:
        raise InputError(f"bad --kappa: {exc}") from exc


# ---------------------------------------------------------------------------
# canonical report emission


def _quantize(obj):
    """Round every float to 12 significant digits so reports are diffable."""
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return repr(obj)
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {str(k): _quantize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_quantize(v) for v in obj]
    if isinstance(obj, (int, str, bool)) or obj is None:
        return obj
    try:
        import numpy as np

        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return _quantize(float(obj))
    except ImportError:
        pass
    return str(obj)


def emit_report(envelope: dict, fmt: str = "json") -> bytes:
    payload = {k: v for k, v in envelope.items() if k != "timings"}
    payload = _quantize(payload)
    if fmt == "json":
        body = dict(payload)
        if "timings" in envelope:
            body["timings"] = envelope["timings"]
        return (json.dumps(body, sort_keys=True, indent=2) + "\n").encode("utf-8")
    lines = [f"metricurv {payload.get('version', '')}  command={payload.get('command', '')}"]
    for entry in payload.get("payload", []):
        if isinstance(entry, dict):
            cells = [f"{k}={json.dumps(entry[k], sort_keys=True)}" for k in sorted(entry)]
            lines.append("  " + "  ".join(cells))
        else:
            lines.append("  " + str(entry))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _finish(args, command, config, payload, t0):
    envelope = {
        "version": __version__,
        "command": command,
        "config": _quantize(config),
        "payload": payload,
        "timings": {"wall_seconds": time.time() - t0},
    }
    data = emit_report(envelope, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


# ---------------------------------------------------------------------------
# subcommands


def _cmd_build(args, t0):
    handle = _load_space(args)
    if args.out_space:
        S.save_space(handle, args.out_space)
    payload = [
        {
            "n": handle.n,
            "kind": "graph" if handle.is_graph else "finite",
            "snap_budget": handle.snap_budget,
            "provenance": {k: v for k, v in handle.provenance.items() if k != "node_of"},
        }
    ]
    return _finish(args, "build", _config(args), payload, t0)


def _config(args):
    keep = ("space", "make", "kappa", "samples", "pairs", "seed", "orderings", "policy")
    return {k: getattr(args, k) for k in keep if getattr(args, k, None) is not None}


def _cmd_hyperbolicity(args, t0):
    X = _load_space(args)
    delta, wit = C.delta_hyperbolicity(X)
    payload = [
        C.ConditionEstimate(
            "delta_hyperbolicity", -math.inf, delta, math.comb(X.n, 4),
            {"tuple": list(wit)}, X.snap_budget
        ).to_json(X.provenance)
    ]
    return _finish(args, "hyperbolicity", _config(args), payload, t0)


def _cmd_four_point(args, t0):
    X = _load_space(args)
    curv = _curvature(args)
    sampler = "exhaustive" if args.samples is None else ("seeded", args.samples)
    c4, wit = C.four_point_scan(X, curv, args.orderings, sampler, args.seed)
    payload = [
        C.ConditionEstimate(
            "rough_four_point", curv.kappa, c4,
            args.samples or math.comb(X.n, 4), wit, X.snap_budget
        ).to_json(X.provenance)
    ]
    return _finish(args, "four-point", _config(args), payload, t0)


def _cmd_rcat(args, t0):
    X = _load_space(args)
    curv = _curvature(args)
    c, wit = C.rcat_scan(X, curv, args.samples or 100, args.pairs, args.seed)
    payload = [
        C.ConditionEstimate(
            "rcat", curv.kappa, c, (args.samples or 100) * args.pairs, wit, X.snap_budget
        ).to_json(X.provenance)
    ]
    return _finish(args, "rcat", _config(args), payload, t0)


def _cmd_weak_rcat(args, t0):
    X = _load_space(args)
    c, wit = C.weak_rcat_min_C(X, args.samples or 100, args.seed)
    payload = [
        C.ConditionEstimate(
            "weak_rcat", 0.0, c, args.samples or 100, wit, X.snap_budget
        ).to_json(X.provenance)
    ]
    return _finish(args, "weak-rcat", _config(args), payload, t0)


def _cmd_bolicity(args, t0):
    X = _load_space(args)
    delta, wit, excluded = C.bolicity_min_delta(X, args.policy, args.samples or 200, args.seed)
    payload = [
        C.ConditionEstimate(
            "bolicity", 0.0, delta, args.samples or 200, wit, X.snap_budget,
            {"policy": args.policy, "excluded_pairs": excluded},
        ).to_json(X.provenance)
    ]
    return _finish(args, "bolicity", _config(args), payload, t0)


def _cmd_cn(args, t0):
    X = _load_space(args)
    deficit, wit, evaluated = C.cn_min_deficit(X, args.samples or 200, args.seed)
    payload = [
        C.ConditionEstimate(
            "cn_deficit", 0.0, deficit, evaluated, wit, X.snap_budget
        ).to_json(X.provenance)
    ]
    return _finish(args, "cn", _config(args), payload, t0)


def _cmd_lemmas(args, t0):
    samples = args.samples or 1000
    payload = []
    m, brute = L.ellipse_bound(2.0, 1.0)
    payload.append(
        L.BoundCheck("ellipse bound closed form vs brute force", {"l": 2.0, "h": 1.0}, brute, m + 1e-9).to_json()
    )
    for l in (0.5, 1.0, 10.0, 100.0):
        h = 1.0 / max(1.0, l)
        m, _ = L.ellipse_bound(l, h)
        payload.append(
            L.BoundCheck("short function keeps detours within sqrt(3)/2", {"l": l}, m, math.sqrt(3.0) / 2.0 + 1e-12).to_json()
        )
    for check in L.zipper_pert_checks(samples // 5 or 1, args.seed):
        payload.append(check.to_json())
    summary = {"zipper_total": len(payload)}
    worst = min((p["slack"] for p in payload), default=0.0)
    payload.append({"statement": "worst slack", "slack": worst, "pass": worst >= -1e-6, **summary})
    return _finish(args, "lemmas", _config(args), payload, t0)


def _cmd_convert(args, t0):
    try:
        kappa = None
        if args.kappa is not None:
            kappa = Curvature.from_kappa(args.kappa).kappa
        table = L.constant_conversions(args.name, args.value, kappa)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = [{"from": args.name, "value": args.value, "implied": table}]
    return _finish(args, "convert", _config(args), payload, t0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="metricurv", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, kappa=True):
        p.add_argument("--space", help="space file (.json or .csv matrix)")
        p.add_argument("--make", help="inline constructor spec name:key=val,...")
        if kappa:
            p.add_argument("--kappa", default="0", help='0, negative real, or "-inf"')
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--pairs", type=int, default=30)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="report path (default stdout)")
        p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("build", help="construct/validate a space")
    common(p)
    p.add_argument("--out-space", default=None, help="write the space as JSON")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("hyperbolicity", help="exact four-point delta")
    common(p, kappa=False)
    p.set_defaults(func=_cmd_hyperbolicity)

    p = sub.add_parser("four-point", help="rough 4-point constant scan")
    common(p)
    p.add_argument("--orderings", choices=("given", "all"), default="given")
    p.set_defaults(func=_cmd_four_point)

    p = sub.add_parser("rcat", help="rough CAT excess scan")
    common(p)
    p.set_defaults(func=_cmd_rcat)

    p = sub.add_parser("weak-rcat", help="weak rough CAT(0) constant scan")
    common(p, kappa=False)
    p.set_defaults(func=_cmd_weak_rcat)

    p = sub.add_parser("bolicity", help="bolicity constant scan")
    common(p, kappa=False)
    p.add_argument("--policy", choices=("best", "all"), default="best")
    p.set_defaults(func=_cmd_bolicity)

    p = sub.add_parser("cn", help="CN midpoint-inequality deficit scan")
    common(p, kappa=False)
    p.set_defaults(func=_cmd_cn)

    p = sub.add_parser("lemmas", help="planar lemma regression suite")
    common(p, kappa=False)
    p.set_defaults(func=_cmd_lemmas)

    p = sub.add_parser("convert", help="implied-constant table")
    p.add_argument("--from", dest="name", required=True)
    p.add_argument("--value", type=float, default=0.0)
    p.add_argument("--kappa", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(func=_cmd_convert)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    t0 = time.time()
    try:
        return args.func(args, t0)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (S.SpaceError, C.ConditionError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal assertion failure
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
