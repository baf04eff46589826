"""Command-line front end.

Every subcommand prints one JSON result envelope to standard output and
exits with a code keyed to the run's outcome: 0 Converged (or a
successful entropy evaluation), 2 Degenerate, 3 CycleDetected, 4
MaxIter or HomotopyFailure, 1 for configuration and usage errors.
Numbers are emitted with 17 significant digits so identical inputs
reproduce identical envelopes; CSV traces and PPM frames are written
only when asked for.
"""

import argparse
import json
import math
import sys

from .angles import angle_orbit, parse_angle
from .capture import CaptureSpec, capture_run
from .engine import RunOptions, Status
from .entropy import (
    NonnegIntMatrix,
    core_entropy,
    is_reducible,
    leading_eigenvalue,
)
from .mating import MatingSpec, mating_run
from .quadratic import preperiodic_residual
from .render import FrameSpec, render_run
from .spider import spider_run
from .sphere import INF


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _fmt(x):
    return format(float(x), ".17g")


def _dumps(obj):
    """JSON text with floats at full precision."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, dict):
        body = ", ".join(
            "%s: %s" % (json.dumps(str(k)), _dumps(v)) for k, v in obj.items()
        )
        return "{" + body + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dumps(v) for v in obj) + "]"
    raise TypeError("cannot serialize %r" % (obj,))


def _cplx(z):
    if z is INF:
        return "inf"
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _angle_str(a):
    if a is None:
        return None
    return "%d/%d" % (a.numerator, a.denominator)


def _collision_block(collisions):
    if collisions is None:
        return None
    return sorted(sorted(cls) for cls in collisions)


def _marked_block(result):
    out = []
    for pt in result.state.points:
        out.append(
            {
                "id": pt.pid,
                "side": pt.side,
                "angle": _angle_str(pt.angle),
                "limit": _cplx(result.limits[pt.pid]),
            }
        )
    return out


def _map_block(result):
    if result.final_map is None:
        return None
    m = result.final_map.m
    return {
        "normalization": result.state.anchor.kind,
        "coefficients": {
            "a": _cplx(m.a),
            "b": _cplx(m.b),
            "c": _cplx(m.c),
            "d": _cplx(m.d),
        },
        "d": result.final_map.d,
    }


def _envelope(argv, status, iterations, run_result=None, oracle_match=False,
              extras=None):
    env = {
        "command": list(argv),
        "status": status.value,
        "iterations": iterations,
        "map": _map_block(run_result) if run_result else None,
        "marked_points": _marked_block(run_result) if run_result else [],
        "collisions": _collision_block(run_result.collisions)
        if run_result else None,
        "oracle_match": bool(oracle_match),
        "diagnostics": {
            "trace": [float(t) for t in run_result.trace] if run_result else [],
            "warnings": list(run_result.warnings) if run_result else [],
        },
    }
    env.update(extras or {})
    return env


def _emit(env):
    print(_dumps(env))


def _write_trace(path, trace):
    with open(path, "w") as fh:
        fh.write("window,measure\n")
        for n, t in enumerate(trace):
            fh.write("%d,%s\n" % (n, _fmt(t)))


def _write_ray(path, ray):
    with open(path, "w") as fh:
        fh.write("potential,re,im\n")
        for g, z in zip(ray.potentials, ray.samples):
            fh.write("%s,%s,%s\n" % (_fmt(g), _fmt(z.real), _fmt(z.imag)))


def _run_options(args):
    kw = {}
    if getattr(args, "tol", None) is not None:
        kw["tol"] = args.tol
    if getattr(args, "max_iter", None) is not None:
        kw["max_iter"] = args.max_iter
    return RunOptions(**kw) if kw else None


def _nsamples(args):
    if getattr(args, "steps", None) is not None:
        return {"nsamples": args.steps}
    return {}


def _explicit_param(args, prefix):
    re = getattr(args, prefix + "_re", None)
    im = getattr(args, prefix + "_im", None)
    if re is None and im is None:
        return None
    return complex(re or 0.0, im or 0.0)


def cmd_spider(args, argv):
    res = spider_run(
        args.theta, options=_run_options(args), **_nsamples(args)
    )
    rr = res.result
    env = _envelope(
        argv,
        res.status if rr else Status.CONVERGED,
        rr.iterations if rr else 0,
        run_result=rr,
        oracle_match=res.residual < 1e-6,
        extras={
            "c": _cplx(res.c),
            "k": res.preperiod,
            "p": res.period,
            "residual": res.residual,
        },
    )
    _emit(env)
    if args.emit_trace and rr:
        _write_trace(args.emit_trace, rr.trace)
    return rr.exit_code if rr else 0


def cmd_mate(args, argv):
    spec = MatingSpec(
        args.theta_p,
        args.theta_q,
        force=args.force,
        **({"r1": args.r1} if args.r1 is not None else {}),
        **_nsamples(args),
    )
    mr = mating_run(
        spec,
        options=_run_options(args),
        c_p=_explicit_param(args, "p"),
        c_q=_explicit_param(args, "q"),
    )
    match = False
    if mr.status is Status.CONVERGED:
        observed, expected = mr.ray_comparison()
        match = observed == expected
    env = _envelope(
        argv,
        mr.status,
        mr.result.iterations,
        run_result=mr.result,
        oracle_match=match,
        extras={"c_p": _cplx(mr.c_p), "c_q": _cplx(mr.c_q)},
    )
    _emit(env)
    if args.emit_trace:
        _write_trace(args.emit_trace, mr.result.trace)
    return mr.result.exit_code


def cmd_capture(args, argv):
    p = _explicit_param(args, "p")
    if p is None:
        if args.theta_base is None:
            raise ValueError("capture needs --theta-base or --p-re/--p-im")
        side = spider_run(args.theta_base)
        if side.result is not None and side.status is not Status.CONVERGED:
            raise ValueError("base spider did not converge")
        p = side.c
    spec = CaptureSpec(
        p,
        args.theta_ray,
        **({"depth": args.depth} if args.depth is not None else {}),
        **_nsamples(args),
    )
    cap = capture_run(spec, options=_run_options(args))
    orb = angle_orbit(spec.theta)
    landing_ok = (
        preperiodic_residual(p, cap.ray.landing, orb.preperiod, orb.period)
        < 1e-6
    )
    env = _envelope(
        argv,
        cap.status,
        cap.result.iterations,
        run_result=cap.result,
        oracle_match=landing_ok,
        extras={
            "p": _cplx(p),
            "ray": {
                "theta": _angle_str(spec.theta),
                "landing": _cplx(cap.ray.landing),
            },
        },
    )
    _emit(env)
    if args.emit_trace:
        _write_trace(args.emit_trace, cap.result.trace)
    if args.emit_ray:
        _write_ray(args.emit_ray, cap.ray)
    return cap.result.exit_code


def cmd_entropy(args, argv):
    if args.matrix:
        with open(args.matrix) as fh:
            data = json.load(fh)
        matrix = NonnegIntMatrix(tuple(tuple(r) for r in data["rows"]))
        if "n" in data and data["n"] != matrix.n:
            raise ValueError("matrix file n does not match rows")
        lam = leading_eigenvalue(matrix)
    elif args.theta is not None:
        lam, _, matrix = core_entropy(args.theta)
    else:
        raise ValueError("entropy needs --theta or --matrix")
    match = abs(lam - leading_eigenvalue(matrix.transpose())) < 1e-6
    env = _envelope(
        argv,
        Status.CONVERGED,
        0,
        oracle_match=match,
        extras={
            "lambda": lam,
            "h": math.log(lam) if lam > 0 else None,
            "matrix": {"n": matrix.n, "rows": [list(r) for r in matrix.rows]},
            "reducible": is_reducible(matrix),
        },
    )
    _emit(env)
    return 0


def cmd_render(args, argv):
    spec = MatingSpec(
        args.theta_p, args.theta_q, force=args.force, **_nsamples(args)
    )
    frame_spec = FrameSpec(outdir=args.out, fps=args.fps)
    options = RunOptions(
        **({"tol": args.tol} if args.tol is not None else {}),
        max_iter=args.units - 1,
    )
    mr, paths = render_run(
        spec,
        frame_spec,
        depth=args.depth,
        options=options,
        c_p=_explicit_param(args, "p"),
        c_q=_explicit_param(args, "q"),
    )
    match = False
    if mr.status is Status.CONVERGED:
        observed, expected = mr.ray_comparison()
        match = observed == expected
    env = _envelope(
        argv,
        mr.status,
        mr.result.iterations,
        run_result=mr.result,
        oracle_match=match,
        extras={
            "c_p": _cplx(mr.c_p),
            "c_q": _cplx(mr.c_q),
            "out": args.out,
            "frames": len(paths),
        },
    )
    _emit(env)
    return mr.result.exit_code


def _add_run_flags(sub):
    sub.add_argument("--steps", type=int, help="path samples per unit window")
    sub.add_argument("--tol", type=float, help="convergence tolerance")
    sub.add_argument("--max-iter", type=int, help="unit-window budget")
    sub.add_argument("--emit-trace", metavar="CSV",
                     help="write the convergence trace")


def build_parser():
    parser = _Parser(prog="slowmating", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd")

    sp = sub.add_parser("spider", help="angle to parameter")
    sp.add_argument("--theta", type=parse_angle, required=True)
    _add_run_flags(sp)

    mt = sub.add_parser("mate", help="slow mating of two angles")
    mt.add_argument("--theta-p", type=parse_angle, required=True)
    mt.add_argument("--theta-q", type=parse_angle, required=True)
    mt.add_argument("--p-re", type=float)
    mt.add_argument("--p-im", type=float)
    mt.add_argument("--q-re", type=float)
    mt.add_argument("--q-im", type=float)
    mt.add_argument("--r1", type=float)
    mt.add_argument("--force", action="store_true",
                    help="run even for conjugate-limb angles")
    _add_run_flags(mt)

    cp = sub.add_parser("capture", help="push a critical value down a ray")
    cp.add_argument("--theta-base", type=parse_angle)
    cp.add_argument("--theta-ray", type=parse_angle, required=True)
    cp.add_argument("--p-re", type=float)
    cp.add_argument("--p-im", type=float)
    cp.add_argument("--depth", type=int, help="ray potential halvings")
    cp.add_argument("--emit-ray", metavar="CSV",
                    help="write the traced ray polyline")
    _add_run_flags(cp)

    en = sub.add_parser("entropy", help="growth rate of tree dynamics")
    en.add_argument("--theta", type=parse_angle)
    en.add_argument("--matrix", metavar="JSON",
                    help='explicit matrix file {"n": ..., "rows": [...]}')

    rd = sub.add_parser("render", help="frame sequence of a mating run")
    rd.add_argument("--theta-p", type=parse_angle, required=True)
    rd.add_argument("--theta-q", type=parse_angle, required=True)
    rd.add_argument("--p-re", type=float)
    rd.add_argument("--p-im", type=float)
    rd.add_argument("--q-re", type=float)
    rd.add_argument("--q-im", type=float)
    rd.add_argument("--depth", type=int, default=8, help="beta-tree depth")
    rd.add_argument("--fps", type=int, default=25, help="frames per unit")
    rd.add_argument("--units", type=int, default=30,
                    help="unit windows to run")
    rd.add_argument("--out", required=True, help="frame output directory")
    rd.add_argument("--force", action="store_true")
    rd.add_argument("--steps", type=int)
    rd.add_argument("--tol", type=float)

    return parser


HANDLERS = {
    "spider": cmd_spider,
    "mate": cmd_mate,
    "capture": cmd_capture,
    "entropy": cmd_entropy,
    "render": cmd_render,
}


def dispatch(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.cmd is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return HANDLERS[args.cmd](args, argv)
    except (ValueError, ArithmeticError, OSError, KeyError,
            json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
