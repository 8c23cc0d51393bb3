"""Command-line interface.

Subcommands map one-to-one onto the library's verification workflows:

* ``check``          generation certificates for a named operator or a network
* ``euler``          resolvent-to-semigroup convergence ladder (CSV)
* ``counterexample`` plateau-ramp witness against windowed contraction
* ``heat``           second-derivative witness against windowed dissipativity
* ``simulate``       network transport evolution (characteristics or upwind)
* ``resolvent``      resolvent evaluation with optional Laplace cross-check

Exit codes: 0 all checks passed, 1 a check failed, 2 invalid input.  All
floating-point output is serialized with 17 significant digits and every
command is deterministic for a fixed configuration.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .generation import lumer_phillips_verdict
from .grid import Grid, GridFunction, write_csv
from .network import (ValidationError, initial_state, load_network,
                      simulate_flow, supnorm_l1, total_mass)
from .operators import (laplacian_generator, left_shift_generator,
                        right_translation_generator, right_translation_resolvent)
from .samples import plateau_ramp, sample_functions, smooth_bump
from .semigroups import (euler_apply, laplace_resolvent,
                         right_translation_semigroup, shift_semigroup)
from .seminorms import (CompactSeminormFamily, WindowOrientation, eval_pn)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        import json as _json
        return _json.dumps(value)
    raise TypeError(f"cannot serialize {type(value)!r}")


def json_text(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f"{inner}{_fmt(str(k))}: {json_text(v, indent + 1)}"
                for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{inner}{json_text(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(obj, np.floating):
        return _fmt(float(obj))
    return _fmt(obj)


def _emit_json(doc: dict, out_dir, name: str) -> None:
    text = json_text(doc) + "\n"
    sys.stdout.write(text)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def _write_rows(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else
                             (str(v) if isinstance(v, (int, np.integer))
                              else format(float(v), ".17g")) for v in row])


_OPERATOR_CHOICES = ("left_shift", "right_translation", "laplacian")


def _operator_setup(name: str, n_cells: int, seed: int, n_samples: int):
    """Generator, seminorm family, check samples and range probes for one of
    the named model operators."""
    if name == "left_shift":
        grid = Grid(0.0, 20.0, n_cells)
        gen = left_shift_generator(grid)
        family = CompactSeminormFamily(WindowOrientation.RIGHT, 10)
        samples = sample_functions(grid, n_samples, seed, vanish_left=True)
        probes = sample_functions(grid, max(2, n_samples // 2), seed + 1)
        return gen, family, samples, probes
    if name == "right_translation":
        grid = Grid(-10.0, 0.0, n_cells)
        gen = right_translation_generator(grid)
        family = CompactSeminormFamily(WindowOrientation.LEFT, 5)
        samples = sample_functions(grid, n_samples, seed)
        # the plateau ramp's resolvent is the witness input: every window
        # seminorm of the ramp vanishes while its resolvent is positive there
        ramp = plateau_ramp(grid, 2)
        samples = samples + [("ramp_resolvent", right_translation_resolvent(1.0, ramp))]
        probes = sample_functions(grid, max(2, n_samples // 2), seed + 1)
        return gen, family, samples, probes
    if name == "laplacian":
        grid = Grid(-2.0, 2.0, n_cells)
        gen = laplacian_generator(grid)
        family = CompactSeminormFamily(WindowOrientation.SYMMETRIC, 2)
        samples = sample_functions(grid, n_samples, seed)
        samples = samples + [("parabola", GridFunction(grid, grid.nodes ** 2))]
        return gen, family, samples, []
    raise ValueError(f"unknown operator '{name}'")


def cmd_check(args) -> int:
    lambdas = args.lambdas or [0.1, 1.0, 10.0]
    if args.network is not None:
        net = load_network(args.network)
        report = lumer_phillips_verdict(net, None, [], lambdas)
        label = "network"
    else:
        n_cells = args.grid or (4000 if args.operator == "laplacian" else 2000)
        gen, family, samples, probes = _operator_setup(
            args.operator, n_cells, args.seed, args.samples)
        report = lumer_phillips_verdict(gen, family, samples, lambdas, probes)
        label = args.operator
    _emit_json(report.to_dict(), args.out, f"check_{label}.json")
    return 0 if report.passed else 1


def cmd_euler(args) -> int:
    ladder = [int(v) for v in args.m_ladder.split(",") if v.strip()]
    if not ladder or any(m < 1 for m in ladder):
        raise ValueError("the m ladder needs positive integers")
    n_cells = args.grid or 4000
    x_max = args.x_max
    if args.operator == "left_shift":
        grid = Grid(0.0, x_max, n_cells)
        gen = left_shift_generator(grid)
        sg = shift_semigroup(grid)
        f = smooth_bump(grid, min(2.5, 0.45 * x_max), min(1.0, 0.2 * x_max))
    else:
        grid = Grid(-x_max, 0.0, n_cells)
        gen = right_translation_generator(grid)
        sg = right_translation_semigroup(grid)
        f = smooth_bump(grid, -x_max / 2.0, min(1.0, 0.2 * x_max))
    family = CompactSeminormFamily(
        WindowOrientation.RIGHT if args.operator == "left_shift"
        else WindowOrientation.LEFT, args.n_max)
    exact = sg.apply(args.t, f)
    rows = []
    summary_errors = []
    for m in ladder:
        approx = euler_apply(gen, args.t, m, f)
        diff = approx - exact
        for n in range(1, args.n_max + 1):
            rows.append((m, n, eval_pn(family, n, diff)))
        summary_errors.append(eval_pn(family, args.n_max, diff))
    if args.out is not None:
        _write_rows(Path(args.out) / "euler_convergence.csv",
                    ["m", "seminorm_index", "error"], rows)
    _emit_json({
        "operator": args.operator, "t": float(args.t), "m_ladder": ladder,
        "seminorm_index": args.n_max,
        "errors": summary_errors,
        "sup_norm_of_f": f.norm(),
    }, args.out, "euler_summary.json")
    return 0


def cmd_counterexample(args) -> int:
    if args.n < 1:
        raise ValueError("window index n must be >= 1")
    lam = args.lam
    if not lam > 0:
        raise ValueError("lambda must be positive")
    x_min = max(10.0, args.n + 2.0)
    grid = Grid(-x_min, 0.0, args.grid or 4000)
    f = plateau_ramp(grid, args.n)
    family = CompactSeminormFamily(WindowOrientation.LEFT, max(args.n, 1))
    p_n_f = eval_pn(family, args.n, f)
    rf = right_translation_resolvent(lam, f)
    p_1_rf = eval_pn(family, 1, rf)
    lower = math.exp(-lam * (args.n + 1)) / lam
    passed = (p_n_f <= 1e-12) and (p_1_rf >= lower - 1e-6) and (p_1_rf > 0)
    _emit_json({
        "lambda": float(lam), "n": int(args.n),
        "p_n_of_f": p_n_f, "p_1_of_Rf": p_1_rf, "lower_bound": lower,
        "passed": passed,
    }, args.out, "counterexample.json")
    return 0 if passed else 1


def cmd_heat(args) -> int:
    lam = args.lam
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if args.n < 1:
        raise ValueError("window index n must be >= 1")
    n = args.n
    grid = Grid(-float(n), float(n), args.grid or 4000)
    gen = laplacian_generator(grid)
    family = CompactSeminormFamily(WindowOrientation.SYMMETRIC, n)
    f = GridFunction(grid, grid.nodes ** 2)
    shifted = f * lam - gen.apply(f)
    p_shifted = eval_pn(family, n, shifted)
    p_scaled = eval_pn(family, n, f) / lam
    expected_shifted = max(2.0, abs(lam * n * n - 2.0))
    expected_scaled = n * n / lam
    passed = (abs(p_shifted - expected_shifted) <= 1e-6
              and abs(p_scaled - expected_scaled) <= 1e-12
              and p_shifted < p_scaled)
    _emit_json({
        "lambda": float(lam), "n": int(n),
        "p2_shifted": p_shifted, "inv_lambda_p2_f": p_scaled,
        "expected_shifted": expected_shifted, "expected_scaled": expected_scaled,
        "passed": passed,
    }, args.out, "heat.json")
    return 0 if passed else 1


def cmd_simulate(args) -> int:
    net = load_network(args.network)
    import json as _json
    with open(args.network) as fh:
        doc = _json.load(fh)
    state = initial_state(net, doc.get("initial"))
    times, states = simulate_flow(net, state, args.t, args.solver,
                                  cfl=args.cfl, n_outputs=args.outputs)
    masses = [total_mass(st) for st in states]
    sups = [supnorm_l1(st) for st in states]
    m0 = masses[0]
    drift = max(abs(m - m0) for m in masses) / max(abs(m0), 1e-300)
    if args.out is not None:
        rows = []
        x = net.grid.nodes
        for t, st in zip(times, states):
            for j in range(st.n_edges):
                for i in range(len(x)):
                    rows.append((float(t), j, float(x[i]), float(st.values[j, i])))
        _write_rows(Path(args.out) / "simulation.csv",
                    ["t", "edge", "x", "u"], rows)
    _emit_json({
        "solver": args.solver, "t_max": float(args.t), "cfl": float(args.cfl),
        "n_edges": net.n_edges,
        "times": [float(t) for t in times],
        "mass": masses, "supnorm_l1": sups,
        "mass_drift_rel": drift,
    }, args.out, "simulate_summary.json")
    return 0


def cmd_resolvent(args) -> int:
    lam = args.lam
    if not lam > 0:
        raise ValueError("lambda must be positive")
    n_cells = args.grid or 2000
    if args.operator == "left_shift":
        grid = Grid(0.0, 20.0, n_cells)
        gen = left_shift_generator(grid)
        sg = shift_semigroup(grid)
    else:
        grid = Grid(-10.0, 0.0, n_cells)
        gen = right_translation_generator(grid)
        sg = right_translation_semigroup(grid)
    if args.input == "ones":
        g = GridFunction(grid, np.ones(grid.n_cells + 1))
    elif args.input == "bump":
        mid = 0.5 * (grid.a + grid.b)
        g = smooth_bump(grid, mid, 0.25 * (grid.b - grid.a))
    elif args.input == "expdecay":
        g = GridFunction(grid, np.exp(-(grid.nodes - grid.a)))
    else:
        raise ValueError(f"unknown input kind '{args.input}'")
    f = gen.resolve(lam, g)
    doc = {
        "operator": args.operator, "lambda": float(lam), "input": args.input,
        "sup_of_result": f.norm(),
    }
    if args.horizon is not None:
        approx, tail = laplace_resolvent(sg, lam, g, args.horizon, args.steps)
        doc["laplace_horizon"] = float(args.horizon)
        doc["laplace_steps"] = int(args.steps)
        doc["laplace_tail_bound"] = tail
        doc["laplace_crosscheck_diff"] = (approx - f).norm()
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(f, out / "resolvent.csv")
    _emit_json(doc, args.out, "resolvent_summary.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semiflow",
        description="Desk-scale semigroup generation checks and graph transport flows")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run generation certificates")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--operator", choices=_OPERATOR_CHOICES)
    target.add_argument("--network", metavar="PATH")
    p.add_argument("--lambda", dest="lambdas", type=float, action="append",
                   metavar="LAM", help="resolvent parameter (repeatable)")
    p.add_argument("--grid", type=int, help="number of grid cells")
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("euler", help="resolvent-to-semigroup convergence ladder")
    p.add_argument("--operator", choices=("left_shift", "right_translation"),
                   default="left_shift")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--m-ladder", default="4,16,64,256,1024")
    p.add_argument("--grid", type=int)
    p.add_argument("--x-max", type=float, default=6.0)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(fn=cmd_euler)

    p = sub.add_parser("counterexample",
                       help="windowed contraction failure for the free translation")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--grid", type=int)
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(fn=cmd_counterexample)

    p = sub.add_parser("heat",
                       help="windowed dissipativity failure for the second derivative")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--grid", type=int)
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(fn=cmd_heat)

    p = sub.add_parser("simulate", help="evolve a network transport flow")
    p.add_argument("--network", required=True, metavar="PATH")
    p.add_argument("--solver", choices=("characteristics", "upwind"),
                   default="characteristics")
    p.add_argument("--t", type=float, default=4.0)
    p.add_argument("--cfl", type=float, default=0.9)
    p.add_argument("--outputs", type=int, default=11)
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("resolvent", help="evaluate a resolvent, optionally "
                       "cross-checked against the Laplace transform of the orbit")
    p.add_argument("--operator", choices=("left_shift", "right_translation"),
                   default="left_shift")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--grid", type=int)
    p.add_argument("--input", choices=("ones", "bump", "expdecay"), default="bump")
    p.add_argument("--horizon", type=float)
    p.add_argument("--steps", type=int, default=3000)
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(fn=cmd_resolvent)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
