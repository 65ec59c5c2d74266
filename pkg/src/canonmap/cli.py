"""Command-line surface. Exit codes: 0 success, 1 usage, 2 bad input or
metric-axiom failure, 3 internal assertion (a numerically falsified
transfer guarantee).
"""

import argparse
import sys

import numpy as np

from . import canonical, counterexample, embedding, gauge, separation
from .errors import (ContainmentError, GaugeRadiusError, MetricAxiomError,
                     SpaceFileError, StructuralError)
from .reports import ReportTimer, derive_seed, dump_report, make_report, write_report
from .spacefile import parse_space
from .spaces import build_interval_grid

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _common(sub):
    sub.add_argument("--output", help="write the json report here (default: stdout)")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="omit the timing block so identical runs are byte-identical")
    sub.add_argument("--seed", type=int, default=0, help="master seed")


def _emit(args, command, parameters, results, elapsed):
    report = make_report(command, parameters, results, elapsed=elapsed,
                         timestamp=not args.no_timestamp)
    if args.output:
        write_report(report, args.output)
    else:
        sys.stdout.write(dump_report(report))


def _lip(report):
    return {"lower": report.lower, "upper": report.upper,
            "lower_witness": report.lower_witness, "upper_witness": report.upper_witness}


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def cmd_validate(args):
    space = parse_space(args.input, args.format)
    rep = space.validation
    results = {"n": space.n, "passed": rep.passed, "mode": rep.mode,
               "triples_checked": rep.triples_checked,
               "violations": [{"axiom": v.axiom, "witness": list(v.witness),
                               "magnitude": v.magnitude} for v in rep.violations]}
    return results, EXIT_OK if rep.passed else EXIT_INPUT


def cmd_canonical(args):
    space = parse_space(args.input, args.format)
    ker = canonical.gram_delta(space)
    img = canonical.canonical_image(space)
    sph = canonical.sphere_metrics(space)
    lam_dev = 0.0
    for x in range(space.n):
        for y in range(x + 1, space.n):
            value = canonical.lambda_lip_distance(space, x, y)
            lam_dev = max(lam_dev, abs(value - max(2.0, float(space.D[x, y]))))
    off = ~np.eye(space.n, dtype=bool)
    results = {
        "n": space.n, "total_mass": space.total_mass, "diameter": space.diameter,
        "s_min": ker.s_min, "s_min_witness": list(ker.s_min_witness),
        "norms": {"min": float(img.norms.min()), "max": float(img.norms.max())},
        "rho": {"min": float(sph.rho[off].min()), "max": float(sph.rho[off].max())},
        "theta_max": float(sph.theta.max()),
        "kappa_max": float(sph.kappa.max()),
        "sandwich": sph.sandwich,
        "lift_identity_max_deviation": lam_dev,
    }
    return results, EXIT_OK


def cmd_separation(args):
    space = parse_space(args.input, args.format)
    profile = separation.separation_profile(space)
    constants = separation.canonical_constants(space)
    conj = separation.conjecture_hypotheses(space)
    ell2 = constants.iota_d.lower ** 2
    bridge_ok = all(ell2 >= e * e * c - 1e-12 for e, c in profile.breakpoints)
    results = {
        "profile": [{"eps": e, "c": c} for e, c in profile.breakpoints],
        "best": {"epsilon": profile.best.epsilon, "c": profile.best.c,
                 "witness_pair": list(profile.best.witness_pair),
                 "merit": profile.best.epsilon ** 2 * profile.best.c},
        "constants": {"iota_d": _lip(constants.iota_d),
                      "iota_rho": _lip(constants.iota_rho),
                      "iota_delta": _lip(constants.iota_delta),
                      "min_norm": constants.min_norm,
                      "lower_chain_ok": constants.lower_chain_ok},
        "bridge_ok": bridge_ok,
        "conjecture": conj,
    }
    if args.csv:
        _write_csv(args.csv, ["eps", "c"], profile.breakpoints)
    return results, EXIT_OK


def cmd_gauge(args):
    space = parse_space(args.input, args.format)
    sigma = parse_space(args.sigma).D if args.sigma else space.D
    phi = parse_space(args.phi).D
    wd = gauge.wd_distance(space.D, sigma, phi)
    near = gauge.near_isometry_report(space, r_d=args.r_d)
    sigma_space = space.with_distances(sigma)
    cert = separation.separation_profile(sigma_space).best
    try:
        transferred = gauge.openness_transfer(space, sigma, cert, phi)
        openness = {"status": "transferred",
                    "certificate": {"epsilon": transferred.epsilon, "c": transferred.c,
                                    "witness_pair": list(transferred.witness_pair)}}
    except GaugeRadiusError as exc:
        openness = {"status": "rejected", "measured_wd": exc.measured,
                    "required_radius": exc.radius}
    results = {
        "wd": {"value": wd.value, "witness": list(wd.witness)},
        "sigma_certificate": {"epsilon": cert.epsilon, "c": cert.c},
        "openness": openness,
        "near_isometry": near,
    }
    return results, EXIT_OK


def cmd_embed(args):
    space = parse_space(args.input, args.format)
    spectrum = embedding.schoenberg_test(space.D)
    seed = derive_seed(args.seed, "embed")
    report = embedding.embed_pipeline(space, args.dim, method=args.method,
                                      trials=args.trials, seed=seed,
                                      via_kernel=args.via_delta)
    results = {
        "schoenberg": {"embeddable": spectrum.embeddable,
                       "min_dimension": spectrum.min_dimension,
                       "min_eigenvalue": float(spectrum.eigenvalues[0]),
                       "max_eigenvalue": float(spectrum.eigenvalues[-1])},
        "pipeline": {"N": report.N, "method": report.method, "trials": report.trials,
                     "seed": report.seed, "lower": report.lower, "upper": report.upper,
                     "distortion": report.distortion,
                     "lower_witness": list(report.lower_witness),
                     "upper_witness": list(report.upper_witness)},
    }
    if args.csv:
        _write_csv(args.csv, [f"c{i}" for i in range(report.coords.shape[1])],
                   [tuple(float(v) for v in row) for row in report.coords])
    return results, EXIT_OK


def cmd_interval_delta(args):
    if args.n < 2:
        raise ValueError("grid size must be at least 2")
    grid = build_interval_grid(args.n)
    ker = canonical.gram_delta(grid)
    t = np.arange(args.n) / (args.n - 1)
    closed = np.empty_like(ker.G)
    for i, x in enumerate(t):
        for j, y in enumerate(t):
            closed[i, j] = canonical.interval_delta_closed_form(float(x), float(y))
    err = float(np.abs(ker.G - closed).max())
    spots = {"(1,0)": canonical.interval_delta_closed_form(1.0, 0.0),
             "(0,0)": canonical.interval_delta_closed_form(0.0, 0.0),
             "(1/2,1/2)": canonical.interval_delta_closed_form(0.5, 0.5)}
    results = {"n": args.n, "max_abs_error": err, "bound": 2.0 / args.n,
               "within_bound": err <= 2.0 / args.n, "closed_form_spots": spots}
    return results, EXIT_OK


def cmd_counterexample(args):
    levels = list(range(args.n_max_min, args.n_max_max + 1))
    suite = counterexample.counterexample_suite(levels, M=args.M)
    results = {
        "levels": levels, "M": suite.M,
        "rows": [{"n_max": r.n_max, "n_points": r.n_points,
                  "ell_iota_d": r.ell_iota_d, "lip_iota_d": r.lip_iota_d,
                  "packing": [{"n": n, "count": c} for n, c in r.packing]}
                 for r in suite.rows],
        "control_packing": [{"n": n, "count": c} for n, c in suite.control],
    }
    if args.csv:
        rows = []
        for r in suite.rows:
            for n, c in r.packing:
                rows.append((r.n_max, r.n_points, r.ell_iota_d, r.lip_iota_d, n, c))
        _write_csv(args.csv, ["n_max", "n_points", "ell_iota_d", "lip_iota_d",
                              "ball_level", "packing_lower"], rows)
    return results, EXIT_OK


def cmd_quadruple(args):
    points = None
    space = None
    if args.coords:
        coords = np.loadtxt(args.coords, delimiter=",", ndmin=2)
        points = embedding.PointConfiguration(coords)
    else:
        space = parse_space(args.input, args.format)
    report = embedding.quadruple_inequalities(space=space, points=points,
                                              p=args.p, seed=derive_seed(args.seed, "quadruple"))
    return report, EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="canonmap",
                     description="analyses of finite metric-measure spaces "
                                 "through their distance-function maps")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help, needs_input=True):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        _common(p)
        if needs_input:
            p.add_argument("--input", required=True, help="space file (json or csv)")
            p.add_argument("--format", choices=["json", "csv"], help="override extension sniffing")
        return p

    p = add("validate", cmd_validate, "check the metric axioms of a space file")

    add("canonical", cmd_canonical,
        "canonical-map image: kernel minimum, induced metrics, lift identity audit")

    p = add("separation", cmd_separation,
            "separation profile, certificates, canonical constants, conjecture hypotheses")
    p.add_argument("--csv", help="write the (eps, c) profile as csv")

    p = add("gauge", cmd_gauge, "gauge distance, openness transfer, near-isometry report")
    p.add_argument("--sigma", help="space file carrying the source metric (default: input metric)")
    p.add_argument("--phi", required=True, help="space file carrying the target metric")
    p.add_argument("--r-d", type=float, default=None, help="radius for the threshold test")

    p = add("embed", cmd_embed, "isometric embeddability test plus projection pipeline")
    p.add_argument("--dim", type=int, required=True, help="target dimension")
    p.add_argument("--method", choices=["gaussian", "pca"], default="gaussian")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--via-delta", action="store_true",
                   help="route the pipeline through the kernel rows")
    p.add_argument("--csv", help="write embedded coordinates as csv")

    p = add("interval-delta", cmd_interval_delta,
            "compare the grid kernel against the interval closed form", needs_input=False)
    p.add_argument("--n", type=int, required=True, help="grid size")

    p = add("counterexample", cmd_counterexample,
            "build the truncated counterexample models and emit the contrast table",
            needs_input=False)
    p.add_argument("--n-max-min", type=int, default=2)
    p.add_argument("--n-max-max", type=int, default=4)
    p.add_argument("--M", type=float, default=2.0)
    p.add_argument("--csv", help="write the contrast table as csv")

    p = add("quadruple", cmd_quadruple, "scan the quadruple difference inequalities")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--coords", help="csv of point coordinates (enables the empirical-L branch)")
    # quadruple can run from coordinates alone
    for action in p._actions:
        if action.dest == "input":
            action.required = False
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    if args.command == "quadruple" and not (args.input or args.coords):
        sys.stderr.write("canonmap quadruple: error: need --input or --coords\n")
        return EXIT_USAGE
    # output destinations do not shape results, so they stay out of the
    # reproducibility parameter block
    parameters = {k: v for k, v in vars(args).items()
                  if k not in ("fn", "output", "csv")}
    try:
        with ReportTimer() as timer:
            results, code = args.fn(args)
    except (SpaceFileError, StructuralError, MetricAxiomError, ValueError, OSError) as exc:
        sys.stderr.write(f"canonmap {args.command}: error: {exc}\n")
        if isinstance(exc, MetricAxiomError) and exc.report is not None:
            report = make_report(args.command, parameters,
                                 {"error": str(exc), "validation": exc.report},
                                 timestamp=not args.no_timestamp)
            sys.stderr.write(dump_report(report))
        return EXIT_INPUT
    except (ContainmentError, AssertionError) as exc:
        sys.stderr.write(f"canonmap {args.command}: internal check failed: {exc}\n")
        return EXIT_INTERNAL
    _emit(args, args.command, parameters, results, timer.elapsed)
    return code


if __name__ == "__main__":
    sys.exit(main())
