"""Command-line interface.

Exit codes: 0 success, 1 malformed input, 2 mathematical failure
(infeasible weights, violated inequality, failed verification, rank
deficient reconstruction, eigensolver failure).
"""
from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np

from graph_cubature import __version__, analysis
from graph_cubature.cubature import (
    CubatureWeights,
    InfeasibleError,
    build_sampling_matrix,
    default_omega,
    reconstruct,
    solve_weights,
    verify_weights,
)
from graph_cubature.functionals import FunctionalError, compute_constants, normalize
from graph_cubature.generators import (
    CommunitySpec,
    gen_community,
    gen_complete,
    gen_cycle,
    gen_grid,
    gen_path,
)
from graph_cubature.graph import GraphError
from graph_cubature.io import (
    InputError,
    dumps,
    file_digest,
    load_functional,
    load_graph,
    load_partition,
    read_json,
    write_json,
)
from graph_cubature.partition import PartitionError, cluster_spectral
from graph_cubature.spectral import (
    BandwidthError,
    EigenConvergenceError,
    graph_spectrum,
    pw_basis,
)

log = logging.getLogger("graph_cubature")

EXIT_OK, EXIT_INPUT, EXIT_MATH = 0, 1, 2


class MathFailure(Exception):
    pass


def provenance(args, inputs):
    return {
        "tool": "graph-cubature",
        "version": __version__,
        "command": args.command,
        "inputs": {name: file_digest(path) for name, path in inputs.items()},
        "seed": args.seed,
    }


def emit(args, inputs, payload):
    doc = {"provenance": provenance(args, inputs), **payload}
    if args.out:
        write_json(args.out, doc)
    elif not args.quiet:
        print(dumps(doc))
    return doc


def _setup(args):
    """Load graph, partition and functional; derive spectra and constants."""
    g = load_graph(args.graph)
    p = load_partition(g, args.partition)
    ff = load_functional(p, g.n, args.functional)
    cs = cluster_spectral(g, p)
    nf = normalize(ff, cs)
    constants = compute_constants(ff, nf, p, cs)
    return g, p, ff, cs, nf, constants


def _resolve_omega(args, sd, constants):
    if args.omega in (None, "auto"):
        return default_omega(sd, constants, args.gamma)
    try:
        omega = float(args.omega)
    except ValueError as exc:
        raise InputError(f"omega must be a number or 'auto', got {args.omega!r}") from exc
    if not math.isfinite(omega) or omega < 0:
        raise InputError(f"omega must be finite and >= 0, got {omega}")
    return omega


def _inputs(args, *names):
    return {name: getattr(args, name) for name in names}


def cmd_spectrum(args):
    sd = graph_spectrum(load_graph(args.graph))
    return emit(args, _inputs(args, "graph"), sd.report(include_vectors=args.eigenvectors))


def cmd_constants(args):
    g, p, ff, cs, nf, constants = _setup(args)
    payload = constants.to_json()
    payload["lambda1_j"] = [c.lambda1 for c in cs]
    if args.gamma is not None:
        payload["gamma"] = args.gamma
        payload["omega_cubature"] = constants.omega_cubature(args.gamma)
    return emit(args, _inputs(args, "graph", "partition", "functional"), payload)


def cmd_weights(args):
    g, p, ff, cs, nf, constants = _setup(args)
    sd = graph_spectrum(g)
    omega = _resolve_omega(args, sd, constants)
    pw = pw_basis(sd, omega)
    M = build_sampling_matrix(nf, pw)
    try:
        cw = solve_weights(M, pw, p, nf, constants, args.gamma)
    except InfeasibleError as exc:
        emit(args, _inputs(args, "graph", "partition", "functional"), {
            "status": "infeasible",
            "infeasibility": exc.infeasibility,
            "certificate": np.asarray(exc.certificate).tolist(),
        })
        raise MathFailure(str(exc)) from exc
    report = verify_weights(g, sd, nf, cw, seed=args.seed, rtol=args.tol or 1e-9)
    doc = emit(args, _inputs(args, "graph", "partition", "functional"), cw.to_json())
    if not report.passed:
        raise MathFailure("; ".join(report.failures))
    return doc


def cmd_verify(args):
    g, p, ff, cs, nf, constants = _setup(args)
    sd = graph_spectrum(g)
    cw = CubatureWeights.from_json(read_json(args.weights))
    if args.omega not in (None, "auto"):
        cw = CubatureWeights(cw.gamma, _resolve_omega(args, sd, constants), cw.weights,
                             cw.sigma, cw.residual_max, cw.dim_E_omega)
    report = verify_weights(g, sd, nf, cw, trials=args.trials, seed=args.seed,
                            rtol=args.tol or 1e-9)
    doc = emit(args, _inputs(args, "graph", "partition", "functional", "weights"),
               report.to_json())
    if not report.passed:
        raise MathFailure("; ".join(report.failures))
    return doc


def cmd_reconstruct(args):
    g, p, ff, cs, nf, constants = _setup(args)
    sd = graph_spectrum(g)
    omega = _resolve_omega(args, sd, constants)
    data = read_json(args.samples)
    samples = data["samples"] if isinstance(data, dict) else data
    pw = pw_basis(sd, omega)
    M = build_sampling_matrix(nf, pw)
    res = reconstruct(M, pw, samples)
    payload = {
        "omega": omega,
        "signal": res.signal.tolist(),
        "residual": res.residual,
        "rank_deficient": res.rank_deficient,
        "smallest_singular_value": res.smallest_singular_value,
    }
    doc = emit(args, _inputs(args, "graph", "partition", "functional", "samples"), payload)
    if res.rank_deficient:
        raise MathFailure("sampling operator is rank deficient on E_omega")
    return doc


def run_inequality_suite(g, p, nf, constants, cs, sd, trials, seed, gamma=0.4, rtol=None):
    """Run every inequality check on one instance; returns InequalityReports."""
    kw = {} if rtol is None else {"rtol": rtol}

    def cmp(r):
        return analysis.compare(r.lhs, r.rhs, **kw) if kw else r

    rng = np.random.default_rng(seed)
    reports = []
    connected = sd.zero_multiplicity == 1 and g.n > 1
    if connected:
        names = ["global_poincare", "sample_poincare", "operator_poincare"]
        eps_list = (0.1, 1.0, 10.0)
        buckets = {k: [] for k in names + [f"poincare_with_sample_eps={e}" for e in eps_list]}
        half = np.sqrt(np.maximum(sd.eigenvalues, 0.0))
        half[: sd.zero_multiplicity] = 0.0
        for _ in range(trials):
            psi = rng.random(g.n)
            f = rng.standard_normal(g.n)
            buckets["global_poincare"].append(cmp(analysis.check_global_poincare(g, sd, psi, f)))
            buckets["sample_poincare"].append(cmp(analysis.check_sample_poincare(g, sd, psi, f)))
            for e in eps_list:
                buckets[f"poincare_with_sample_eps={e}"].append(
                    cmp(analysis.check_poincare_with_sample(g, sd, psi, f, e)))
            buckets["operator_poincare"].append(
                cmp(analysis.check_operator_poincare(half, sd.eigenvectors, psi, f)))
        reports += [analysis.summarize(k, v) for k, v in buckets.items()]

    cluster = [cmp(analysis.check_cluster_poincare(g, p, cs, nf, rng.standard_normal(g.n)))
               for _ in range(trials)]
    reports.append(analysis.summarize("cluster_poincare", cluster))

    omega = default_omega(sd, constants, gamma)
    frame = analysis.check_plancherel_polya(g, sd, p, nf, constants, omega, trials, seed)
    reports.append(analysis.InequalityReport(
        "plancherel_polya", frame.trials,
        min(frame.worst_lower_slack, frame.worst_upper_slack), frame.violated,
        {"omega": omega, "bound_lower": frame.bound_lower, "bound_upper": frame.bound_upper,
         "empirical_lower": frame.empirical_lower, "empirical_upper": frame.empirical_upper},
    ))

    pw = pw_basis(sd, omega)
    l1, double = [], []
    for _ in range(trials):
        f = pw.basis @ rng.standard_normal(pw.dim)
        l1.append(cmp(analysis.check_l1_inequality(g, p, cs, nf, constants, omega, f)))
        if omega > 0:
            double.append(cmp(analysis.check_double_l1(g, p, nf, constants, omega, f)))
    reports.append(analysis.summarize("l1_cluster_deviation", l1))
    if double:
        reports.append(analysis.summarize("double_l1", double))
    return reports


def cmd_check_inequalities(args):
    g, p, ff, cs, nf, constants = _setup(args)
    sd = graph_spectrum(g)
    reports = run_inequality_suite(g, p, nf, constants, cs, sd, args.trials, args.seed,
                                   gamma=args.gamma, rtol=args.tol)
    doc = emit(args, _inputs(args, "graph", "partition", "functional"),
               {"reports": [r.to_json() for r in reports]})
    bad = [r.name for r in reports if r.violated]
    if bad:
        raise MathFailure(f"violated: {', '.join(bad)}")
    return doc


def cmd_generate(args):
    if args.kind == "community":
        spec = CommunitySpec(args.communities, args.size, args.p_intra, args.w_intra,
                             args.w_inter, args.bridges, args.seed)
        g, p = gen_community(spec)
    else:
        g = {
            "path": lambda: gen_path(args.n),
            "cycle": lambda: gen_cycle(args.n),
            "complete": lambda: gen_complete(args.n),
            "grid": lambda: gen_grid(args.rows, args.cols),
        }[args.kind]()
        p = None
    if args.out:
        write_json(args.out, g.to_json())
    elif not args.quiet:
        print(dumps(g.to_json()))
    if p is not None and args.partition_out:
        write_json(args.partition_out, p.to_json())
    return g.to_json()


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="relative tolerance override for checks")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")
    common.add_argument("--quiet", action="store_true")

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument("graph")
    instance.add_argument("partition")
    instance.add_argument("functional")

    parser = argparse.ArgumentParser(
        prog="graph-cubature",
        description="Positive cubature weights and sampling bounds on weighted graphs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="Laplacian spectrum report")
    s.add_argument("graph")
    s.add_argument("--eigenvectors", action="store_true")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("constants", parents=[common, instance], help="sampling constants")
    s.add_argument("--gamma", type=float, default=None)
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("weights", parents=[common, instance], help="solve for cubature weights")
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--omega", default="auto")
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("verify", parents=[common, instance], help="verify cubature weights")
    s.add_argument("weights")
    s.add_argument("--omega", default=None, help="override the omega stored in the weights file")
    s.add_argument("--gamma", type=float, default=0.4)
    s.add_argument("--trials", type=int, default=100)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("check-inequalities", parents=[common, instance],
                       help="randomized inequality checks")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--gamma", type=float, default=0.4)
    s.set_defaults(func=cmd_check_inequalities)

    s = sub.add_parser("reconstruct", parents=[common, instance],
                       help="recover a bandlimited signal from samples")
    s.add_argument("samples")
    s.add_argument("--omega", default="auto")
    s.add_argument("--gamma", type=float, default=0.4)
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("generate", help="write a test graph")
    gsub = s.add_subparsers(dest="kind", required=True)
    c = gsub.add_parser("community", parents=[common])
    c.add_argument("--communities", type=int, required=True)
    c.add_argument("--size", type=int, required=True)
    c.add_argument("--p-intra", type=float, default=1.0)
    c.add_argument("--w-intra", type=float, default=1.0)
    c.add_argument("--w-inter", type=float, default=0.01)
    c.add_argument("--bridges", type=int, default=1)
    c.add_argument("--partition-out", default=None)
    for name in ("path", "cycle", "complete"):
        k = gsub.add_parser(name, parents=[common])
        k.add_argument("n", type=int)
        k.set_defaults(partition_out=None)
    k = gsub.add_parser("grid", parents=[common])
    k.add_argument("rows", type=int)
    k.add_argument("cols", type=int)
    k.set_defaults(partition_out=None)
    s.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except MathFailure as exc:
        log.error("%s", exc)
        return EXIT_MATH
    except EigenConvergenceError as exc:
        log.error("%s", exc)
        return EXIT_MATH
    except (InputError, GraphError, PartitionError, FunctionalError, BandwidthError,
            KeyError, TypeError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
