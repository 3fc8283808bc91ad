"""Command-line front end.

Subcommands: ``sample`` (draw fixture balls), ``embed`` (percolation
pipeline emissions), ``test`` (involution / mtp / tightness / converge,
also reachable as top-level aliases) and ``hyperbolic`` (horoball forest
ray traces).  Every run prints a JSON report embedding its full
configuration; identical configurations produce byte-identical reports.
Exit codes: 0 success or test pass, 1 test failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional

from . import embed as embed_mod
from . import generators, graphio, hyperbolic, seeding, stats
from .errors import UrtlabError
from .sampler import RootedLawSampler

DEFAULT_SEED_ENV = "URTLAB_SEED"


def _default_seed() -> int:
    return int(os.environ.get(DEFAULT_SEED_ENV, "0"))


def _positive(kind):
    def parse(text: str):
        val = kind(text)
        if val <= 0:
            raise argparse.ArgumentTypeError(f"{text} must be positive")
        return val

    return parse


def _sizes(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="urtlab",
        description="Samplers, percolation embeddings and statistical tests "
        "for random rooted trees, plus hyperbolic horoball forests.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="draw fixture balls to a graph file")
    p_sample.add_argument("generator", help=f"one of {', '.join(generators.FIXTURE_NAMES)}")
    p_sample.add_argument("--radius", type=int, required=True)
    p_sample.add_argument("--count", type=_positive(int), default=1)
    p_sample.add_argument("--seed", type=int, default=None)
    p_sample.add_argument("--out", default=None, help="graph-format output file")

    p_embed = sub.add_parser("embed", help="run the percolation pipeline")
    p_embed.add_argument("--mu", required=True)
    p_embed.add_argument("--d", type=_positive(int), required=True)
    p_embed.add_argument("--radius", type=int, required=True)
    p_embed.add_argument("--count", type=_positive(int), default=1)
    p_embed.add_argument("--seed", type=int, default=None)
    p_embed.add_argument(
        "--emit", choices=("rho", "rho-prime", "stripped"), default="rho"
    )
    p_embed.add_argument("--out", default=None)

    p_test = sub.add_parser("test", help="statistical tests")
    t_sub = p_test.add_subparsers(dest="test_kind", required=True)
    _add_involution(t_sub.add_parser("involution", help="neighbor-swap invariance"))
    _add_mtp(t_sub.add_parser("mtp", help="mass-transport balance"))
    _add_tightness(t_sub.add_parser("tightness", help="family tightness diagnostics"))
    _add_converge(t_sub.add_parser("converge", help="TV trend against a target law"))

    _add_tightness(sub.add_parser("tightness", help="alias for test tightness"))
    _add_converge(sub.add_parser("converge", help="alias for test converge"))

    p_hyp = sub.add_parser("hyperbolic", help="horoball forest ray traces")
    p_hyp.add_argument("--qmax", type=_positive(int), default=2)
    p_hyp.add_argument("--delta", type=float, default=math.log(2.0))
    p_hyp.add_argument("--keep", type=float, default=1.0)
    p_hyp.add_argument("--n", type=_positive(int), default=1000, help="ray length")
    p_hyp.add_argument("--seed", type=int, default=None)
    p_hyp.add_argument("--out", default=None, help="CSV trace output file")
    return top


def _add_involution(p):
    p.add_argument("--mu", required=True)
    p.add_argument("--d", type=_positive(int), default=None,
                   help="embed mu and test the direction-marked percolation law")
    p.add_argument("--radius", type=_positive(int), default=2, help="test depth")
    p.add_argument("--n", type=_positive(int), default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--quantization", type=float, default=0.0)
    p.add_argument("--iid-marks", action="store_true",
                   help="append IID uniform[0,1] vertex marks before testing")
    p.add_argument("--csv", default=None, help="per-class counts CSV")
    p.set_defaults(test_kind="involution")


def _add_mtp(p):
    p.add_argument("--mu", required=True)
    p.add_argument("--f", choices=("unit", "leaf"), default="unit",
                   help="mass function: 1 on neighbors, or 1{deg sender = 1}")
    p.add_argument("--s", type=_positive(int), default=1, help="mass function depth")
    p.add_argument("--n", type=_positive(int), default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threshold", type=float, default=4.0)
    p.set_defaults(test_kind="mtp")


def _add_tightness(p):
    p.add_argument("--family", choices=("stars", "regular3", "gaskets"), required=True)
    p.add_argument("--sizes", type=_sizes, required=True, help="comma list, e.g. 2,4,8")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--big", type=_positive(int), required=True, help="degree cutoff")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.set_defaults(test_kind="tightness", command="test")


def _add_converge(p):
    p.add_argument("--family", choices=("regular3", "gaskets"), required=True)
    p.add_argument("--sizes", type=_sizes, required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--depth", type=_positive(int), default=2)
    p.add_argument("--n", type=_positive(int), default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--csv", default=None, help="per-stage TV CSV")
    p.set_defaults(test_kind="converge", command="test")


def _family(kind: str, sizes: list[int]):
    if kind == "stars":
        return [generators.star_graph(s) for s in sizes], [f"K1,{s}" for s in sizes]
    if kind == "regular3":
        return [generators.regular_tree_ball(3, s) for s in sizes], [
            f"T3-ball-{s}" for s in sizes
        ]
    return [generators.sierpinski_graph(s) for s in sizes], [f"gasket-{s}" for s in sizes]


def _emit_report(command: str, config: dict, streams: list[str], result: dict) -> None:
    report = {"command": command, "config": config, "streams": streams, "result": result}
    print(json.dumps(report, sort_keys=True, indent=2))


def _mu_sampler(args) -> RootedLawSampler:
    mu = generators.make_fixture(args.mu)
    if getattr(args, "iid_marks", False):
        mu = embed_mod.add_iid_marks_sampler(mu)
    if getattr(args, "d", None):
        mu = embed_mod.rho_prime_sampler(mu, args.d)
    return mu


def _cmd_sample(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    sampler = generators.make_fixture(args.generator)
    rng = seeding.stream(seed, "sample", sampler.name)
    nets = [sampler.sample(args.radius, rng) for _ in range(args.count)]
    if args.out:
        with open(args.out, "w") as fh:
            graphio.write_networks(nets, fh)
    config = {
        "generator": args.generator, "radius": args.radius,
        "count": args.count, "seed": seed, "out": args.out,
    }
    result = {
        "samples": len(nets),
        "mean_root_degree": sum(n.root_degree() for n in nets) / len(nets),
        "mean_vertices": sum(n.num_vertices for n in nets) / len(nets),
    }
    _emit_report("sample", config, [f"sample/{sampler.name}"], result)
    return 0


def _cmd_embed(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    mu = generators.make_fixture(args.mu)
    if args.emit == "rho":
        sampler: RootedLawSampler = embed_mod.rho_sampler(mu, args.d)
    else:
        sampler = embed_mod.rho_prime_sampler(mu, args.d)
    rng = seeding.stream(seed, "embed", sampler.name)
    nets = []
    for _ in range(args.count):
        net = sampler.sample(args.radius, rng)
        if args.emit == "stripped":
            net = embed_mod.strip_closed(net)
        nets.append(net)
    if args.out:
        with open(args.out, "w") as fh:
            graphio.write_networks(nets, fh)
    config = {
        "mu": args.mu, "d": args.d, "radius": args.radius, "count": args.count,
        "seed": seed, "emit": args.emit, "out": args.out,
    }
    result = {
        "samples": len(nets),
        "mean_root_degree": sum(n.root_degree() for n in nets) / len(nets),
        "mean_vertices": sum(n.num_vertices for n in nets) / len(nets),
    }
    _emit_report("embed", config, [f"embed/{sampler.name}"], result)
    return 0


def _cmd_test(args) -> int:
    kind = args.test_kind
    if kind == "involution":
        seed = _default_seed() if args.seed is None else args.seed
        mu = _mu_sampler(args)
        rng = seeding.stream(seed, "test.involution", mu.name)
        report = stats.involution_test(
            mu, args.radius, args.n, rng,
            quantization=args.quantization, seed=seed,
            keep_classes=bool(args.csv),
        )
        diag = dict(report.diagnostics)
        classes = diag.pop("classes", None)
        if args.csv and classes is not None:
            with open(args.csv, "w") as fh:
                fh.write("class,seen_from_root,seen_from_neighbor\n")
                for code, (s1, s2) in sorted(classes.items()):
                    fh.write(f"{code},{s1},{s2}\n")
        config = {
            "mu": args.mu, "d": args.d, "radius": args.radius, "n": args.n,
            "seed": seed, "quantization": args.quantization,
            "iid_marks": args.iid_marks, "csv": args.csv,
        }
        slim = TestReportView(report, diag)
        _emit_report("test.involution", config, [f"test.involution/{mu.name}"], slim.as_dict())
        return 0 if report.passed else 1
    if kind == "mtp":
        seed = _default_seed() if args.seed is None else args.seed
        mu = generators.make_fixture(args.mu)
        rng = seeding.stream(seed, "test.mtp", mu.name)
        f = _MASS_FUNCTIONS[args.f]
        report = stats.mtp_test(mu, f, args.s, args.n, rng,
                                threshold=args.threshold, seed=seed)
        config = {"mu": args.mu, "f": args.f, "s": args.s, "n": args.n,
                  "seed": seed, "threshold": args.threshold}
        _emit_report("test.mtp", config, [f"test.mtp/{mu.name}"], report.to_dict())
        return 0 if report.passed else 1
    if kind == "tightness":
        family, labels = _family(args.family, args.sizes)
        report = stats.tightness_report(
            family, args.r, args.big, epsilon=args.epsilon, labels=labels
        )
        config = {"family": args.family, "sizes": args.sizes, "r": args.r,
                  "big": args.big, "epsilon": args.epsilon}
        _emit_report("test.tightness", config, [], report.to_dict())
        return 0 if report.passed else 1
    if kind == "converge":
        seed = _default_seed() if args.seed is None else args.seed
        family, labels = _family(args.family, args.sizes)
        target = generators.make_fixture(args.target)
        rng = seeding.stream(seed, "test.converge", target.name)
        conv = stats.convergence_check(family, target, args.depth, args.n, rng)
        if args.csv:
            with open(args.csv, "w") as fh:
                fh.write("stage,tv\n")
                for lab, tv in zip(labels, conv.tv_values):
                    fh.write(f"{lab},{tv!r}\n")
        config = {"family": args.family, "sizes": args.sizes, "target": args.target,
                  "depth": args.depth, "n": args.n, "seed": seed, "csv": args.csv}
        result = {
            "tv_values": list(conv.tv_values),
            "nonincreasing": conv.nonincreasing(tol=0.0),
            "labels": labels,
        }
        _emit_report("test.converge", config, [f"test.converge/{target.name}"], result)
        return 0
    raise UrtlabError(f"unknown test kind {kind!r}")


class TestReportView:
    """Report plus externally trimmed diagnostics (large tables go to CSV)."""

    def __init__(self, report: stats.TestReport, diagnostics: dict):
        self.report = report
        self.diagnostics = diagnostics

    def as_dict(self) -> dict:
        d = self.report.to_dict()
        d["diagnostics"] = self.diagnostics
        return d


def _cmd_hyperbolic(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    rng = seeding.stream(seed, "hyperbolic")
    forest = hyperbolic.build_horoforest(
        args.qmax, args.delta, args.keep, rng, count=args.n + 1
    )
    rows = []
    summaries = []
    for ray_id, path in enumerate(forest):
        if len(path.points) < 2:
            continue
        trace = hyperbolic.ray_metrics(path.points)
        target = path.host.tangency_disc()
        for n, (dist, speed, z) in enumerate(
            zip(trace.dist_from_start, trace.speeds, trace.disc_trace)
        ):
            rows.append((ray_id, n, dist, speed, z.real, z.imag))
        summaries.append(
            {
                "ray": ray_id,
                "host": "inf" if path.host.at_inf else str(path.host.tangency),
                "length": len(path.points) - 1,
                "final_speed": trace.speeds[-1],
                "boundary_error": abs(trace.boundary_limit - target),
            }
        )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("ray,n,distance,speed,disc_x,disc_y\n")
            for row in rows:
                fh.write(",".join(repr(x) for x in row) + "\n")
    config = {"qmax": args.qmax, "delta": args.delta, "keep": args.keep,
              "n": args.n, "seed": seed, "out": args.out}
    _emit_report("hyperbolic", config, ["hyperbolic"], {"rays": summaries})
    return 0


def run(argv: Optional[list[str]] = None) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage error, 0 on --help
        return int(exc.code or 0)
    try:
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "embed":
            return _cmd_embed(args)
        if args.command == "test":
            return _cmd_test(args)
        if args.command == "hyperbolic":
            return _cmd_hyperbolic(args)
        raise UrtlabError(f"unknown command {args.command!r}")
    except UrtlabError as exc:
        print(f"urtlab: error: {exc}", file=sys.stderr)
        return 2


_MASS_FUNCTIONS = {
    "unit": lambda net, u, v: 1.0,
    "leaf": lambda net, u, v: 1.0 if net.degree(u) == 1 else 0.0,
}


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
