"""Command-line workbench.

Subcommands: ``run`` (streaming estimator), ``generate`` (edge streams),
``verify-lemma`` (empirical property suites), ``compare``
(estimator-vs-oracle experiment runs). Outputs are JSON or CSV;
identical (input, seed, config) gives identical output bytes.

Exit codes for ``run``: 0 numeric result, 3 overflow outcome.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness, streamio
from .oblivious import default_alg, load_config
from .sketcher import run_stream

EXIT_OK = 0
EXIT_OVERFLOW = 3


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_run(args) -> int:
    n, edges = streamio.parse_stream(args.input)
    alg = load_config(args.oblivious_config) if args.oblivious_config else default_alg()
    report = run_stream(
        n,
        edges,
        args.epsilon,
        alg=alg,
        seed=args.seed,
        scale=args.scale,
        slack=args.slack,
        mbound_exp=args.mbound_exp,
    )
    _write(args.output, harness.json_dumps(report.to_json_dict()))
    return EXIT_OVERFLOW if report.outcome == "overflow" else EXIT_OK


def _cmd_generate(args) -> int:
    params = {}
    if args.family == "planted-dicut":
        params = {"p_in": args.p_in, "p_out": args.p_out}
    elif args.family == "star":
        params = {"direction": args.direction}
    elif args.family == "power-law":
        params = {"alpha": args.alpha}
    elif args.family == "k-cycle-union":
        params = {"cycles": args.cycles if args.cycles else max(1, args.m // args.n)}
    edges = harness.generate_edges(args.family, args.n, args.m, args.seed, **params)
    edges = harness.order_edges(edges, args.ordering, args.seed)
    comment = f"family={args.family} n={args.n} m={len(edges)} seed={args.seed} ordering={args.ordering}"
    _write(args.output, streamio.format_stream(args.n, edges, comment))
    return EXIT_OK


def _cmd_verify_lemma(args) -> int:
    options = {"seed": args.seed}
    if args.n is not None:
        options["n"] = args.n
    if args.trials is not None:
        options["trials"] = args.trials
    if args.epsilon is not None:
        options["epsilon"] = args.epsilon
    report = harness.verify_lemma(args.name, **options)
    _write(args.output, harness.json_dumps(report))
    return EXIT_OK if report.get("passed") else 1


def _cmd_compare(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = harness.ExperimentConfig.from_dict(json.load(fh))
    _write(args.output, harness.compare(config))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dicut-sketch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the streaming estimator on an edge stream")
    run.add_argument("--input", required=True, help="edge-stream file")
    run.add_argument("--epsilon", type=float, required=True)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--scale", type=float, default=1.0, help="desk-scale multiplier on rho")
    run.add_argument("--oblivious-config", default=None, help="JSON {thresholds, probabilities}")
    run.add_argument("--slack", type=float, default=None, help="final subtraction (default epsilon/4)")
    run.add_argument("--mbound-exp", type=float, default=2.0, help="a-priori bound m < n^C")
    run.add_argument("--output", default="-")
    run.set_defaults(func=_cmd_run)

    gen = sub.add_parser("generate", help="generate an edge stream")
    gen.add_argument("--family", required=True, choices=harness.GENERATOR_FAMILIES)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--ordering", default="as-generated", choices=harness.ORDERINGS)
    gen.add_argument("--p-in", type=float, default=0.05)
    gen.add_argument("--p-out", type=float, default=0.75)
    gen.add_argument("--direction", default="out", choices=("out", "in"))
    gen.add_argument("--alpha", type=float, default=2.5)
    gen.add_argument("--cycles", type=int, default=0)
    gen.add_argument("--output", default="-")
    gen.set_defaults(func=_cmd_generate)

    ver = sub.add_parser("verify-lemma", help="run an empirical lemma suite")
    ver.add_argument("name", choices=sorted(harness.LEMMA_REGISTRY))
    ver.add_argument("--n", type=int, default=None)
    ver.add_argument("--trials", type=int, default=None)
    ver.add_argument("--epsilon", type=float, default=None)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--output", default="-")
    ver.set_defaults(func=_cmd_verify_lemma)

    cmp_ = sub.add_parser("compare", help="estimator-vs-oracle comparison runs")
    cmp_.add_argument("--config", required=True, help="ExperimentConfig JSON file")
    cmp_.add_argument("--output", default="-")
    cmp_.set_defaults(func=_cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
