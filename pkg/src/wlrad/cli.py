"""Command-line interface.

Every command prints a JSON report (``schema_version: 1``) or, with
``--format csv``, a flat table. Exit codes::

    0 success           4 sample-size mismatch
    2 parse error       5 invariant violation
    3 infeasible coloring  6 missing labels
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .bounds import (
    GenBoundInputs,
    LossSpec,
    build_report,
    confidence_slack,
    generalization_bound,
    stability_bound,
    upper_bound_colors,
)
from .coloring import HIERARCHY, InfeasibleColoringError, get_coloring, is_finer, wl_refine
from .graph_core import (
    FAMILIES,
    GraphFormatError,
    GraphSample,
    RandomSampleSpec,
    dumps_jsonl,
    generate_sample,
    parse_jsonl,
    parse_tu_dataset,
)
from .partition import histogram_to_json, multiplicity_diff, partition_sample
from .rademacher import exact_rademacher, mc_rademacher
from .svg import render_bound_svg

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_SIZE_MISMATCH = 4
EXIT_INVARIANT = 5
EXIT_NO_LABELS = 6

# exact complexity of the two sides may differ by rounding only
_TOL = 1e-12


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def load_sample(path: str | Path) -> GraphSample:
    path = Path(path)
    try:
        if path.is_dir():
            return parse_tu_dataset(path)
        return parse_jsonl(path)
    except GraphFormatError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def color_sample(sample: GraphSample, coloring: str):
    try:
        return get_coloring(coloring)(sample)
    except InfeasibleColoringError as exc:
        raise CliError(EXIT_INFEASIBLE, str(exc)) from None


def _report(command: str, **body) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, **body}


def _csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


# -- commands -------------------------------------------------------------------
# Each returns (json report, csv rows or text, exit code).


def cmd_color(args):
    sample = load_sample(args.input)
    extra = {}
    if args.coloring == "wl":
        node_coloring, hists = wl_refine(sample)
        extra["iterations"] = node_coloring.iteration_count
    else:
        hists = color_sample(sample, args.coloring)
    part = partition_sample(hists)
    report = _report(
        "color",
        coloring=args.coloring,
        m=part.m,
        p=part.p,
        **extra,
        histograms=[histogram_to_json(h) for h in hists],
        partition=part.to_json(),
        warnings=list(sample.warnings),
    )
    cls = part.class_index()
    rows = [
        {"graph": i, "class": cls[i], "histogram": json.dumps(histogram_to_json(h), separators=(",", ":"))}
        for i, h in enumerate(hists)
    ]
    return report, _csv(rows), EXIT_OK


def cmd_bound(args):
    sample = load_sample(args.input)
    part = partition_sample(color_sample(sample, args.coloring))
    br = build_report(part, sup_l=args.sup_l)
    if br.lower_uniform is not None and not (br.lower_uniform - _TOL <= br.exact <= br.upper_colors + _TOL):
        br.notes.append("sandwich violated")
    report = _report("bound", coloring=args.coloring, **br.to_json(), partition=part.to_json())
    if args.svg:
        Path(args.svg).write_text(
            render_bound_svg(part.m, part.p, br.exact, f"{args.coloring} classes vs bounds"),
            encoding="utf-8",
        )
    code = EXIT_OK if "sandwich violated" not in br.notes else EXIT_INVARIANT
    return report, br.to_csv(), code


def cmd_estimate(args):
    sample = load_sample(args.input)
    part = partition_sample(color_sample(sample, args.coloring))
    est = mc_rademacher(part, args.trials, args.seed, args.delta, workers=args.workers)
    exact = exact_rademacher(part).value
    report = _report(
        "estimate",
        coloring=args.coloring,
        m=part.m,
        p=part.p,
        seed=args.seed,
        estimate=est.to_json(),
        exact=exact,
        inside_ci=est.contains(exact),
    )
    row = {**est.to_json(), "seed": args.seed, "exact": exact, "inside_ci": est.contains(exact)}
    return report, _csv([row]), EXIT_OK


def cmd_stability(args):
    first, second = (load_sample(p) for p in args.input)
    if first.m != second.m:
        raise CliError(EXIT_SIZE_MISMATCH, f"sample sizes differ: {first.m} vs {second.m}")
    try:
        joint = first.concat(second)
    except GraphFormatError as exc:
        raise CliError(EXIT_PARSE, f"samples cannot be colored jointly: {exc}") from None
    hists = color_sample(joint, args.coloring)
    part_s = partition_sample(hists[: first.m])
    part_t = partition_sample(hists[first.m :])
    diff = multiplicity_diff(part_s, part_t)
    bound = stability_bound(diff)
    r_s = exact_rademacher(part_s).value
    r_t = exact_rademacher(part_t).value
    gap = abs(r_s - r_t)
    holds = gap <= bound + _TOL
    notes = []
    if bound > 1.0:
        notes.append("bound exceeds 1 and is vacuous")
    report = _report(
        "stability",
        coloring=args.coloring,
        m=first.m,
        entries=diff.to_json(),
        bound=bound,
        exact_s=r_s,
        exact_s_prime=r_t,
        difference=gap,
        holds=holds,
        notes=notes,
    )
    rows = [
        {
            "key": json.dumps(e["key"], separators=(",", ":")),
            "mu_s": e["mu_s"],
            "mu_s_prime": e["mu_s_prime"],
            "eps": e["eps"],
        }
        for e in diff.to_json()
    ]
    return report, _csv(rows), EXIT_OK if holds else EXIT_INVARIANT


def cmd_hierarchy(args):
    sample = load_sample(args.input)
    rows, parts, notes = [], [], []
    for name in HIERARCHY:
        try:
            hists = get_coloring(name)(sample)
        except InfeasibleColoringError as exc:
            notes.append(f"{name} skipped: {exc}")
            continue
        part = partition_sample(hists)
        parts.append(part)
        rows.append(
            {
                "coloring": name,
                "p": part.p,
                "exact": exact_rademacher(part).value,
                "upper": upper_bound_colors(part.p, part.m),
            }
        )
    violations = []
    for k in range(1, len(rows)):
        lo, hi = rows[k - 1], rows[k]
        if hi["p"] < lo["p"]:
            violations.append(f"p decreases from {lo['coloring']} to {hi['coloring']}")
        if hi["exact"] < lo["exact"] - _TOL:
            violations.append(f"exact decreases from {lo['coloring']} to {hi['coloring']}")
        if not is_finer(parts[k], parts[k - 1]):
            violations.append(f"{hi['coloring']} does not refine {lo['coloring']}")
    report = _report(
        "hierarchy", m=sample.m, rows=rows, monotone=not violations, violations=violations, notes=notes
    )
    return report, _csv(rows), EXIT_OK if not violations else EXIT_INVARIANT


def _empirical_risk_from_predictions(path: str, sample: GraphSample, part) -> float:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read predictions {path}: {exc}") from None
    preds = data.get("predictions") if isinstance(data, dict) else data
    if not isinstance(preds, list) or len(preds) != part.p:
        raise CliError(EXIT_PARSE, f"predictions must list one value per class ({part.p} classes)")
    cls = part.class_index()
    wrong = 0
    for i, y in enumerate(sample.labels):
        guess = 1 if float(preds[cls[i]]) >= 0 else -1
        wrong += guess != y
    return wrong / sample.m


def cmd_gen_bound(args):
    sample = load_sample(args.input)
    if sample.labels is None:
        raise CliError(EXIT_NO_LABELS, "generalization bound needs binary graph labels")
    part = partition_sample(color_sample(sample, args.coloring))
    if args.predictions is not None:
        risk = _empirical_risk_from_predictions(args.predictions, sample, part)
    elif args.empirical_risk is not None:
        risk = args.empirical_risk
    else:
        raise CliError(EXIT_PARSE, "give --empirical-risk or --predictions")
    try:
        loss = LossSpec(args.loss, args.b_phi, args.b_beta, args.a, args.b, args.c, args.margin)
        gamma = loss.lipschitz()
        inputs = GenBoundInputs(risk, gamma, exact_rademacher(part).value, args.delta, part.m)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    value = generalization_bound(inputs)
    report = _report(
        "gen-bound",
        coloring=args.coloring,
        m=part.m,
        p=part.p,
        loss=args.loss,
        gamma=gamma,
        empirical_risk=risk,
        rademacher=inputs.rademacher,
        delta=args.delta,
        slack=confidence_slack(args.delta, part.m),
        bound=value,
    )
    row = {k: report[k] for k in ("m", "p", "loss", "gamma", "empirical_risk", "rademacher", "delta", "slack", "bound")}
    return report, _csv([row]), EXIT_OK


def cmd_synth(args):
    try:
        spec = RandomSampleSpec(
            family=args.family,
            count=args.count,
            seed=args.seed,
            n=args.n,
            edge_probability=args.edge_probability,
            degree=args.degree,
            lengths=tuple(args.lengths or ()),
        )
        sample = generate_sample(spec)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    return None, dumps_jsonl(sample), EXIT_OK


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wlrad", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, inputs=1):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        if inputs:
            p.add_argument("--input", required=True, nargs=inputs if inputs > 1 else None,
                           help="JSONL file or TU dataset directory")
            p.add_argument("--coloring", default="wl", choices=["trivial", "order", "degree", "wl", "exact_iso"])
        p.add_argument("--format", default="json", choices=["json", "csv"])
        p.add_argument("--output", help="write here instead of standard output")
        return p

    add("color", cmd_color, "per-graph color histograms and the sample partition")
    p = add("bound", cmd_bound, "exact complexity and every applicable bound")
    p.add_argument("--sup-l", type=float, default=None, help="sup of the l2 output norm over the sample")
    p.add_argument("--svg", help="also write a bound-vs-exact chart")
    p = add("estimate", cmd_estimate, "Monte Carlo estimate with a Hoeffding interval")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--workers", type=int, default=1)
    add("stability", cmd_stability, "compare two equal-size samples", inputs=2)
    add("hierarchy", cmd_hierarchy, "classes and complexity along trivial/degree/wl/exact_iso")
    p = add("gen-bound", cmd_gen_bound, "generalization bound for a Lipschitz loss")
    risk = p.add_mutually_exclusive_group()
    risk.add_argument("--empirical-risk", type=float)
    risk.add_argument("--predictions", help="JSON list with one prediction per class")
    p.add_argument("--loss", default="logistic_ce", choices=["logistic_ce", "rescaled_ce", "margin_tanh"])
    p.add_argument("--b-phi", type=float, default=1.0)
    p.add_argument("--b-beta", type=float, default=1.0)
    p.add_argument("--a", type=float, default=-1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--margin", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.05)
    p = add("synth", cmd_synth, "write a synthetic JSONL sample", inputs=0)
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--edge-probability", type=float, default=0.5)
    p.add_argument("--degree", type=int, default=0)
    p.add_argument("--lengths", type=int, nargs="+")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, table, code = args.func(args)
    except CliError as exc:
        print(f"wlrad {args.command}: {exc}", file=sys.stderr)
        return exc.code
    text = table if report is None or args.format == "csv" else json.dumps(report, ensure_ascii=False) + "\n"
    try:
        _emit(text, args.output)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the exit-time flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return code


if __name__ == "__main__":
    sys.exit(main())
