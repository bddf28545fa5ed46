"""Command line entry point: ``aacplan <subcommand> [scenario] [flags]``.

Exit codes: 0 on success, 1 on domain errors (no channel, uncoverable
need, ...), 2 on unreadable or invalid scenarios.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .adapt import AdaptiveEstimate, AdaptMode, estimate, half_width, observe
from .channel import plan_channel, reverse_channel
from .checkpoint import analytic_clear_prob, monte_carlo, semantic_attack_margin
from .elicit import cover_exact, cover_greedy, make_cluster, marginal_x, marginal_y
from .errors import AACError, NoChannel, ParseError, Uncoverable, ValidationError
from .hub import reachability_matrix, route
from .register import Category
from .rng import DEFAULT_SEED, CounterStream
from .scenario import build_world, parse_scenario
from .transform import builtin_topk_table, miscommunication


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(args, filename: str, text: str):
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text, encoding="utf-8")


def _write(args, filename: str, text: str):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text, encoding="utf-8")


def _world(args):
    if args.scenario is None:
        raise ValidationError("<args>", "this subcommand needs a scenario file")
    return build_world(parse_scenario(args.scenario))


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _plan_doc(plan, world):
    return plan.to_dict(world.catalog)


def _plan_csv(plan, world):
    rows = [["stage", "id", "source", "target", "mode", "accuracy", "latency", "cost"]]
    for i, sid in enumerate(plan.stages):
        t = world.catalog[sid]
        rows.append([i, t.id, t.source, t.target, t.mode.value, repr(t.accuracy), repr(t.latency), repr(t.cost)])
    return _csv(rows)


def cmd_validate(args):
    _world(args)
    return 0


def cmd_plan(args):
    w = _world(args)
    sender, receiver = w.profile(args.sender), w.profile(args.receiver)
    fn = reverse_channel if args.reverse else plan_channel
    plan = fn(sender, receiver, w.catalog, w.objective)
    if args.format == "csv":
        _emit(args, "plan.csv", _plan_csv(plan, w))
    else:
        _emit(args, "plan.json", _dumps(_plan_doc(plan, w)))
    return 0


def cmd_route(args):
    w = _world(args)
    plan = route(w.team(), args.from_id, args.to_id, w.catalog, w.objective)
    if args.format == "csv":
        _emit(args, "route.csv", _plan_csv(plan, w))
    else:
        _emit(args, "route.json", _dumps(_plan_doc(plan, w)))
    return 0


def _matrix_doc(m):
    return {"ids": list(m.ids),
            "entries": [{"from": i, "to": j, "accuracy": m.entries[(i, j)][0], "stages": m.entries[(i, j)][1]}
                        for i in m.ids for j in m.ids if (i, j) in m.entries]}


def cmd_matrix(args):
    w = _world(args)
    m = reachability_matrix(w.team(), w.catalog, w.objective)
    if args.format == "json":
        _emit(args, "matrix.json", _dumps(_matrix_doc(m)))
    else:
        _emit(args, "matrix.csv", m.to_csv())
    return 0


def _split(s):
    return [x.strip() for x in s.split(",") if x.strip()] if s else []


def _cluster_doc(grid, cluster, solver):
    return {
        "solver": solver,
        "needs": sorted(cluster.needs),
        "selected": list(cluster.selected),
        "cells": cluster.cell_names(),
        "total_cost": cluster.total_cost,
        "marginal_x": [{"technology": s.technology, "name": s.name, "covered_rows": list(s.covered_rows),
                        "cost": s.cost, "cost_share": s.cost_share} for s in marginal_x(grid, cluster)],
        "marginal_y": [{"disability": s.disability, "name": s.name, "technologies": list(s.technologies),
                        "max_score": s.max_score} for s in marginal_y(grid, cluster)],
    }


def _elicit(grid, needs, exact=False, select=None):
    if select:
        return _cluster_doc(grid, make_cluster(grid, needs, select), "manual")
    cluster = (cover_exact if exact else cover_greedy)(grid, needs)
    return _cluster_doc(grid, cluster, "exact" if exact else "greedy")


def cmd_elicit(args):
    w = _world(args)
    grid = w.grid()
    needs = _split(args.needs) or list(grid.row_labels)
    try:
        doc = _elicit(grid, needs, args.exact, _split(args.select))
    except KeyError as exc:
        raise ValidationError("--needs/--select", str(exc)) from None
    _emit(args, "elicit.json", _dumps(doc))
    return 0


def cmd_adapt_demo(args):
    e = AdaptiveEstimate("demo", "demo", AdaptMode.Online, args.prior)
    stream = CounterStream(args.seed, 0)
    rows = [["step", "outcome", "successes", "trials", "estimate", "half_width"]]
    for step in range(1, args.n + 1):
        ok = stream.random() < args.true_accuracy
        e = observe(e, ok)
        if step % args.every == 0 or step == args.n:
            rows.append([step, int(ok), e.successes, e.trials, repr(estimate(e)), repr(half_width(e))])
    _emit(args, "adapt.csv", _csv(rows))
    return 0


def _checkpoint_doc(w, n, seed, workers):
    pipeline = w.pipeline()
    trav = w.traveller()
    rep = monte_carlo(pipeline, trav, w.catalog, n, seed, workers=workers)
    extra = {
        "analytic_clear_prob": analytic_clear_prob(pipeline, trav, w.catalog),
        "risk_by_point": {str(p.index): semantic_attack_margin(p, trav, w.catalog) for p in pipeline},
    }
    return rep, rep.to_json(**extra)


def cmd_simulate_checkpoint(args):
    w = _world(args)
    cp = w.scenario.checkpoint
    if cp is None:
        raise ValidationError("checkpoint", "scenario has no checkpoint section")
    n = args.n if args.n is not None else cp.n
    seed = args.seed if args.seed is not None else cp.seed
    rep, text = _checkpoint_doc(w, n, seed, args.workers)
    _emit(args, "checkpoint_report.json", text)
    _write(args, "checkpoint_points.csv", rep.points_csv())
    return 0


def cmd_report(args):
    w = _world(args)
    scn = w.scenario
    doc = {
        "register": {"size": len(w.register), "B": len(w.register.by_category(Category.B)),
                     "I": len(w.register.by_category(Category.I))},
        "catalog": [{"id": t.id, "source": t.source, "target": t.target, "mode": t.mode.value,
                     "accuracy": t.accuracy, "miscommunication": miscommunication(t)} for t in w.catalog],
        "topk_table": [{"model": r.model, "dataset": r.dataset, "top1": r.top1, "top5": r.top5, "top10": r.top10}
                       for r in builtin_topk_table()],
    }
    plans = []
    for a in w.profiles.values():
        for b in w.profiles.values():
            if a.id == b.id:
                continue
            try:
                p = plan_channel(a, b, w.catalog, w.objective)
                plans.append({"sender": a.id, "receiver": b.id, "plan": _plan_doc(p, w)})
            except NoChannel:
                plans.append({"sender": a.id, "receiver": b.id, "plan": None})
    doc["plans"] = plans
    if scn.team:
        doc["matrix"] = _matrix_doc(reachability_matrix(w.team(), w.catalog, w.objective))
    if scn.grid is not None:
        grid = w.grid()
        needs = _split(args.needs) or list(grid.row_labels)
        try:
            doc["elicit"] = {"greedy": _elicit(grid, needs), "exact": _elicit(grid, needs, exact=True)}
        except Uncoverable as exc:
            doc["elicit"] = {"error": str(exc)}
    if scn.adaptation:
        doc["adaptation"] = [{"user": u, "transformation": t, "mode": e.mode.value, "estimate": estimate(e)}
                             for (u, t), e in sorted(w.estimates().items())]
    if scn.checkpoint is not None:
        n = args.n if args.n is not None else scn.checkpoint.n
        seed = args.seed if args.seed is not None else scn.checkpoint.seed
        _, text = _checkpoint_doc(w, n, seed, args.workers)
        doc["checkpoint"] = json.loads(text)
    _emit(args, "report.json", _dumps(doc))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aacplan", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"aacplan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, scenario=True, help=None):
        p = sub.add_parser(name, help=help)
        if scenario:
            p.add_argument("scenario", nargs="?" if scenario == "optional" else None)
        p.add_argument("--out", metavar="DIR", help="also write outputs into DIR")
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, help="parse and validate a scenario")

    p = add("plan", cmd_plan, help="plan the best channel between two profiles")
    p.add_argument("--sender", required=True)
    p.add_argument("--receiver", required=True)
    p.add_argument("--reverse", action="store_true", help="plan the reply direction")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("route", cmd_route, help="route one team pair through the hub")
    p.add_argument("--from", dest="from_id", required=True)
    p.add_argument("--to", dest="to_id", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("matrix", cmd_matrix, help="all-pairs reachability over the team")
    p.add_argument("--format", choices=("json", "csv"), default="csv")

    p = add("elicit", cmd_elicit, help="select technologies covering the needs")
    p.add_argument("--needs", help="comma separated row labels (default: all rows)")
    p.add_argument("--exact", action="store_true", help="exhaustive solver instead of greedy")
    p.add_argument("--select", help="evaluate an explicit comma separated technology selection")

    p = add("adapt-demo", cmd_adapt_demo, scenario="optional", help="online estimate trajectory as CSV")
    p.add_argument("--true-accuracy", type=float, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--prior", type=float, default=0.5)
    p.add_argument("--every", type=int, default=1, help="emit every k-th step")

    for name, fn in (("simulate-checkpoint", cmd_simulate_checkpoint), ("report", cmd_report)):
        p = add(name, fn)
        p.add_argument("--n", type=int, help="trial count (default: scenario value)")
        p.add_argument("--seed", type=int, help="master seed (default: scenario value)")
        p.add_argument("--workers", type=int, default=1)
        if name == "report":
            p.add_argument("--needs")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"aacplan: {exc}", file=sys.stderr)
        return 2
    except AACError as exc:
        print(f"aacplan: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
