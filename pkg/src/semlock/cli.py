"""Command-line entry point.

Subcommands: validate, synth, pairs, select-icons, uniformity, train,
entropy, curve, heatmap, metrics, enumerate, serve.  Exit codes: 0 on
success, 1 on validation or computation failure, 2 on usage errors.
All randomness flows from --seed; identical argv + inputs produce
byte-identical artifacts (writes are temp-then-rename).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import analytics, corpus, guesswork, icons, markov, model, service
from .errors import SemlockError


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        _write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def cmd_enumerate(args) -> int:
    if args.count_only:
        _emit(f"{model.theoretical_space(args.icons, args.moves)}\n", args.out)
        return 0
    space = model.enumerate_space(args.icons, args.moves, cap=args.cap)
    _emit("".join(p.canonical + "\n" for p in space), args.out)
    return 0


def cmd_validate(args) -> int:
    records, rejections = corpus.load_corpus(args.input, args.kind, strict=args.strict)
    print(f"{len(records)} valid, {len(rejections)} rejected")
    for rej in rejections:
        print(f"line {rej.line}: {rej.reason}")
    return 1 if rejections else 0


def cmd_synth(args) -> int:
    if args.kind == "passwords":
        profile = corpus.PROFILES[args.profile](args.count, moves_per_password=args.moves)
        records = corpus.synthesize_corpus(args.seed, profile)
    elif args.kind == "pairs":
        records = corpus.synthesize_pairs(args.seed, args.count)
    else:
        records = corpus.synthesize_patterns(args.seed, args.count)
    _emit(corpus.dump_corpus(records), args.out)
    return 0


def _load_or_fail(path: str, kind: str):
    records, rejections = corpus.load_corpus(path, kind)
    if rejections:
        for rej in rejections:
            print(f"line {rej.line}: {rej.reason}", file=sys.stderr)
        raise SemlockError(f"{len(rejections)} invalid {kind} record(s) in {path}")
    return records


def cmd_pairs(args) -> int:
    observations = _load_or_fail(args.input, "pairs")
    matrix = icons.count_pairs(observations, corpus.STAGE1_ICON_IDS)
    if args.format == "json":
        _emit(_json_text({"icons": list(matrix.icons),
                          "counts": [list(r) for r in matrix.counts]}), args.out)
    else:
        lines = ["first,second,count"]
        for i, a in enumerate(matrix.icons):
            for j in range(i + 1, len(matrix.icons)):
                lines.append(f"{a},{matrix.icons[j]},{matrix.counts[i][j]}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_select_icons(args) -> int:
    observations = _load_or_fail(args.input, "pairs")
    matrix = icons.count_pairs(observations, corpus.STAGE1_ICON_IDS)
    subset, objective = icons.select_least_related(
        matrix, args.k, mode=args.mode, objective=args.objective)
    if args.format == "json":
        _emit(_json_text({"icons": list(subset), "objective": objective,
                          "mode": args.mode, "objective_kind": args.objective}), args.out)
    else:
        lines = ["icon"] + list(subset) + [f"# objective={objective} mode={args.mode}"]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _uniformity_counts(records, grid, what: str):
    if what == "icons":
        labels = sorted(grid.icon_ids)
        counts = {lab: 0 for lab in labels}
        for rec in records:
            for move in rec.password.moves:
                counts[move.moved.id] += 1
                counts[move.anchor.id] += 1
    elif what == "pairs":
        ids = sorted(grid.icon_ids)
        labels = [f"{a}+{b}" for i, a in enumerate(ids) for b in ids[i + 1:]]
        counts = {lab: 0 for lab in labels}
        for rec in records:
            for move in rec.password.moves:
                a, b = sorted((move.moved.id, move.anchor.id))
                counts[f"{a}+{b}"] += 1
    else:  # positions
        labels = [side.value for side in model.Side]
        counts = {lab: 0 for lab in labels}
        for rec in records:
            for move in rec.password.moves:
                counts[move.side.value] += 1
    return labels, [counts[lab] for lab in labels]


def cmd_uniformity(args) -> int:
    records = _load_or_fail(args.input, "passwords")
    labels, observed = _uniformity_counts(records, model.default_grid(), args.what)
    report = icons.chi_square_uniformity(observed, labels)
    if args.format == "json":
        _emit(_json_text(report.to_json_dict()), args.out)
    else:
        _emit(report.to_csv(), args.out)
    return 0


def cmd_train(args) -> int:
    records = _load_or_fail(args.input, "passwords")
    grid = model.default_grid()
    alphabet = [m.token for m in model.move_alphabet(grid.icons)]
    trained = markov.train_markov(markov.sequences_from_records(records), alphabet,
                                  delta=args.delta)
    _emit(_json_text(trained.to_json_dict()), args.out)
    return 0


def _alphas(arg: str) -> list[float]:
    return [float(a) for a in arg.split(",") if a]


def _ranked_from_args(args) -> guesswork.RankedDistribution:
    if args.uniform:
        return guesswork.RankedDistribution.uniform(args.uniform)
    trained = markov.MarkovModel.load(args.model)
    icon_ids = sorted({tok.split(">")[0] for tok in trained.alphabet})
    icon_set = [model.IconId(icon_id, i) for i, icon_id in enumerate(icon_ids)]
    space = model.enumerate_space_for(icon_set, args.moves, cap=args.cap)
    return markov.rank_space(trained, space, cap=args.cap)


def cmd_entropy(args) -> int:
    dist = _ranked_from_args(args)
    reports = [guesswork.guesswork_report(dist, alpha) for alpha in _alphas(args.alpha)]
    if args.format == "json":
        _emit(_json_text([r.to_json_dict() for r in reports]), args.out)
    else:
        _emit(guesswork.reports_to_csv(reports), args.out)
    return 0


def cmd_curve(args) -> int:
    dist = _ranked_from_args(args)
    max_attempts = args.max_attempts or len(dist)
    curve = guesswork.guessing_curve(dist, max_attempts)
    if args.format == "json":
        _emit(_json_text([{"attempts": a, "success_pct": p} for a, p in curve]), args.out)
    else:
        _emit(guesswork.curve_to_csv(curve), args.out)
    return 0


def cmd_heatmap(args) -> int:
    records = _load_or_fail(args.input, args.kind)
    grid = model.default_grid() if args.kind == "passwords" else None
    hm = analytics.endpoint_heatmap(records, grid, args.which)
    if args.format == "json":
        _emit(_json_text(hm.to_json_dict()), args.out)
    else:
        _emit(hm.to_csv(), args.out)
    return 0


def cmd_metrics(args) -> int:
    events = _load_or_fail(args.input, "events")
    metrics = analytics.usability_metrics(events)
    if args.format == "json":
        _emit(_json_text({t: m.to_json_dict() for t, m in metrics.items()}), args.out)
    else:
        _emit(analytics.metrics_to_csv(metrics), args.out)
    return 0


def cmd_serve(args) -> int:
    config = service.load_config(args.config, data_dir=args.data_dir)
    if args.static:
        config.static_dir = Path(args.static)

    import uvicorn

    uvicorn.run(service.create_app(config), host=args.host, port=args.port,
                log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semlock",
                                     description="Semantic lock toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="materialize or count the password space")
    p.add_argument("--icons", type=int, required=True)
    p.add_argument("--moves", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--cap", type=int, default=model.DEFAULT_SPACE_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("validate", help="validate a JSON Lines corpus")
    p.add_argument("input")
    p.add_argument("--kind", choices=corpus.CORPUS_KINDS, required=True)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    p.add_argument("--kind", choices=("passwords", "pairs", "patterns"), required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=sorted(corpus.PROFILES), default="uniform")
    p.add_argument("--moves", type=int, default=2, help="moves per password")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pairs", help="co-occurrence matrix from a pair corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("select-icons", help="pick the least related icon subset")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    p.add_argument("--objective", choices=("sum", "max"), default="sum")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_select_icons)

    p = sub.add_parser("uniformity", help="chi-square uniformity of password choices")
    p.add_argument("--input", required=True)
    p.add_argument("--what", choices=("icons", "pairs", "positions"), required=True)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_uniformity)

    p = sub.add_parser("train", help="train a move-bigram model from passwords")
    p.add_argument("--input", required=True)
    p.add_argument("--delta", type=float, default=markov.DEFAULT_SMOOTHING)
    p.add_argument("--out")
    p.set_defaults(func=cmd_train)

    for name, helptext in (("entropy", "alpha-guesswork table"),
                           ("curve", "cumulative guessing curve")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--model", help="trained model JSON")
        p.add_argument("--uniform", type=int, help="uniform distribution of this size")
        p.add_argument("--moves", type=int, default=2)
        p.add_argument("--cap", type=int, default=model.DEFAULT_SPACE_CAP)
        p.add_argument("--format", choices=("json", "csv"), default="csv")
        p.add_argument("--out")
        if name == "entropy":
            p.add_argument("--alpha", default="0.1,0.2,0.5")
            p.set_defaults(func=cmd_entropy)
        else:
            p.add_argument("--max-attempts", type=int)
            p.set_defaults(func=cmd_curve)

    p = sub.add_parser("heatmap", help="start/end point heatmap")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("patterns", "passwords"), required=True)
    p.add_argument("--which", choices=("start", "end"), required=True)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("metrics", help="usability metrics from an event log")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("serve", help="run the authentication service")
    p.add_argument("--config")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8470)
    p.add_argument("--data-dir")
    p.add_argument("--static")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "model", None) is None and getattr(args, "uniform", None) is None \
            and args.command in ("entropy", "curve"):
        parser.error(f"{args.command} needs --model or --uniform")
    try:
        return args.func(args)
    except SemlockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
