"""Command-line entry point.

    gnnlab gen --corpus default --out runs/corpus
    gnnlab wl --test fwl2 --a corpus/c6.json --b corpus/2c3.json
    gnnlab sep --corpus default --family fgnn2 --seeds 10
    gnnlab qap-train --config train.json --out runs/qap
    gnnlab qap-eval --checkpoint runs/qap/checkpoint.json
    gnnlab qap-sweep --checkpoints runs/a/checkpoint.json runs/b/checkpoint.json
    gnnlab grad-check

Exit codes: 0 success, 1 bad input, 2 property violation, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from pydantic import ValidationError

from gnnlab.config import settings
from gnnlab.errors import InputError, LabError, PropertyViolation
from gnnlab.logging_.schemas import RunLogEvent
from gnnlab.logging_.structured_logger import get_logger, log_event
from gnnlab.models import (
    CorpusSpec,
    GraphKind,
    ModelFamily,
    ModelSpec,
    TestName,
    TrainConfig,
    Variant,
)

logger = get_logger("gnnlab.cli")

EXIT_OK = 0


class _Parser(argparse.ArgumentParser):
    """Usage errors raise InputError instead of exiting with status 2."""

    def error(self, message: str):
        raise InputError(f"{self.prog}: {message}")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"config {path} must hold a JSON object")
    return doc


def _echo_config(out: Path, command: str, resolved: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    doc = {"command": command, "settings": settings.model_dump(mode="json"), "config": resolved}
    (out / "resolved_config.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# --- gen -------------------------------------------------------------------------


def cmd_gen(args, cfg: dict) -> tuple[int, dict]:
    from gnnlab.graph.generators import gen_erdos_renyi, gen_random_regular
    from gnnlab.graph.tensor import save_graph
    from gnnlab.separation.corpus import build_corpus, export_corpus
    from gnnlab.separation.hard_pairs import get_hard_pair

    out = Path(args.out)
    if args.corpus:
        if args.corpus != "default":
            raise InputError(f"unknown corpus {args.corpus!r}; only 'default' can be generated")
        spec = CorpusSpec(**{"seed": args.seed, **cfg.get("corpus", {})})
        _echo_config(out, "gen", {"corpus": spec.model_dump(mode="json")})
        corpus = build_corpus(spec)
        export_corpus(corpus, out / "corpus")
        print(f"wrote {len(corpus)} pairs to {out / 'corpus'}")
        return EXIT_OK, {"pairs": len(corpus)}

    if args.hard_pair:
        pair = get_hard_pair(args.hard_pair)
        _echo_config(out, "gen", {"hard_pair": pair.name})
        a, b = pair.graphs()
        save_graph(a, out / f"{pair.name}_a.json")
        save_graph(b, out / f"{pair.name}_b.json")
        print(f"wrote {pair.name} to {out}")
        return EXIT_OK, {"hard_pair": pair.name}

    if args.n is None:
        raise InputError("gen needs --corpus, --hard-pair or --n")
    resolved = {"kind": args.kind, "n": args.n, "p": args.p, "d": args.d, "seed": args.seed}
    _echo_config(out, "gen", resolved)
    if args.kind == GraphKind.REGULAR.value:
        G = gen_random_regular(args.n, args.d, args.seed)
    else:
        G = gen_erdos_renyi(args.n, args.p, args.seed)
    path = out / "graph.json"
    save_graph(G, path)
    print(f"wrote {path} (n={G.n}, edges={len(G.edges())})")
    return EXIT_OK, resolved


# --- wl --------------------------------------------------------------------------


def cmd_wl(args, cfg: dict) -> tuple[int, dict]:
    from gnnlab.graph.tensor import load_graph
    from gnnlab.wl.compare import compare, get_test

    out = Path(args.out)
    resolved = {"test": args.test, "a": args.a, "b": args.b, "max_rounds": args.max_rounds}
    _echo_config(out, "wl", resolved)
    a, b = load_graph(args.a), load_graph(args.b)
    result = compare(get_test(args.test, settings.wl_max_entries), a, b, args.max_rounds)
    doc = {
        "test": result.test,
        "separated": result.separated,
        "rounds_a": result.rounds_a,
        "rounds_b": result.rounds_b,
        "signature_a": result.signature_a,
        "signature_b": result.signature_b,
    }
    (out / "wl.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"separated={str(result.separated).lower()}")
    print(f"signature_a={result.signature_a} rounds_a={result.rounds_a}")
    print(f"signature_b={result.signature_b} rounds_b={result.rounds_b}")
    return EXIT_OK, {"separated": result.separated}


# --- sep -------------------------------------------------------------------------


def cmd_sep(args, cfg: dict) -> tuple[int, dict]:
    from gnnlab.separation.corpus import resolve_corpus
    from gnnlab.separation.report import (
        assert_sound,
        completeness_rate,
        default_template,
        expected_mismatches,
        family_bound,
        gnn_separation_report,
        soundness_violations,
        wl_separation_report,
    )

    out = Path(args.out)
    corpus_spec = CorpusSpec(**{"seed": args.seed, **cfg.get("corpus", {})})
    try:
        tests = [TestName(t) for t in args.tests.split(",") if t] if args.tests else []
    except ValueError as exc:
        raise InputError(f"unknown test in --tests {args.tests!r}") from exc
    template = None
    if args.family != "none":
        template = default_template(args.family, args.variant)
        if "model" in cfg:
            template = ModelSpec(**{**template.model_dump(), **cfg["model"]})
        bound = family_bound(template)
        if bound not in tests:
            tests.append(bound)
    if not tests:
        raise InputError("sep needs at least one test or a GNN family")

    seeds = args.seeds if args.seeds is not None else settings.separation_seeds
    tol = args.tol if args.tol is not None else settings.separation_tol
    _echo_config(
        out,
        "sep",
        {
            "corpus": args.corpus,
            "corpus_spec": corpus_spec.model_dump(mode="json"),
            "tests": [t.value for t in tests],
            "model": template.model_dump(mode="json") if template else None,
            "seeds": seeds,
            "tol": tol,
        },
    )

    corpus = resolve_corpus(args.corpus, corpus_spec)
    wl_report = wl_separation_report(corpus, tests, settings.wl_max_entries)
    wl_report.to_csv(out / "wl_report.csv")
    summary: dict = {"pairs": len(corpus), "tests": [t.value for t in tests]}

    mismatches = expected_mismatches(corpus, wl_report)
    summary["expected_mismatches"] = [list(m) for m in mismatches]
    for name in wl_report.discriminators:
        print(f"{name}: {len(wl_report.separated_ids(name))}/{len(corpus)} pairs separated")

    report = wl_report
    if template is not None:
        gnn_report = gnn_separation_report(corpus, template, seeds, tol, seed=args.seed)
        gnn_report.to_csv(out / "gnn_report.csv")
        report = wl_report.merge(gnn_report)
        bound = family_bound(template).value
        violations = soundness_violations(gnn_report, wl_report, bound)
        rate = completeness_rate(gnn_report, wl_report, bound)
        summary.update(
            {"discriminator": gnn_report.discriminators[0], "bound": bound, "completeness": rate}
        )
        summary["soundness_violations"] = violations
        print(f"{gnn_report.discriminators[0]}: completeness vs {bound} = {rate:.3f}")
        print(f"soundness violations: {len(violations)}")

    report.to_csv(out / "report.csv")
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    args.verdict_rows = report.rows

    if mismatches:
        raise PropertyViolation(f"verdicts disagree with recorded expectations: {mismatches}")
    if template is not None:
        assert_sound(gnn_report, wl_report, family_bound(template).value)
    return EXIT_OK, summary


# --- qap -------------------------------------------------------------------------


def _train_config(args, cfg: dict) -> TrainConfig:
    overrides = dict(cfg.get("train", cfg))
    overrides.setdefault("seed", args.seed)
    for flag, key in (
        ("epochs", "epochs"),
        ("n_train", "n_train"),
        ("n_val", "n_val"),
        ("n_test", "n_test"),
        ("noise", "train_noise"),
        ("graph_kind", "graph_kind"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "full_scale", False):
        return TrainConfig.full_scale(**overrides)
    return TrainConfig(**overrides)


def cmd_qap_train(args, cfg: dict) -> tuple[int, dict]:
    from gnnlab.qap.training import train

    out = Path(args.out)
    config = _train_config(args, cfg)
    _echo_config(out, "qap-train", config.model_dump(mode="json"))
    result = train(config, out)
    print(f"best val accuracy {result.best_val_accuracy:.4f} at epoch {result.best_epoch}")
    print(f"checkpoint: {result.checkpoint}")
    return EXIT_OK, {"best_val_accuracy": result.best_val_accuracy, "epoch": result.best_epoch}


def _decoders(value: str) -> list[str]:
    return ["lap", "argmax"] if value == "both" else [value]


def _test_sets(config: TrainConfig) -> dict:
    from gnnlab.qap.dataset import make_split

    levels = config.eval_noise_levels
    return {level: make_split(config, "test", level, config.n_test) for level in levels}


def cmd_qap_eval(args, cfg: dict) -> tuple[int, dict]:
    from gnnlab.qap.evaluation import evaluate, load_matcher

    out = Path(args.out)
    config = _train_config(args, cfg)
    spec, params, _ = load_matcher(args.checkpoint)
    data = config.model_dump(mode="json")
    _echo_config(
        out, "qap-eval", {"checkpoint": args.checkpoint, "decoder": args.decoder, "data": data}
    )
    dataset = _test_sets(config)
    frame = evaluate((spec, params), dataset, _decoders(args.decoder), baseline=args.baseline)
    frame.to_csv(out / "eval.csv", index=False, float_format="%.6f")
    print(frame.to_string(index=False))
    return EXIT_OK, {"rows": len(frame)}


def cmd_qap_sweep(args, cfg: dict) -> tuple[int, dict]:
    from gnnlab.qap.evaluation import cross_noise_sweep

    out = Path(args.out)
    missing = [p for p in args.checkpoints if not Path(p).is_file()]
    if missing:
        raise InputError(f"checkpoints not found: {missing}")
    config = _train_config(args, cfg)
    data = config.model_dump(mode="json")
    _echo_config(
        out, "qap-sweep", {"checkpoints": args.checkpoints, "decoder": args.decoder, "data": data}
    )
    dataset = _test_sets(config)
    frame = cross_noise_sweep(args.checkpoints, dataset, args.decoder)
    frame.to_csv(out / "sweep.csv", index=False, float_format="%.6f")
    print(frame.to_string(index=False))
    return EXIT_OK, {"checkpoints": len(args.checkpoints)}


# --- grad-check ------------------------------------------------------------------


def cmd_grad_check(args, cfg: dict) -> tuple[int, dict]:
    from gnnlab.gradsuite import GRAD_TOL, grad_suite

    out = Path(args.out)
    _echo_config(out, "grad-check", {"seed": args.seed, "points": args.points})
    errors = grad_suite(seed=args.seed, points=args.points)
    lines = ["check,max_rel_error"]
    for name, err in errors.items():
        print(f"{name:32s} {err:.3e}")
        lines.append(f"{name},{err:.6e}")
    (out / "grad_check.csv").write_text("\n".join(lines) + "\n")
    failing = [name for name, err in errors.items() if not err < GRAD_TOL]
    if failing:
        raise PropertyViolation(f"gradient checks above {GRAD_TOL}: {failing}")
    return EXIT_OK, {"checks": len(errors)}


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.default_seed)
    common.add_argument("--out", default=settings.out_dir, help="artifact directory")
    common.add_argument("--config", default=None, help="JSON config file")

    parser = _Parser(prog="gnnlab", description="GNN expressivity lab")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", parents=[common], help="generate graphs or the default corpus")
    gen.add_argument("--corpus", default=None, help="'default' exports the standard corpus")
    gen.add_argument("--hard-pair", default=None)
    gen.add_argument("--kind", choices=[k.value for k in GraphKind], default="erdos_renyi")
    gen.add_argument("--n", type=int, default=None)
    gen.add_argument("--p", type=float, default=0.3)
    gen.add_argument("--d", type=int, default=3)
    gen.set_defaults(handler=cmd_gen)

    wl = sub.add_parser("wl", parents=[common], help="compare two graph files with a WL test")
    wl.add_argument("--test", choices=[t.value for t in TestName], required=True)
    wl.add_argument("--a", required=True)
    wl.add_argument("--b", required=True)
    wl.add_argument("--max-rounds", type=int, default=settings.wl_max_rounds)
    wl.set_defaults(handler=cmd_wl)

    sep = sub.add_parser("sep", parents=[common], help="separation reports on a corpus")
    sep.add_argument("--corpus", default="default", help="'default' or a corpus directory")
    sep.add_argument("--family", choices=[f.value for f in ModelFamily] + ["none"], default="none")
    sep.add_argument("--variant", choices=[v.value for v in Variant], default="invariant")
    sep.add_argument("--tests", default="vertex,wl2,fwl2", help="comma-separated WL tests")
    sep.add_argument("--seeds", type=int, default=None)
    sep.add_argument("--tol", type=float, default=None)
    sep.set_defaults(handler=cmd_sep)

    data = _Parser(add_help=False)
    data.add_argument("--epochs", type=int, default=None)
    data.add_argument("--n-train", dest="n_train", type=int, default=None)
    data.add_argument("--n-val", dest="n_val", type=int, default=None)
    data.add_argument("--n-test", dest="n_test", type=int, default=None)
    data.add_argument("--noise", type=float, default=None, help="training noise level")
    data.add_argument("--graph-kind", choices=[k.value for k in GraphKind], default=None)
    data.add_argument("--full-scale", action="store_true")

    qt = sub.add_parser("qap-train", parents=[common, data], help="train the siamese matcher")
    qt.set_defaults(handler=cmd_qap_train)

    qe = sub.add_parser("qap-eval", parents=[common, data], help="evaluate a checkpoint")
    qe.add_argument("--checkpoint", required=True)
    qe.add_argument("--decoder", choices=["lap", "argmax", "both"], default="lap")
    qe.add_argument("--baseline", action="store_true", help="add the degree-profile baseline")
    qe.set_defaults(handler=cmd_qap_eval)

    qs = sub.add_parser("qap-sweep", parents=[common, data], help="cross-noise accuracy matrix")
    qs.add_argument("--checkpoints", nargs="+", required=True)
    qs.add_argument("--decoder", choices=["lap", "argmax"], default="lap")
    qs.set_defaults(handler=cmd_qap_sweep)

    gc = sub.add_parser("grad-check", parents=[common], help="finite-difference gradient suite")
    gc.add_argument("--points", type=int, default=10)
    gc.set_defaults(handler=cmd_grad_check)
    return parser


def _record(command: str, args, exit_code: int, summary: dict, elapsed_ms: float) -> None:
    from gnnlab.storage.sqlite_store import RunStore

    try:
        store = RunStore(settings.db_path)
        run_id = store.save_run(command, args.seed, str(args.out), exit_code, summary, elapsed_ms)
        rows = getattr(args, "verdict_rows", None)
        if rows:
            store.save_verdicts(run_id, rows)
    except Exception as exc:  # the ledger never decides the exit code
        logger.warning("could not record run: %s", exc)


def main(argv: list[str] | None = None) -> int:
    started = time.perf_counter()
    command, args = "unknown", None
    summary: dict = {}
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        cfg = _load_config(args.config)
        exit_code, summary = args.handler(args, cfg)
    except ValidationError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        exit_code = InputError.exit_code
    except LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        exit_code = exc.exit_code
    except Exception as exc:
        logger.exception("unexpected failure")
        print(f"error: {exc}", file=sys.stderr)
        exit_code = LabError.exit_code

    elapsed_ms = round((time.perf_counter() - started) * 1000, 2)
    out_dir = str(args.out) if args is not None else ""
    log_event(RunLogEvent.from_run(command, exit_code, out_dir, elapsed_ms), "gnnlab.cli", "run")
    if args is not None:
        _record(command, args, exit_code, summary, elapsed_ms)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
