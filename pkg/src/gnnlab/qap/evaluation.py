"""Accuracy of a trained matcher across noise levels."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from pathlib import Path

import numpy as np

from gnnlab.autodiff.checkpoint import load_checkpoint
from gnnlab.autodiff.tensor import Tensor
from gnnlab.errors import InputError
from gnnlab.models import ModelSpec
from gnnlab.qap.dataset import MatchInstance
from gnnlab.qap.matching import degree_profile_baseline, hungarian_lap, node_accuracy, row_argmax
from gnnlab.qap.siamese import matching_loss, siamese_batch

DECODERS = ("lap", "argmax")
EVAL_COLUMNS = ["noise", "mean_acc", "stderr", "n_instances", "decoder"]


def decode(S: np.ndarray, method: str = "lap"):
    if method == "lap":
        return hungarian_lap(S)
    if method == "argmax":
        return row_argmax(S)
    raise InputError(f"unknown decoder {method!r}; choose from {DECODERS}")


def score_instances(
    spec: ModelSpec,
    params: Mapping[str, Tensor],
    instances: Sequence[MatchInstance],
    batch_size: int = 32,
    method: str = "lap",
) -> tuple[float, list[float]]:
    """Mean matching loss over all real rows and the per-instance accuracies."""
    if not instances:
        raise InputError("no instances to score")
    loss_total, rows, accuracies = 0.0, 0, []
    for start in range(0, len(instances), batch_size):
        batch = instances[start : start + batch_size]
        S, mask = siamese_batch(spec, params, batch)
        count = int(mask.sum())
        loss_total += matching_loss(S, [inst.truth for inst in batch], mask).item() * count
        rows += count
        for k, inst in enumerate(batch):
            scores = S.data[k, : inst.n, : inst.n]
            accuracies.append(node_accuracy(decode(scores, method), inst.truth))
    return loss_total / rows, accuracies


def load_matcher(checkpoint: str | Path) -> tuple[ModelSpec, dict[str, Tensor], dict]:
    params, spec_doc, meta = load_checkpoint(checkpoint)
    try:
        spec = ModelSpec.model_validate(spec_doc)
    except ValueError as exc:
        raise InputError(f"checkpoint {checkpoint} holds an invalid model spec: {exc}") from exc
    return spec, params, meta


def _summarize(records: list[dict]):
    import pandas as pd

    frame = pd.DataFrame(records, columns=["noise", "accuracy", "decoder"])
    grouped = frame.groupby(["decoder", "noise"], sort=True)["accuracy"]
    summary = grouped.agg(mean_acc="mean", stderr="sem", n_instances="count").reset_index()
    summary["stderr"] = summary["stderr"].fillna(0.0)
    return summary[EVAL_COLUMNS].sort_values(["decoder", "noise"]).reset_index(drop=True)


def evaluate(
    checkpoint: str | Path | tuple[ModelSpec, Mapping[str, Tensor]],
    dataset: Mapping[float, Sequence[MatchInstance]] | Sequence[MatchInstance],
    decoders: str | Sequence[str] = "lap",
    batch_size: int = 32,
    baseline: bool = False,
):
    """Per-noise-level mean accuracy and standard error, one row per (decoder, level)."""
    if isinstance(checkpoint, tuple):
        spec, params = checkpoint
    else:
        spec, params, _ = load_matcher(checkpoint)
    if isinstance(decoders, str):
        decoders = [decoders]
    for method in decoders:
        if method not in DECODERS:
            raise InputError(f"unknown decoder {method!r}; choose from {DECODERS}")
    if not isinstance(dataset, Mapping):
        by_level: dict[float, list[MatchInstance]] = {}
        for inst in dataset:
            by_level.setdefault(inst.noise, []).append(inst)
        dataset = by_level

    records: list[dict] = []
    for level, instances in sorted(dataset.items()):
        for method in decoders:
            _, accs = score_instances(spec, params, instances, batch_size, method)
            records.extend({"noise": level, "accuracy": a, "decoder": method} for a in accs)
        if baseline:
            records.extend(
                {
                    "noise": level,
                    "accuracy": node_accuracy(degree_profile_baseline(inst), inst.truth),
                    "decoder": "degree_profile",
                }
                for inst in instances
            )
    return _summarize(records)


def cross_noise_sweep(
    checkpoints: Sequence[str | Path],
    dataset: Mapping[float, Sequence[MatchInstance]],
    decoder: str = "lap",
    batch_size: int = 32,
):
    """Accuracy matrix: a row per checkpoint, labeled by its training noise; a column per level."""
    import pandas as pd

    if not checkpoints:
        raise InputError("the sweep needs at least one checkpoint")
    rows = []
    for path in checkpoints:
        spec, params, meta = load_matcher(path)
        summary = evaluate((spec, params), dataset, decoder, batch_size)
        row = {"checkpoint": str(path), "train_noise": float(meta.get("train_noise", np.nan))}
        row.update({f"{level:g}": acc for level, acc in zip(summary["noise"], summary["mean_acc"])})
        rows.append(row)
    frame = pd.DataFrame(rows)
    return frame.sort_values(["train_noise", "checkpoint"], kind="mergesort").reset_index(drop=True)
