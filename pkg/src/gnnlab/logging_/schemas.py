"""Log event schemas for the experiment log stream."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from datetime import datetime, timezone


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class RefinementLogEvent:
    """One finished Weisfeiler-Lehman refinement."""

    timestamp: str
    event_type: str = "refinement"
    test: str = ""
    n: int = 0
    k: int = 1
    rounds: int = 0
    classes: int = 0
    stable: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_coloring(cls, test: str, coloring) -> RefinementLogEvent:
        return cls(
            timestamp=_now(),
            test=test,
            n=coloring.n,
            k=coloring.k,
            rounds=coloring.round,
            classes=coloring.num_classes,
            stable=coloring.stable,
        )


@dataclass
class SeparationLogEvent:
    timestamp: str
    event_type: str = "separation"
    pair_id: str = ""
    discriminator: str = ""
    separated: bool = False
    gap: float = 0.0
    seeds: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_row(cls, row) -> SeparationLogEvent:
        return cls(
            timestamp=_now(),
            pair_id=row.pair_id,
            discriminator=row.discriminator,
            separated=row.separated,
            gap=row.gap,
            seeds=row.seeds,
        )


@dataclass
class EpochLogEvent:
    timestamp: str
    event_type: str = "epoch"
    epoch: int = 0
    train_loss: float = 0.0
    val_accuracy: float = 0.0
    lr: float = 0.0
    elapsed_ms: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_epoch(
        cls,
        epoch: int,
        train_loss: float,
        val_accuracy: float,
        lr: float,
        elapsed_ms: float,
    ) -> EpochLogEvent:
        return cls(
            timestamp=_now(),
            epoch=epoch,
            train_loss=train_loss,
            val_accuracy=val_accuracy,
            lr=lr,
            elapsed_ms=elapsed_ms,
        )


@dataclass
class RunLogEvent:
    timestamp: str
    event_type: str = "run"
    command: str = ""
    exit_code: int = 0
    out_dir: str = ""
    elapsed_ms: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_run(cls, command: str, exit_code: int, out_dir: str, elapsed_ms: float) -> RunLogEvent:
        return cls(
            timestamp=_now(),
            command=command,
            exit_code=exit_code,
            out_dir=out_dir,
            elapsed_ms=elapsed_ms,
        )
