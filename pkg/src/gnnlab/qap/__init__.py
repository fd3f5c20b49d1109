"""Graph alignment benchmark: correlated pairs, siamese training, assignment decoding."""

from gnnlab.qap.dataset import DatasetSplits, MatchInstance, make_dataset, make_split
from gnnlab.qap.evaluation import cross_noise_sweep, evaluate
from gnnlab.qap.matching import (
    assignment_objective,
    degree_profile_baseline,
    hungarian_lap,
    node_accuracy,
    row_argmax,
)
from gnnlab.qap.siamese import matching_loss, siamese_batch, siamese_forward
from gnnlab.qap.training import TrainResult, train

__all__ = [
    "DatasetSplits",
    "MatchInstance",
    "TrainResult",
    "assignment_objective",
    "cross_noise_sweep",
    "degree_profile_baseline",
    "evaluate",
    "hungarian_lap",
    "make_dataset",
    "make_split",
    "matching_loss",
    "node_accuracy",
    "row_argmax",
    "siamese_batch",
    "siamese_forward",
    "train",
]
