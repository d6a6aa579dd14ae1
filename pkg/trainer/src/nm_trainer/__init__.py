"""Trainer for the neural intra prediction modes."""

from .data import (dc_prediction, holdout_split, partition_sets, read_nmds,
                   split_dataset)
from .mlp import DEFAULT_DIMS, Adam, Mlp
from .train import TrainerConfig, data_term, train
from .weights import export_weights, forward_parsed, parse_nmwt

__all__ = [
    "dc_prediction", "holdout_split", "partition_sets", "read_nmds",
    "split_dataset", "DEFAULT_DIMS", "Adam", "Mlp",
    "TrainerConfig", "data_term", "train",
    "export_weights", "forward_parsed", "parse_nmwt",
]
