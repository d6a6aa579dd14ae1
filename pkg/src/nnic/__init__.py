"""8x8 intra-frame image codec with neural network prediction modes."""

from .block_model import (Frame, RefArray, ReferenceContext, extract_ref_array,
                          extract_reference_context, load_frame, save_frame)
from .codec_core import (FrameStats, decode_frame, encode_frame, parse_header)
from .mode_space import (CategoryStats, ModePartition, Scheme,
                         partition_for_scheme)
from .nn_mode import NetworkModel, forward, load_registry, load_weights, save_weights
from .residual_codec import CodecConfig

__all__ = [
    "Frame", "RefArray", "ReferenceContext", "extract_ref_array",
    "extract_reference_context", "load_frame", "save_frame",
    "FrameStats", "decode_frame", "encode_frame", "parse_header",
    "CategoryStats", "ModePartition", "Scheme", "partition_for_scheme",
    "NetworkModel", "forward", "load_registry", "load_weights", "save_weights",
    "CodecConfig",
]
