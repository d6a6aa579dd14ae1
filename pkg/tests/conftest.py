import numpy as np
import pytest

from nnic.block_model import Frame
from nnic.mode_space import partition_for_scheme
from nnic.nn_mode import DIMS, NM_SYMBOLS, NetworkModel


def build_model(seed=0, scale=None, slopes=(0.25, 0.1, 0.5)):
    """Small random model with sane output magnitudes."""
    rng = np.random.RandomState(seed)
    weights, biases = [], []
    for i in range(4):
        fan_in, fan_out = DIMS[i], DIMS[i + 1]
        s = scale if scale is not None else 1.0 / np.sqrt(fan_in)
        weights.append((rng.standard_normal((fan_out, fan_in)) * s).astype(np.float32))
        biases.append((rng.standard_normal(fan_out) * 0.1).astype(np.float32))
    return NetworkModel(weights, biases, np.array(slopes, dtype=np.float32))


def zero_model(last_bias=0.0):
    """Constant-output model (zero weights, fixed last bias)."""
    weights = [np.zeros((DIMS[i + 1], DIMS[i]), dtype=np.float32) for i in range(4)]
    biases = [np.zeros(DIMS[i + 1], dtype=np.float32) for i in range(4)]
    biases[3][:] = last_bias
    return NetworkModel(weights, biases, np.full(3, 0.25, dtype=np.float32))


def noise_model(seed=777):
    """Deliberately useless model: a fixed full-range noise prediction.

    Its residual spreads quantization levels over the whole spectrum, so
    it costs far more rate than any traditional mode on every block; a
    constant-output model would not do, since a flat wrong prediction
    only misplaces the DC coefficient.
    """
    weights = [np.zeros((DIMS[i + 1], DIMS[i]), dtype=np.float32) for i in range(4)]
    biases = [np.zeros(DIMS[i + 1], dtype=np.float32) for i in range(4)]
    rng = np.random.RandomState(seed)
    biases[3][:] = rng.rand(64).astype(np.float32)
    return NetworkModel(weights, biases, np.full(3, 0.25, dtype=np.float32))


def stub_registry(scheme, model=None, delta1=2, delta2=2):
    """One shared stub model per symbol the scheme needs."""
    part = partition_for_scheme(scheme, delta1, delta2)
    if model is None:
        model = zero_model(last_bias=0.5)
    return {sym: model for sym in part.nm_symbols}


def full_stub_registry(model=None):
    if model is None:
        model = zero_model(last_bias=0.5)
    return {sym: model for sym in NM_SYMBOLS}


def textured_frame(seed, width=128, height=128, lo=40, hi=210) -> Frame:
    """Deterministic test image mixing gradients, waves, and noise.

    The default clip range keeps a margin to 0/255 so a saturating
    predictor is provably useless.
    """
    rng = np.random.RandomState(seed)
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    img = (110
           + 60 * np.sin(2 * np.pi * x / (17 + seed * 3)) * np.cos(2 * np.pi * y / 23)
           + 50 * ((x + 2 * y) / (width + 2 * height))
           + ((x // 16 + y // 16) % 2) * 25
           + rng.randn(height, width) * 6)
    return Frame(width, height, np.clip(img, lo, hi).astype(np.uint8))


@pytest.fixture(scope="session")
def test_images():
    return [textured_frame(s) for s in (1, 2, 3)]
