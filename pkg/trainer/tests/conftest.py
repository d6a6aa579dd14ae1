import numpy as np
import pytest


def textured_frame_array(seed, width=64, height=64):
    """Deterministic test image (gradients, waves, tile pattern, noise)."""
    rng = np.random.RandomState(seed)
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    img = (110
           + 60 * np.sin(2 * np.pi * x / (17 + seed * 3)) * np.cos(2 * np.pi * y / 23)
           + 50 * ((x + 2 * y) / (width + 2 * height))
           + ((x // 16 + y // 16) % 2) * 25
           + rng.randn(height, width) * 6)
    return np.clip(img, 40, 210).astype(np.uint8)


@pytest.fixture(scope="session")
def corpus_nmds(tmp_path_factory):
    """~50-image corpus extracted through the primary codec's anchor pass."""
    nnic = pytest.importorskip("nnic")
    from nnic.dataset import extract_dataset

    frames = [nnic.Frame(64, 64, textured_frame_array(s)) for s in range(50)]
    path = tmp_path_factory.mktemp("corpus") / "corpus.nmds"
    extract_dataset(frames, path, qp=27)
    return str(path)
