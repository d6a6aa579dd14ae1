import json
import os

import numpy as np
import pytest
from conftest import build_model, zero_model

from nnic.block_model import ReferenceContext
from nnic.nn_mode import (NetworkModel, forward, forward_raw, load_registry,
                          load_weights, model_filename, parse_model, prelu,
                          registry_digest, save_weights, serialize_model)

DATA = os.path.join(os.path.dirname(__file__), "data")


def make_context(seed=99):
    vals = np.random.RandomState(seed).randint(0, 256, size=(5, 8, 8))
    return ReferenceContext(vals.astype(np.uint8), (True,) * 5)


def oracle_forward(model, x):
    """Straight-line reference evaluator: plain loops, no matrix ops."""
    v = [float(t) for t in x]
    for li in range(4):
        W, B = model.weights[li], model.biases[li]
        out = []
        for r in range(W.shape[0]):
            acc = 0.0
            row = W[r]
            for c in range(W.shape[1]):
                acc += float(row[c]) * v[c]
            acc += float(B[r])
            if li < 3 and acc < 0:
                acc *= float(model.slopes[li])
            out.append(acc)
        v = out
    return v


class TestPrelu:
    def test_canonical_slope(self):
        assert prelu(np.array([-1.0]), 0.25)[0] == -0.25
        assert prelu(np.array([2.0]), 0.25)[0] == 2.0


class TestWeightFile:
    def test_roundtrip_byte_exact(self, tmp_path):
        model = build_model(7)
        path = tmp_path / "m.nmwt"
        save_weights(model, path)
        reloaded = load_weights(path)
        save_weights(reloaded, tmp_path / "m2.nmwt")
        assert path.read_bytes() == (tmp_path / "m2.nmwt").read_bytes()
        assert all(np.array_equal(a, b) for a, b in
                   zip(model.weights, reloaded.weights))

    def test_zero_model_file(self, tmp_path):
        path = tmp_path / "z.nmwt"
        save_weights(zero_model(), path)
        m = load_weights(path)
        assert all((w == 0).all() for w in m.weights)

    def test_dim_chain_mismatch(self):
        weights = [np.zeros((512, 320), np.float32)] + \
                  [np.zeros((512, 512), np.float32)] * 2 + \
                  [np.zeros((64, 512), np.float32)]
        biases = [np.zeros(w.shape[0], np.float32) for w in weights]
        with pytest.raises(ValueError, match="dimension chain mismatch"):
            NetworkModel(weights, biases, np.full(3, 0.25, np.float32))

    def test_bad_magic(self):
        with pytest.raises(ValueError, match="bad magic"):
            parse_model(b"XXXX" + bytes(64))

    def test_truncated(self, tmp_path):
        model = build_model(8)
        data = serialize_model(model)
        with pytest.raises(ValueError, match="truncated"):
            parse_model(data[:-100])

    def test_non_finite_rejected(self):
        m = build_model(9)
        m.weights[1][0, 0] = np.nan
        with pytest.raises(ValueError, match="non-finite"):
            NetworkModel(m.weights, m.biases, m.slopes)

    def test_registry_loading(self, tmp_path):
        save_weights(build_model(1), tmp_path / model_filename("NM3-NA"))
        save_weights(build_model(2), tmp_path / model_filename("NM3-HOR"))
        with pytest.raises(ValueError, match="missing model: NM3-VER"):
            load_registry(tmp_path, ("NM3-NA", "NM3-HOR", "NM3-VER"))
        reg = load_registry(tmp_path, ("NM3-NA", "NM3-HOR"))
        assert set(reg) == {"NM3-NA", "NM3-HOR"}
        d1 = registry_digest(reg, ("NM3-NA", "NM3-HOR"))
        d2 = registry_digest(reg, ("NM3-HOR", "NM3-NA"))
        assert d1 == d2 != 0


class TestForward:
    def test_constant_path(self):
        model = zero_model(last_bias=0.5)
        out = forward(model, make_context())
        assert out.shape == (8, 8)
        assert (out == 128).all()  # 0.5 * 255 = 127.5 rounds up

    def test_golden_vector(self):
        with open(os.path.join(DATA, "golden_forward.json")) as fh:
            golden = json.load(fh)
        model = build_model(golden["model_seed"])
        ctx = make_context(golden["context_seed"])
        raw = forward_raw(model, ctx.flatten() / 255.0)
        expected = np.array(golden["raw_output"])
        assert np.abs(raw - expected).max() < 1e-4

    def test_against_live_oracle(self):
        model = build_model(1234)
        ctx = make_context(99)
        x = ctx.flatten() / 255.0
        raw = forward_raw(model, x)
        ref = np.array(oracle_forward(model, x))
        assert np.abs(raw - ref).max() < 1e-4

    def test_deterministic_and_in_range(self):
        model = build_model(11)
        ctx = make_context(12)
        a = forward(model, ctx)
        b = forward(model, ctx)
        assert np.array_equal(a, b)
        assert a.min() >= 0 and a.max() <= 255

    def test_linearity_with_unit_slopes(self):
        model = build_model(13, slopes=(1.0, 1.0, 1.0))
        rng = np.random.RandomState(5)
        x = rng.rand(320)
        zero = forward_raw(model, np.zeros(320))
        fx = forward_raw(model, x)
        for a in (0.5, 2.0, -1.5):
            fax = forward_raw(model, a * x)
            lhs = fax - zero
            rhs = a * (fx - zero)
            denom = np.maximum(np.abs(rhs), 1e-12)
            assert (np.abs(lhs - rhs) / denom).max() < 1e-6
