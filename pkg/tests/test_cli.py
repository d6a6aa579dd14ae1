import numpy as np
import pytest
from conftest import build_model, textured_frame

from nnic.block_model import load_frame, save_frame
from nnic.cli import main
from nnic.mode_space import Scheme, partition_for_scheme
from nnic.nn_mode import model_filename, save_weights


@pytest.fixture
def pgm(tmp_path):
    path = tmp_path / "in.pgm"
    save_frame(textured_frame(1, 64, 64), path)
    return str(path)


@pytest.fixture
def models_dir(tmp_path):
    d = tmp_path / "models"
    d.mkdir()
    part = partition_for_scheme(Scheme.APP3)
    for i, sym in enumerate(part.nm_symbols):
        save_weights(build_model(i), d / model_filename(sym))
    return str(d)


def test_encode_decode_roundtrip(tmp_path, pgm, capsys):
    out = str(tmp_path / "out.nnic")
    rec = str(tmp_path / "rec.pgm")
    assert main(["encode", "--scheme", "anchor", "--qp", "27",
                 "--recon", rec, pgm, out]) == 0
    report = capsys.readouterr().out
    assert "psnr" in report and "total_bits" in report
    dec = str(tmp_path / "dec.pgm")
    assert main(["decode", out, dec]) == 0
    a = load_frame(rec)
    b = load_frame(dec)
    assert np.array_equal(a.samples, b.samples)


def test_encode_missing_models_fails(tmp_path, pgm, capsys):
    out = str(tmp_path / "out.nnic")
    code = main(["encode", "--scheme", "app7", pgm, out])
    assert code != 0
    assert "missing model: NM7-NA" in capsys.readouterr().err


def test_encode_with_models_and_decode(tmp_path, pgm, models_dir):
    out = str(tmp_path / "out.nnic")
    rec = str(tmp_path / "rec.pgm")
    assert main(["encode", "--scheme", "app3", "--models", models_dir,
                 "--recon", rec, pgm, out]) == 0
    dec = str(tmp_path / "dec.pgm")
    assert main(["decode", "--models", models_dir, out, dec]) == 0
    assert np.array_equal(load_frame(rec).samples, load_frame(dec).samples)


def test_encode_deterministic(tmp_path, pgm):
    a = tmp_path / "a.nnic"
    b = tmp_path / "b.nnic"
    assert main(["encode", pgm, str(a)]) == 0
    assert main(["encode", pgm, str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_unknown_flag(pgm):
    assert main(["encode", "--bogus", pgm, "x.nnic"]) != 0


def test_missing_file(tmp_path, capsys):
    assert main(["encode", str(tmp_path / "nope.pgm"), "x.nnic"]) == 2
    assert "error" in capsys.readouterr().err


def test_extract_dataset(tmp_path, pgm, capsys):
    out = str(tmp_path / "d.nmds")
    assert main(["extract-dataset", pgm, "--out", out]) == 0
    assert "samples 64" in capsys.readouterr().out


def test_analyze_and_optimize(tmp_path, pgm, models_dir, capsys):
    stats = str(tmp_path / "stats.txt")
    assert main(["analyze-modes", pgm, "--out", stats,
                 "--scheme", "app3", "--models", models_dir]) == 0
    assert "p_nondirectional" in capsys.readouterr().out
    # the App3 stats file lacks the seven-mode grid entries
    assert main(["optimize-categories", "--stats", stats]) == 2
    assert "missing" in capsys.readouterr().err


def test_optimize_from_synthetic_stats(tmp_path, capsys):
    lines = ["blocks 100"]
    lines += [f"p {j} {1 / 35}" for j in range(35)]
    lines += [f"dt {j} 50.0" for j in range(35)]
    sets = {(0, 1)}
    for d in range(8):
        sets.update({(2, 9 - d), (10 - d, 10 + d), (11 + d, 18),
                     (18, 25 - d), (26 - d, 26 + d), (27 + d, 34)})
    # neural errors equal to the traditional means: every grid point ties
    # at exactly zero, so the tie-break lands on (0, 0)
    lines += [f"dn {lo} {hi} 50.0" for lo, hi in sorted(sets)]
    path = tmp_path / "stats.txt"
    path.write_text("\n".join(lines) + "\n")
    assert main(["optimize-categories", "--stats", str(path)]) == 0
    out = capsys.readouterr().out
    assert "delta1 0" in out and "delta2 0" in out


def test_bdrate_command(tmp_path, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("1000 30\n1800 33\n3200 36\n6000 39\n")
    b.write_text("1100 30\n1980 33\n3520 36\n6600 39\n")
    assert main(["bdrate", str(a), str(b)]) == 0
    out = capsys.readouterr().out
    assert "bd_rate 10.0" in out


def test_dump_pred_command(tmp_path, pgm, models_dir, capsys):
    out = str(tmp_path / "dumps")
    assert main(["dump-pred", pgm, "--block", "2", "2",
                 "--modes", "tm0,nm3-na", "--models", models_dir,
                 "--out", out]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4  # raw + 2 predictions + context
