import pytest

from nnic.mode_space import Scheme, partition_for_scheme
from nnic.signaling import (NM_CODES, best_tm_for_mpm, chroma_candidates,
                            decode_chroma_mode, decode_luma_mode,
                            derived_chroma_mode, encode_chroma_mode,
                            encode_luma_mode, mode_bits, mpm_baseline,
                            mpm_for_scheme, mpm_substitution_low)

ALL_SCHEMES = list(Scheme)


def legal_modes(scheme):
    modes = list(range(35))
    if scheme.is_appending:
        modes += list(NM_CODES[scheme.n_nms])
    return modes


def algorithm1_transcription(pl, pa, tms):
    """Direct transcription of the published pseudocode."""
    if pl == pa:
        if pl == tms:
            return (pl, 0, 1)
        if pl == tms - 1:
            return (pl, pl - 1, pl + 2)
        if pl == tms + 1:
            return (pl, pl - 2, pl + 1)
    return mpm_baseline(pl, pa)


class TestMpmBaseline:
    def test_equal_non_angular(self):
        assert mpm_baseline(1, 1) == (0, 1, 26)
        assert mpm_baseline(0, 0) == (0, 1, 26)

    def test_equal_angular_wraparound(self):
        assert mpm_baseline(14, 14) == (14, 13, 15)
        assert mpm_baseline(2, 2) == (2, 33, 3)
        assert mpm_baseline(34, 34) == (34, 33, 3)

    def test_different_neighbors(self):
        assert mpm_baseline(0, 26) == (0, 26, 1)
        assert mpm_baseline(10, 20) == (10, 20, 0)
        assert mpm_baseline(0, 1) == (0, 1, 26)

    def test_missing_neighbor_is_dc(self):
        assert mpm_baseline(None, None) == (0, 1, 26)
        assert mpm_baseline(7, None) == (7, 1, 0)

    def test_always_distinct(self):
        for pl in range(35):
            for pa in range(35):
                assert len(set(mpm_baseline(pl, pa))) == 3


class TestAlgorithm1:
    def test_published_examples(self):
        assert mpm_substitution_low(19, 19, 19) == (19, 0, 1)
        assert mpm_substitution_low(18, 18, 19) == (18, 17, 20)
        assert mpm_substitution_low(20, 20, 19) == (20, 18, 21)

    def test_exhaustive_matches_transcription(self):
        for tms in (19, 3, 33):
            for pl in range(35):
                for pa in range(35):
                    got = mpm_substitution_low(pl, pa, tms)
                    assert got == algorithm1_transcription(pl, pa, tms)
                    assert len(set(got)) == 3

    def test_scheme_mpm_wraps_out_of_range(self):
        part = partition_for_scheme(Scheme.SUBL3)
        mpm = mpm_for_scheme(34, 34, part)
        assert mpm == (34, 32, 3)  # 35 wraps back into the angular ring
        assert all(0 <= m <= 34 for m in mpm)

    def test_scheme_mpm_all_entries_valid(self):
        for scheme in (Scheme.SUBL1, Scheme.SUBL3):
            part = partition_for_scheme(scheme)
            for pl in range(35):
                for pa in range(35):
                    mpm = mpm_for_scheme(pl, pa, part)
                    assert len(set(mpm)) == 3
                    assert all(0 <= m <= 34 for m in mpm)

    def test_unequal_neighbors_use_baseline(self):
        part = partition_for_scheme(Scheme.SUBL1)
        assert mpm_for_scheme(19, 4, part) == mpm_baseline(19, 4)


class TestLumaCoding:
    def test_published_nm_codewords(self):
        mpm = (0, 1, 26)
        assert encode_luma_mode("NM7-NA", mpm, Scheme.APP7) == "11"
        assert encode_luma_mode("NM7-HOR0", mpm, Scheme.APP7) == "10011"
        assert encode_luma_mode("NM1", mpm, Scheme.APP1) == "1"

    def test_anchor_codeword_shapes(self):
        mpm = (14, 13, 15)
        assert encode_luma_mode(14, mpm, Scheme.ANCHOR) == "10"
        assert encode_luma_mode(13, mpm, Scheme.ANCHOR) == "110"
        assert encode_luma_mode(15, mpm, Scheme.ANCHOR) == "111"
        # smallest non-MPM mode has rank 0
        assert encode_luma_mode(0, mpm, Scheme.ANCHOR) == "000000"

    def test_nm_code_lengths_match_table(self):
        lengths = {sym: len(code) for sym, code in NM_CODES[7].items()}
        assert lengths["NM7-NA"] == 1
        assert lengths["NM7-HOR1"] == lengths["NM7-VER1"] == 3
        for sym in ("NM7-HOR0", "NM7-HOR2", "NM7-VER0", "NM7-VER2"):
            assert lengths[sym] == 4

    def test_bin_length_model(self):
        for scheme in ALL_SCHEMES:
            part = partition_for_scheme(scheme, 2, 2)
            for pl, pa in [(1, 1), (14, 20), (34, 34), (0, 26)]:
                mpm = mpm_for_scheme(pl, pa, part)
                for mode in legal_modes(scheme):
                    code = encode_luma_mode(mode, mpm, scheme)
                    assert len(code) == mode_bits(mode, mpm, scheme)
                    if isinstance(mode, int):
                        base = 2 if mode == mpm[0] else 3 if mode in mpm else 6
                        extra = 1 if scheme.is_appending else 0
                        assert len(code) == base + extra

    def test_roundtrip_and_prefix_free_exhaustive(self):
        for scheme in ALL_SCHEMES:
            part = partition_for_scheme(scheme, 2, 2)
            seen = set()
            for pl in range(35):
                for pa in range(35):
                    mpm = mpm_for_scheme(pl, pa, part)
                    if mpm in seen:
                        continue
                    seen.add(mpm)
                    codes = []
                    for mode in legal_modes(scheme):
                        code = encode_luma_mode(mode, mpm, scheme)
                        got, pos = decode_luma_mode(code, mpm, scheme)
                        assert got == mode and pos == len(code)
                        codes.append(code)
                    codes.sort()
                    for a, b in zip(codes, codes[1:]):
                        assert not b.startswith(a)

    def test_decode_errors(self):
        mpm = (0, 1, 26)
        with pytest.raises(ValueError, match="exhausted"):
            decode_luma_mode("0", mpm, Scheme.ANCHOR)
        with pytest.raises(ValueError, match="exhausted"):
            decode_luma_mode("10", mpm, Scheme.APP7)

    def test_nm_illegal_under_anchor(self):
        with pytest.raises(ValueError, match="illegal"):
            encode_luma_mode("NM1", (0, 1, 26), Scheme.ANCHOR)


class TestBestTmForMpm:
    def test_app1_inherits_mpm0(self):
        assert best_tm_for_mpm("NM1", (14, 13, 15), Scheme.APP1) == 14

    def test_directional_classes(self):
        assert best_tm_for_mpm("NM7-HOR2", (0, 1, 26), Scheme.APP7) == 10
        assert best_tm_for_mpm("NM3-NA", (0, 1, 26), Scheme.APP3) == 0
        assert best_tm_for_mpm("NM5-VER1", (0, 1, 26), Scheme.APP5) == 26

    def test_rejects_tm(self):
        with pytest.raises(ValueError):
            best_tm_for_mpm(7, (0, 1, 26), Scheme.APP3)


class TestChroma:
    def test_candidates(self):
        assert chroma_candidates(14) == [0, 1, 26, 10, 14]
        assert chroma_candidates(0) == [0, 1, 26, 10, 34]
        assert chroma_candidates(10) == [0, 1, 26, 10, 34]
        assert chroma_candidates("NM3-VER") == [0, 1, 26, 10, "NM3-VER"]

    def test_derived_mode(self):
        assert derived_chroma_mode(26, Scheme.ANCHOR) == 26
        assert derived_chroma_mode("NM1", Scheme.APP1, mpm0=10) == 10
        assert derived_chroma_mode("NM3-VER", Scheme.APP3) == "NM3-VER"
        # substituted slots stay slot-valued and derive themselves
        assert derived_chroma_mode(0, Scheme.SUBH1) == 0

    def test_binarization_roundtrip(self):
        cands = chroma_candidates(14)
        codes = []
        for mode in cands:
            code = encode_chroma_mode(cands, mode)
            got, pos = decode_chroma_mode(code, cands)
            assert got == mode and pos == len(code)
            codes.append(code)
        assert sorted(codes) == ["0", "100", "101", "110", "111"]
        codes.sort()
        for a, b in zip(codes, codes[1:]):
            assert not b.startswith(a)
