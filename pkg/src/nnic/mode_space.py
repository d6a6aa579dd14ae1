"""Scheme definitions, TM-set partitioning, and category statistics.

Appending schemes cluster the 35 traditional modes into one set per
neural mode (the union of the sets must cover [0,34]); substitution
schemes name the traditional modes whose slots the neural modes take
over.  The expected-distortion objective scores a partition from
per-mode probabilities and prediction errors; for the seven-mode
partition the two cluster half-widths are grid-searched independently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

N_TMS = 35


_N_NMS = {"anchor": 0, "app1": 1, "app3": 3, "app5": 5, "app7": 7,
          "subh1": 1, "subh3": 3, "subl1": 1, "subl3": 3}


class Scheme(enum.Enum):
    ANCHOR = "anchor"
    APP1 = "app1"
    APP3 = "app3"
    APP5 = "app5"
    APP7 = "app7"
    SUBH1 = "subh1"
    SUBH3 = "subh3"
    SUBL1 = "subl1"
    SUBL3 = "subl3"

    @property
    def n_nms(self) -> int:
        return _N_NMS[self.value]

    @property
    def is_appending(self) -> bool:
        return self.value.startswith("app")

    @property
    def is_substitution(self) -> bool:
        return self.value.startswith("sub")

    @property
    def wire_id(self) -> int:
        return list(Scheme).index(self)

    @classmethod
    def from_wire_id(cls, i: int) -> "Scheme":
        schemes = list(cls)
        if not 0 <= i < len(schemes):
            raise ValueError(f"unknown scheme id {i}")
        return schemes[i]


# substitution targets in selection order (most beneficial first)
_SUB_TARGETS = {
    Scheme.SUBH1: (0,),
    Scheme.SUBH3: (0, 1, 26),
    Scheme.SUBL1: (19,),
    Scheme.SUBL3: (19, 3, 33),
}

_SUB_SYMBOLS = {1: ("NM1",), 3: ("NM3-NA", "NM3-HOR", "NM3-VER")}


@dataclass(frozen=True)
class ModePartition:
    """TM sets per neural mode, plus substitution targets for Sub schemes."""

    scheme: Scheme
    sets: tuple = ()           # ((symbol, (lo, hi)), ...) appending only
    substitutions: tuple = ()  # ((target_tm, symbol), ...) substitution only
    delta1: int = 0
    delta2: int = 0

    @property
    def nm_symbols(self) -> tuple:
        if self.sets:
            return tuple(sym for sym, _ in self.sets)
        return tuple(sym for _, sym in self.substitutions)

    @property
    def substituted(self) -> frozenset:
        return frozenset(t for t, _ in self.substitutions)

    def symbol_for_slot(self, tm: int) -> str:
        for t, sym in self.substitutions:
            if t == tm:
                return sym
        raise KeyError(tm)

    def sets_containing(self, tm: int) -> tuple:
        return tuple(sym for sym, (lo, hi) in self.sets if lo <= tm <= hi)


def partition_for_scheme(scheme: Scheme, delta1: int = 0, delta2: int = 0) -> ModePartition:
    """Build the mode partition for a scheme.

    delta1/delta2 are the half-widths of the pure-horizontal and
    pure-vertical clusters; they only matter for the seven-mode scheme.
    """
    if not (0 <= delta1 <= 7 and 0 <= delta2 <= 7):
        raise ValueError(f"delta out of range: {delta1}, {delta2}")
    if scheme is Scheme.ANCHOR:
        return ModePartition(scheme)
    if scheme.is_substitution:
        targets = _SUB_TARGETS[scheme]
        symbols = _SUB_SYMBOLS[len(targets)]
        return ModePartition(scheme, substitutions=tuple(zip(targets, symbols)))
    if scheme is Scheme.APP1:
        sets = (("NM1", (0, 34)),)
    elif scheme is Scheme.APP3:
        sets = (("NM3-NA", (0, 1)), ("NM3-HOR", (2, 18)), ("NM3-VER", (18, 34)))
    elif scheme is Scheme.APP5:
        sets = (("NM5-NA", (0, 1)),
                ("NM5-HOR0", (2, 10)), ("NM5-HOR1", (10, 18)),
                ("NM5-VER0", (18, 26)), ("NM5-VER1", (26, 34)))
    else:  # APP7
        sets = (("NM7-NA", (0, 1)),
                ("NM7-HOR0", (2, 9 - delta1)),
                ("NM7-HOR1", (10 - delta1, 10 + delta1)),
                ("NM7-HOR2", (11 + delta1, 18)),
                ("NM7-VER0", (18, 25 - delta2)),
                ("NM7-VER1", (26 - delta2, 26 + delta2)),
                ("NM7-VER2", (27 + delta2, 34)))
    return ModePartition(scheme, sets=sets, delta1=delta1, delta2=delta2)


def _hor_sets(delta):
    return ((2, 9 - delta), (10 - delta, 10 + delta), (11 + delta, 18))


def _ver_sets(delta):
    return ((18, 25 - delta), (26 - delta, 26 + delta), (27 + delta, 34))


@dataclass
class BlockModeRecord:
    """One encoded block's contribution to the corpus statistics."""

    best_tm: int
    tm_sse: np.ndarray       # (35,) squared prediction error per TM
    nm_sse: dict = field(default_factory=dict)  # {(lo, hi): sse of that set's NM}


@dataclass
class CategoryStats:
    """Per-TM best-mode probabilities and prediction errors.

    p[j]   probability of TM j being the best mode
    d_t[j] mean squared prediction error of TM j over its best-mode blocks
    d_n    {(lo, hi): mean squared error of the neural mode trained for
            that TM set, over blocks whose best mode lies in the set}
    """

    p: np.ndarray
    d_t: np.ndarray
    d_n: dict = field(default_factory=dict)
    blocks: int = 0

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=np.float64)
        self.d_t = np.asarray(self.d_t, dtype=np.float64)
        if self.p.shape != (N_TMS,) or self.d_t.shape != (N_TMS,):
            raise ValueError("stats need 35 probabilities and 35 errors")
        if abs(self.p.sum() - 1.0) > 1e-9 or (self.p < 0).any():
            raise ValueError("probabilities must be nonnegative and sum to 1")
        if (self.d_t < 0).any() or any(v < 0 for v in self.d_n.values()):
            raise ValueError("squared errors must be nonnegative")


def collect_mode_stats(mode_log) -> CategoryStats:
    """Aggregate per-block records into category statistics."""
    records = list(mode_log)
    if not records:
        raise ValueError("empty mode log")
    counts = np.zeros(N_TMS, dtype=np.int64)
    d_sum = np.zeros(N_TMS, dtype=np.float64)
    nm_sum, nm_cnt = {}, {}
    for rec in records:
        j = rec.best_tm
        counts[j] += 1
        d_sum[j] += float(rec.tm_sse[j])
        for (lo, hi), sse in rec.nm_sse.items():
            if lo <= j <= hi:
                nm_sum[(lo, hi)] = nm_sum.get((lo, hi), 0.0) + float(sse)
                nm_cnt[(lo, hi)] = nm_cnt.get((lo, hi), 0) + 1
    p = counts / counts.sum()
    d_t = np.divide(d_sum, counts, out=np.zeros(N_TMS), where=counts > 0)
    d_n = {k: nm_sum[k] / nm_cnt[k] for k in nm_sum}
    return CategoryStats(p, d_t, d_n, blocks=len(records))


def _set_term(stats: CategoryStats, lo: int, hi: int) -> float:
    members = slice(lo, hi + 1)
    if (lo, hi) not in stats.d_n:
        raise ValueError(f"missing neural-mode error for set [{lo},{hi}]")
    prob = float(stats.p[members].sum())
    d_t_mean = float(stats.d_t[members].mean())
    return prob * (stats.d_n[(lo, hi)] - d_t_mean)


def delta_d(partition: ModePartition, stats: CategoryStats) -> float:
    """Expected distortion change of the partition's NMs vs their TM sets.

    Each set contributes its probability mass times the difference between
    the neural error and the unweighted mean traditional error of the set.
    """
    return sum(_set_term(stats, lo, hi) for _, (lo, hi) in partition.sets)


def delta_d_directional(stats: CategoryStats, cls: str, delta: int) -> float:
    """Directional part of the seven-mode objective for one half-width."""
    if not 0 <= delta <= 7:
        raise ValueError(f"delta out of range: {delta}")
    if cls == "HOR":
        sets = _hor_sets(delta)
    elif cls == "VER":
        sets = _ver_sets(delta)
    else:
        raise ValueError(f"unknown directional class {cls!r}")
    return sum(_set_term(stats, lo, hi) for lo, hi in sets)


def optimize_deltas(stats: CategoryStats):
    """Grid-search both cluster half-widths independently.

    Returns (delta1, delta2, total) where total adds the non-directional
    term; ties break toward the smaller half-width.
    """
    best = {}
    for cls in ("HOR", "VER"):
        costs = [delta_d_directional(stats, cls, d) for d in range(8)]
        best[cls] = min(range(8), key=lambda d: (costs[d], d))
    na = _set_term(stats, 0, 1)
    total = (na + delta_d_directional(stats, "HOR", best["HOR"])
             + delta_d_directional(stats, "VER", best["VER"]))
    return best["HOR"], best["VER"], total


def substitution_objective(targets, stats: CategoryStats) -> float:
    """Score of substituting each target TM by an NM trained on its category."""
    total = 0.0
    for t in targets:
        if (t, t) not in stats.d_n:
            raise ValueError(f"missing neural-mode error for TM {t}")
        total += float(stats.p[t]) * (stats.d_n[(t, t)] - float(stats.d_t[t]))
    return total


def save_stats(stats: CategoryStats, path):
    """Write statistics as a line-oriented key-value report."""
    lines = [f"blocks {stats.blocks}"]
    lines += [f"p {j} {float(stats.p[j])!r}" for j in range(N_TMS)]
    lines += [f"dt {j} {float(stats.d_t[j])!r}" for j in range(N_TMS)]
    lines += [f"dn {lo} {hi} {float(v)!r}" for (lo, hi), v in sorted(stats.d_n.items())]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_stats(path) -> CategoryStats:
    p = np.zeros(N_TMS)
    d_t = np.zeros(N_TMS)
    d_n = {}
    blocks = 0
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            key = parts[0]
            if key == "blocks":
                blocks = int(parts[1])
            elif key == "p":
                p[int(parts[1])] = float(parts[2])
            elif key == "dt":
                d_t[int(parts[1])] = float(parts[2])
            elif key == "dn":
                d_n[(int(parts[1]), int(parts[2]))] = float(parts[3])
            else:
                raise ValueError(f"unknown stats key {key!r}")
    return CategoryStats(p, d_t, d_n, blocks=blocks)
