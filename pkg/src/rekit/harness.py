"""Experiment pipeline: sample expressions, build and reduce automata, aggregate measures."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .automata import determinize, is_deterministic, is_homogeneous, minimize
from .build import follow_automaton, pd_automaton, position_automaton, position_automaton_snf
from .oracle import equivalent_up_to
from .reduction import REDUCTIONS
from .regen import RegexSampler, derive_rng
from .syntax import Regex, is_reduced, is_snf, measures, parse, reduce, to_snf

CONSTRUCTIONS = {
    "pos": position_automaton,
    "psnf": position_automaton_snf,
    "f": follow_automaton,
    "pd": pd_automaton,
}
REDUCTION_NAMES = ("none", "r", "l", "lr")


class ExperimentError(ValueError):
    pass


@dataclass
class Record:
    index: int
    text: str
    size: int
    alph: int
    rpn: int
    snf: bool
    reduced: bool
    snfr: bool
    sc: int
    tc: int
    # (construction, reduction) -> (|Q|, |δ|, det, hom)
    nfa: dict = field(default_factory=dict)
    oracle_checked: bool = False
    oracle_ok: bool = True

    def q(self, c: str, red: str = "none") -> int:
        return self.nfa[c, red][0]

    def d(self, c: str, red: str = "none") -> int:
        return self.nfa[c, red][1]

    def nfa_size(self, c: str, red: str = "none") -> int:
        return self.q(c, red) + self.d(c, red)


def measure_regex(r: Regex, index: int = 0, text: str | None = None,
                  oracle_len: int | None = None,
                  reductions: Sequence[str] = REDUCTION_NAMES) -> Record:
    """All per-expression measures, optionally with a bounded language check."""
    size, alph, rpn = measures(r)
    snf = to_snf(r)
    automata = {c: build(r) for c, build in CONSTRUCTIONS.items()}
    mindfa = minimize(determinize(automata["pd"]))
    rec = Record(index, text if text is not None else str(r), size, alph, rpn,
                 is_snf(r), is_reduced(r), is_reduced(snf),
                 mindfa.states, len(mindfa.transitions))
    for c, a in automata.items():
        for red in reductions:
            b = REDUCTIONS[red](a)
            rec.nfa[c, red] = (b.states, len(b.transitions), is_deterministic(b), is_homogeneous(b))
    if oracle_len is not None:
        rec.oracle_checked = True
        rec.oracle_ok = all(equivalent_up_to(r, x, oracle_len)
                            for x in list(automata.values()) + [mindfa])
    return rec


def _measure_job(args) -> Record:
    index, text, oracle_len = args
    return measure_regex(parse(text), index, text, oracle_len)


# ---------------------------------------------------------------------------
# Aggregation


def mean(xs: Sequence[float]) -> float:
    if not xs:
        raise ExperimentError("no records to aggregate")
    return math.fsum(xs) / len(xs)


def pstdev(xs: Sequence[float]) -> float:
    """Population standard deviation (divisor N)."""
    mu = mean(xs)
    return math.sqrt(math.fsum((x - mu) ** 2 for x in xs) / len(xs))


def pct(flags: Sequence[bool]) -> float:
    return 100.0 * mean([1.0 if f else 0.0 for f in flags])


def _prefix(c: str, red: str) -> str:
    return c if red == "none" else f"{c}_{red}"


def columns() -> list[str]:
    cols = ["size", "k", "samples", "seed",
            "alph_avg", "alph_std", "rpn_avg", "rpn_std", "rpn_alph",
            "snf_pct", "reduced_pct", "snfr_pct",
            "sc_avg", "sc_std", "tc_avg", "tc_std", "sc_alph", "tc_alph"]
    for c in CONSTRUCTIONS:
        for red in REDUCTION_NAMES:
            p = _prefix(c, red)
            cols += [f"{p}_q_avg", f"{p}_q_std", f"{p}_d_avg", f"{p}_d_std",
                     f"{p}_det_pct", f"{p}_hom_pct"]
            if red != "none":
                cols.append(f"{p}_dec_pct")
    cols += ["dpos_alph1", "qf_alph1", "df_alph1", "qpd_alph1", "dpd_alph1",
             "dpd_dpos", "qpd_qf", "dpd_df",
             "oracle_checked", "oracle_failures"]
    return cols


def _ratio(xs: Iterable[tuple[float, float]]) -> float:
    # mean of per-expression ratios; pairs with a zero denominator are skipped
    vals = [a / b for a, b in xs if b]
    return mean(vals) if vals else float("nan")


def stats_aggregate(records: Sequence[Record]) -> dict[str, float]:
    if not records:
        raise ExperimentError("no records to aggregate")
    R = records
    out: dict[str, float] = {}
    out["alph_avg"] = mean([r.alph for r in R])
    out["alph_std"] = pstdev([r.alph for r in R])
    out["rpn_avg"] = mean([r.rpn for r in R])
    out["rpn_std"] = pstdev([r.rpn for r in R])
    out["rpn_alph"] = _ratio((r.rpn, r.alph) for r in R)
    out["snf_pct"] = pct([r.snf for r in R])
    out["reduced_pct"] = pct([r.reduced for r in R])
    out["snfr_pct"] = pct([r.snfr for r in R])
    out["sc_avg"] = mean([r.sc for r in R])
    out["sc_std"] = pstdev([r.sc for r in R])
    out["tc_avg"] = mean([r.tc for r in R])
    out["tc_std"] = pstdev([r.tc for r in R])
    out["sc_alph"] = _ratio((r.sc, r.alph) for r in R)
    out["tc_alph"] = _ratio((r.tc, r.alph) for r in R)
    reds = [red for red in REDUCTION_NAMES if ("pos", red) in R[0].nfa]
    for c in CONSTRUCTIONS:
        for red in REDUCTION_NAMES:
            p = _prefix(c, red)
            if red not in reds:
                for suffix in ("q_avg", "q_std", "d_avg", "d_std", "det_pct", "hom_pct"):
                    out[f"{p}_{suffix}"] = float("nan")
                if red != "none":
                    out[f"{p}_dec_pct"] = float("nan")
                continue
            qs = [r.nfa[c, red][0] for r in R]
            ds = [r.nfa[c, red][1] for r in R]
            out[f"{p}_q_avg"] = mean(qs)
            out[f"{p}_q_std"] = pstdev(qs)
            out[f"{p}_d_avg"] = mean(ds)
            out[f"{p}_d_std"] = pstdev(ds)
            out[f"{p}_det_pct"] = pct([r.nfa[c, red][2] for r in R])
            out[f"{p}_hom_pct"] = pct([r.nfa[c, red][3] for r in R])
            if red != "none":
                out[f"{p}_dec_pct"] = 100.0 * mean(
                    [1 - r.nfa_size(c, red) / r.nfa_size(c) for r in R])
    out["dpos_alph1"] = _ratio((r.d("pos"), r.alph + 1) for r in R)
    out["qf_alph1"] = _ratio((r.q("f"), r.alph + 1) for r in R)
    out["df_alph1"] = _ratio((r.d("f"), r.alph + 1) for r in R)
    out["qpd_alph1"] = _ratio((r.q("pd"), r.alph + 1) for r in R)
    out["dpd_alph1"] = _ratio((r.d("pd"), r.alph + 1) for r in R)
    out["dpd_dpos"] = _ratio((r.d("pd"), r.d("pos")) for r in R)
    out["qpd_qf"] = _ratio((r.q("pd"), r.q("f")) for r in R)
    out["dpd_df"] = _ratio((r.d("pd"), r.d("f")) for r in R)
    out["oracle_checked"] = sum(r.oracle_checked for r in R)
    out["oracle_failures"] = sum(not r.oracle_ok for r in R)
    return out


@dataclass
class SampleStats:
    size: int
    k: int
    samples: int
    seed: int
    aggregates: dict[str, float]
    records: list[Record] = field(default_factory=list, repr=False)

    def row(self) -> dict:
        row = {"size": self.size, "k": self.k, "samples": self.samples, "seed": self.seed}
        row.update(self.aggregates)
        return row

    @classmethod
    def from_row(cls, row: dict) -> "SampleStats":
        head = ("size", "k", "samples", "seed")
        aggs = {}
        for key, value in row.items():
            if key in head:
                continue
            aggs[key] = int(value) if key.startswith("oracle_") else float(value)
        return cls(int(row["size"]), int(row["k"]), int(row["samples"]), int(row["seed"]), aggs)


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.6f}"


def to_csv(stats: Sequence[SampleStats]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = columns()
    w.writerow(cols)
    for s in stats:
        row = s.row()
        w.writerow([_fmt(row[c]) for c in cols])
    return buf.getvalue()


def read_csv(text: str) -> list[SampleStats]:
    return [SampleStats.from_row(row) for row in csv.DictReader(io.StringIO(text))]


# ---------------------------------------------------------------------------
# Driver


def sample_texts(size: int, k: int, m: int, seed: int,
                 sampler: RegexSampler | None = None) -> list[str]:
    sampler = sampler or RegexSampler(k)
    if sampler.count(size) == 0:
        raise ExperimentError(f"no regular expression of size {size}")
    return [sampler.text(size, derive_rng(seed, "gen", k, size, i)) for i in range(m)]


def run_experiment(sizes: Sequence[int], k: int, m: int, seed: int,
                   oracle_len: int = 6, oracle_fraction: float = 0.05,
                   jobs: int = 1, keep_records: bool = False) -> list[SampleStats]:
    """Generate ``m`` uniform expressions per size and aggregate their measures.

    A deterministic subset of records (chosen from the seed) also gets a
    bounded language check; ``oracle_fraction=1`` checks every record.
    Results depend only on the arguments, never on ``jobs``.
    """
    sampler = RegexSampler(k)
    out = []
    for size in sizes:
        texts = sample_texts(size, k, m, seed, sampler)
        jobs_args = []
        for i, text in enumerate(texts):
            check = derive_rng(seed, "oracle", k, size, i).random() < oracle_fraction
            jobs_args.append((i, text, oracle_len if check else None))
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as pool:
                records = list(pool.map(_measure_job, jobs_args, chunksize=16))
        else:
            records = [_measure_job(a) for a in jobs_args]
        stats = SampleStats(size, k, m, seed, stats_aggregate(records))
        if keep_records:
            stats.records = records
        out.append(stats)
    return out
