"""Seeded randomized sweeps over the catalog with deterministic JSON reports."""
from __future__ import annotations

import json
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from .catalog import BindingRejected, list_theorems, get_theorem, random_binding, verify

SCHEMA_NAME = "clausen-sweep-report"
SCHEMA_VERSION = 1
MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea and Flood): a tiny portable 64-bit generator."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], unbiased by rejection."""
        span = hi - lo + 1
        if span <= 0:
            raise ValueError("empty range")
        limit = ((1 << 64) // span) * span
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + x % span


def theorem_stream(seed: int, theorem_id: str) -> SplitMix64:
    """Each theorem draws from its own stream so results do not depend on the filter."""
    return SplitMix64((seed ^ zlib.crc32(theorem_id.encode("utf-8"))) & MASK64)


PRNG_HEADER = {
    "algorithm": "splitmix64",
    "stream": "state0 = seed xor crc32(theorem id)",
    "randint": "lo + x mod span, rejecting x >= floor(2^64/span)*span",
}


@dataclass
class SweepConfig:
    theorems: list = field(default_factory=lambda: ["all"])
    trials: int = 100
    seed: int = 0
    m_max: int = 8
    k_max: int = 8
    bound: int = 20
    tol: float = 1e-10
    timings: bool = False

    def theorem_ids(self) -> list:
        if not self.theorems or "all" in self.theorems:
            return list_theorems()
        return [get_theorem(t).key for t in self.theorems]

    def as_dict(self) -> dict:
        out = asdict(self)
        out["theorems"] = self.theorem_ids()
        return out


def _run_theorem(args) -> list:
    theorem_id, config = args
    rng = theorem_stream(config.seed, theorem_id)
    records = []
    for trial in range(config.trials):
        start = time.perf_counter()
        try:
            inst = random_binding(theorem_id, rng, config.m_max, config.k_max, config.bound)
        except BindingRejected as exc:
            t = get_theorem(theorem_id)
            rec = {"theorem": t.key, "equation": t.equation, "trial": trial, "verdict": "inapplicable",
                   "diagnostics": str(exc)}
        else:
            rec = {"trial": trial}
            rec.update(verify(inst, float_tol=config.tol).as_dict())
        if config.timings:
            rec["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
        records.append(rec)
    return records


def run_sweep(config: SweepConfig, jobs: int = 1) -> dict:
    """Build the report document; record order is by index whatever ``jobs`` is."""
    ids = config.theorem_ids()
    work = [(t, config) for t in ids]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_theorem, work))
    else:
        chunks = [_run_theorem(w) for w in work]
    records = []
    for chunk in chunks:
        for rec in chunk:
            records.append({"index": len(records), **rec})
    return {
        "schema": SCHEMA_NAME,
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "prng": PRNG_HEADER,
        "config": config.as_dict(),
        "records": records,
        "summary": summarize(records),
    }


def summarize(records: list) -> dict:
    counts = {"total": len(records), "equal": 0, "mismatch": 0, "inapplicable": 0}
    for rec in records:
        counts[rec["verdict"]] += 1
    return counts


def dumps_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads_report(text: str) -> dict:
    return json.loads(text)


def write_report(doc: dict, path: Optional[str]) -> str:
    text = dumps_report(doc)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
