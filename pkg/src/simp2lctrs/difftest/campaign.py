"""Differential-testing campaigns over generated programs."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..interpreter import trace_json
from ..syntax.printer import show_program
from ..transform import Options
from .generator import GenConfig, gen_program
from .harness import Agree, Disagree, Inconclusive, Verdict, check_program

CAMPAIGN_FUEL = 50_000


@dataclass
class SeedRecord:
    seed: int
    verdict: Verdict

    @property
    def kind(self) -> str:
        return type(self.verdict).__name__.lower()

    def to_json(self) -> dict:
        v = self.verdict
        out: dict = {"seed": self.seed, "verdict": self.kind}
        if isinstance(v, Agree):
            out.update(value=v.value, globals=v.globals)
        elif isinstance(v, Inconclusive):
            out.update(side=v.side, reason=v.reason)
        else:
            out.update(interpreter=v.interp, rewriter=v.rewrite, shrunk=v.shrunk)
        return out


@dataclass
class CampaignSummary:
    config: GenConfig
    count: int
    fuel: int
    mutations: tuple[str, ...]
    records: list[SeedRecord] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        c = {"agree": 0, "disagree": 0, "inconclusive": 0}
        for r in self.records:
            c[r.kind] += 1
        return c

    @property
    def disagreements(self) -> list[SeedRecord]:
        return [r for r in self.records if isinstance(r.verdict, Disagree)]

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def merge(self, other: "CampaignSummary") -> "CampaignSummary":
        merged = CampaignSummary(self.config, self.count + other.count, self.fuel, self.mutations)
        merged.records = sorted(self.records + other.records, key=lambda r: r.seed)
        return merged

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "count": self.count,
            "fuel": self.fuel,
            "mutations": list(self.mutations),
            "counts": self.counts,
            "records": [r.to_json() for r in self.records],
        }

    def summary_line(self) -> str:
        c = self.counts
        return f"{self.count} programs: {c['agree']} agree, {c['disagree']} disagree, {c['inconclusive']} inconclusive"


def _check_seed(args) -> SeedRecord:
    cfg, seed, fuel, options, minimize = args
    program = gen_program(cfg, seed)
    return SeedRecord(seed, check_program(program, fuel, options, minimize=minimize))


def difftest_campaign(
    cfg: GenConfig = GenConfig(),
    count: int = 200,
    fuel: int = CAMPAIGN_FUEL,
    options: Options = Options(),
    out_dir: Optional[Path] = None,
    minimize_limit: int = 3,
    stop_after: Optional[int] = None,
    workers: int = 1,
) -> CampaignSummary:
    """Check ``count`` programs with seeds ``cfg.seed, cfg.seed + 1, ...``.

    Only the first ``minimize_limit`` disagreements are shrunk; the rest keep
    the original program as their minimized form.  ``stop_after`` ends the
    campaign early once that many disagreements were seen.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    summary = CampaignSummary(cfg, 0, fuel, tuple(sorted(options.mutations)))
    seeds = [cfg.seed + k for k in range(count)]
    if workers > 1 and stop_after is None:
        jobs = [(cfg, s, fuel, options, False) for s in seeds]
        with ProcessPoolExecutor(workers) as pool:
            summary.records = list(pool.map(_check_seed, jobs, chunksize=8))
        summary.count = count
        # shrink afterwards, in seed order, so the artifacts do not depend on scheduling
        shrunk = 0
        for k, rec in enumerate(summary.records):
            if isinstance(rec.verdict, Disagree) and shrunk < minimize_limit:
                summary.records[k] = _check_seed((cfg, rec.seed, fuel, options, True))
                shrunk += 1
    else:
        shrunk = 0
        for s in seeds:
            rec = _check_seed((cfg, s, fuel, options, shrunk < minimize_limit))
            summary.records.append(rec)
            summary.count += 1
            if isinstance(rec.verdict, Disagree):
                shrunk += 1
                if stop_after is not None and len(summary.disagreements) >= stop_after:
                    break
    if out_dir is not None:
        write_artifacts(summary, Path(out_dir))
    return summary


def write_artifacts(summary: CampaignSummary, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(json.dumps(summary.to_json(), indent=1) + "\n", encoding="utf-8")
    for rec in summary.disagreements:
        v = rec.verdict
        assert isinstance(v, Disagree)
        stem = out_dir / f"seed-{rec.seed}"
        Path(f"{stem}.simp").write_text(show_program(v.program), encoding="utf-8")
        Path(f"{stem}.min.simp").write_text(show_program(v.minimized), encoding="utf-8")
        Path(f"{stem}.interp.json").write_text(trace_json(v.interp_trace) + "\n", encoding="utf-8")
        rw = v.rewrite_trace.to_json() if v.rewrite_trace is not None else {}
        Path(f"{stem}.rewrite.json").write_text(json.dumps(rw, indent=1) + "\n", encoding="utf-8")
