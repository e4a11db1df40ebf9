"""Differential testing of the interpreter against rewriting under ``conv``."""

from .campaign import CAMPAIGN_FUEL, CampaignSummary, SeedRecord, difftest_campaign, write_artifacts
from .generator import GenConfig, gen_program
from .harness import BOTH, INTERPRETER, REWRITER, Agree, Disagree, Inconclusive, Verdict, check_program, disagrees
from .shrink import shrink

__all__ = [
    "Agree", "BOTH", "CAMPAIGN_FUEL", "CampaignSummary", "Disagree", "GenConfig", "INTERPRETER",
    "Inconclusive", "REWRITER", "SeedRecord", "Verdict", "check_program", "difftest_campaign",
    "disagrees", "gen_program", "shrink", "write_artifacts",
]
