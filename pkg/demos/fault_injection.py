"""Show that the differential tester notices a broken translation.

Runs a short campaign on the correct translation and on each mutant, then
prints the shrunk witness for the first disagreement of each mutant.

    python3 demos/fault_injection.py [count]
"""

import sys

from simp2lctrs.difftest import GenConfig, difftest_campaign
from simp2lctrs.syntax import show_program
from simp2lctrs.transform import MUTATIONS, Options

count = int(sys.argv[1]) if len(sys.argv) > 1 else 50

print("unmodified:", difftest_campaign(GenConfig(), count).summary_line())
for fault in MUTATIONS:
    summary = difftest_campaign(GenConfig(), count, options=Options(mutations=frozenset({fault})), minimize_limit=1)
    print(f"\n{fault}: {summary.summary_line()}")
    if summary.disagreements:
        first = summary.disagreements[0]
        print(f"seed {first.seed}, interpreter {first.verdict.interp}, rewriter {first.verdict.rewrite}")
        print(show_program(first.verdict.minimized), end="")
