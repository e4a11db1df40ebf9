"""Run the summation program both ways: interpreter and rewriting under conv.

    python3 demos/summation_pipeline.py
"""

from simp2lctrs import corpus_dir
from simp2lctrs.interpreter import run_program
from simp2lctrs.lctrs import emit, rewrite_to_nf, show_term
from simp2lctrs.syntax import parse_program
from simp2lctrs.transform import conv, initial_term, read_final

program = parse_program((corpus_dir() / "fig2_sum.simp").read_text())
system = conv(program)

print(emit(system))

result = run_program(program)
print(f"interpreter: return {result.value}, globals {result.globals}")

normal_form, trace = rewrite_to_nf(initial_term(program), system)
for step in trace.steps[:8]:
    print(f"  {step.rule:<10}  {show_term(step.term)}")
print(f"  ... {trace.count} steps in total")
print(f"rewriter:    {show_term(normal_form)} -> {read_final(normal_form, program)}")
