"""Walk through the two worked derivations: check, translate, count, interpret."""
from mll.counting import count_general, derived_p, derived_t, di_invariant_holds
from mll.di_kernel import check_di, expand_sigma_switch, render_di, trace_formulas
from mll.fixtures import cut_sc, sample_di
from mll.sc_kernel import check_sc, eliminate_cuts, render_sc, sc_metrics
from mll.semantics import interpret_di, interpret_sc, render_clique
from mll.syntax import render_formula, render_sequent
from mll.translate import di_to_sc_direct, di_to_sc_naive, sc_to_di


def section(title):
    print(f"\n== {title}")


d = sample_di()
section("deep inference trace")
for line in trace_formulas(d):
    print("  ", render_formula(line))
f = check_di(d)
c = count_general(f)
print(f"n_t={derived_t(c)} n_p={derived_p(c)} invariant holds: {di_invariant_holds(f)}")
print("sigma-switch expanded to", len(expand_sigma_switch(d).steps), "steps")

section("to sequent calculus")
for name, out in (("naive", di_to_sc_naive(d)), ("direct", di_to_sc_direct(d))):
    m = {k: v for k, v in sc_metrics(out).items() if v}
    print(f"{name}: {m}")
print(render_sc(di_to_sc_direct(d)))

section("clique of the trace")
print(render_clique(interpret_di(d), f))

s = cut_sc()
section("sequent proof with a cut")
print(render_sequent(check_sc(s)))
print(render_di(sc_to_di(s)), end="")
cut_free = eliminate_cuts(s)
print("cut-free:", render_sc(cut_free))
print("same clique after cut elimination:", interpret_sc(cut_free) == interpret_sc(s))
print("same clique after translation:", interpret_di(sc_to_di(s)) == interpret_sc(s))
