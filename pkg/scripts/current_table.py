"""Derive the sine-Gordon Noether currents from the eliminated action and
print each with its degree, boost weight and the on-shell divergence."""

from z22susy import displays as DS
from z22susy import models as M
from z22susy.serialize import to_text

m = M.sine_gordon()
d = DS.sine_gordon(m.ctx)
L, sol = M.eliminate_auxiliary(M.component_lagrangian(m), "F")
delta = M.on_shell_susy(m, sol)
witness = M.QuasiInvarianceWitness(d["v_minus"], d["v_plus"])
currents = M.noether_currents(L, delta, witness)
eom = M.component_el(L=L, bases=["X", "psi_+", "psi_-"])

for label, cur in sorted(currents.items()):
    print(f"J^{{{label}}}  degree {cur.degree}  weight {cur.weight}")
    print("   ", to_text(cur.expression))
for s, r in M.conservation_check(currents, eom).items():
    print(f"eps_{s}: divergence vanishes on-shell: {r['ok']}")
