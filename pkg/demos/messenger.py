"""
Two instant messengers
======================

A Windows-style client acknowledges every text; a Jabber-style client
never does. Both talk to their own server through a handshake, a login
and a close. Synthesize a connector and check that they now interoperate.
"""

from mediation import check, parallel_compose, simulate, synthesize
from mediation.fixtures import load_corpus

case = next(c for c in load_corpus() if c.id == "messenger")
syn = synthesize(case.left, case.right, case.map)

# every pair of elementary behaviours, with the mismatches found in it
print(syn.matrix.render())

print(f"{len(syn.mediator_traces)} mediator traces, "
      f"{len(syn.mediator.states)} states in the connector")

report = check(parallel_compose(case.left, syn.mediator, case.right))
print(report.render())

# One run. The mediator takes the WM ack and keeps it from JM.
print(simulate(case.left, syn.mediator, case.right, seed=42).render())
