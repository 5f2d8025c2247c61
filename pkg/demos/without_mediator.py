"""
What happens without a mediator
===============================

Replace the synthesized connector by a plain relay that only passes
identical messages through, then look for the runs that get stuck.
"""

from mediation import check, parallel_compose
from mediation.fixtures import load_corpus, run_case
from mediation.synthesis import identity_relay

for case in load_corpus():
    if case.id == "messenger":
        continue
    relay = identity_relay(case.left, case.right, case.map)
    plain = check(parallel_compose(case.left, relay, case.right))
    mediated = run_case(case).verification
    print(f"{case.id:8s} relay ok={plain.ok!s:5s} stuck={len(plain.stuck_states)}   mediator ok={mediated.ok}")
