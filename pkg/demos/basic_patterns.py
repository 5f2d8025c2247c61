"""
The six basic mismatches
========================

Align one trace of each component, name the mismatch, and print the
mediator trace that resolves it.
"""

from mediation import Trace, align, classify, mediator_trace, parse_map

cases = [
    ("extra send", "?m1 !m2", "!m1", ""),
    ("missing send", "?m1", "!m1 ?m2", "producible m2"),
    ("different names", "!Information", "?Request", "Information <-> Request"),
    ("different order", "!FirstName !LastName", "?LastName ?FirstName", ""),
    ("one message vs two", "!FirstLastName", "?FirstName ?LastName", "FirstLastName <-> FirstName, LastName"),
    ("two messages vs one", "!FirstName !LastName", "?FirstLastName", "FirstName, LastName <-> FirstLastName"),
]

for title, left, right, names in cases:
    result = align(Trace.of(left), Trace.of(right), parse_map(names))
    print(f"# {title}: [{left}] vs [{right}]")
    print(classify(result).render(), end="")
    print("mediator:", mediator_trace(result))
    print()

# When both messages cross (each side first waits for the other), nothing
# can be forwarded. The mediator has to make up one message per side and
# swallow the other.
crossing = align(Trace.of("?m1 !m2"), Trace.of("?m2 !m1"), parse_map("producible m1, m2"))
print(classify(crossing).render(), end="")
print("mediator:", mediator_trace(crossing))
