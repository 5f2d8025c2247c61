"""Acceptance criteria, one test each, with a pass/fail line in the summary."""
import random
import time

from conftest import ACCEPTANCE
from mediation.decompose import DecomposeConfig, enumerate_traces
from mediation.fixtures import PATTERN_CASE_IDS, run_case
from mediation.lts import Port, isomorphic, parse_lts, serialize_lts
from mediation.mismatch import align, classify
from mediation.synthesis import identity_relay, mediator_trace, synthesize
from mediation.verify import check, confirm_maximal_runs, parallel_compose

from oracles import all_paths, brute_force_cost, random_lts, random_map, random_trace


def record(name, ok, detail):
    ACCEPTANCE.append((name, ok, detail))
    assert ok, f"{name}: {detail}"


# variant each golden case must classify to
STATED = {
    "p1-base": (1, "base"), "p1-a": (1, "a"), "p1-b": (1, "b"), "p1-c": (1, "c"),
    "p2-base": (2, "base"), "p2-a": (2, "a"), "p2-b": (2, "b"), "p2-c": (2, "c"),
    "p3-base": (3, "base"), "p3-a": (3, "a"),
    "p4-base": (4, "base"), "p4-a": (4, "a"), "p4-b": (4, "b"), "p4-c": (1, "4c"),
    "p5-base": (5, "base"), "p6-base": (6, "base"),
}


def test_1_golden_pattern_suite(corpus):
    t = time.perf_counter()
    bad = []
    for cid in PATTERN_CASE_IDS:
        case = corpus[cid]
        res = run_case(case)
        report = classify(align(case.left_trace, case.right_trace, case.map))
        ok = (
            STATED[cid] in report.patterns()
            and res.report == case.expected_report
            and res.mediator_text == case.expected_mediator
            and res.verification.ok
        )
        if not ok:
            bad.append(cid)
    elapsed = time.perf_counter() - t
    record("1 golden pattern suite", not bad and elapsed < 1.0, f"16 cases, failures={bad}, {elapsed:.3f}s (<1s)")


def test_2_literal_mediator_traces(corpus):
    expected = {
        "p4-base": "L.?FirstName L.?LastName R.!LastName R.!FirstName",
        "p5-base": "L.?FirstLastName R.!FirstName R.!LastName",
        "p6-base": "L.?FirstName L.?LastName R.!FirstLastName",
        "p3-base": "L.?Information R.!Request",
    }
    bad = []
    for cid, text in expected.items():
        case = corpus[cid]
        got = str(mediator_trace(align(case.left_trace, case.right_trace, case.map)))
        if got != text or case.expected_mediator.split() != text.split():
            bad.append(cid)
    record("2 literal mediator traces", not bad, f"mismatches={bad}")


def test_3_messenger_end_to_end(corpus):
    case = corpus["messenger"]
    t = time.perf_counter()
    syn = synthesize(case.left, case.right, case.map)
    rep = check(parallel_compose(case.left, syn.mediator, case.right))
    elapsed = time.perf_counter() - t
    actions = {a for tr in syn.mediator_traces for a in tr}
    consume = any(a.port is Port.LEFT and a.label == "ack" and not a.is_send for a in actions)
    produce = any(a.port is Port.LEFT and a.label == "ack" and a.is_send for a in actions)
    server = {"handshake", "handshake_ok", "login", "login_ok", "close", "close_ok"}
    forwarded_only = all(
        s.kind.value == "forward"
        for _, _, al in syn.matrix.compatible_pairs()
        for s in al.steps
        if set(s.labels) & server
    )
    ok = rep.ok and consume and produce and forwarded_only and elapsed < 5 and rep.state_count < 10**4
    record(
        "3 messenger end-to-end",
        ok,
        f"ok={rep.ok} ack consume={consume} produce={produce} server forward-only={forwarded_only} "
        f"states={rep.state_count} {elapsed:.3f}s",
    )


def test_4_negative_control(corpus):
    failures = []
    for cid in PATTERN_CASE_IDS:
        case = corpus[cid]
        relay = identity_relay(case.left, case.right, case.map)
        rep = check(parallel_compose(case.left, relay, case.right))
        if rep.goal_reachable and not rep.stuck_states:
            failures.append(cid)
    record("4 mediator necessity", not failures, f"relay wrongly succeeded on {failures}")


def test_5_alignment_optimality():
    rng = random.Random(20240501)
    t = time.perf_counter()
    disagreements = 0
    for _ in range(500):
        L, R, m = random_trace(rng), random_trace(rng), random_map(rng)
        a = align(L, R, m)
        got = a.cost if a.compatible else float("inf")
        if got != brute_force_cost(L, R, m):
            disagreements += 1
    elapsed = time.perf_counter() - t
    record("5 alignment optimality", disagreements == 0 and elapsed < 30, f"500 pairs, disagreements={disagreements}, {elapsed:.2f}s")


def test_6_decomposition_oracle():
    rng = random.Random(6)
    mismatches = monotone_failures = 0
    for _ in range(200):
        lts = random_lts(rng)
        sets = {}
        for bound in (0, 1, 2):
            ts = enumerate_traces(lts, DecomposeConfig(bound, 10**6))
            sets[bound] = set(ts.traces)
            if bound < 2 and {tuple(map(str, t)) for t in ts} != all_paths(lts, bound):
                mismatches += 1
        if not (sets[0] <= sets[1] <= sets[2]):
            monotone_failures += 1
    record(
        "6 decomposition oracle",
        mismatches == 0 and monotone_failures == 0,
        f"200 machines, oracle mismatches={mismatches}, monotonicity failures={monotone_failures}",
    )


def test_7_format_round_trip(corpus):
    machines = []
    for case in corpus.values():
        machines += [case.left, case.right]
        res = run_case(case)
        machines.append(res.mediator)
    rng = random.Random(7)
    machines += [random_lts(rng) for _ in range(200)]
    bad = 0
    for lts in machines:
        text = serialize_lts(lts)
        back = parse_lts(text)
        if not isomorphic(lts, back) or serialize_lts(back) != text or serialize_lts(lts) != text:
            bad += 1
    record("7 format round-trip", bad == 0, f"{len(machines)} machines, failures={bad}")


def _random_system(rng):
    alphabet = ("a", "b", "c")
    left = random_lts(rng, 5, 7, alphabet)
    right = random_lts(rng, 5, 7, alphabet)
    return left, right, random_map(rng, list(alphabet))


def test_8_verification_consistency(corpus):
    counterexamples = 0
    systems = []
    for case in corpus.values():
        res = run_case(case)
        systems.append((case.left, res.mediator, case.right))
    rng = random.Random(8)
    random_count = 0
    while random_count < 100:
        left, right, m = _random_system(rng)
        syn = synthesize(left, right, m)
        if syn.mediator is None:
            continue
        systems.append((left, syn.mediator, right))
        random_count += 1
    confirmed = 0
    for left, med, right in systems:
        p = parallel_compose(left, med, right)
        if check(p).ok:
            confirmed += 1
            if confirm_maximal_runs(p):
                counterexamples += 1
    record(
        "8 verification consistency",
        counterexamples == 0,
        f"{len(systems)} systems, {confirmed} verified, counterexamples={counterexamples}",
    )
