"""Golden corpus: one directory per case.

Each case directory holds ``left.lts``/``right.lts`` (or the single-trace
shorthand ``left.trace``/``right.trace``), ``names.map``, ``expected.report``
and ``expected.mediator``. For single-trace cases the expected report is the
classification of the one alignment and the expected mediator is its trace,
one action per line. For full-LTS cases they are the compatibility matrix
report and the serialized mediator machine.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .decompose import DecomposeConfig
from .lts import Lts, LtsError, Trace, linear_lts, parse_lts, parse_trace, serialize_lts
from .mismatch import AlignConfig, align, classify
from .semantics import CorrespondenceMap, parse_map
from .synthesis import mediator_trace, synthesize
from .verify import VerifyReport, check, parallel_compose

__all__ = ["CaseResult", "CorpusError", "GoldenCase", "default_corpus", "load_case", "load_corpus", "run_case"]

PATTERN_CASE_IDS = (
    "p1-base", "p1-a", "p1-b", "p1-c",
    "p2-base", "p2-a", "p2-b", "p2-c",
    "p3-base", "p3-a",
    "p4-base", "p4-a", "p4-b", "p4-c",
    "p5-base",
    "p6-base",
)


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class GoldenCase:
    id: str
    left: Lts
    right: Lts
    map: CorrespondenceMap
    expected_report: str
    expected_mediator: str
    left_trace: Trace | None = None
    right_trace: Trace | None = None

    @property
    def single_trace(self) -> bool:
        return self.left_trace is not None


def default_corpus() -> Path:
    return Path(str(resources.files("mediation") / "corpus"))


def _side(path: Path, side: str, case_id: str) -> tuple[Lts, Trace | None]:
    lts_file, trace_file = path / f"{side}.lts", path / f"{side}.trace"
    try:
        if lts_file.exists():
            return parse_lts(lts_file.read_text()), None
        if trace_file.exists():
            trace = parse_trace(trace_file.read_text())
            return linear_lts(trace, name=f"{side}_{case_id.replace('-', '_')}"), trace
    except LtsError as e:
        raise CorpusError(f"{case_id}/{side}: {e}") from None
    raise CorpusError(f"{case_id}: missing {side}.lts or {side}.trace")


def load_case(path: Path) -> GoldenCase:
    path = Path(path)
    cid = path.name
    left, lt = _side(path, "left", cid)
    right, rt = _side(path, "right", cid)
    if (lt is None) != (rt is None):
        raise CorpusError(f"{cid}: mixes trace and lts inputs")
    texts = {}
    for name in ("names.map", "expected.report", "expected.mediator"):
        f = path / name
        if not f.exists():
            raise CorpusError(f"{cid}: missing {name}")
        texts[name] = f.read_text()
    try:
        cmap = parse_map(texts["names.map"])
    except ValueError as e:
        raise CorpusError(f"{cid}/names.map: {e}") from None
    return GoldenCase(cid, left, right, cmap, texts["expected.report"], texts["expected.mediator"], lt, rt)


def load_corpus(directory: str | Path | None = None) -> list[GoldenCase]:
    root = Path(directory) if directory is not None else default_corpus()
    return [load_case(p) for p in sorted(root.iterdir()) if p.is_dir()]


@dataclass(frozen=True)
class CaseResult:
    report: str
    mediator_text: str
    mediator: Lts | None
    verification: VerifyReport | None


def run_case(
    case: GoldenCase,
    dcfg: DecomposeConfig = DecomposeConfig(),
    acfg: AlignConfig = AlignConfig(),
) -> CaseResult:
    """Align, classify, synthesize and verify one case."""
    if case.single_trace:
        result = align(case.left_trace, case.right_trace, case.map, acfg)
        report = classify(result).render()
        if not result.compatible:
            return CaseResult(report, "", None, None)
        trace = mediator_trace(result)
        mediator = linear_lts(trace, name="Mediator")
        text = "\n".join(str(a) for a in trace) + "\n"
    else:
        syn = synthesize(case.left, case.right, case.map, dcfg, acfg)
        report = syn.matrix.render()
        if syn.mediator is None:
            return CaseResult(report, "", None, None)
        mediator = syn.mediator
        text = serialize_lts(mediator)
    verification = check(parallel_compose(case.left, mediator, case.right))
    return CaseResult(report, text, mediator, verification)
