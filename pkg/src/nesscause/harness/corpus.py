"""Golden-verdict corpus of the canonical worked examples.

Each scenario is a ``NAME.scm.txt`` file holding one model with one context,
next to ``NAME.golden.json``: an object mapping ``"C=c -> E=e"`` to
``{definition: expected boolean}``.  Besides the definitions in
:data:`~nesscause.causation.DEFINITIONS`, golden rows may pin
``cf_sufficient`` and ``interventionist`` (see :mod:`.checks`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from ..errors import CausalError, CorpusMissing
from ..lang import ModelDocument, parse_document
from ..model import CausalModel
from .checks import evaluate_check, parse_pair_key


def default_corpus_dir() -> Path:
    return Path(str(resources.files("nesscause") / "corpus"))


@dataclass(frozen=True)
class CorpusResult:
    scenario: str
    pair: str
    definition: str
    expected: bool
    actual: Optional[bool]
    error: str = ""

    @property
    def passed(self) -> bool:
        return self.actual == self.expected and not self.error


@dataclass
class CorpusReport:
    results: list[CorpusResult] = field(default_factory=list)

    @property
    def failures(self) -> list[CorpusResult]:
        return [r for r in self.results if not r.passed]

    @property
    def ok(self) -> bool:
        return bool(self.results) and not self.failures


def load_scenario(path: Path) -> tuple[ModelDocument, CausalModel, dict[str, str]]:
    doc = parse_document(path.read_text(encoding="utf-8"))
    if len(doc.models) != 1 or len(doc.contexts) != 1:
        raise ValueError(f"{path.name}: a scenario holds exactly one model and one context")
    ctx = next(iter(doc.contexts.values()))
    return doc, doc.models[ctx.model], dict(ctx.values)


def scenario_files(corpus_dir: Union[str, Path, None] = None) -> list[Path]:
    root = Path(corpus_dir) if corpus_dir is not None else default_corpus_dir()
    files = sorted(root.glob("*.scm.txt")) if root.is_dir() else []
    if not files:
        raise CorpusMissing(f"no *.scm.txt scenarios under {root}")
    return files


def run_corpus(corpus_dir: Union[str, Path, None] = None) -> CorpusReport:
    """Check every golden verdict of every scenario."""
    report = CorpusReport()
    for path in scenario_files(corpus_dir):
        scenario = path.name[: -len(".scm.txt")]
        golden_path = path.with_name(scenario + ".golden.json")
        if not golden_path.exists():
            raise CorpusMissing(f"{path.name} has no {golden_path.name}")
        golden = json.loads(golden_path.read_text(encoding="utf-8"))
        _, model, u = load_scenario(path)
        for key, expected_row in golden.items():
            cause, effect = parse_pair_key(key)
            for definition, expected in expected_row.items():
                try:
                    actual: Optional[bool] = evaluate_check(model, u, definition, cause, effect)
                    err = ""
                except (CausalError, ValueError, LookupError) as exc:
                    actual, err = None, str(exc)
                report.results.append(CorpusResult(scenario, key, definition, bool(expected), actual, err))
    return report
