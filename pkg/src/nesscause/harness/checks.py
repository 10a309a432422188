"""Verdict matrices and the theorem/property checks run over them."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

from ..causation import (
    DEFINITIONS,
    BVCertificate,
    CNESSCertificate,
    decide,
    direct_ness_cause,
    ness_cause,
    sufficient,
    sufficient_interventional,
    verify_certificate,
)
from ..errors import CausalError
from ..model import CausalModel, Context, Literal, intervene, parents, solve, validate
from .generator import GeneratorConfig, generate_model, sweep_config
from .oracles import direct_ness_full_search, exists_dependence_under_intervention

# derived verdicts that the corpus may also pin down
EXTRA_CHECKS = ("cf_sufficient", "interventionist")


def pair_key(cause: Literal, effect: Literal) -> str:
    return f"{cause} -> {effect}"


def parse_pair_key(key: str) -> tuple[Literal, Literal]:
    left, sep, right = key.partition("->")
    if not sep:
        raise ValueError(f"expected 'C=c -> E=e', got {key!r}")
    return Literal.parse(left), Literal.parse(right)


def actual_pairs(model: CausalModel, u: Context) -> list[tuple[Literal, Literal]]:
    sol = solve(model, u)
    return [
        (Literal(c, sol[c]), Literal(e, sol[e])) for c in model.endogenous for e in model.endogenous if c != e
    ]


# --------------------------------------------------------------------------
# single checks


def cf_sufficient(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> bool:
    """Whether some c' != c makes {C=c'} sufficient for E=e in the setting (M_{C<-c'}, u)."""
    for alt in model.domain(cause.variable):
        if alt != cause.value and sufficient(intervene(model, {cause.variable: alt}), u, {cause.variable: alt}, effect):
            return True
    return False


def evaluate_check(model: CausalModel, u: Context, name: str, cause: Literal, effect: Literal) -> bool:
    if name == "cf_sufficient":
        return cf_sufficient(model, u, cause, effect)
    if name == "interventionist":
        return exists_dependence_under_intervention(model, u, cause, effect) is not None
    return decide(model, u, name, cause, effect).holds


def theorem_2_rhs(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> bool:
    """NESS in (M,u), and C=c' NESS-causes some E=e' != e in (M_{C<-c'}, u)."""
    if ness_cause(model, u, cause, effect) is None:
        return False
    for alt in model.domain(cause.variable):
        cf = intervene(model, {cause.variable: alt})
        for other in model.domain(effect.variable):
            if other != effect.value and ness_cause(cf, u, Literal(cause.variable, alt), Literal(effect.variable, other)):
                return True
    return False


@dataclass(frozen=True)
class Violation:
    prop: str
    pair: str
    detail: str = ""
    seed: Optional[int] = None
    config: Optional[dict] = None

    def __str__(self) -> str:
        where = f" seed={self.seed} config={self.config}" if self.seed is not None else ""
        return f"{self.prop}: {self.pair}: {self.detail}{where}"


def check_theorem_2(model: CausalModel, u: Context) -> list[Violation]:
    """Compare both sides of the dependence/NESS biconditional on every ordered pair."""
    validate(model)
    out = []
    for cause, effect in actual_pairs(model, u):
        lhs = decide(model, u, "cd", cause, effect).holds
        rhs = theorem_2_rhs(model, u, cause, effect)
        if lhs != rhs:
            out.append(Violation("theorem_2", pair_key(cause, effect), f"cd={lhs} but ness-side={rhs}"))
    return out


# --------------------------------------------------------------------------
# verdict matrix


@dataclass
class VerdictMatrix:
    rows: dict[str, dict[str, bool]]
    violations: list[Violation] = field(default_factory=list)

    def to_json(self) -> dict[str, dict[str, bool]]:
        return {k: dict(v) for k, v in self.rows.items()}


def row_violations(key: str, row: Mapping[str, bool]) -> list[Violation]:
    """Containments every row must satisfy, checked on whichever columns are present."""
    out = []

    def need(cond: bool, what: str) -> None:
        if not cond:
            out.append(Violation("containment", key, what))

    get = row.get
    if get("ness") is not None:
        for d in ("dness", "bv", "cness"):
            if get(d):
                need(bool(get("ness")), f"{d} without ness")
    if get("cd"):
        for d in ("ness", "bv", "cness", "hp"):
            if get(d) is not None:
                need(bool(get(d)), f"cd without {d}")
    if get("theorem_2") is not None and get("cd") is not None:
        need(get("theorem_2") == get("cd"), "dependence/NESS biconditional fails")
    if get("dness") and get("parent") is not None:
        need(bool(get("parent")), "direct NESS cause is not a parent")
    return out


def verdict_matrix(
    model: CausalModel, u: Context, definitions: Sequence[str] = DEFINITIONS, *, annotate: bool = True
) -> VerdictMatrix:
    """All definitions on all ordered pairs of actual endogenous literals."""
    validate(model)
    rows: dict[str, dict[str, bool]] = {}
    violations: list[Violation] = []
    for cause, effect in actual_pairs(model, u):
        key = pair_key(cause, effect)
        row = {d: decide(model, u, d, cause, effect).holds for d in definitions}
        rows[key] = row
        if annotate:
            extra = dict(row)
            extra["theorem_2"] = theorem_2_rhs(model, u, cause, effect)
            if "cd" not in extra:
                extra["cd"] = decide(model, u, "cd", cause, effect).holds
            extra["parent"] = cause.variable in parents(model, effect.variable)
            violations.extend(row_violations(key, extra))
    return VerdictMatrix(rows, violations)


# --------------------------------------------------------------------------
# randomized property suite


PROPERTIES = (
    "generator_validity",
    "theorem_2",
    "dependence",
    "counterfactual",
    "sufficiency_oracle",
    "dness_oracle",
    "certificate_replay",
)


@dataclass
class PropertyReport:
    checked: dict[str, int] = field(default_factory=lambda: {p: 0 for p in PROPERTIES})
    violations: list[Violation] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, prop: str) -> int:
        return sum(1 for v in self.violations if v.prop == prop)

    def to_json(self) -> dict:
        return {
            "seeds": [self.seeds[0], self.seeds[-1]] if self.seeds else [],
            "properties": {p: {"checked": self.checked[p], "violations": self.count(p)} for p in PROPERTIES},
            "violations": [asdict(v) for v in self.violations],
        }


def check_model_properties(
    model: CausalModel, u: Context, report: PropertyReport, *, seed: Optional[int] = None,
    config: Optional[GeneratorConfig] = None, sufficiency_samples: int = 10,
) -> None:
    """Run every property on one model; violations carry reproduction data."""
    cfg = asdict(config) if config is not None else None

    def bad(prop: str, pair: str, detail: str) -> None:
        report.violations.append(Violation(prop, pair, detail, seed, cfg))

    report.checked["generator_validity"] += 1
    try:
        validate(model)
    except CausalError as exc:
        bad("generator_validity", "-", str(exc))
        return

    for cause, effect in actual_pairs(model, u):
        key = pair_key(cause, effect)
        verdicts = {d: decide(model, u, d, cause, effect) for d in ("cd", "dness", "ness", "bv", "cness")}
        cd = verdicts["cd"].holds

        report.checked["theorem_2"] += 1
        if cd != theorem_2_rhs(model, u, cause, effect):
            bad("theorem_2", key, f"cd={cd}")

        report.checked["dependence"] += 1
        if cd and not all(verdicts[d].holds for d in ("ness", "bv", "cness")):
            missing = [d for d in ("ness", "bv", "cness") if not verdicts[d].holds]
            bad("dependence", key, f"cd holds but not {', '.join(missing)}")

        for d in ("bv", "cness"):
            v = verdicts[d]
            if v.holds:
                report.checked["counterfactual"] += 1
                assert isinstance(v.certificate, (BVCertificate, CNESSCertificate))
                alt = v.certificate.alternative
                cf = intervene(model, {cause.variable: alt})
                if sufficient(cf, u, {cause.variable: alt}, effect):
                    bad("counterfactual", key, f"{d}: {{{cause.variable}={alt}}} sufficient in counterfactual")

        report.checked["dness_oracle"] += 1
        full = direct_ness_full_search(model, u, cause, effect) is not None
        if full != verdicts["dness"].holds:
            bad("dness_oracle", key, f"parent-restricted={verdicts['dness'].holds} full={full}")

        for d, v in verdicts.items():
            if v.holds and v.certificate is not None:
                report.checked["certificate_replay"] += 1
                if not verify_certificate(model, u, d, cause, effect, v.certificate):
                    bad("certificate_replay", key, f"{d} certificate {v.certificate} does not replay")

    rng = random.Random(f"suff:{seed}")
    for _ in range(sufficiency_samples):
        effect_var = rng.choice(model.endogenous)
        effect = Literal(effect_var, rng.choice(model.domain(effect_var)))
        others = [v for v in model.endogenous if v != effect_var]
        chosen = rng.sample(others, rng.randint(0, len(others)))
        fixed = {v: rng.choice(model.domain(v)) for v in chosen}
        report.checked["sufficiency_oracle"] += 1
        a = sufficient(model, u, fixed, effect)
        b = sufficient_interventional(model, u, fixed, effect)
        if a != b:
            bad("sufficiency_oracle", f"{fixed} => {effect}", f"parent-restricted={a} interventional={b}")


def run_properties(
    seeds: Iterable[int],
    config_for: Callable[[int], GeneratorConfig] = sweep_config,
    *,
    sufficiency_samples: int = 10,
) -> PropertyReport:
    """Property suite over a seed sweep; deterministic, merged in seed order."""
    report = PropertyReport()
    for seed in seeds:
        cfg = config_for(seed)
        model, u = generate_model(cfg)
        report.seeds.append(seed)
        check_model_properties(model, u, report, seed=seed, config=cfg, sufficiency_samples=sufficiency_samples)
    return report
