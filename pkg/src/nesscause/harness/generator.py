"""Seeded random acyclic models with table-valued equations."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence, Union

from ..expr import And, Case, Const, Eq, Expr, Not, Or, land
from ..model import CausalModel, Signature, Variable

MAX_ENDOGENOUS = 8
MAX_PARENTS = 4
MAX_EXOGENOUS = 2
MAX_DOMAIN = 3


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    n_endogenous: int = 5
    max_parents: int = 3
    domain_size: Union[int, tuple[int, ...]] = 2
    n_exogenous: int = 1

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 1 <= self.n_endogenous <= MAX_ENDOGENOUS:
            raise ValueError(f"n_endogenous must be in 1..{MAX_ENDOGENOUS}")
        if not 0 <= self.max_parents <= MAX_PARENTS:
            raise ValueError(f"max_parents must be in 0..{MAX_PARENTS}")
        if not 0 <= self.n_exogenous <= MAX_EXOGENOUS:
            raise ValueError(f"n_exogenous must be in 0..{MAX_EXOGENOUS}")
        sizes = self.sizes()
        if len(sizes) != self.n_exogenous + self.n_endogenous:
            raise ValueError("one domain size per variable (exogenous first) is required")
        if any(not 1 <= s <= MAX_DOMAIN for s in sizes):
            raise ValueError(f"domain sizes must be in 1..{MAX_DOMAIN}")

    def sizes(self) -> tuple[int, ...]:
        if isinstance(self.domain_size, int):
            return (self.domain_size,) * (self.n_exogenous + self.n_endogenous)
        return tuple(self.domain_size)


def sweep_config(seed: int) -> GeneratorConfig:
    """Binary models with 2-6 endogenous variables and at most 3 parents, varied by seed."""
    return GeneratorConfig(seed=seed, n_endogenous=2 + seed % 5, max_parents=3, n_exogenous=seed % 3)


def generate_model(cfg: GeneratorConfig) -> tuple[CausalModel, dict[str, str]]:
    """Draw a model and a context; a pure function of ``cfg``.

    The variable order is fixed up front (exogenous ``U*`` then endogenous
    ``X*``).  Each endogenous variable picks up to ``max_parents`` earlier
    variables and a uniformly random function table over them.
    """
    rng = random.Random(cfg.seed)
    sizes = cfg.sizes()
    exo = [Variable(f"U{i}", _tokens(sizes[i])) for i in range(cfg.n_exogenous)]
    endo = [Variable(f"X{i}", _tokens(sizes[cfg.n_exogenous + i])) for i in range(cfg.n_endogenous)]
    earlier: list[Variable] = list(exo)
    mechanisms: dict[str, Expr] = {}
    for var in endo:
        k = rng.randint(0, min(cfg.max_parents, len(earlier)))
        pa = sorted(rng.sample(earlier, k), key=earlier.index)
        rows = list(itertools.product(*(p.domain for p in pa)))
        outputs = [rng.choice(var.domain) for _ in rows]
        mechanisms[var.name] = _table_expr([p.name for p in pa], rows, outputs)
        earlier.append(var)
    context = {v.name: rng.choice(v.domain) for v in exo}
    return CausalModel(Signature(tuple(exo), tuple(endo)), mechanisms), context


def _tokens(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _table_expr(names: Sequence[str], rows: Sequence[tuple[str, ...]], outputs: Sequence[str]) -> Expr:
    if not names:
        return Const(outputs[0])
    branches = tuple(
        (land(*(Eq(n, v) for n, v in zip(names, row))), out) for row, out in zip(rows[:-1], outputs[:-1])
    )
    return Case(branches, outputs[-1])


# --------------------------------------------------------------------------
# syntactic rewriting that preserves the function an equation denotes


def rewrite_equivalent(model: CausalModel) -> CausalModel:
    """Same model, every equation rewritten into a different but equal form.

    Conjunctions and disjunctions go through De Morgan, atoms get double
    negations, and every equation gains a vacuous mention of an earlier
    variable (``Z == z & !Z == z``) so that syntactic and extensional
    parents differ.
    """
    names = model.exogenous + model.endogenous
    out = {}
    for target, expr in model.mechanisms.items():
        earlier = names[: names.index(target)]
        out[target] = _pad(_dual(expr), model, earlier[0] if earlier else None)
    return CausalModel(model.signature, out)


def _dual(e: Expr) -> Expr:
    if isinstance(e, Eq):
        return Not(Not(e))
    if isinstance(e, Not):
        return Not(_dual(e.operand))
    if isinstance(e, And):
        return Not(Or(Not(_dual(e.left)), Not(_dual(e.right))))
    if isinstance(e, Or):
        return Not(And(Not(_dual(e.left)), Not(_dual(e.right))))
    if isinstance(e, Case):
        return Case(tuple((_dual(c), v) for c, v in e.branches), e.default)
    return e


def _pad(e: Expr, model: CausalModel, witness_var: str | None) -> Expr:
    if witness_var is None:
        never: Expr = Not(Const("1"))
    else:
        z = Eq(witness_var, model.domain(witness_var)[0])
        never = And(z, Not(z))
    if isinstance(e, Case):
        return Case(((never, e.default),) + e.branches, e.default)
    if isinstance(e, Const):
        return Case(((never, e.value),), e.value)
    if _is_boolean(e):
        return Or(never, e)
    return e


def _is_boolean(e: Expr) -> bool:
    return isinstance(e, (Eq, Not, And, Or))
