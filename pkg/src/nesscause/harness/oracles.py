"""Brute-force reference procedures used to cross-check the engine.

These deliberately ignore every shortcut the engine takes (parent
restriction, memoised witness graphs, kernel tables): equations are
evaluated straight from their expressions over full assignments.
"""

from __future__ import annotations

import itertools
from typing import Mapping, Optional

from ..causation import Witness, _check_pair, counterfactually_depends
from ..errors import EffectInSet
from ..expr import evaluate_expr
from ..model import CausalModel, Context, Intervention, Literal, intervene, solve


def sufficient_bruteforce(model: CausalModel, u: Context, fixed: Mapping[str, str], effect: Literal) -> bool:
    """Sufficiency read literally: every completion of the other endogenous variables."""
    if effect.variable in fixed:
        raise EffectInSet(effect.variable)
    expr = model.mechanisms[effect.variable]
    free = [v for v in model.endogenous if v != effect.variable and v not in fixed]
    for values in itertools.product(*(model.domain(v) for v in free)):
        env = {**u, **fixed, **dict(zip(free, values))}
        if evaluate_expr(expr, env) != effect.value:
            return False
    return True


def direct_ness_full_search(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> Optional[Witness]:
    """Witness search over every subset of the other endogenous variables."""
    _check_pair(model, cause, effect)
    sol = solve(model, u)
    if sol[cause.variable] != cause.value:
        return None
    pool = sorted(v for v in model.endogenous if v not in (cause.variable, effect.variable))
    for size in range(len(pool) + 1):
        for combo in itertools.combinations(pool, size):
            w = {v: sol[v] for v in combo}
            if sufficient_bruteforce(model, u, {**w, cause.variable: cause.value}, effect) and not sufficient_bruteforce(
                model, u, w, effect
            ):
                return Witness(tuple(Literal(v, sol[v]) for v in combo))
    return None


def ness_bruteforce(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> bool:
    """NESS by trying every ordered sequence of distinct intermediate variables."""
    _check_pair(model, cause, effect)
    sol = solve(model, u)
    if sol[cause.variable] != cause.value or sol[effect.variable] != effect.value:
        return False
    pool = [v for v in model.endogenous if v not in (cause.variable, effect.variable)]
    memo: dict[tuple[str, str], bool] = {}

    def link(a: str, b: str) -> bool:
        if (a, b) not in memo:
            memo[(a, b)] = direct_ness_full_search(model, u, Literal(a, sol[a]), Literal(b, sol[b])) is not None
        return memo[(a, b)]

    for size in range(len(pool) + 1):
        for seq in itertools.permutations(pool, size):
            nodes = (cause.variable,) + seq + (effect.variable,)
            if all(link(a, b) for a, b in zip(nodes, nodes[1:])):
                return True
    return False


def exists_dependence_under_intervention(
    model: CausalModel, u: Context, cause: Literal, effect: Literal
) -> Optional[Intervention]:
    """Some intervention on variables other than cause and effect under which
    the effect counterfactually depends on the cause, or None.

    Smallest interventions first, then by variable name, then by value order.
    """
    _check_pair(model, cause, effect)
    pool = sorted(v for v in model.endogenous if v not in (cause.variable, effect.variable))
    for size in range(len(pool) + 1):
        for names in itertools.combinations(pool, size):
            for values in itertools.product(*(model.domain(n) for n in names)):
                iv = Intervention.of(dict(zip(names, values)))
                if counterfactually_depends(intervene(model, iv), u, cause, effect):
                    return iv
    return None
