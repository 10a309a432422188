"""Expression trees for structural equations.

Expressions are only a way of *writing down* a mechanism.  Everything downstream
(parents, sufficiency, every causal verdict) works on the function table the
expression denotes, so two equations that agree on every input are
interchangeable.

Values are opaque string tokens.  The boolean connectives operate on the two
tokens ``"0"`` and ``"1"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import IllTypedMechanism, UnknownVariable, ValueOutOfDomain

FALSE = "0"
TRUE = "1"
BOOL = frozenset({FALSE, TRUE})


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: str


@dataclass(frozen=True)
class Eq:
    """``name == value``; always boolean-valued."""

    name: str
    value: str


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Case:
    """First matching condition wins; ``default`` covers everything else."""

    branches: tuple[tuple["Expr", str], ...]
    default: str


Expr = Union[Var, Const, Eq, Not, And, Or, Case]


def land(*operands: Expr) -> Expr:
    """Left-associated conjunction of one or more operands."""
    out = operands[0]
    for e in operands[1:]:
        out = And(out, e)
    return out


def lor(*operands: Expr) -> Expr:
    out = operands[0]
    for e in operands[1:]:
        out = Or(out, e)
    return out


def references(expr: Expr) -> frozenset[str]:
    """Variables mentioned syntactically (a superset of the real parents)."""
    if isinstance(expr, Var):
        return frozenset({expr.name})
    if isinstance(expr, Eq):
        return frozenset({expr.name})
    if isinstance(expr, Const):
        return frozenset()
    if isinstance(expr, Not):
        return references(expr.operand)
    if isinstance(expr, (And, Or)):
        return references(expr.left) | references(expr.right)
    if isinstance(expr, Case):
        out: frozenset[str] = frozenset()
        for cond, _ in expr.branches:
            out |= references(cond)
        return out
    raise TypeError(f"not an expression: {expr!r}")


def value_set(expr: Expr, domains: Mapping[str, tuple[str, ...]]) -> frozenset[str]:
    """Statically bound the set of tokens ``expr`` can produce.

    Raises if a referenced variable is undeclared, an equality test names a
    value outside the variable's domain, or a connective is applied to a
    non-boolean operand.
    """
    if isinstance(expr, Var):
        if expr.name not in domains:
            raise UnknownVariable(expr.name)
        return frozenset(domains[expr.name])
    if isinstance(expr, Const):
        return frozenset({expr.value})
    if isinstance(expr, Eq):
        if expr.name not in domains:
            raise UnknownVariable(expr.name)
        if expr.value not in domains[expr.name]:
            raise ValueOutOfDomain(expr.name, expr.value, domains[expr.name])
        return BOOL
    if isinstance(expr, Not):
        _require_bool(expr.operand, domains)
        return BOOL
    if isinstance(expr, (And, Or)):
        _require_bool(expr.left, domains)
        _require_bool(expr.right, domains)
        return BOOL
    if isinstance(expr, Case):
        out = {expr.default}
        for cond, value in expr.branches:
            _require_bool(cond, domains)
            out.add(value)
        return frozenset(out)
    raise TypeError(f"not an expression: {expr!r}")


def _require_bool(expr: Expr, domains: Mapping[str, tuple[str, ...]]) -> None:
    vals = value_set(expr, domains)
    if not vals <= BOOL:
        raise IllTypedMechanism(f"boolean operand expected, got values {sorted(vals)}")


def evaluate_expr(expr: Expr, env: Mapping[str, str]) -> str:
    """Evaluate against a (partial) assignment that covers ``references(expr)``."""
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Eq):
        return TRUE if env[expr.name] == expr.value else FALSE
    if isinstance(expr, Not):
        return FALSE if evaluate_expr(expr.operand, env) == TRUE else TRUE
    if isinstance(expr, And):
        if evaluate_expr(expr.left, env) == FALSE:
            return FALSE
        return evaluate_expr(expr.right, env)
    if isinstance(expr, Or):
        if evaluate_expr(expr.left, env) == TRUE:
            return TRUE
        return evaluate_expr(expr.right, env)
    if isinstance(expr, Case):
        for cond, value in expr.branches:
            if evaluate_expr(cond, env) == TRUE:
                return value
        return expr.default
    raise TypeError(f"not an expression: {expr!r}")
