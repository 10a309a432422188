"""Signatures, structural causal models, interventions and the satisfaction relation.

Only acyclic ("strongly recursive") models are supported.  A model is checked
lazily: construction only verifies the signature and that every endogenous
variable has exactly one equation; :func:`validate` type-checks the equations,
tabulates them, computes the extensional parent relation and orders the
endogenous variables.
"""

from __future__ import annotations

import heapq
import itertools
import re
import types
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Union

from .errors import (
    CyclicModel,
    DuplicateIntervention,
    IllTypedMechanism,
    InvalidContext,
    InvalidModel,
    NotEndogenous,
    UnknownVariable,
    ValueOutOfDomain,
)
from .expr import TRUE, And, Const, Eq, Expr, Not, Or, evaluate_expr, references, value_set

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
TOKEN_RE = re.compile(r"[A-Za-z0-9_]+\Z")

Context = Mapping[str, str]


@dataclass(frozen=True)
class Variable:
    name: str
    domain: tuple[str, ...]

    def __post_init__(self) -> None:
        if not IDENT_RE.match(self.name):
            raise InvalidModel(f"bad variable name {self.name!r}")
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.domain:
            raise InvalidModel(f"empty domain for {self.name}")
        if len(set(self.domain)) != len(self.domain):
            raise InvalidModel(f"duplicate value in domain of {self.name}")
        for v in self.domain:
            if not isinstance(v, str) or not TOKEN_RE.match(v):
                raise InvalidModel(f"bad value token {v!r} in domain of {self.name}")


@dataclass(frozen=True)
class Signature:
    exogenous: tuple[Variable, ...]
    endogenous: tuple[Variable, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "exogenous", tuple(self.exogenous))
        object.__setattr__(self, "endogenous", tuple(self.endogenous))
        if not self.endogenous:
            raise InvalidModel("a model needs at least one endogenous variable")
        names = [v.name for v in self.exogenous + self.endogenous]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise InvalidModel(f"variable declared twice: {', '.join(dupes)}")

    @cached_property
    def domains(self) -> Mapping[str, tuple[str, ...]]:
        return types.MappingProxyType({v.name: v.domain for v in self.exogenous + self.endogenous})

    @cached_property
    def exogenous_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.exogenous)

    @cached_property
    def endogenous_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.endogenous)

    def domain(self, name: str) -> tuple[str, ...]:
        try:
            return self.domains[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def is_endogenous(self, name: str) -> bool:
        return name in self.endogenous_names

    def is_exogenous(self, name: str) -> bool:
        return name in self.exogenous_names


@dataclass(frozen=True)
class Literal:
    """The atomic statement ``variable = value``."""

    variable: str
    value: str

    def __str__(self) -> str:
        return f"{self.variable}={self.value}"

    @classmethod
    def parse(cls, text: str) -> "Literal":
        name, sep, value = text.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or not IDENT_RE.match(name) or not TOKEN_RE.match(value):
            raise ValueError(f"expected NAME=value, got {text!r}")
        return cls(name, value)


@dataclass(frozen=True)
class Intervention:
    """A set of literals ``X1 <- x1, ..., Xk <- xk`` over distinct variables."""

    literals: tuple[Literal, ...] = ()

    def __post_init__(self) -> None:
        lits = tuple(self.literals)
        seen: set[str] = set()
        for lit in lits:
            if lit.variable in seen:
                raise DuplicateIntervention(lit.variable)
            seen.add(lit.variable)
        object.__setattr__(self, "literals", lits)

    @classmethod
    def of(cls, assignment: Union["Intervention", Mapping[str, str], Iterable[Literal]]) -> "Intervention":
        if isinstance(assignment, Intervention):
            return assignment
        if isinstance(assignment, Mapping):
            return cls(tuple(Literal(k, v) for k, v in assignment.items()))
        return cls(tuple(assignment))

    def as_dict(self) -> dict[str, str]:
        return {lit.variable: lit.value for lit in self.literals}

    def __str__(self) -> str:
        return "[" + ", ".join(f"{l.variable}<-{l.value}" for l in self.literals) + "]"


@dataclass(frozen=True)
class CausalFormula:
    """``[prefix] body`` where body is a boolean combination of ``Eq`` atoms."""

    body: Expr
    prefix: Intervention = field(default_factory=Intervention)


class Kernel(NamedTuple):
    """A mechanism restricted to its extensional parents."""

    parents: tuple[str, ...]
    table: dict[tuple[str, ...], str]


@dataclass(frozen=True, eq=False)
class CausalModel:
    signature: Signature
    mechanisms: Mapping[str, Expr]

    def __post_init__(self) -> None:
        endo = self.signature.endogenous_names
        extra = sorted(set(self.mechanisms) - set(endo))
        if extra:
            raise InvalidModel(f"equation for non-endogenous variable(s): {', '.join(extra)}")
        missing = [n for n in endo if n not in self.mechanisms]
        if missing:
            raise InvalidModel(f"no equation for: {', '.join(missing)}")
        ordered = {n: self.mechanisms[n] for n in endo}
        object.__setattr__(self, "mechanisms", types.MappingProxyType(ordered))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CausalModel):
            return NotImplemented
        return self.signature == other.signature and dict(self.mechanisms) == dict(other.mechanisms)

    @property
    def endogenous(self) -> tuple[str, ...]:
        return self.signature.endogenous_names

    @property
    def exogenous(self) -> tuple[str, ...]:
        return self.signature.exogenous_names

    def domain(self, name: str) -> tuple[str, ...]:
        return self.signature.domain(name)

    @cached_property
    def kernels(self) -> Mapping[str, Kernel]:
        """Function tables of every equation, keyed by target variable."""
        domains = self.signature.domains
        out = {}
        for name, expr in self.mechanisms.items():
            out[name] = _tabulate(name, expr, domains, self._order_index)
        return types.MappingProxyType(out)

    @cached_property
    def _order_index(self) -> dict[str, int]:
        names = self.signature.exogenous_names + self.signature.endogenous_names
        return {n: i for i, n in enumerate(names)}

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        return _toposort(self)

    @cached_property
    def cache(self) -> dict:
        """Per-model memo used by the decision procedures; not part of equality."""
        return {}


def _tabulate(name: str, expr: Expr, domains: Mapping[str, tuple[str, ...]], order: Mapping[str, int]) -> Kernel:
    if name in references(expr):
        raise IllTypedMechanism(f"equation for {name} refers to {name} itself")
    try:
        produced = value_set(expr, domains)
    except IllTypedMechanism as exc:
        raise IllTypedMechanism(f"equation for {name}: {exc}") from None
    stray = produced - set(domains[name])
    if stray:
        raise IllTypedMechanism(f"equation for {name} can produce {sorted(stray)} outside its domain")
    refs = sorted(references(expr), key=order.__getitem__)
    full = {}
    for row in itertools.product(*(domains[r] for r in refs)):
        full[row] = evaluate_expr(expr, dict(zip(refs, row)))
    keep = [i for i in range(len(refs)) if _varies_with(full, i)]
    table = {tuple(row[i] for i in keep): out for row, out in full.items()}
    return Kernel(tuple(refs[i] for i in keep), table)


def _varies_with(full: Mapping[tuple[str, ...], str], i: int) -> bool:
    seen: dict[tuple[str, ...], str] = {}
    for row, out in full.items():
        rest = row[:i] + row[i + 1 :]
        prev = seen.setdefault(rest, out)
        if prev != out:
            return True
    return False


def _toposort(model: CausalModel) -> tuple[str, ...]:
    endo = model.endogenous
    index = {n: i for i, n in enumerate(endo)}
    kernels = model.kernels
    children: dict[str, list[str]] = {n: [] for n in endo}
    indegree = {n: 0 for n in endo}
    for n in endo:
        for p in kernels[n].parents:
            if p in index:
                children[p].append(n)
                indegree[n] += 1
    heap = [index[n] for n in endo if indegree[n] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        n = endo[heapq.heappop(heap)]
        order.append(n)
        for c in children[n]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(heap, index[c])
    if len(order) < len(endo):
        raise CyclicModel(_find_cycle(model, {n for n in endo if indegree[n] > 0}))
    return tuple(order)


def _find_cycle(model: CausalModel, stuck: set[str]) -> list[str]:
    # every stuck node has a stuck parent, so walking parents must revisit a node
    kernels = model.kernels
    node = min(stuck, key=model.endogenous.index)
    trail: list[str] = []
    while node not in trail:
        trail.append(node)
        node = next(p for p in kernels[node].parents if p in stuck)
    cycle = trail[trail.index(node) :]
    cycle.reverse()
    return cycle


def validate(model: CausalModel) -> tuple[str, ...]:
    """Check the model and return its endogenous variables in topological order.

    Ties are broken by declaration order, so the result is deterministic.
    Raises :class:`CyclicModel` or :class:`IllTypedMechanism`.
    """
    return model.topological_order


def parents(model: CausalModel, x: str) -> frozenset[str]:
    """Variables (exogenous included) on which the equation for ``x`` really depends."""
    if x not in model.signature.domains:
        raise UnknownVariable(x)
    if not model.signature.is_endogenous(x):
        raise NotEndogenous(x)
    return frozenset(model.kernels[x].parents)


def check_literal(model: CausalModel, lit: Literal, *, endogenous: bool = True) -> None:
    domain = model.domain(lit.variable)
    if endogenous and not model.signature.is_endogenous(lit.variable):
        raise NotEndogenous(lit.variable)
    if lit.value not in domain:
        raise ValueOutOfDomain(lit.variable, lit.value, domain)


def intervene(model: CausalModel, iv: Union[Intervention, Mapping[str, str], Iterable[Literal]]) -> CausalModel:
    """Return the model in which each intervened variable is held at a constant.

    Results are memoised on ``model``; the original is never modified.
    """
    iv = Intervention.of(iv)
    if not iv.literals:
        return model
    # only single-variable interventions (the counterfactual settings) are reused often enough to keep
    key = frozenset((l.variable, l.value) for l in iv.literals)
    memo = model.cache.setdefault("intervene", {}) if len(key) == 1 else {}
    hit = memo.get(key)
    if hit is not None:
        return hit
    for lit in iv.literals:
        check_literal(model, lit)
    mechs = dict(model.mechanisms)
    for lit in iv.literals:
        mechs[lit.variable] = Const(lit.value)
    out = CausalModel(model.signature, mechs)
    if "kernels" in model.__dict__:
        kernels = dict(model.kernels)
        for lit in iv.literals:
            kernels[lit.variable] = Kernel((), {(): lit.value})
        out.__dict__["kernels"] = types.MappingProxyType(kernels)
        if "topological_order" in model.__dict__:
            # dropping edges keeps the old order valid, but re-sorting keeps tie-breaking canonical
            out.__dict__["topological_order"] = _toposort(out)
    memo[key] = out
    return out


def context_key(model: CausalModel, u: Context) -> tuple[str, ...]:
    sig = model.signature
    extra = sorted(set(u) - set(sig.exogenous_names))
    if extra:
        raise InvalidContext(f"context assigns non-exogenous variable(s): {', '.join(extra)}")
    key = []
    for v in sig.exogenous:
        if v.name not in u:
            raise InvalidContext(f"context does not assign {v.name}")
        if u[v.name] not in v.domain:
            raise ValueOutOfDomain(v.name, u[v.name], v.domain)
        key.append(u[v.name])
    return tuple(key)


def _solve_cached(model: CausalModel, u: Context) -> Mapping[str, str]:
    key = context_key(model, u)
    memo = model.cache.setdefault("solve", {})
    sol = memo.get(key)
    if sol is None:
        values = dict(zip(model.exogenous, key))
        kernels = model.kernels
        for name in model.topological_order:
            k = kernels[name]
            values[name] = k.table[tuple(values[p] for p in k.parents)]
        sol = memo[key] = types.MappingProxyType(values)
    return sol


def solve_under(model: CausalModel, u: Context, setting: Mapping[str, str]) -> dict[str, str]:
    """Same as ``solve(intervene(model, setting), u)`` without building the intervened model.

    ``setting`` must already be well-typed over endogenous variables.
    """
    values = dict(zip(model.exogenous, context_key(model, u)))
    kernels = model.kernels
    for name in model.topological_order:
        if name in setting:
            values[name] = setting[name]
        else:
            k = kernels[name]
            values[name] = k.table[tuple(values[p] for p in k.parents)]
    return values


def solve(model: CausalModel, u: Context) -> dict[str, str]:
    """Unique solution of the equations in context ``u`` (exogenous values included)."""
    return dict(_solve_cached(model, u))


def _check_body(model: CausalModel, body: Expr) -> None:
    if isinstance(body, Eq):
        check_literal(model, Literal(body.name, body.value))
    elif isinstance(body, Not):
        _check_body(model, body.operand)
    elif isinstance(body, (And, Or)):
        _check_body(model, body.left)
        _check_body(model, body.right)
    else:
        raise TypeError(f"formula bodies combine X == x atoms with !, &, |; got {body!r}")


def evaluate(model: CausalModel, u: Context, formula: Union[CausalFormula, Expr, Literal]) -> bool:
    """Decide ``(M, u) |= [prefix] body``."""
    if isinstance(formula, Literal):
        formula = CausalFormula(Eq(formula.variable, formula.value))
    elif not isinstance(formula, CausalFormula):
        formula = CausalFormula(formula)
    _check_body(model, formula.body)
    sol = _solve_cached(intervene(model, formula.prefix), u)
    return evaluate_expr(formula.body, sol) == TRUE


def holds(model: CausalModel, u: Context, lit: Literal) -> bool:
    return _solve_cached(model, u)[lit.variable] == lit.value
