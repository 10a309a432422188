"""Decision procedures for actual causation, each returning replayable evidence.

Every procedure works on the function tables of the equations (see
:attr:`CausalModel.kernels`), never on their syntax.  Searches are exhaustive
and deterministic: smaller certificates first, then lexicographic by variable
name, then by the declared order of values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import EffectInSet, PathContainsEndpoint, SelfCause
from .model import (
    CausalModel,
    Context,
    Intervention,
    Literal,
    _solve_cached,
    check_literal,
    context_key,
    intervene,
    solve_under,
    validate,
)

AssignmentSet = Union[Mapping[str, str], Iterable[Literal], Intervention]

DEFINITIONS = ("cd", "suff", "dness", "ness", "bv", "cness", "hp")


@dataclass(frozen=True)
class Witness:
    literals: tuple[Literal, ...]

    def __str__(self) -> str:
        return "witness={" + ", ".join(map(str, self.literals)) + "}"


@dataclass(frozen=True)
class Chain:
    """Intermediate literals ``C1=c1, ..., Cn=cn`` between cause and effect."""

    links: tuple[Literal, ...]

    @property
    def path(self) -> tuple[str, ...]:
        return tuple(l.variable for l in self.links)

    def __str__(self) -> str:
        return "chain=(" + ", ".join(map(str, self.links)) + ")"


@dataclass(frozen=True)
class DependenceCertificate:
    alternative: str

    def __str__(self) -> str:
        return f"c'={self.alternative}"


@dataclass(frozen=True)
class BVCertificate:
    chain: Chain
    alternative: str

    def __str__(self) -> str:
        return f"{self.chain}, c'={self.alternative}"


@dataclass(frozen=True)
class CNESSCertificate:
    path: tuple[str, ...]
    alternative: str

    def __str__(self) -> str:
        return f"path=({', '.join(self.path)}), c'={self.alternative}"


@dataclass(frozen=True)
class InterventionCertificate:
    intervention: Intervention

    def __str__(self) -> str:
        return f"intervention={self.intervention}"


Certificate = Union[Witness, Chain, DependenceCertificate, BVCertificate, CNESSCertificate, InterventionCertificate]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    certificate: Optional[Certificate] = None

    def __bool__(self) -> bool:
        return self.holds


def _as_dict(assignment: AssignmentSet) -> dict[str, str]:
    return Intervention.of(assignment).as_dict()


def _check_pair(model: CausalModel, cause: Literal, effect: Literal) -> None:
    validate(model)
    check_literal(model, cause)
    check_literal(model, effect)
    if cause.variable == effect.variable:
        raise SelfCause(cause.variable)


def _memo(model: CausalModel, u: Context, name: str) -> dict:
    return model.cache.setdefault((name, context_key(model, u)), {})


# --------------------------------------------------------------------------
# counterfactual dependence


def counterfactually_depends(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> Verdict:
    """But-for test: the effect fails under some alternative value of the cause."""
    _check_pair(model, cause, effect)
    sol = _solve_cached(model, u)
    if sol[cause.variable] != cause.value or sol[effect.variable] != effect.value:
        return Verdict(False)
    for alt in model.domain(cause.variable):
        if _solve_cached(intervene(model, {cause.variable: alt}), u)[effect.variable] != effect.value:
            return Verdict(True, DependenceCertificate(alt))
    return Verdict(False)


# --------------------------------------------------------------------------
# sufficiency


def _sufficient(model: CausalModel, sol: Mapping[str, str], fixed: Mapping[str, str], effect: Literal) -> bool:
    kernel = model.kernels[effect.variable]
    exo = model.signature.exogenous_names
    free = [p for p in kernel.parents if p not in fixed and p not in exo]
    base = [fixed.get(p, sol[p]) for p in kernel.parents]
    slots = [kernel.parents.index(p) for p in free]
    for values in itertools.product(*(model.domain(p) for p in free)):
        for i, v in zip(slots, values):
            base[i] = v
        if kernel.table[tuple(base)] != effect.value:
            return False
    return True


def _check_set(model: CausalModel, fixed: Mapping[str, str], effect: Literal) -> None:
    validate(model)
    check_literal(model, effect)
    for name, value in fixed.items():
        check_literal(model, Literal(name, value))
    if effect.variable in fixed:
        raise EffectInSet(effect.variable)


def sufficient(model: CausalModel, u: Context, assignment: AssignmentSet, effect: Literal) -> bool:
    """True iff the equation for the effect yields its value whatever the unfixed variables are.

    Only the unfixed *parents* of the effect are enumerated; exogenous
    parents take their values from ``u``.
    """
    fixed = _as_dict(assignment)
    _check_set(model, fixed, effect)
    return _sufficient(model, _solve_cached(model, u), fixed, effect)


def sufficient_interventional(model: CausalModel, u: Context, assignment: AssignmentSet, effect: Literal) -> bool:
    """Sufficiency decided by intervening on every other endogenous variable.

    Independent of :func:`sufficient`: every other endogenous variable is
    set explicitly and the intervened model is solved, so the parent relation
    is never used to prune the enumeration.
    """
    fixed = _as_dict(assignment)
    _check_set(model, fixed, effect)
    others = [v for v in model.endogenous if v not in fixed and v != effect.variable]
    for values in itertools.product(*(model.domain(v) for v in others)):
        setting = dict(fixed)
        setting.update(zip(others, values))
        if solve_under(model, u, setting)[effect.variable] != effect.value:
            return False
    return True


# --------------------------------------------------------------------------
# direct NESS and NESS chains


def _direct_witness(model: CausalModel, u: Context, cause_var: str, effect_var: str) -> Optional[Witness]:
    """Witness for the actual values of two distinct endogenous variables, memoised."""
    memo = _memo(model, u, "dness")
    key = (cause_var, effect_var)
    if key in memo:
        return memo[key]
    sol = _solve_cached(model, u)
    kernel = model.kernels[effect_var]
    result = None
    if cause_var in kernel.parents:
        effect = Literal(effect_var, sol[effect_var])
        exo = model.signature.exogenous_names
        pool = sorted(p for p in kernel.parents if p != cause_var and p not in exo)
        cause_fix = {cause_var: sol[cause_var]}
        for size in range(len(pool) + 1):
            for combo in itertools.combinations(pool, size):
                w = {p: sol[p] for p in combo}
                if _sufficient(model, sol, {**cause_fix, **w}, effect) and not _sufficient(model, sol, w, effect):
                    result = Witness(tuple(Literal(p, sol[p]) for p in combo))
                    break
            if result is not None:
                break
    memo[key] = result
    return result


def direct_ness_cause(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> Optional[Witness]:
    """Smallest (then lexicographically first) witness, or None.

    Witnesses are drawn from the effect's parents only, which loses nothing:
    restricting any witness to the parents is again a witness.
    """
    _check_pair(model, cause, effect)
    sol = _solve_cached(model, u)
    if sol[cause.variable] != cause.value or sol[effect.variable] != effect.value:
        return None
    return _direct_witness(model, u, cause.variable, effect.variable)


def _dness_children(model: CausalModel, u: Context) -> dict[str, list[str]]:
    memo = _memo(model, u, "graph")
    if "children" not in memo:
        children: dict[str, list[str]] = {v: [] for v in model.endogenous}
        for y in model.endogenous:
            for x in model.kernels[y].parents:
                if x in children and _direct_witness(model, u, x, y) is not None:
                    children[x].append(y)
        for v in children:
            children[v].sort()
        memo["children"] = children
    return memo["children"]


def _actual(model: CausalModel, u: Context, lit: Literal) -> bool:
    return _solve_cached(model, u)[lit.variable] == lit.value


def ness_cause(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> Optional[Chain]:
    """Shortest chain of direct NESS links from cause to effect (ties: lexicographic)."""
    _check_pair(model, cause, effect)
    if not (_actual(model, u, cause) and _actual(model, u, effect)):
        return None
    children = _dness_children(model, u)
    # distance to the effect, by backward BFS
    parents_of: dict[str, list[str]] = {v: [] for v in children}
    for x, ys in children.items():
        for y in ys:
            parents_of[y].append(x)
    dist = {effect.variable: 0}
    frontier = [effect.variable]
    while frontier and cause.variable not in dist:
        nxt = []
        for y in frontier:
            for x in parents_of[y]:
                if x not in dist:
                    dist[x] = dist[y] + 1
                    nxt.append(x)
        frontier = nxt
    if cause.variable not in dist:
        return None
    sol = _solve_cached(model, u)
    links = []
    node = cause.variable
    while dist[node] > 1:
        node = min(c for c in children[node] if dist.get(c) == dist[node] - 1)
        links.append(Literal(node, sol[node]))
    return Chain(tuple(links))


def all_ness_chains(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> list[Chain]:
    """Every direct NESS chain from cause to effect, shortest first then lexicographic."""
    _check_pair(model, cause, effect)
    if not (_actual(model, u, cause) and _actual(model, u, effect)):
        return []
    children = _dness_children(model, u)
    sol = _solve_cached(model, u)
    found: list[tuple[str, ...]] = []

    def walk(node: str, trail: tuple[str, ...]) -> None:
        for nxt in children[node]:
            if nxt == effect.variable:
                found.append(trail)
            elif nxt != cause.variable:
                walk(nxt, trail + (nxt,))

    walk(cause.variable, ())
    found.sort(key=lambda p: (len(p), p))
    return [Chain(tuple(Literal(v, sol[v]) for v in p)) for p in found]


def ness_cause_along_path(
    model: CausalModel, u: Context, cause: Literal, effect: Literal, path: Sequence[str]
) -> Optional[Chain]:
    """Chain along exactly ``path``, each variable at its solution value, or None."""
    _check_pair(model, cause, effect)
    path = tuple(path)
    for v in path:
        if v in (cause.variable, effect.variable):
            raise PathContainsEndpoint(v)
        check_literal(model, Literal(v, model.domain(v)[0]))
    if len(set(path)) != len(path):
        return None
    if not (_actual(model, u, cause) and _actual(model, u, effect)):
        return None
    nodes = (cause.variable,) + path + (effect.variable,)
    for a, b in zip(nodes, nodes[1:]):
        if _direct_witness(model, u, a, b) is None:
            return None
    sol = _solve_cached(model, u)
    return Chain(tuple(Literal(v, sol[v]) for v in path))


# --------------------------------------------------------------------------
# BV and CNESS


def bv_cause(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> Verdict:
    """NESS cause whose replacement by some alternative value is not a NESS cause."""
    chain = ness_cause(model, u, cause, effect)
    if chain is None:
        return Verdict(False)
    for alt in model.domain(cause.variable):
        cf = intervene(model, {cause.variable: alt})
        if ness_cause(cf, u, Literal(cause.variable, alt), effect) is None:
            return Verdict(True, BVCertificate(chain, alt))
    return Verdict(False)


def subpaths(path: Sequence[str]) -> Iterator[tuple[str, ...]]:
    """All subsequences of ``path`` (order kept), the empty one first."""
    for size in range(len(path) + 1):
        yield from itertools.combinations(path, size)


def cness_cause(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> Verdict:
    """NESS cause along some path ``p`` such that some alternative value is a
    NESS cause along no subpath of ``p`` in the counterfactual setting."""
    for chain in all_ness_chains(model, u, cause, effect):
        path = chain.path
        for alt in model.domain(cause.variable):
            cf = intervene(model, {cause.variable: alt})
            alt_lit = Literal(cause.variable, alt)
            if all(ness_cause_along_path(cf, u, alt_lit, effect, sub) is None for sub in subpaths(path)):
                return Verdict(True, CNESSCertificate(path, alt))
    return Verdict(False)


# --------------------------------------------------------------------------
# HP-style comparison baseline


def _hp_contingency_ok(
    model: CausalModel, u: Context, cause: Literal, effect: Literal, z: Mapping[str, str]
) -> bool:
    cause_var, effect_var = cause.variable, effect.variable
    sol_z = solve_under(model, u, z)
    if sol_z[cause_var] != cause.value or sol_z[effect_var] != effect.value:
        return False
    if all(
        solve_under(model, u, {**z, cause_var: alt})[effect_var] == effect.value
        for alt in model.domain(cause_var)
    ):
        return False
    actual = _solve_cached(model, u)
    rest = [v for v in model.endogenous if v not in z and v not in (cause_var, effect_var)]
    for zs in subpaths(sorted(z)):
        for ws in subpaths(rest):
            setting = {cause_var: cause.value}
            setting.update((k, z[k]) for k in zs)
            setting.update((k, actual[k]) for k in ws)
            if solve_under(model, u, setting)[effect_var] != effect.value:
                return False
    return True


def hp_cause_described(model: CausalModel, u: Context, cause: Literal, effect: Literal) -> Verdict:
    """Comparison baseline following the prose account of the standard HP check.

    Looks for an intervention ``Z <- z`` on variables other than cause and
    effect under which the effect counterfactually depends on the cause, and
    such that the effect survives ``[C <- c]`` combined with any part of
    ``Z <- z`` and any part of the remaining variables held at their actual
    values.
    """
    _check_pair(model, cause, effect)
    if not (_actual(model, u, cause) and _actual(model, u, effect)):
        return Verdict(False)
    others = sorted(v for v in model.endogenous if v not in (cause.variable, effect.variable))
    for size in range(len(others) + 1):
        for names in itertools.combinations(others, size):
            for values in itertools.product(*(model.domain(n) for n in names)):
                z = dict(zip(names, values))
                if _hp_contingency_ok(model, u, cause, effect, z):
                    return Verdict(True, InterventionCertificate(Intervention.of(z)))
    return Verdict(False)


# --------------------------------------------------------------------------
# uniform entry point and certificate replay


def decide(model: CausalModel, u: Context, definition: str, cause: Literal, effect: Literal) -> Verdict:
    """Run one of :data:`DEFINITIONS` and wrap the answer as a :class:`Verdict`."""
    if definition == "cd":
        return counterfactually_depends(model, u, cause, effect)
    if definition == "suff":
        _check_pair(model, cause, effect)
        return Verdict(sufficient(model, u, [cause], effect))
    if definition == "dness":
        w = direct_ness_cause(model, u, cause, effect)
        return Verdict(w is not None, w)
    if definition == "ness":
        c = ness_cause(model, u, cause, effect)
        return Verdict(c is not None, c)
    if definition == "bv":
        return bv_cause(model, u, cause, effect)
    if definition == "cness":
        return cness_cause(model, u, cause, effect)
    if definition == "hp":
        return hp_cause_described(model, u, cause, effect)
    raise ValueError(f"unknown definition {definition!r}; expected one of {', '.join(DEFINITIONS)}")


def verify_certificate(
    model: CausalModel, u: Context, definition: str, cause: Literal, effect: Literal, certificate: Certificate
) -> bool:
    """Re-derive a positive verdict from its certificate alone."""
    _check_pair(model, cause, effect)
    if definition == "cd":
        assert isinstance(certificate, DependenceCertificate)
        cf = intervene(model, {cause.variable: certificate.alternative})
        return (
            _actual(model, u, cause)
            and _actual(model, u, effect)
            and _solve_cached(cf, u)[effect.variable] != effect.value
        )
    if definition == "dness":
        assert isinstance(certificate, Witness)
        w = {l.variable: l.value for l in certificate.literals}
        if cause.variable in w or effect.variable in w:
            return False
        return (
            _actual(model, u, cause)
            and all(_actual(model, u, l) for l in certificate.literals)
            and sufficient(model, u, {**w, cause.variable: cause.value}, effect)
            and not sufficient(model, u, w, effect)
        )
    if definition == "ness":
        assert isinstance(certificate, Chain)
        return _replay_chain(model, u, cause, effect, certificate)
    if definition == "bv":
        assert isinstance(certificate, BVCertificate)
        cf = intervene(model, {cause.variable: certificate.alternative})
        return _replay_chain(model, u, cause, effect, certificate.chain) and (
            ness_cause(cf, u, Literal(cause.variable, certificate.alternative), effect) is None
        )
    if definition == "cness":
        assert isinstance(certificate, CNESSCertificate)
        if ness_cause_along_path(model, u, cause, effect, certificate.path) is None:
            return False
        cf = intervene(model, {cause.variable: certificate.alternative})
        alt = Literal(cause.variable, certificate.alternative)
        return all(ness_cause_along_path(cf, u, alt, effect, sub) is None for sub in subpaths(certificate.path))
    if definition == "hp":
        assert isinstance(certificate, InterventionCertificate)
        z = certificate.intervention.as_dict()
        if cause.variable in z or effect.variable in z:
            return False
        return _actual(model, u, cause) and _actual(model, u, effect) and _hp_contingency_ok(model, u, cause, effect, z)
    raise ValueError(f"definition {definition!r} carries no certificate")


def _replay_chain(model: CausalModel, u: Context, cause: Literal, effect: Literal, chain: Chain) -> bool:
    # each link is re-checked with a fresh witness search, values must be actual
    nodes = (cause,) + chain.links + (effect,)
    return all(direct_ness_cause(model, u, a, b) is not None for a, b in zip(nodes, nodes[1:]))
