"""Exception hierarchy shared by the model, engine and language layers."""

from __future__ import annotations


class CausalError(Exception):
    """Base class for every error raised by nesscause."""


class UnknownVariable(CausalError):
    def __init__(self, name: str):
        super().__init__(f"unknown variable {name!r}")
        self.name = name


class ValueOutOfDomain(CausalError):
    def __init__(self, name: str, value: str, domain: tuple[str, ...]):
        super().__init__(f"value {value!r} not in domain of {name} {{{', '.join(domain)}}}")
        self.name = name
        self.value = value


class CyclicModel(CausalError):
    def __init__(self, cycle: list[str]):
        super().__init__("cyclic dependence: " + " -> ".join(cycle + cycle[:1]))
        self.cycle = cycle


class IllTypedMechanism(CausalError):
    pass


class InvalidModel(CausalError):
    """Signature or mechanism table violates a structural invariant."""


class InvalidContext(CausalError):
    pass


class DuplicateIntervention(CausalError):
    def __init__(self, name: str):
        super().__init__(f"variable {name!r} intervened on more than once")
        self.name = name


class SelfCause(CausalError):
    def __init__(self, name: str):
        super().__init__(f"cause and effect are the same variable {name!r}")
        self.name = name


class EffectInSet(CausalError):
    def __init__(self, name: str):
        super().__init__(f"effect variable {name!r} appears in the candidate set")
        self.name = name


class PathContainsEndpoint(CausalError):
    def __init__(self, name: str):
        super().__init__(f"path contains endpoint variable {name!r}")
        self.name = name


class NotEndogenous(CausalError):
    def __init__(self, name: str):
        super().__init__(f"{name!r} is exogenous; causes and effects must be endogenous")
        self.name = name


class CorpusMissing(CausalError):
    pass
