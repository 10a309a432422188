from __future__ import annotations

from pathlib import Path

import pytest

from nesscause import CausalModel, Literal, parse_model

DATA = Path(__file__).parent / "data"

BACKUP_SRC = """
exo U: {0, 1}
var Trainee: {0, 1} = U
var Supervisor: {0, 1} = !Trainee
var Victim: {0, 1} = Trainee | Supervisor
"""

ROCKS_SRC = """
exo US: {0, 1}
exo UB: {0, 1}
var ST: {0, 1} = US
var BT: {0, 1} = UB
var SH: {0, 1} = ST
var BH: {0, 1} = BT & !SH
var BS: {0, 1} = BH | SH
"""

# E = (C & B) | (!C & A), all three true
WEAK_SRC = """
exo UA: {0, 1}
exo UB: {0, 1}
exo UC: {0, 1}
var A: {0, 1} = UA
var B: {0, 1} = UB
var C: {0, 1} = UC
var E: {0, 1} = (C & B) | (!C & A)
"""

# E = (C & D) | A, A = !D
HP_SRC = """
exo UC: {0, 1}
exo UD: {0, 1}
var C: {0, 1} = UC
var D: {0, 1} = UD
var A: {0, 1} = !D
var E: {0, 1} = (C & D) | A
"""

# E = D | !C, D = C
CHAIN_SRC = """
exo U: {0, 1}
var C: {0, 1} = U
var D: {0, 1} = C
var E: {0, 1} = D | !C
"""

# E = F | (!A & !D), F = D, D = C | A
BV_SRC = """
exo UA: {0, 1}
exo UC: {0, 1}
var A: {0, 1} = UA
var C: {0, 1} = UC
var D: {0, 1} = C | A
var F: {0, 1} = D
var E: {0, 1} = F | (!A & !D)
"""

CONJ_SRC = """
exo UA: {0, 1}
exo UB: {0, 1}
var A: {0, 1} = UA
var B: {0, 1} = UB
var E: {0, 1} = A & B
"""


def lit(text: str) -> Literal:
    return Literal.parse(text)


@pytest.fixture(scope="session")
def backup() -> CausalModel:
    return parse_model(BACKUP_SRC)


@pytest.fixture(scope="session")
def rocks() -> CausalModel:
    return parse_model(ROCKS_SRC)


@pytest.fixture(scope="session")
def weak() -> CausalModel:
    return parse_model(WEAK_SRC)


@pytest.fixture(scope="session")
def hp_model() -> CausalModel:
    return parse_model(HP_SRC)


@pytest.fixture(scope="session")
def chain_model() -> CausalModel:
    return parse_model(CHAIN_SRC)


@pytest.fixture(scope="session")
def bv_model() -> CausalModel:
    return parse_model(BV_SRC)


@pytest.fixture(scope="session")
def conj() -> CausalModel:
    return parse_model(CONJ_SRC)
