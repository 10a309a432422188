"""Actual causation in finite acyclic structural equation models.

Counterfactual dependence, causal sufficiency, direct and chained NESS,
path-relative NESS, the BV definition, Counterfactual NESS (CNESS) and an
HP-style comparison check, each decided by exhaustive search with a
replayable certificate.
"""

from .causation import (
    DEFINITIONS,
    BVCertificate,
    Chain,
    CNESSCertificate,
    DependenceCertificate,
    InterventionCertificate,
    Verdict,
    Witness,
    all_ness_chains,
    bv_cause,
    cness_cause,
    counterfactually_depends,
    decide,
    direct_ness_cause,
    hp_cause_described,
    ness_cause,
    ness_cause_along_path,
    sufficient,
    sufficient_interventional,
    verify_certificate,
)
from .errors import CausalError
from .lang import ModelDocument, ParseError, parse_document, parse_model, print_document
from .model import (
    CausalFormula,
    CausalModel,
    Intervention,
    Literal,
    Signature,
    Variable,
    evaluate,
    intervene,
    parents,
    solve,
    validate,
)

__version__ = "0.1.0"
