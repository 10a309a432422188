"""Random model generation, brute-force oracles, theorem checks and the golden corpus."""

from .checks import (
    PROPERTIES,
    PropertyReport,
    VerdictMatrix,
    Violation,
    check_model_properties,
    check_theorem_2,
    row_violations,
    run_properties,
    verdict_matrix,
)
from .corpus import CorpusReport, default_corpus_dir, run_corpus
from .generator import GeneratorConfig, generate_model, rewrite_equivalent, sweep_config
from .oracles import (
    direct_ness_full_search,
    exists_dependence_under_intervention,
    ness_bruteforce,
    sufficient_bruteforce,
)
