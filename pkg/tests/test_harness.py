from __future__ import annotations

import json
import random
import shutil

import pytest

from conftest import lit
from nesscause import parents, sufficient, validate
from nesscause.causation import ness_cause
from nesscause.errors import CorpusMissing
from nesscause.harness import (
    GeneratorConfig,
    check_theorem_2,
    default_corpus_dir,
    direct_ness_full_search,
    exists_dependence_under_intervention,
    generate_model,
    ness_bruteforce,
    row_violations,
    run_corpus,
    run_properties,
    sufficient_bruteforce,
    verdict_matrix,
)
from nesscause.harness.checks import actual_pairs

SHOT, NOSHOT = {"U": "1"}, {"U": "0"}


def test_generator_is_deterministic():
    cfg = GeneratorConfig(seed=42, n_endogenous=6, n_exogenous=2)
    a, b = generate_model(cfg), generate_model(cfg)
    assert a[0] == b[0] and a[1] == b[1]
    assert generate_model(GeneratorConfig(seed=43, n_endogenous=6, n_exogenous=2))[0] != a[0]


def test_single_endogenous_variable():
    model, u = generate_model(GeneratorConfig(seed=7, n_endogenous=1, n_exogenous=2))
    (x,) = model.endogenous
    assert parents(model, x) <= set(model.exogenous)


def test_thousand_draws_validate():
    for seed in range(1000):
        model, u = generate_model(GeneratorConfig(seed=seed, n_endogenous=5))
        assert len(validate(model)) == 5


def test_ternary_domains_and_bounds():
    model, u = generate_model(GeneratorConfig(seed=3, n_endogenous=4, domain_size=3, n_exogenous=1, max_parents=4))
    assert all(model.domain(x) == ("0", "1", "2") for x in model.endogenous)
    with pytest.raises(ValueError):
        GeneratorConfig(seed=0, n_endogenous=9)
    with pytest.raises(ValueError):
        GeneratorConfig(seed=0, domain_size=4)


def test_oracles_on_worked_models(backup, chain_model, bv_model, weak):
    assert sufficient_bruteforce(backup, SHOT, {"Trainee": "1"}, lit("Victim=1"))
    assert not sufficient_bruteforce(backup, SHOT, {}, lit("Victim=1"))
    w = direct_ness_full_search(weak, {"UA": "1", "UB": "1", "UC": "1"}, lit("C=1"), lit("E=1"))
    assert [str(l) for l in w.literals] == ["B=1"]
    assert ness_bruteforce(chain_model, {"U": "1"}, lit("C=1"), lit("E=1"))
    assert exists_dependence_under_intervention(chain_model, {"U": "1"}, lit("C=1"), lit("E=1")) is None
    assert exists_dependence_under_intervention(bv_model, {"UA": "1", "UC": "1"}, lit("C=1"), lit("E=1")) is None
    assert len(exists_dependence_under_intervention(backup, NOSHOT, lit("Supervisor=1"), lit("Victim=1")).literals) == 0


def test_ness_agrees_with_permutation_search():
    for seed in range(150):
        model, u = generate_model(GeneratorConfig(seed=seed, n_endogenous=2 + seed % 4, n_exogenous=seed % 3))
        for cause, effect in actual_pairs(model, u):
            assert (ness_cause(model, u, cause, effect) is not None) == ness_bruteforce(model, u, cause, effect)


def test_sufficiency_matches_direct_evaluation():
    rng = random.Random(11)
    for seed in range(150):
        model, u = generate_model(GeneratorConfig(seed=seed, n_endogenous=2 + seed % 5, n_exogenous=seed % 3))
        e = rng.choice(model.endogenous)
        others = [x for x in model.endogenous if x != e]
        fixed = {x: rng.choice(model.domain(x)) for x in rng.sample(others, rng.randint(0, len(others)))}
        effect = lit(f"{e}={rng.choice(model.domain(e))}")
        assert sufficient(model, u, fixed, effect) == sufficient_bruteforce(model, u, fixed, effect)


def test_biconditional_on_worked_models(backup, weak):
    assert check_theorem_2(backup, SHOT) == []
    assert check_theorem_2(backup, NOSHOT) == []
    assert check_theorem_2(weak, {"UA": "1", "UB": "1", "UC": "1"}) == []


def test_matrix_rows(backup, rocks, hp_model):
    row = verdict_matrix(backup, SHOT).rows["Trainee=1 -> Victim=1"]
    assert {k: row[k] for k in ("cd", "dness", "ness", "bv", "cness")} == {
        "cd": False, "dness": True, "ness": True, "bv": False, "cness": True,
    }
    row = verdict_matrix(rocks, {"US": "1", "UB": "1"}).rows["ST=1 -> BS=1"]
    assert (row["ness"], row["bv"], row["cness"]) == (True, False, True)
    row = verdict_matrix(hp_model, {"UC": "1", "UD": "0"}).rows["C=1 -> E=1"]
    assert (row["ness"], row["hp"]) == (False, True)


def test_row_invariants_detect_breakage():
    assert row_violations("x", {"cd": True, "ness": True, "bv": True, "cness": True, "hp": True}) == []
    bad = row_violations("x", {"cd": True, "ness": False, "bv": True, "cness": True, "hp": True, "dness": True})
    assert {v.detail for v in bad} == {"cd without ness", "bv without ness", "cness without ness", "dness without ness"}
    assert row_violations("x", {"dness": True, "ness": True, "parent": False})


def test_property_sweep_is_clean_and_repeatable():
    a = run_properties(range(40))
    b = run_properties(range(40))
    assert a.ok, [str(v) for v in a.violations]
    assert a.to_json() == b.to_json()
    assert all(a.checked[p] > 0 for p in a.checked)


def test_shipped_corpus_passes():
    report = run_corpus()
    assert report.ok, [r for r in report.failures]
    assert len({r.scenario for r in report.results}) == 9


def test_flipped_golden_gives_one_failure(tmp_path):
    corpus = tmp_path / "corpus"
    shutil.copytree(default_corpus_dir(), corpus)
    golden_path = corpus / "backup_shot.golden.json"
    golden = json.loads(golden_path.read_text())
    golden["Trainee=1 -> Victim=1"]["bv"] = not golden["Trainee=1 -> Victim=1"]["bv"]
    golden_path.write_text(json.dumps(golden))
    report = run_corpus(corpus)
    (failure,) = report.failures
    assert (failure.scenario, failure.definition) == ("backup_shot", "bv")


def test_missing_corpus(tmp_path):
    with pytest.raises(CorpusMissing):
        run_corpus(tmp_path / "absent")
    (tmp_path / "lonely.scm.txt").write_text("var X: {0,1} = 1\ncontext c { }\n")
    with pytest.raises(CorpusMissing):
        run_corpus(tmp_path)
