from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BACKUP_SRC, lit
from nesscause import CausalModel, ParseError, Signature, Variable, parse_document, print_document, solve
from nesscause.expr import And, Eq, Not, Or, Var
from nesscause.harness import GeneratorConfig, generate_model, rewrite_equivalent
from nesscause.lang import ContextDecl, ModelDocument, format_expr, print_model

BACKUP_DOC = """
# early preemption
model backup {
  exo U: {0, 1}
  var Trainee: {0, 1} = U
  var Supervisor: {0,1} = !Trainee   # the backup
  var Victim: {0, 1} = Trainee | Supervisor
  context shot { U = 1 }
  context noshot { U = 0 }
}
query cness cause Trainee=1 effect Victim=1 in backup given shot
"""


def test_backup_source_counts():
    doc = parse_document(BACKUP_DOC)
    m = doc.models["backup"]
    assert len(m.exogenous) == 1 and len(m.endogenous) == 3
    assert doc.context("shot") == {"U": "1"}
    assert [c.name for c in doc.contexts_of("backup")] == ["shot", "noshot"]
    (q,) = doc.queries
    assert (q.definition, q.cause, q.effect, q.model, q.context) == ("cness", lit("Trainee=1"), lit("Victim=1"), "backup", "shot")


def test_top_level_declarations_form_main_model():
    doc = parse_document(BACKUP_SRC)
    assert list(doc.models) == ["main"]


def test_empty_document():
    doc = parse_document("")
    assert doc.models == {} and doc.contexts == {} and doc.queries == []
    assert parse_document("  # only a comment\n").models == {}


def test_undeclared_variable_span():
    text = "var X: {0,1} = Y\n"
    with pytest.raises(ParseError) as exc:
        parse_document(text)
    (d,) = exc.value.diagnostics
    assert d.kind == "UndeclaredVariable"
    assert text.encode()[d.span.start : d.span.end] == b"Y"
    assert (d.span.line, d.span.column) == (1, 16)


@pytest.mark.parametrize(
    "text, kind",
    [
        ("var X: {0,1} = \n", "SyntaxError"),
        ("var X: {0,1} = 1\nvar X: {0,1} = 0\n", "DuplicateName"),
        ("var X: {0,1} = 2\n", "DomainMismatch"),
        ("var X: {a,b} = !X\n", "DomainMismatch"),
        ("var A: {0,1} = B\nvar B: {0,1} = A\n", "CyclicModel"),
        ("var X: {0,1} = 1\nquery ness cause X=1 effect X=1 in nowhere given c\n", "UndeclaredName"),
        ("exo U: {0,1}\nvar X: {0,1} = U\ncontext c { U = 5 }\n", "DomainMismatch"),
    ],
)
def test_diagnostic_kinds(text, kind):
    with pytest.raises(ParseError) as exc:
        parse_document(text)
    assert kind in exc.value.kinds
    raw = text.encode()
    for d in exc.value.diagnostics:
        assert 0 <= d.span.start <= d.span.end <= len(raw)
        assert d.span.line >= 1 and d.span.column >= 1


def test_recovery_reports_several_errors():
    text = "var A: {0,1} = Q\nvar B: {0,1} = = 1\nvar C: {0,1} = R\n"
    with pytest.raises(ParseError) as exc:
        parse_document(text)
    assert len(exc.value.diagnostics) >= 3


def test_backup_round_trip():
    doc = parse_document(BACKUP_DOC)
    printed = print_document(doc)
    again = parse_document(printed)
    assert again.models == doc.models
    assert again.contexts == doc.contexts
    assert again.queries == doc.queries
    assert print_document(again) == printed


def test_declaration_order_preserved():
    printed = print_document(parse_document(BACKUP_DOC))
    assert printed.index("Trainee") < printed.index("Supervisor") < printed.index("Victim")


def test_programmatic_rocks_round_trip():
    b = lambda n: Eq(n, "1")  # noqa: E731
    names = ("ST", "BT", "SH", "BH", "BS")
    sig = Signature(
        (Variable("US", ("0", "1")), Variable("UB", ("0", "1"))),
        tuple(Variable(n, ("0", "1")) for n in names),
    )
    model = CausalModel(
        sig,
        {"ST": Var("US"), "BT": Var("UB"), "SH": Var("ST"), "BH": And(b("BT"), Not(b("SH"))), "BS": Or(b("BH"), b("SH"))},
    )
    ctx = ContextDecl("both", "rocks", {"US": "1", "UB": "1"})
    doc = parse_document(print_model("rocks", model, [ctx]))
    back = doc.models["rocks"]
    assert back.endogenous == names
    assert solve(back, doc.context("both")) == solve(model, ctx.values)


def test_format_expr_parenthesization():
    e = And(Or(Eq("A", "1"), Eq("B", "1")), Not(Eq("C", "1")))
    assert format_expr(e) == "(A == 1 | B == 1) & !C == 1"


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32), st.booleans())
def test_generated_models_round_trip(seed, rewrite):
    model, u = generate_model(GeneratorConfig(seed, n_endogenous=1 + seed % 6, n_exogenous=seed % 3))
    if rewrite:
        model = rewrite_equivalent(model)
    doc = ModelDocument({"g": model}, {"c": ContextDecl("c", "g", u)})
    printed = print_document(doc)
    again = parse_document(printed)
    assert again.models["g"] == model
    assert print_document(again) == printed
