"""Text format for models, contexts and causal queries (``*.scm.txt``).

Example::

    # early preemption
    model backup {
      exo U: {0, 1}
      var Trainee: {0, 1} = U
      var Supervisor: {0, 1} = !Trainee
      var Victim: {0, 1} = Trainee | Supervisor
      context shot { U = 1 }
    }
    query cness cause Trainee=1 effect Victim=1 in backup given shot

Declarations outside any ``model`` block belong to an implicit model called
``main``.  Operators, loosest first: ``|``, ``&``, ``!``, ``==``.  The general
table construct is ``case { cond -> v, ..., else -> v }``.  ``#`` starts a
line comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .causation import DEFINITIONS
from .errors import CausalError
from .expr import BOOL, And, Case, Const, Eq, Expr, Not, Or, Var, value_set
from .model import CausalModel, Literal, Signature, Variable, validate

MAIN = "main"
KEYWORDS = frozenset({"model", "exo", "var", "context", "query", "case", "else", "cause", "effect", "in", "given"})
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<word>[A-Za-z0-9_]+)|(?P<op>->|==|[{}():,=!&|])"
)


@dataclass(frozen=True)
class SourceSpan:
    """1-based line/column of the start, plus UTF-8 byte offsets ``[start, end)``."""

    line: int
    column: int
    start: int
    end: int


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    span: SourceSpan

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.kind}: {self.message}"


class ParseError(CausalError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(map(str, diagnostics)))

    @property
    def kinds(self) -> list[str]:
        return [d.kind for d in self.diagnostics]


@dataclass(frozen=True)
class ContextDecl:
    name: str
    model: str
    values: dict[str, str]


@dataclass(frozen=True)
class Query:
    definition: str
    cause: Literal
    effect: Literal
    model: str
    context: str


@dataclass
class ModelDocument:
    models: dict[str, CausalModel] = field(default_factory=dict)
    contexts: dict[str, ContextDecl] = field(default_factory=dict)
    queries: list[Query] = field(default_factory=list)

    def context(self, name: str) -> dict[str, str]:
        return dict(self.contexts[name].values)

    def contexts_of(self, model: str) -> list[ContextDecl]:
        return [c for c in self.contexts.values() if c.model == model]


# --------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class _Tok:
    kind: str  # "word", "op" or "eof"
    text: str
    start: int
    end: int


class _Syntax(Exception):
    pass


class _Source:
    def __init__(self, text: str):
        self.text = text
        self._line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def span(self, start: int, end: int) -> SourceSpan:
        lo, hi = 0, len(self._line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._line_starts[mid] <= start:
                lo = mid
            else:
                hi = mid - 1
        line_start = self._line_starts[lo]
        return SourceSpan(
            lo + 1,
            start - line_start + 1,
            len(self.text[:start].encode("utf-8")),
            len(self.text[:end].encode("utf-8")),
        )


def _lex(src: _Source, diags: list[Diagnostic]) -> list[_Tok]:
    text = src.text
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            diags.append(Diagnostic("SyntaxError", f"unexpected character {text[pos]!r}", src.span(pos, pos + 1)))
            pos += 1
            continue
        if m.lastgroup in ("word", "op"):
            toks.append(_Tok(m.lastgroup, m.group(), m.start(), m.end()))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text), len(text)))
    return toks


# --------------------------------------------------------------------------
# parser


@dataclass
class _VarDecl:
    name: str
    domain: tuple[str, ...]
    expr: Optional[Expr]
    span: SourceSpan
    expr_span: Optional[SourceSpan] = None
    refs: list[tuple[str, SourceSpan]] = field(default_factory=list)
    eqs: list[tuple[str, str, SourceSpan]] = field(default_factory=list)
    bool_operands: list[tuple[Expr, SourceSpan]] = field(default_factory=list)


@dataclass
class _QueryDecl:
    definition: str
    cause: _Tok
    cause_value: _Tok
    effect: _Tok
    effect_value: _Tok
    model: _Tok
    context: _Tok


@dataclass
class _ModelDecl:
    name: str
    span: SourceSpan
    exo: list[_VarDecl] = field(default_factory=list)
    endo: list[_VarDecl] = field(default_factory=list)
    contexts: list[tuple[str, SourceSpan, list[tuple[str, SourceSpan, str, SourceSpan]]]] = field(default_factory=list)


class _Parser:
    def __init__(self, text: str):
        self.src = _Source(text)
        self.diags: list[Diagnostic] = []
        self.toks = _lex(self.src, self.diags)
        self.pos = 0
        self.models: dict[str, _ModelDecl] = {}
        self.model_order: list[str] = []
        self.queries: list[_QueryDecl] = []
        self._current: Optional[_VarDecl] = None

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def span_of(self, tok: _Tok) -> SourceSpan:
        return self.src.span(tok.start, tok.end)

    def error(self, kind: str, message: str, span: SourceSpan) -> None:
        self.diags.append(Diagnostic(kind, message, span))

    def fail(self, expected: str) -> None:
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise _Syntax(Diagnostic("SyntaxError", f"expected {expected}, found {found}", self.span_of(tok)))

    def accept(self, text: str) -> Optional[_Tok]:
        if self.tok.text == text and self.tok.kind != "eof":
            tok = self.tok
            self.pos += 1
            return tok
        return None

    def expect(self, text: str) -> _Tok:
        tok = self.accept(text)
        if tok is None:
            self.fail(repr(text))
        return tok  # type: ignore[return-value]

    def name(self, what: str = "identifier") -> _Tok:
        tok = self.tok
        if tok.kind != "word" or tok.text in KEYWORDS or tok.text[0].isdigit():
            self.fail(what)
        self.pos += 1
        return tok

    def value(self) -> _Tok:
        tok = self.tok
        if tok.kind != "word" or tok.text in KEYWORDS:
            self.fail("value")
        self.pos += 1
        return tok

    # document structure
    def parse(self) -> None:
        while self.tok.kind != "eof":
            if self.tok.text in ("exo", "var", "context"):
                self.item(self._model(MAIN, None), top=True)
            else:
                self.item(None, top=True)

    def _model(self, name: str, span: Optional[SourceSpan]) -> _ModelDecl:
        if name not in self.models:
            self.models[name] = _ModelDecl(name, span or SourceSpan(1, 1, 0, 0))
            self.model_order.append(name)
        return self.models[name]

    def item(self, model: Optional[_ModelDecl], top: bool) -> None:
        start = self.pos
        try:
            word = self.tok.text if self.tok.kind == "word" else None
            if word == "model" and top:
                self.model_block()
            elif word == "exo":
                self.exo_decl(model)
            elif word == "var":
                self.var_decl(model)
            elif word == "context":
                self.context_decl(model)
            elif word == "query" and top:
                self.query()
            else:
                self.fail("'model', 'exo', 'var', 'context' or 'query'" if top else "'exo', 'var', 'context' or '}'")
        except _Syntax as exc:
            self.diags.append(exc.args[0])
            self.sync(start, top)

    def sync(self, start: int, top: bool) -> None:
        if self.pos == start:
            self.pos += 1
        heads = {"model", "exo", "var", "context", "query"}
        while self.tok.kind != "eof":
            if self.tok.kind == "word" and self.tok.text in heads:
                return
            if self.tok.text == "}" and not top:
                return
            self.pos += 1

    def model_block(self) -> None:
        self.expect("model")
        tok = self.name("model name")
        span = self.span_of(tok)
        if tok.text in self.models:
            self.error("DuplicateName", f"model {tok.text!r} declared twice", span)
            model = _ModelDecl(tok.text, span)  # parsed and dropped
        else:
            model = self._model(tok.text, span)
        self.expect("{")
        while self.tok.kind != "eof" and self.tok.text != "}":
            if self.tok.kind == "word" and self.tok.text in ("model", "query"):
                self.fail("'}'")
            self.item(model, top=False)
        self.expect("}")

    def domain(self) -> tuple[str, ...]:
        self.expect("{")
        values = [self.value()]
        while self.accept(","):
            values.append(self.value())
        self.expect("}")
        seen = set()
        for v in values:
            if v.text in seen:
                self.error("DomainMismatch", f"value {v.text!r} repeated in domain", self.span_of(v))
            seen.add(v.text)
        return tuple(dict.fromkeys(v.text for v in values))

    def exo_decl(self, model: _ModelDecl) -> None:
        self.expect("exo")
        tok = self.name("variable name")
        self.expect(":")
        model.exo.append(_VarDecl(tok.text, self.domain(), None, self.span_of(tok)))

    def var_decl(self, model: _ModelDecl) -> None:
        self.expect("var")
        tok = self.name("variable name")
        self.expect(":")
        domain = self.domain()
        self.expect("=")
        decl = _VarDecl(tok.text, domain, None, self.span_of(tok))
        self._current = decl
        start = self.tok.start
        decl.expr = self.expr()
        decl.expr_span = self.src.span(start, self.toks[self.pos - 1].end)
        model.endo.append(decl)

    def context_decl(self, model: _ModelDecl) -> None:
        self.expect("context")
        tok = self.name("context name")
        self.expect("{")
        entries = []
        if self.tok.text != "}":
            while True:
                var = self.name("variable name")
                self.expect("=")
                val = self.value()
                entries.append((var.text, self.span_of(var), val.text, self.span_of(val)))
                if not self.accept(","):
                    break
        self.expect("}")
        model.contexts.append((tok.text, self.span_of(tok), entries))

    def query(self) -> None:
        self.expect("query")
        d = self.value()
        if d.text not in DEFINITIONS:
            raise _Syntax(
                Diagnostic("SyntaxError", f"unknown definition {d.text!r}; expected one of {', '.join(DEFINITIONS)}", self.span_of(d))
            )
        self.expect("cause")
        cv = self.name("variable name")
        self.expect("=")
        cval = self.value()
        self.expect("effect")
        ev = self.name("variable name")
        self.expect("=")
        evl = self.value()
        self.expect("in")
        m = self.name("model name")
        self.expect("given")
        c = self.name("context name")
        self.queries.append(_QueryDecl(d.text, cv, cval, ev, evl, m, c))

    # expressions
    def expr(self) -> Expr:
        start = self.tok
        left = self.and_expr()
        while True:
            if not self.accept("|"):
                return left
            right_tok = self.tok
            right = self.and_expr()
            self._bool(left, start, right_tok)
            self._bool(right, right_tok, self.toks[self.pos - 1])
            left = Or(left, right)

    def and_expr(self) -> Expr:
        start = self.tok
        left = self.not_expr()
        while True:
            if not self.accept("&"):
                return left
            right_tok = self.tok
            right = self.not_expr()
            self._bool(left, start, right_tok)
            self._bool(right, right_tok, self.toks[self.pos - 1])
            left = And(left, right)

    def not_expr(self) -> Expr:
        if self.accept("!"):
            start = self.tok
            operand = self.not_expr()
            self._bool(operand, start, self.toks[self.pos - 1])
            return Not(operand)
        return self.atom()

    def _bool(self, e: Expr, first: _Tok, last: _Tok) -> None:
        if self._current is not None:
            span = self.src.span(first.start, max(last.end, first.end))
            if (e, span) not in self._current.bool_operands:
                self._current.bool_operands.append((e, span))

    def atom(self) -> Expr:
        tok = self.tok
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if tok.text == "case" and tok.kind == "word":
            return self.case()
        if tok.kind != "word" or tok.text in KEYWORDS:
            self.fail("expression")
        self.pos += 1
        if tok.text[0].isdigit():
            return Const(tok.text)
        if self.accept("=="):
            val = self.value()
            if self._current is not None:
                self._current.refs.append((tok.text, self.span_of(tok)))
                self._current.eqs.append((tok.text, val.text, self.span_of(val)))
            return Eq(tok.text, val.text)
        if self._current is not None:
            self._current.refs.append((tok.text, self.span_of(tok)))
        return Var(tok.text)

    def case(self) -> Expr:
        self.expect("case")
        self.expect("{")
        branches = []
        while not self.accept("else"):
            first = self.tok
            cond = self.expr()
            self._bool(cond, first, self.toks[self.pos - 1])
            self.expect("->")
            branches.append((cond, self.value().text))
            self.expect(",")
        self.expect("->")
        default = self.value().text
        self.accept(",")
        self.expect("}")
        if not branches:
            return Const(default)
        return Case(tuple(branches), default)


# --------------------------------------------------------------------------
# semantic checks


def _build_model(p: _Parser, decl: _ModelDecl) -> Optional[CausalModel]:
    ok = True
    names: dict[str, _VarDecl] = {}
    for v in decl.exo + decl.endo:
        if v.name in names:
            p.error("DuplicateName", f"variable {v.name!r} declared twice in model {decl.name!r}", v.span)
            ok = False
        else:
            names[v.name] = v
    domains = {n: v.domain for n, v in names.items()}
    for v in decl.endo:
        for ref, span in v.refs:
            if ref not in domains:
                p.error("UndeclaredVariable", f"undeclared variable {ref!r}", span)
                ok = False
            elif ref == v.name:
                p.error("DomainMismatch", f"equation for {v.name} refers to itself", span)
                ok = False
        for ref, val, span in v.eqs:
            if ref in domains and val not in domains[ref]:
                p.error("DomainMismatch", f"{val!r} is not a value of {ref}", span)
                ok = False
    if not ok:
        return None
    for v in decl.endo:
        for sub, span in v.bool_operands:
            vals = value_set(sub, domains)
            if not vals <= BOOL:
                p.error("DomainMismatch", f"boolean operand expected, this has values {{{', '.join(sorted(vals))}}}", span)
                ok = False
        if not ok:
            continue
        vals = value_set(v.expr, domains)  # type: ignore[arg-type]
        stray = sorted(vals - set(v.domain))
        if stray:
            p.error("DomainMismatch", f"equation for {v.name} can produce {stray} outside its domain", v.expr_span or v.span)
            ok = False
    if not ok:
        return None
    if not decl.endo:
        p.error("SyntaxError", f"model {decl.name!r} declares no endogenous variable", decl.span)
        return None
    try:
        model = CausalModel(
            Signature(
                tuple(Variable(v.name, v.domain) for v in decl.exo),
                tuple(Variable(v.name, v.domain) for v in decl.endo),
            ),
            {v.name: v.expr for v in decl.endo},  # type: ignore[misc]
        )
        validate(model)
    except CausalError as exc:
        p.error(type(exc).__name__, str(exc), decl.span)
        return None
    return model


def parse_document(text: str) -> ModelDocument:
    """Parse a document, raising :class:`ParseError` with every diagnostic found."""
    p = _Parser(text)
    p.parse()
    doc = ModelDocument()
    for name in p.model_order:
        decl = p.models[name]
        if name == MAIN and not (decl.exo or decl.endo or decl.contexts):
            continue
        model = _build_model(p, decl) if (decl.exo or decl.endo) else None
        if model is not None:
            doc.models[name] = model
        elif not (decl.exo or decl.endo):
            p.error("SyntaxError", f"model {name!r} declares no variables", decl.span)
        for ctx_name, ctx_span, entries in decl.contexts:
            if ctx_name in doc.contexts:
                p.error("DuplicateName", f"context {ctx_name!r} declared twice", ctx_span)
                continue
            values: dict[str, str] = {}
            exo = {v.name: v.domain for v in decl.exo}
            endo = {v.name for v in decl.endo}
            for var, vspan, val, valspan in entries:
                if var in values:
                    p.error("DuplicateName", f"{var} assigned twice in context {ctx_name!r}", vspan)
                elif var in endo:
                    p.error("DomainMismatch", f"{var} is endogenous; contexts assign exogenous variables only", vspan)
                elif var not in exo:
                    p.error("UndeclaredVariable", f"undeclared variable {var!r}", vspan)
                elif val not in exo[var]:
                    p.error("DomainMismatch", f"{val!r} is not a value of {var}", valspan)
                else:
                    values[var] = val
            for var in exo:
                if var not in values and all(e[0] != var for e in entries):
                    p.error("DomainMismatch", f"context {ctx_name!r} does not assign {var}", ctx_span)
            doc.contexts[ctx_name] = ContextDecl(ctx_name, name, values)
    for q in p.queries:
        m, c = q.model.text, q.context.text
        if m not in p.models:
            p.error("UndeclaredName", f"undeclared model {m!r}", p.span_of(q.model))
            continue
        if c not in doc.contexts:
            p.error("UndeclaredName", f"undeclared context {c!r}", p.span_of(q.context))
            continue
        if doc.contexts[c].model != m:
            p.error(
                "DomainMismatch",
                f"context {c!r} belongs to model {doc.contexts[c].model!r}, not {m!r}",
                p.span_of(q.context),
            )
            continue
        endo = {v.name: v.domain for v in p.models[m].endo}
        bad = False
        for var, val in ((q.cause, q.cause_value), (q.effect, q.effect_value)):
            if var.text not in endo:
                kind = "DomainMismatch" if any(x.name == var.text for x in p.models[m].exo) else "UndeclaredVariable"
                p.error(kind, f"{var.text!r} is not an endogenous variable of {m!r}", p.span_of(var))
                bad = True
            elif val.text not in endo[var.text]:
                p.error("DomainMismatch", f"{val.text!r} is not a value of {var.text}", p.span_of(val))
                bad = True
        if not bad:
            doc.queries.append(
                Query(q.definition, Literal(q.cause.text, q.cause_value.text), Literal(q.effect.text, q.effect_value.text), m, c)
            )
    if p.diags:
        raise ParseError(sorted(p.diags, key=lambda d: (d.span.start, d.span.end)))
    return doc


def parse_model(text: str, name: str = MAIN) -> CausalModel:
    """Convenience: parse ``text`` and return one model from it."""
    return parse_document(text).models[name]


# --------------------------------------------------------------------------
# printer


def format_expr(e: Expr) -> str:
    return _fmt(e)[0]


def _wrap(e: Expr, need: int, strict: bool = False) -> str:
    s, prec = _fmt(e)
    if prec < need or (strict and prec == need):
        return f"({s})"
    return s


def _fmt(e: Expr) -> tuple[str, int]:
    if isinstance(e, Or):
        return f"{_wrap(e.left, 1)} | {_wrap(e.right, 1, strict=True)}", 1
    if isinstance(e, And):
        return f"{_wrap(e.left, 2)} & {_wrap(e.right, 2, strict=True)}", 2
    if isinstance(e, Not):
        return "!" + _wrap(e.operand, 3), 3
    if isinstance(e, Eq):
        return f"{e.name} == {e.value}", 4
    if isinstance(e, Var):
        return e.name, 4
    if isinstance(e, Const):
        if e.value[0].isdigit():
            return e.value, 4
        return f"case {{ else -> {e.value} }}", 4
    if isinstance(e, Case):
        parts = [f"{format_expr(c)} -> {v}" for c, v in e.branches]
        parts.append(f"else -> {e.default}")
        return "case { " + ", ".join(parts) + " }", 4
    raise TypeError(f"not an expression: {e!r}")


def _fmt_domain(domain: tuple[str, ...]) -> str:
    return "{" + ", ".join(domain) + "}"


def print_model(name: str, model: CausalModel, contexts: list[ContextDecl] = ()) -> str:  # type: ignore[assignment]
    lines = [f"model {name} {{"]
    for v in model.signature.exogenous:
        lines.append(f"  exo {v.name}: {_fmt_domain(v.domain)}")
    for v in model.signature.endogenous:
        lines.append(f"  var {v.name}: {_fmt_domain(v.domain)} = {format_expr(model.mechanisms[v.name])}")
    for ctx in contexts:
        body = ", ".join(f"{k} = {ctx.values[k]}" for k in model.exogenous if k in ctx.values)
        lines.append(f"  context {ctx.name} {{ {body} }}" if body else f"  context {ctx.name} {{}}")
    lines.append("}")
    return "\n".join(lines)


def print_document(doc: ModelDocument) -> str:
    """Canonical text: one block per model, then the queries."""
    blocks = [print_model(name, model, doc.contexts_of(name)) for name, model in doc.models.items()]
    if doc.queries:
        blocks.append(
            "\n".join(
                f"query {q.definition} cause {q.cause} effect {q.effect} in {q.model} given {q.context}"
                for q in doc.queries
            )
        )
    return "\n\n".join(blocks) + ("\n" if blocks else "")
