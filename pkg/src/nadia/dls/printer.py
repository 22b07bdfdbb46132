"""Canonical reprint of declarations.

Reparsing the output of print_decls yields declarations structurally equal
to the input; the resolved-schema hash is computed over this form.
"""

from __future__ import annotations

from ..values import Atom, FS, ListVal, SetVal, Text, Value
from .ast import (
    And, AnyOf, AutomatonType, ClassDecl, ClassRef, Cond, DatabaseDecl, Decl,
    DefaultDecl, DictionaryDecl, EmptyP, Equal, FeatureStructureType,
    FieldAccess, GraphOf, IsOneOf, Kind, ListOf, Not, OneOf, Or, RuleDecl,
    RuleExpr, SetOf, StringType, StringConst, SymbolConst, SymbolType,
    TreeOf, TrueConst, TypeExpr,
)

_RULE_HEADS = {
    Kind.INTEGRITY: "def-integrity",
    Kind.LOCAL: "def-local-coherence",
    Kind.GLOBAL: "def-global-coherence",
}


def quote_string(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def print_type(t: TypeExpr) -> str:
    if isinstance(t, StringType):
        return "string"
    if isinstance(t, SymbolType):
        return "symbol"
    if isinstance(t, AutomatonType):
        return "automaton"
    if isinstance(t, ClassRef):
        return t.name
    if isinstance(t, OneOf):
        return "(one-of " + " ".join("'" + s for s in t.symbols) + ")"
    if isinstance(t, AnyOf):
        return "(any-of " + " ".join("'" + s for s in t.symbols) + ")"
    if isinstance(t, FeatureStructureType):
        inner = " ".join(f"({n} {print_type(ft)})" for n, ft in t.features)
        return f"(feature-structure {inner})" if inner else "(feature-structure)"
    for cls, head in ((ListOf, "list-of"), (SetOf, "set-of"),
                      (TreeOf, "tree-of"), (GraphOf, "graph-of")):
        if isinstance(t, cls):
            return f"({head} {print_type(t.elem)})"
    raise TypeError(f"unknown type expression {t!r}")


def print_expr(e: RuleExpr) -> str:
    if isinstance(e, TrueConst):
        return "t"
    if isinstance(e, SymbolConst):
        return "'" + e.symbol
    if isinstance(e, StringConst):
        return quote_string(e.value)
    if isinstance(e, FieldAccess):
        out = e.var
        for f in e.features:
            out = f"({f} {out})"
        return out
    if isinstance(e, And):
        return "(and " + " ".join(print_expr(a) for a in e.args) + ")"
    if isinstance(e, Or):
        return "(or " + " ".join(print_expr(a) for a in e.args) + ")"
    if isinstance(e, Not):
        return f"(not {print_expr(e.arg)})"
    if isinstance(e, Cond):
        body = " ".join(f"({print_expr(t)} {print_expr(r)})" for t, r in e.branches)
        return f"(cond {body})"
    if isinstance(e, Equal):
        return f"(equal {print_expr(e.a)} {print_expr(e.b)})"
    if isinstance(e, IsOneOf):
        return ("(is-one-of " + print_expr(e.arg) + " "
                + " ".join("'" + s for s in e.symbols) + ")")
    if isinstance(e, EmptyP):
        return f"(empty-p {print_expr(e.path)})"
    raise TypeError(f"unknown rule expression {e!r}")


def print_value(v: Value) -> str:
    if isinstance(v, Atom):
        return "'" + v.symbol
    if isinstance(v, Text):
        return quote_string(v.value)
    if isinstance(v, SetVal):
        return "(set " + " ".join(print_value(i) for i in v.items) + ")"
    if isinstance(v, ListVal):
        return "(list " + " ".join(print_value(i) for i in v.items) + ")"
    if isinstance(v, FS):
        inner = " ".join(f"({n} {print_value(fv)})" for n, fv in v.features)
        return f"(fs {inner})" if inner else "(fs)"
    raise TypeError(f"no surface literal for {v!r}")


def _print_params(params) -> str:
    parts = []
    for p in params:
        parts.append(f"({p.var} {p.class_name})")
        if p.dictionary != "*":
            parts.append(f"(dictionary {p.dictionary})")
    return "(" + " ".join(parts) + ")"


def print_decl(d: Decl) -> str:
    if isinstance(d, DatabaseDecl):
        lines = [f"(define-database {d.name}"]
        if d.owner:
            lines.append(f"  :owner {quote_string(d.owner)}")
        if d.comment:
            lines.append(f"  :comment {quote_string(d.comment)}")
        lines.append("  :dictionaries")
        for dd in d.dictionaries:
            lines.append("  " + print_decl(dd).replace("\n", "\n  "))
        return "\n".join(lines) + ")"
    if isinstance(d, DictionaryDecl):
        lines = [f"(define-dictionary {d.name}",
                 f"  :language {quote_string(d.language)}"]
        if d.owner:
            lines.append(f"  :owner {quote_string(d.owner)}")
        if d.comment:
            lines.append(f"  :comment {quote_string(d.comment)}")
        lines.append(f"  :entry '{d.entry_class}")
        lines.append(f"  :acception '{d.acception_class}")
        return "\n".join(lines) + ")"
    if isinstance(d, ClassDecl):
        parents = " ".join(d.parents)
        return f"(def-linguistic-class {d.name} ({parents})\n  {print_type(d.body)})"
    if isinstance(d, RuleDecl):
        return (f"({_RULE_HEADS[d.kind]} {d.name}\n"
                f"  {_print_params(d.params)}\n"
                f"  {d.strength}\n"
                f"  {print_expr(d.body)})")
    if isinstance(d, DefaultDecl):
        sets = "\n".join(f"  (set {print_expr(p)} {print_value(v)})"
                         for p, v in d.assignments)
        return (f"(def-default {d.name}\n"
                f"  {_print_params(d.params)}\n"
                f"  {print_expr(d.guard)}\n" + sets + ")")
    raise TypeError(f"unknown declaration {d!r}")


def print_decls(decls) -> str:
    return "\n\n".join(print_decl(d) for d in decls) + "\n"
