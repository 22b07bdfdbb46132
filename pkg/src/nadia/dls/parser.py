"""Form analysis: s-expressions to declarations.

Top-level forms: define-database, def-linguistic-class, def-integrity,
def-local-coherence, def-global-coherence, def-default.  Anything else is
a syntax error, as are duplicate keyword arguments.
"""

from __future__ import annotations

from typing import Optional

from ..values import Atom, FS, ListVal, SetVal, Text, Value
from .ast import (
    And, AnyOf, AutomatonType, ClassDecl, ClassRef, Cond, DatabaseDecl, Decl,
    DefaultDecl, DictionaryDecl, EmptyP, Equal, FeatureStructureType,
    FieldAccess, GraphOf, IsOneOf, Kind, ListOf, Not, OneOf, Or, Pos,
    RuleDecl, RuleExpr, RuleParam, SetOf, StringType, StringConst,
    SymbolConst, SymbolType, TreeOf, TrueConst, TypeExpr,
)
from .reader import DlsSyntaxError, SExpr, SKeyword, SList, SString, SSymbol, read_forms

STRENGTHS = ("warning", "delay", "critical")

_RULE_FORMS = {
    "def-integrity": Kind.INTEGRITY,
    "def-local-coherence": Kind.LOCAL,
    "def-global-coherence": Kind.GLOBAL,
}


def parse_dls(text: str, filename: str = "<dls>") -> list[Decl]:
    """Parse DLS source into top-level declarations, in order."""
    decls = []
    for form in read_forms(text, filename):
        decls.append(_analyze_toplevel(form, filename))
    return decls


def parse_dls_file(path) -> list[Decl]:
    with open(path, encoding="utf-8") as f:
        return parse_dls(f.read(), str(path))


def _err(message: str, pos: Pos, filename: str) -> DlsSyntaxError:
    return DlsSyntaxError(message, pos, filename)


def _head(form: SExpr, filename: str) -> tuple[str, SList]:
    if not isinstance(form, SList) or not form.items:
        raise _err("expected a parenthesized form", form.pos, filename)
    head = form.items[0]
    if not isinstance(head, SSymbol) or head.quoted:
        raise _err("form must start with a symbol", head.pos, filename)
    return head.name, form


def _analyze_toplevel(form: SExpr, filename: str) -> Decl:
    name, lst = _head(form, filename)
    if name == "define-database":
        return _analyze_database(lst, filename)
    if name == "def-linguistic-class":
        return _analyze_class(lst, filename)
    if name in _RULE_FORMS:
        return _analyze_rule(lst, _RULE_FORMS[name], filename)
    if name == "def-default":
        return _analyze_default(lst, filename)
    raise _err(f"unknown top-level form {name!r}", lst.pos, filename)


def _symbol_arg(item: SExpr, what: str, filename: str) -> str:
    if not isinstance(item, SSymbol):
        raise _err(f"expected {what}", item.pos, filename)
    return item.name


def _keyword_args(items: list[SExpr], allowed: dict[str, str], filename: str,
                  tail_keyword: Optional[str] = None):
    """Collect :kw value pairs; `tail_keyword` swallows all remaining forms."""
    kwargs: dict[str, SExpr] = {}
    tail: list[SExpr] = []
    i = 0
    while i < len(items):
        item = items[i]
        if not isinstance(item, SKeyword):
            raise _err("expected a keyword argument", item.pos, filename)
        if item.name not in allowed:
            raise _err(f"unknown keyword :{item.name}", item.pos, filename)
        if item.name in kwargs or (tail and item.name == tail_keyword):
            raise _err(f"duplicate keyword :{item.name}", item.pos, filename)
        if item.name == tail_keyword:
            tail = list(items[i + 1:])
            if not tail:
                raise _err(f":{item.name} takes at least one form", item.pos, filename)
            kwargs[item.name] = item  # mark as seen
            break
        if i + 1 >= len(items):
            raise _err(f"missing value for :{item.name}", item.pos, filename)
        kwargs[item.name] = items[i + 1]
        i += 2
    return kwargs, tail


def _string_of(expr: SExpr, what: str, filename: str) -> str:
    if not isinstance(expr, SString):
        raise _err(f"{what} must be a string", expr.pos, filename)
    return expr.value


def _quoted_of(expr: SExpr, what: str, filename: str) -> str:
    if not isinstance(expr, SSymbol) or not expr.quoted:
        raise _err(f"{what} must be a quoted symbol", expr.pos, filename)
    return expr.name


def _analyze_database(lst: SList, filename: str) -> DatabaseDecl:
    items = list(lst.items[1:])
    if not items:
        raise _err("define-database needs a name", lst.pos, filename)
    name = _symbol_arg(items[0], "database name", filename)
    allowed = {"owner": "s", "comment": "s", "dictionaries": "forms"}
    kwargs, tail = _keyword_args(items[1:], allowed, filename, tail_keyword="dictionaries")
    dicts = []
    for form in tail:
        fname, flst = _head(form, filename)
        if fname != "define-dictionary":
            raise _err("expected a define-dictionary form", flst.pos, filename)
        dicts.append(_analyze_dictionary(flst, filename))
    if not dicts:
        raise _err("define-database declares no dictionaries", lst.pos, filename)
    return DatabaseDecl(
        name=name,
        owner=_string_of(kwargs["owner"], ":owner", filename) if "owner" in kwargs else "",
        comment=_string_of(kwargs["comment"], ":comment", filename) if "comment" in kwargs else "",
        dictionaries=tuple(dicts),
        pos=lst.pos,
    )


def _analyze_dictionary(lst: SList, filename: str) -> DictionaryDecl:
    items = list(lst.items[1:])
    if not items:
        raise _err("define-dictionary needs a name", lst.pos, filename)
    name = _symbol_arg(items[0], "dictionary name", filename)
    allowed = {"language": "s", "owner": "s", "comment": "s", "entry": "q", "acception": "q"}
    kwargs, _ = _keyword_args(items[1:], allowed, filename)
    for required in ("language", "entry", "acception"):
        if required not in kwargs:
            raise _err(f"define-dictionary {name} misses :{required}", lst.pos, filename)
    return DictionaryDecl(
        name=name,
        language=_string_of(kwargs["language"], ":language", filename),
        owner=_string_of(kwargs["owner"], ":owner", filename) if "owner" in kwargs else "",
        comment=_string_of(kwargs["comment"], ":comment", filename) if "comment" in kwargs else "",
        entry_class=_quoted_of(kwargs["entry"], ":entry", filename),
        acception_class=_quoted_of(kwargs["acception"], ":acception", filename),
        pos=lst.pos,
    )


def _analyze_class(lst: SList, filename: str) -> ClassDecl:
    items = list(lst.items[1:])
    if len(items) != 3:
        raise _err("def-linguistic-class takes (name (parents...) body)", lst.pos, filename)
    name = _symbol_arg(items[0], "class name", filename)
    if not isinstance(items[1], SList):
        raise _err("parent list must be parenthesized", items[1].pos, filename)
    parents = tuple(_symbol_arg(p, "parent class name", filename) for p in items[1].items)
    body = _analyze_type(items[2], filename)
    return ClassDecl(name=name, parents=parents, body=body, pos=lst.pos)


def _analyze_type(expr: SExpr, filename: str) -> TypeExpr:
    if isinstance(expr, SSymbol) and not expr.quoted:
        if expr.name == "string":
            return StringType(pos=expr.pos)
        if expr.name == "symbol":
            return SymbolType(pos=expr.pos)
        if expr.name == "automaton":
            return AutomatonType(pos=expr.pos)
        return ClassRef(expr.name, pos=expr.pos)
    if not isinstance(expr, SList) or not expr.items:
        raise _err("expected a type expression", expr.pos, filename)
    head, lst = _head(expr, filename)
    args = list(lst.items[1:])
    if head in ("one-of", "any-of"):
        symbols = []
        for a in args:
            sym = _quoted_of(a, f"{head} alternative", filename)
            if sym in symbols:
                raise _err(f"duplicate symbol '{sym} in {head}", a.pos, filename)
            symbols.append(sym)
        if not symbols:
            raise _err(f"{head} needs at least one symbol", lst.pos, filename)
        cls = OneOf if head == "one-of" else AnyOf
        return cls(tuple(symbols), pos=lst.pos)
    if head == "feature-structure":
        features = []
        names = set()
        for a in args:
            if not isinstance(a, SList) or len(a.items) != 2:
                raise _err("feature must be (name type)", a.pos, filename)
            fname = _symbol_arg(a.items[0], "feature name", filename)
            if fname in names:
                raise _err(f"duplicate feature {fname!r}", a.items[0].pos, filename)
            names.add(fname)
            features.append((fname, _analyze_type(a.items[1], filename)))
        return FeatureStructureType(tuple(features), pos=lst.pos)
    wrappers = {"list-of": ListOf, "set-of": SetOf, "tree-of": TreeOf, "graph-of": GraphOf}
    if head in wrappers:
        if len(args) != 1:
            raise _err(f"{head} takes one type argument", lst.pos, filename)
        return wrappers[head](_analyze_type(args[0], filename), pos=lst.pos)
    raise _err(f"unknown type constructor {head!r}", lst.pos, filename)


def _analyze_params(expr: SExpr, filename: str) -> tuple[RuleParam, ...]:
    if not isinstance(expr, SList):
        raise _err("parameter list must be parenthesized", expr.pos, filename)
    raw: list[RuleParam] = []
    for item in expr.items:
        if not isinstance(item, SList) or len(item.items) != 2:
            raise _err("parameter must be (var class) or (dictionary name)", item.pos, filename)
        a = _symbol_arg(item.items[0], "parameter", filename)
        b = _symbol_arg(item.items[1], "parameter", filename)
        if a == "dictionary":
            # binds all preceding vars that have no dictionary yet
            bound_any = False
            for i, p in enumerate(raw):
                if p.dictionary == "*":
                    raw[i] = RuleParam(p.var, p.class_name, b)
                    bound_any = True
            if not bound_any:
                raise _err("(dictionary ...) must follow at least one variable", item.pos, filename)
        else:
            if any(p.var == a for p in raw):
                raise _err(f"duplicate rule variable {a!r}", item.pos, filename)
            raw.append(RuleParam(a, b))
    if not raw:
        raise _err("rule binds no variables", expr.pos, filename)
    return tuple(raw)


def _analyze_rule(lst: SList, kind: Kind, filename: str) -> RuleDecl:
    items = list(lst.items[1:])
    if len(items) != 4:
        raise _err(f"{lst.items[0].name} takes (name params strength body)", lst.pos, filename)
    name = _symbol_arg(items[0], "rule name", filename)
    params = _analyze_params(items[1], filename)
    strength = _symbol_arg(items[2], "strength", filename)
    if strength not in STRENGTHS:
        raise _err(f"strength must be one of {', '.join(STRENGTHS)}", items[2].pos, filename)
    body = _analyze_expr(items[3], filename)
    return RuleDecl(name=name, kind=kind, strength=strength, params=params,
                    body=body, pos=lst.pos)


def _analyze_default(lst: SList, filename: str) -> DefaultDecl:
    items = list(lst.items[1:])
    if len(items) < 3:
        raise _err("def-default takes (name params guard assignments...)", lst.pos, filename)
    name = _symbol_arg(items[0], "default rule name", filename)
    params = _analyze_params(items[1], filename)
    guard = _analyze_expr(items[2], filename)
    assignments = []
    for form in items[3:]:
        fname, flst = _head(form, filename)
        if fname != "set" or len(flst.items) != 3:
            raise _err("assignment must be (set path value)", form.pos, filename)
        path = _analyze_expr(flst.items[1], filename)
        if not isinstance(path, FieldAccess) or not path.features:
            raise _err("assignment path must access a feature", flst.items[1].pos, filename)
        assignments.append((path, _analyze_value(flst.items[2], filename)))
    if not assignments:
        raise _err("def-default needs at least one assignment", lst.pos, filename)
    return DefaultDecl(name=name, params=params, guard=guard,
                       assignments=tuple(assignments), pos=lst.pos)


_OPERATORS = frozenset(["and", "or", "not", "cond", "equal", "is-one-of", "empty-p"])


def _analyze_expr(expr: SExpr, filename: str) -> RuleExpr:
    if isinstance(expr, SString):
        return StringConst(expr.value, pos=expr.pos)
    if isinstance(expr, SSymbol):
        if expr.quoted:
            return SymbolConst(expr.name, pos=expr.pos)
        if expr.name == "t":
            return TrueConst(pos=expr.pos)
        return FieldAccess(expr.name, (), pos=expr.pos)
    if not isinstance(expr, SList) or not expr.items:
        raise _err("expected an expression", expr.pos, filename)
    head, lst = _head(expr, filename)
    args = list(lst.items[1:])
    if head == "and" or head == "or":
        cls = And if head == "and" else Or
        return cls(tuple(_analyze_expr(a, filename) for a in args), pos=lst.pos)
    if head == "not":
        if len(args) != 1:
            raise _err("not takes one argument", lst.pos, filename)
        return Not(_analyze_expr(args[0], filename), pos=lst.pos)
    if head == "cond":
        branches = []
        for b in args:
            if not isinstance(b, SList) or len(b.items) != 2:
                raise _err("cond branch must be (test result)", b.pos, filename)
            branches.append((_analyze_expr(b.items[0], filename),
                             _analyze_expr(b.items[1], filename)))
        return Cond(tuple(branches), pos=lst.pos)
    if head == "equal":
        if len(args) != 2:
            raise _err("equal takes two arguments", lst.pos, filename)
        return Equal(_analyze_expr(args[0], filename),
                     _analyze_expr(args[1], filename), pos=lst.pos)
    if head == "is-one-of":
        if len(args) < 2:
            raise _err("is-one-of takes an expression and symbols", lst.pos, filename)
        symbols = tuple(_quoted_of(a, "is-one-of alternative", filename) for a in args[1:])
        return IsOneOf(_analyze_expr(args[0], filename), symbols, pos=lst.pos)
    if head == "empty-p":
        if len(args) != 1:
            raise _err("empty-p takes a path", lst.pos, filename)
        path = _analyze_expr(args[0], filename)
        if not isinstance(path, FieldAccess):
            raise _err("empty-p takes a feature path", args[0].pos, filename)
        return EmptyP(path, pos=lst.pos)
    # anything else reads as a field access: (feature target)
    if len(args) != 1:
        raise _err(f"unknown operator {head!r}", lst.pos, filename)
    target = _analyze_expr(args[0], filename)
    if not isinstance(target, FieldAccess):
        raise _err("field access must apply to a variable or another access",
                   args[0].pos, filename)
    return FieldAccess(target.var, target.features + (head,), pos=lst.pos)


def _analyze_value(expr: SExpr, filename: str) -> Value:
    """Constant value literal, as used in default-rule assignments."""
    if isinstance(expr, SString):
        return Text(expr.value)
    if isinstance(expr, SSymbol) and expr.quoted:
        return Atom(expr.name)
    if isinstance(expr, SList) and expr.items:
        head, lst = _head(expr, filename)
        args = list(lst.items[1:])
        if head == "set":
            return SetVal(tuple(_analyze_value(a, filename) for a in args))
        if head == "list":
            return ListVal(tuple(_analyze_value(a, filename) for a in args))
        if head == "fs":
            pairs = []
            for a in args:
                if not isinstance(a, SList) or len(a.items) != 2:
                    raise _err("fs entry must be (name value)", a.pos, filename)
                pairs.append((_symbol_arg(a.items[0], "feature name", filename),
                              _analyze_value(a.items[1], filename)))
            return FS(tuple(pairs))
    raise _err("expected a constant value", expr.pos, filename)
