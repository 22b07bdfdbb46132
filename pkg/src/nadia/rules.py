"""Coherence rules and defaulting.

Rules are compiled against a resolved schema: every feature path is
resolved and kind constraints are verified before any evaluation.  A rule
body is a strict boolean expression; evaluation is pure and total, so all
failures are compile-time failures.

Beyond declared features, paths may use the virtual accessors `id` (any
article), `lemma` and `parent-entry` (entries and acceptions), and `gloss`
and `mnemonic` (articles of the acception dictionary, class `axie`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

from .dls.ast import (
    And, ClassRef, Cond, DefaultDecl, EmptyP, Equal, FeatureStructureType,
    FieldAccess, IsOneOf, Kind, Not, Or, RuleDecl, RuleExpr, RuleParam,
    StringConst, SymbolConst, TrueConst, TypeExpr,
)
from .dls.schema import Schema
from .dls.validate import ValidationReport, _check
from .lexbase.model import Strength, Violation, id_sort_key
from .values import Atom, FS, Text, Value

AXIE_CLASS = "axie"


class RuleError(Exception):
    pass


class UnknownPath(RuleError):
    def __init__(self, path: str, detail: str = ""):
        msg = f"cannot resolve path {path!r}"
        super().__init__(msg + (f": {detail}" if detail else ""))
        self.path = path


class KindViolation(RuleError):
    pass


@dataclass
class BoundArticle:
    """What a rule variable sees of an entry, acception or axie."""
    kind: str
    id: str
    class_name: str
    dictionary: str = ""  # dictionary name, not language
    features: FS = field(default_factory=lambda: FS(()))
    lemma: str = ""
    entry_id: str = ""
    gloss: str = ""
    mnemonic: str = ""


@dataclass(frozen=True)
class CompiledRule:
    name: str
    kind: Kind
    strength: Strength
    params: tuple[RuleParam, ...]
    body: RuleExpr


@dataclass(frozen=True)
class CompiledDefault:
    name: str
    var: str
    class_name: str
    dictionary: str
    guard: RuleExpr
    assignments: tuple[tuple[FieldAccess, Value], ...]


def compile_rule(decl: RuleDecl, schema: Schema) -> CompiledRule:
    params = decl.params
    article_vars = [p for p in params]
    if decl.kind == Kind.INTEGRITY and len(article_vars) != 1:
        raise KindViolation(
            f"integrity rule {decl.name!r} must bind exactly one article")
    if decl.kind == Kind.LOCAL:
        dicts = {p.dictionary for p in article_vars}
        if "*" in dicts or len(dicts) != 1:
            raise KindViolation(
                f"local rule {decl.name!r} must bind all variables to one dictionary")
    for p in params:
        _check_param(decl.name, p, schema,
                     allow_axie=decl.kind in (Kind.INTEGRITY, Kind.GLOBAL))
    env = {p.var: p.class_name for p in params}
    _check_expr(decl.body, env, schema)
    return CompiledRule(decl.name, decl.kind, Strength.parse(decl.strength),
                        params, decl.body)


def compile_default(decl: DefaultDecl, schema: Schema) -> CompiledDefault:
    if len(decl.params) != 1:
        raise KindViolation(f"default rule {decl.name!r} must bind exactly one article")
    p = decl.params[0]
    _check_param(decl.name, p, schema, allow_axie=False)
    env = {p.var: p.class_name}
    _check_expr(decl.guard, env, schema)
    for path, value in decl.assignments:
        target = _check_path(path, env, schema)
        if target is None:
            raise UnknownPath(_path_str(path), "virtual accessors cannot be assigned")
        rep = ValidationReport(p.class_name)
        _check(value, target, _path_str(path), schema, rep)
        if not rep.ok:
            raise RuleError(f"default {decl.name!r}: constant does not fit "
                            f"{_path_str(path)}: {rep.faults[0].message}")
    return CompiledDefault(decl.name, p.var, p.class_name, p.dictionary,
                           decl.guard, decl.assignments)


def _check_param(rule: str, p: RuleParam, schema: Schema, allow_axie: bool):
    if p.class_name == AXIE_CLASS:
        if not allow_axie:
            raise KindViolation(f"rule {rule!r}: class 'axie' needs integrity or global kind")
        return
    rc = schema.class_named(p.class_name)  # raises UnknownClass
    if not (schema.is_subclass(rc.name, "entry") or schema.is_subclass(rc.name, "acception")):
        raise KindViolation(
            f"rule {rule!r}: {p.class_name!r} is not an article class")
    if p.dictionary != "*" and schema.dictionary_named(p.dictionary) is None:
        raise KindViolation(f"rule {rule!r}: unknown dictionary {p.dictionary!r}")


def _virtuals(class_name: str, schema: Schema) -> set[str]:
    if class_name == AXIE_CLASS:
        return {"id", "gloss", "mnemonic"}
    names = {"id"}
    if schema.is_subclass(class_name, "entry"):
        names.add("lemma")
    if schema.is_subclass(class_name, "acception"):
        names.add("parent-entry")
    return names


def _path_str(fa: FieldAccess) -> str:
    return fa.var + "".join("." + f for f in fa.features)


def _check_path(fa: FieldAccess, env: dict[str, str], schema: Schema) -> Optional[TypeExpr]:
    """Returns the declared type at the end of the path, None for virtuals
    and bare variables."""
    if fa.var not in env:
        raise UnknownPath(_path_str(fa), f"unbound variable {fa.var!r}")
    class_name = env[fa.var]
    if not fa.features:
        return None
    declared = (FeatureStructureType(()) if class_name == AXIE_CLASS
                else schema.class_named(class_name).body)
    first = fa.features[0]
    if (not isinstance(declared, FeatureStructureType) or declared.feature(first) is None) \
            and first in _virtuals(class_name, schema):
        if len(fa.features) > 1:
            raise UnknownPath(_path_str(fa), f"{first!r} has no sub-features")
        return None
    t: TypeExpr = declared
    for name in fa.features:
        while isinstance(t, ClassRef):
            t = schema.class_named(t.name).body
        if not isinstance(t, FeatureStructureType):
            raise UnknownPath(_path_str(fa), f"{name!r} applied to a non-structure")
        ft = t.feature(name)
        if ft is None:
            raise UnknownPath(_path_str(fa), f"no feature {name!r}")
        t = ft
    while isinstance(t, ClassRef):
        t = schema.class_named(t.name).body
    return t


def _check_expr(e: RuleExpr, env: dict[str, str], schema: Schema):
    if isinstance(e, (TrueConst, SymbolConst, StringConst)):
        return
    if isinstance(e, FieldAccess):
        _check_path(e, env, schema)
        return
    if isinstance(e, (And, Or)):
        for a in e.args:
            _check_expr(a, env, schema)
        return
    if isinstance(e, Not):
        _check_expr(e.arg, env, schema)
        return
    if isinstance(e, Cond):
        for t, r in e.branches:
            _check_expr(t, env, schema)
            _check_expr(r, env, schema)
        return
    if isinstance(e, Equal):
        _check_expr(e.a, env, schema)
        _check_expr(e.b, env, schema)
        return
    if isinstance(e, IsOneOf):
        _check_expr(e.arg, env, schema)
        return
    if isinstance(e, EmptyP):
        _check_path(e.path, env, schema)
        return
    raise RuleError(f"unknown expression {e!r}")


# --- evaluation -------------------------------------------------------------

_MISSING = object()


def _resolve(fa: FieldAccess, bindings: dict[str, BoundArticle]):
    art = bindings[fa.var]
    if not fa.features:
        return Atom(art.id) if art.kind == "axie" else art.features
    first = fa.features[0]
    if len(fa.features) == 1:
        if first == "id":
            if not isinstance(art.features, FS) or art.features.get(first) is None:
                return Atom(art.id)
        if art.kind == "entry" and first == "lemma" and art.features.get(first) is None:
            return Text(art.lemma)
        if art.kind == "acception" and first == "parent-entry" \
                and art.features.get(first) is None:
            return Atom(art.entry_id) if art.entry_id else _MISSING
        if art.kind == "axie":
            if first == "gloss":
                return Text(art.gloss) if art.gloss else _MISSING
            if first == "mnemonic":
                return Text(art.mnemonic) if art.mnemonic else _MISSING
    value: Value = art.features
    for name in fa.features:
        if not isinstance(value, FS):
            return _MISSING
        nxt = value.get(name)
        if nxt is None:
            return _MISSING
        value = nxt
    return value


def _operand(e: RuleExpr, bindings: dict[str, BoundArticle]):
    if isinstance(e, SymbolConst):
        return Atom(e.symbol)
    if isinstance(e, StringConst):
        return Text(e.value)
    if isinstance(e, TrueConst):
        return True
    if isinstance(e, FieldAccess):
        return _resolve(e, bindings)
    return eval_expr(e, bindings)


def eval_expr(expr: RuleExpr, bindings: dict[str, BoundArticle]) -> bool:
    """Strict boolean evaluation; an absent feature is falsy and equal to
    nothing, `empty-p` is its dedicated test."""
    if isinstance(expr, TrueConst):
        return True
    if isinstance(expr, (SymbolConst, StringConst)):
        return True  # any non-nil constant
    if isinstance(expr, FieldAccess):
        return _resolve(expr, bindings) is not _MISSING
    if isinstance(expr, And):
        return all(eval_expr(a, bindings) for a in expr.args)
    if isinstance(expr, Or):
        return any(eval_expr(a, bindings) for a in expr.args)
    if isinstance(expr, Not):
        return not eval_expr(expr.arg, bindings)
    if isinstance(expr, Cond):
        for test, result in expr.branches:
            if eval_expr(test, bindings):
                return eval_expr(result, bindings)
        return False
    if isinstance(expr, Equal):
        a = _operand(expr.a, bindings)
        b = _operand(expr.b, bindings)
        if a is _MISSING or b is _MISSING:
            return False
        return a == b
    if isinstance(expr, IsOneOf):
        v = _operand(expr.arg, bindings)
        return isinstance(v, Atom) and v.symbol in expr.symbols
    if isinstance(expr, EmptyP):
        return _resolve(expr.path, bindings) is _MISSING
    raise RuleError(f"unknown expression {expr!r}")


# --- running rules over a store state ---------------------------------------

def _article_matches(art: BoundArticle, param: RuleParam, schema: Schema) -> bool:
    if param.class_name == AXIE_CLASS:
        return art.kind == "axie"
    if art.kind == "axie":
        return False
    if not schema.is_subclass(art.class_name, param.class_name):
        return False
    return param.dictionary == "*" or art.dictionary == param.dictionary


def run_rules(articles: Iterable[BoundArticle], changed: set[str],
              rules: Iterable[CompiledRule], schema: Schema) -> list[Violation]:
    """Evaluate rules over article tuples touching the change set.

    Integrity rules see each changed article of their class; local and
    global rules see tuples of distinct articles with at least one changed
    member.  A failed evaluation yields one Violation per distinct subject
    set, in deterministic order.
    """
    arts = sorted(articles, key=lambda a: id_sort_key(a.id))
    violations: list[Violation] = []
    seen: set[tuple[str, frozenset]] = set()
    for rule in rules:
        candidates = [[a for a in arts if _article_matches(a, p, schema)]
                      for p in rule.params]
        if len(rule.params) == 1:
            pool = [a for a in candidates[0] if a.id in changed]
            combos = [(a,) for a in pool]
        else:
            combos = []
            for combo in product(*candidates):
                ids = [a.id for a in combo]
                if len(set(ids)) != len(ids):
                    continue
                if not any(i in changed for i in ids):
                    continue
                combos.append(combo)
        for combo in combos:
            bindings = {p.var: a for p, a in zip(rule.params, combo)}
            if not eval_expr(rule.body, bindings):
                subjects = tuple(a.id for a in combo)
                key = (rule.name, frozenset(subjects))
                if key in seen:
                    continue
                seen.add(key)
                violations.append(Violation(
                    code=rule.name, strength=rule.strength, subjects=subjects,
                    message=f"rule {rule.name} failed on " + ", ".join(subjects)))
    return violations


# --- defaulting -------------------------------------------------------------

def _path_target(features: FS, path: tuple[str, ...]):
    """(container chain is intact, current value)"""
    value: Value = features
    for name in path:
        if not isinstance(value, FS):
            return False, None
        nxt = value.get(name)
        if nxt is None:
            return True, None
        value = nxt
    return True, value


def _path_set(features: FS, path: tuple[str, ...], value: Value) -> FS:
    name = path[0]
    if len(path) == 1:
        return features.with_feature(name, value)
    inner = features.get(name)
    inner_fs = inner if isinstance(inner, FS) else FS(())
    return features.with_feature(name, _path_set(inner_fs, path[1:], value))


def apply_defaults(features: FS, class_name: str, dictionary: str,
                   defaults: Iterable[CompiledDefault], schema: Schema,
                   mode: str = "batch") -> tuple[FS, list[tuple[str, Value]]]:
    """Fill absent features by rule; never overwrites a present value.

    Batch mode returns the defaulted structure; interactive mode returns
    the original with the proposals listed.  Both are idempotent.
    """
    applied: list[tuple[str, Value]] = []
    current = features
    for rule in defaults:
        if not schema.is_subclass(class_name, rule.class_name):
            continue
        if rule.dictionary != "*" and dictionary != rule.dictionary:
            continue
        article = BoundArticle(kind="article", id="", class_name=class_name,
                               dictionary=dictionary, features=current)
        if not eval_expr(rule.guard, {rule.var: article}):
            continue
        targets = []
        ok = True
        for path, value in rule.assignments:
            intact, existing = _path_target(current, path.features)
            if not intact or existing is not None:
                ok = False
                break
            targets.append((path.features, value))
        if not ok:
            continue
        for path, value in targets:
            current = _path_set(current, path, value)
            applied.append((".".join(path), value))
    if mode == "interactive":
        return features, applied
    return current, applied
