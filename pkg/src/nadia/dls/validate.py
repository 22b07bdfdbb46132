"""Check feature values against a schema class.

All features are optional; a fault is emitted only for present values that
do not fit the declared type.  Fault codes: UnknownFeature, WrongKind,
NotInOneOf, OneOfCardinality, AnyOfNotSubset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..values import (
    Atom, AutomatonVal, FS, GraphVal, ListVal, SetVal, Text, TreeVal, Value,
    describe_kind,
)
from .ast import (
    AnyOf, AutomatonType, ClassRef, FeatureStructureType, GraphOf, ListOf,
    OneOf, SetOf, StringType, SymbolType, TreeOf, TypeExpr,
)
from .schema import Schema


@dataclass(frozen=True)
class Fault:
    code: str
    path: str
    message: str

    def __str__(self):
        where = self.path or "<value>"
        return f"{where}: {self.code}: {self.message}"


@dataclass
class ValidationReport:
    class_name: str
    faults: list[Fault] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.faults

    def add(self, code: str, path: str, message: str):
        self.faults.append(Fault(code, path, message))


def validate_value(value: Value, class_name: str, schema: Schema) -> ValidationReport:
    rc = schema.class_named(class_name)
    report = ValidationReport(class_name)
    _check(value, rc.body, "", schema, report)
    return report


def _sub(path: str, name: str) -> str:
    return f"{path}.{name}" if path else name


def _check(value: Value, t: TypeExpr, path: str, schema: Schema, rep: ValidationReport):
    if isinstance(t, ClassRef):
        _check(value, schema.class_named(t.name).body, path, schema, rep)
        return
    if isinstance(t, StringType):
        if not isinstance(value, Text):
            rep.add("WrongKind", path, f"expected string, got {describe_kind(value)}")
        return
    if isinstance(t, SymbolType):
        if not isinstance(value, Atom):
            rep.add("WrongKind", path, f"expected symbol, got {describe_kind(value)}")
        return
    if isinstance(t, OneOf):
        if isinstance(value, (ListVal, SetVal)):
            rep.add("OneOfCardinality", path,
                    f"one-of holds exactly one symbol, got a {describe_kind(value)}")
        elif not isinstance(value, Atom):
            rep.add("WrongKind", path, f"expected symbol, got {describe_kind(value)}")
        elif value.symbol not in t.symbols:
            rep.add("NotInOneOf", path,
                    f"'{value.symbol} not among " + " ".join("'" + s for s in t.symbols))
        return
    if isinstance(t, AnyOf):
        if isinstance(value, Atom):
            rep.add("WrongKind", path,
                    "any-of holds a set of symbols; wrap the symbol in a set")
        elif not isinstance(value, SetVal):
            rep.add("WrongKind", path, f"expected a set of symbols, got {describe_kind(value)}")
        elif not value.items:
            rep.add("WrongKind", path, "any-of set must be nonempty; omit the feature instead")
        else:
            bad = []
            for item in value.items:
                if not isinstance(item, Atom):
                    rep.add("WrongKind", path,
                            f"any-of member must be a symbol, got {describe_kind(item)}")
                elif item.symbol not in t.symbols:
                    bad.append(item.symbol)
            if bad:
                rep.add("AnyOfNotSubset", path,
                        " ".join("'" + s for s in bad) + " not among "
                        + " ".join("'" + s for s in t.symbols))
        return
    if isinstance(t, FeatureStructureType):
        if not isinstance(value, FS):
            rep.add("WrongKind", path,
                    f"expected feature structure, got {describe_kind(value)}")
            return
        for name, v in value.features:
            ft = t.feature(name)
            if ft is None:
                rep.add("UnknownFeature", _sub(path, name), f"no feature {name!r} declared")
            else:
                _check(v, ft, _sub(path, name), schema, rep)
        return
    if isinstance(t, ListOf):
        if not isinstance(value, ListVal):
            rep.add("WrongKind", path, f"expected list, got {describe_kind(value)}")
            return
        for i, item in enumerate(value.items):
            _check(item, t.elem, f"{path}[{i}]", schema, rep)
        return
    if isinstance(t, SetOf):
        if not isinstance(value, SetVal):
            rep.add("WrongKind", path, f"expected set, got {describe_kind(value)}")
            return
        for i, item in enumerate(value.items):
            _check(item, t.elem, f"{path}[{i}]", schema, rep)
        return
    if isinstance(t, TreeOf):
        if not isinstance(value, TreeVal):
            rep.add("WrongKind", path, f"expected tree, got {describe_kind(value)}")
            return
        _check_tree(value, t, path, schema, rep)
        return
    if isinstance(t, GraphOf):
        if not isinstance(value, GraphVal):
            rep.add("WrongKind", path, f"expected graph, got {describe_kind(value)}")
            return
        ids = set()
        for node_id, payload in value.nodes:
            if node_id in ids:
                rep.add("WrongKind", path, f"duplicate graph node {node_id!r}")
            ids.add(node_id)
            if payload is not None:
                _check(payload, t.elem, f"{path}[{node_id}]", schema, rep)
        for frm, to, _label in value.edges:
            for end in (frm, to):
                if end not in ids:
                    rep.add("WrongKind", path, f"edge endpoint {end!r} is not a node")
        return
    if isinstance(t, AutomatonType):
        if not isinstance(value, AutomatonVal):
            rep.add("WrongKind", path, f"expected automaton, got {describe_kind(value)}")
            return
        states = set(value.states)
        if len(states) != len(value.states):
            rep.add("WrongKind", path, "duplicate automaton state")
        if value.start not in states:
            rep.add("WrongKind", path, f"start state {value.start!r} undeclared")
        for f in value.finals:
            if f not in states:
                rep.add("WrongKind", path, f"final state {f!r} undeclared")
        alphabet = set(value.alphabet)
        for frm, sym, to in value.transitions:
            if frm not in states or to not in states:
                rep.add("WrongKind", path, f"transition {frm!r}-{sym!r}->{to!r} leaves the state set")
            if sym not in alphabet:
                rep.add("WrongKind", path, f"transition symbol {sym!r} not in the alphabet")
        return
    raise TypeError(f"unknown type expression {t!r}")


def _check_tree(tree: TreeVal, t: TreeOf, path: str, schema: Schema, rep: ValidationReport):
    _check(tree.node, t.elem, _sub(path, "node"), schema, rep)
    for i, child in enumerate(tree.children):
        if not isinstance(child, TreeVal):
            rep.add("WrongKind", f"{path}[{i}]", "tree child must be a tree node")
        else:
            _check_tree(child, t, f"{path}[{i}]", schema, rep)
