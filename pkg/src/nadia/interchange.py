"""Canonical XML interchange for databases, dictionaries and the axie
dictionary.

The writer is deterministic down to the byte: attributes are alphabetical,
entries sort by lemma then id, axies by id, features follow the schema's
declaration order, indentation is two spaces, and text is minimally
escaped.  Exports exclude delayed articles unless asked otherwise; an axie
whose every acception was excluded is kept with a `provisional` marker so
its links survive the round trip.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .dls.ast import (
    AnyOf, AutomatonType, ClassRef, FeatureStructureType, GraphOf, ListOf,
    OneOf, SetOf, StringType, SymbolType, TreeOf, TypeExpr,
)
from .dls.schema import Schema
from .lexbase.model import (
    Axie, Entry, MonolingualAcception, SenseNode, Strength, Violation,
    id_sort_key,
)
from .values import (
    Atom, AutomatonVal, FS, GraphVal, ListVal, SetVal, Text, TreeVal, Value,
)


class FormatError(Exception):
    def __init__(self, path: str, detail: str):
        super().__init__(f"{path}: {detail}")
        self.path = path
        self.detail = detail


class ImportRejected(Exception):
    def __init__(self, violations: list[Violation]):
        super().__init__("import rejected: "
                         + "; ".join(f"{v.code} {v.subjects}" for v in violations))
        self.violations = violations


@dataclass
class Element:
    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    children: list["Element"] = field(default_factory=list)
    text: Optional[str] = None


@dataclass
class InterchangeDocument:
    kind: str  # dictionary | axies | bundle
    database_name: str
    schema_hash: str
    root: Element


def _esc_text(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _esc_attr(s: str) -> str:
    return _esc_text(s).replace('"', "&quot;")


def _write(el: Element, out: list[str], depth: int):
    pad = "  " * depth
    attrs = "".join(f' {k}="{_esc_attr(v)}"' for k, v in sorted(el.attrs.items()))
    if el.children:
        out.append(f"{pad}<{el.tag}{attrs}>\n")
        for child in el.children:
            _write(child, out, depth + 1)
        out.append(f"{pad}</{el.tag}>\n")
    elif el.text is not None:
        out.append(f"{pad}<{el.tag}{attrs}>{_esc_text(el.text)}</{el.tag}>\n")
    else:
        out.append(f"{pad}<{el.tag}{attrs}/>\n")


def canonical_bytes(doc: InterchangeDocument) -> bytes:
    out = ['<?xml version="1.0" encoding="UTF-8"?>\n']
    _write(doc.root, out, 0)
    return "".join(out).encode("utf-8")


# --- value encoding ---------------------------------------------------------

def _deref(t: TypeExpr, schema: Schema) -> TypeExpr:
    while isinstance(t, ClassRef):
        t = schema.class_named(t.name).body
    return t


def _feature_elements(features: FS, class_body: FeatureStructureType,
                      schema: Schema, path: str) -> list[Element]:
    out = []
    for name, ftype in class_body.features:
        value = features.get(name)
        if value is not None:
            out.append(_encode_feature(name, value, ftype, schema, f"{path}/{name}"))
    for name, _v in features.features:
        if class_body.feature(name) is None:
            raise FormatError(f"{path}/{name}", f"feature {name!r} is not declared")
    return out


def _encode_feature(name: str, value: Value, ftype: TypeExpr, schema: Schema,
                    path: str) -> Element:
    t = _deref(ftype, schema)
    el = _encode_value(value, t, schema, path)
    el.attrs["n"] = name
    return el


def _encode_value(value: Value, t: TypeExpr, schema: Schema, path: str) -> Element:
    t = _deref(t, schema)
    if isinstance(t, (StringType, SymbolType, OneOf)):
        if isinstance(value, Atom):
            return Element("f", text=value.symbol)
        if isinstance(value, Text):
            return Element("f", text=value.value)
        raise FormatError(path, "expected a scalar value")
    if isinstance(t, AnyOf):
        if not isinstance(value, SetVal):
            raise FormatError(path, "expected a set of symbols")
        return Element("set", children=[
            Element("item", text=i.symbol if isinstance(i, Atom) else str(i))
            for i in value.items])
    if isinstance(t, FeatureStructureType):
        if not isinstance(value, FS):
            raise FormatError(path, "expected a feature structure")
        return Element("fs", children=_feature_elements(value, t, schema, path))
    if isinstance(t, ListOf):
        if not isinstance(value, ListVal):
            raise FormatError(path, "expected a list")
        return Element("list", children=[
            _item(v, t.elem, schema, f"{path}[{i}]") for i, v in enumerate(value.items)])
    if isinstance(t, SetOf):
        if not isinstance(value, SetVal):
            raise FormatError(path, "expected a set")
        return Element("set", children=[
            _item(v, t.elem, schema, f"{path}[{i}]") for i, v in enumerate(value.items)])
    if isinstance(t, TreeOf):
        if not isinstance(value, TreeVal):
            raise FormatError(path, "expected a tree")
        return Element("tree", children=[_tree_node(value, t.elem, schema, path)])
    if isinstance(t, GraphOf):
        if not isinstance(value, GraphVal):
            raise FormatError(path, "expected a graph")
        children = []
        for node_id, payload in sorted(value.nodes, key=lambda n: n[0]):
            node = Element("node", attrs={"id": node_id})
            if payload is not None:
                node.children.append(_item(payload, t.elem, schema, f"{path}/{node_id}"))
            children.append(node)
        for frm, to, label in sorted(value.edges):
            children.append(Element("edge", attrs={"from": frm, "to": to, "label": label}))
        return Element("graph", children=children)
    if isinstance(t, AutomatonType):
        if not isinstance(value, AutomatonVal):
            raise FormatError(path, "expected an automaton")
        children = [Element("state", attrs={"id": s, "final": _b(s in value.finals)})
                    for s in sorted(value.states)]
        trans_syms = {sym for _f, sym, _t in value.transitions}
        children.extend(Element("sym", text=s)
                        for s in sorted(set(value.alphabet) - trans_syms))
        children.extend(Element("trans", attrs={"from": f, "sym": s, "to": to})
                        for f, s, to in sorted(value.transitions))
        return Element("automaton", attrs={"start": value.start}, children=children)
    raise FormatError(path, f"cannot encode against {t!r}")


def _item(value: Value, t: TypeExpr, schema: Schema, path: str) -> Element:
    t = _deref(t, schema)
    if isinstance(t, (StringType, SymbolType, OneOf)):
        scalar = value.symbol if isinstance(value, Atom) else (
            value.value if isinstance(value, Text) else None)
        if scalar is None:
            raise FormatError(path, "expected a scalar item")
        return Element("item", text=scalar)
    return Element("item", children=[_encode_value(value, t, schema, path)])


def _tree_node(tree: TreeVal, elem: TypeExpr, schema: Schema, path: str) -> Element:
    node = Element("node", children=[_item(tree.node, elem, schema, f"{path}/node")])
    for i, child in enumerate(tree.children):
        node.children.append(_tree_node(child, elem, schema, f"{path}[{i}]"))
    return node


def _b(flag: bool) -> str:
    return "true" if flag else "false"


# --- document building ------------------------------------------------------

def _entry_element(entry: Entry, state, schema: Schema,
                   include_delayed: bool) -> Optional[Element]:
    if entry.delayed and not include_delayed:
        return None
    info = schema.dictionary_for_language(entry.language)
    attrs = {"id": entry.id, "lemma": entry.lemma, "validated": _b(entry.validated)}
    if include_delayed and entry.delayed:
        attrs["delayed"] = "true"
    el = Element("entry", attrs=attrs)
    body = schema.class_named(info.entry_class).body
    el.children.extend(_feature_elements(entry.features, body, schema, entry.id))
    for child in entry.senses.children:
        sense = _sense_element(child, state, schema, info.acception_class,
                               include_delayed)
        if sense is not None:
            el.children.append(sense)
    return el


def _sense_element(node: SenseNode, state, schema: Schema, acc_class: str,
                   include_delayed: bool) -> Optional[Element]:
    if node.is_leaf():
        acc = state.acceptions[node.acception]
        if acc.delayed and not include_delayed:
            return None
        attrs = {"id": acc.id, "axie": acc.axie_ref, "name": acc.display_name}
        if include_delayed and acc.delayed:
            attrs["delayed"] = "true"
        acc_el = Element("acception", attrs=attrs)
        body = schema.class_named(acc_class).body
        acc_el.children.extend(_feature_elements(acc.features, body, schema, acc.id))
        return Element("sense", children=[acc_el])
    children = []
    for child in node.children:
        sense = _sense_element(child, state, schema, acc_class, include_delayed)
        if sense is not None:
            children.append(sense)
    if not children:
        return None
    return Element("sense", children=children)


def _dictionary_element(state, schema: Schema, language: str,
                        include_delayed: bool, attrs: dict[str, str]) -> Element:
    el = Element("dictionary", attrs=attrs)
    entries = [e for e in state.entries.values() if e.language == language]
    entries.sort(key=lambda e: (e.lemma, id_sort_key(e.id)))
    for entry in entries:
        entry_el = _entry_element(entry, state, schema, include_delayed)
        if entry_el is not None:
            el.children.append(entry_el)
    return el


def _exported_acceptions(state, include_delayed: bool) -> set[str]:
    out = set()
    for entry in state.entries.values():
        if entry.delayed and not include_delayed:
            continue
        for leaf in entry.senses.leaves():
            acc = state.acceptions[leaf]
            if acc.delayed and not include_delayed:
                continue
            out.add(acc.id)
    return out


def _axie_elements(state, include_delayed: bool) -> list[Element]:
    exported = _exported_acceptions(state, include_delayed)
    holds: dict[str, list[str]] = {}
    holds_exported: set[str] = set()
    for acc in state.acceptions.values():
        holds.setdefault(acc.axie_ref, []).append(acc.id)
        if acc.id in exported:
            holds_exported.add(acc.axie_ref)
    out = []
    for axie_id in sorted(state.axies, key=id_sort_key):
        axie = state.axies[axie_id]
        attrs = {"id": axie.id}
        if axie.mnemonic:
            attrs["name"] = axie.mnemonic
        if axie.provisional or (holds.get(axie.id) and axie.id not in holds_exported):
            attrs["provisional"] = "true"
        el = Element("axie", attrs=attrs)
        if axie.gloss:
            el.children.append(Element("gloss", text=axie.gloss))
        for tag in sorted(axie.tags):
            el.children.append(Element("tag", text=tag))
        for child, label in axie.sub_links:
            el.children.append(Element("sub", attrs={"ref": child, "label": label}))
        for quasi in sorted(axie.quasi_links, key=id_sort_key):
            el.children.append(Element("quasi", attrs={"ref": quasi}))
        out.append(el)
    return out


def dictionary_document(state, schema: Schema, language: str,
                        include_delayed: bool = False) -> InterchangeDocument:
    attrs = {"database": schema.database_name, "language": language,
             "schema-hash": schema.schema_hash()}
    root = _dictionary_element(state, schema, language, include_delayed, attrs)
    return InterchangeDocument("dictionary", schema.database_name,
                               schema.schema_hash(), root)


def axies_document(state, schema: Schema,
                   include_delayed: bool = False) -> InterchangeDocument:
    root = Element("axies", attrs={"database": schema.database_name,
                                   "schema-hash": schema.schema_hash()})
    root.children.extend(_axie_elements(state, include_delayed))
    return InterchangeDocument("axies", schema.database_name,
                               schema.schema_hash(), root)


def export_db(db, include_delayed: bool = False) -> InterchangeDocument:
    """Canonical single-document export of the whole database."""
    state, schema = db.state, db.schema
    root = Element("mldb", attrs={"name": schema.database_name,
                                  "schema-hash": schema.schema_hash()})
    for d in schema.dictionaries:
        root.children.append(_dictionary_element(
            state, schema, d.language, include_delayed, {"language": d.language}))
    axies = Element("axies")
    axies.children.extend(_axie_elements(state, include_delayed))
    root.children.append(axies)
    return InterchangeDocument("bundle", schema.database_name,
                               schema.schema_hash(), root)


# --- import -----------------------------------------------------------------

def _parse_xml(data: bytes, what: str) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        raise FormatError(what, f"not well-formed XML: {exc}") from exc


def _decode_feature_list(el: ET.Element, body: FeatureStructureType, schema: Schema,
                         path: str) -> FS:
    pairs = []
    seen = set()
    for child in el:
        if child.tag in ("sense", "acception", "gloss", "tag", "sub", "quasi"):
            continue
        name = child.attrib.get("n")
        if not name:
            raise FormatError(f"{path}/{child.tag}", "feature element misses n=")
        if name in seen:
            raise FormatError(f"{path}/{name}", "duplicate feature")
        ftype = body.feature(name)
        if ftype is None:
            raise FormatError(f"{path}/{name}", f"feature {name!r} is not declared")
        seen.add(name)
        pairs.append((name, _decode_value(child, ftype, schema, f"{path}/{name}")))
    return FS(tuple(pairs))


def _decode_value(el: ET.Element, t: TypeExpr, schema: Schema, path: str) -> Value:
    t = _deref(t, schema)
    if isinstance(t, (SymbolType, OneOf)):
        return Atom((el.text or "").strip())
    if isinstance(t, StringType):
        return Text(el.text or "")
    if isinstance(t, AnyOf):
        return SetVal(tuple(Atom((i.text or "").strip())
                            for i in el if i.tag == "item"))
    if isinstance(t, FeatureStructureType):
        return _decode_feature_list(el, t, schema, path)
    if isinstance(t, (ListOf, SetOf)):
        items = tuple(_decode_item(i, t.elem, schema, f"{path}[{n}]")
                      for n, i in enumerate(el) if i.tag == "item")
        return ListVal(items) if isinstance(t, ListOf) else SetVal(items)
    if isinstance(t, TreeOf):
        nodes = [c for c in el if c.tag == "node"]
        if len(nodes) != 1:
            raise FormatError(path, "tree needs exactly one root node")
        return _decode_tree(nodes[0], t.elem, schema, path)
    if isinstance(t, GraphOf):
        nodes, edges = [], []
        for c in el:
            if c.tag == "node":
                payload = None
                items = [i for i in c if i.tag == "item"]
                if items:
                    payload = _decode_item(items[0], t.elem, schema, path)
                nodes.append((c.attrib.get("id", ""), payload))
            elif c.tag == "edge":
                edges.append((c.attrib.get("from", ""), c.attrib.get("to", ""),
                              c.attrib.get("label", "")))
        return GraphVal(tuple(nodes), tuple(edges))
    if isinstance(t, AutomatonType):
        states, finals, syms, trans = [], [], [], []
        for c in el:
            if c.tag == "state":
                states.append(c.attrib.get("id", ""))
                if c.attrib.get("final") == "true":
                    finals.append(c.attrib.get("id", ""))
            elif c.tag == "sym":
                syms.append((c.text or "").strip())
            elif c.tag == "trans":
                trans.append((c.attrib.get("from", ""), c.attrib.get("sym", ""),
                              c.attrib.get("to", "")))
        alphabet = tuple(sorted(set(syms) | {s for _f, s, _t in trans}))
        return AutomatonVal(tuple(states), alphabet, tuple(trans),
                            el.attrib.get("start", ""), tuple(finals))
    raise FormatError(path, f"cannot decode against {t!r}")


def _decode_item(el: ET.Element, t: TypeExpr, schema: Schema, path: str) -> Value:
    t = _deref(t, schema)
    if isinstance(t, (SymbolType, OneOf)):
        return Atom((el.text or "").strip())
    if isinstance(t, StringType):
        return Text(el.text or "")
    inner = list(el)
    if len(inner) != 1:
        raise FormatError(path, "item must wrap exactly one structured value")
    return _decode_value(inner[0], t, schema, path)


def _decode_tree(el: ET.Element, elem: TypeExpr, schema: Schema, path: str) -> TreeVal:
    items = [i for i in el if i.tag == "item"]
    if len(items) != 1:
        raise FormatError(path, "tree node needs exactly one payload item")
    payload = _decode_item(items[0], elem, schema, f"{path}/node")
    children = tuple(_decode_tree(c, elem, schema, f"{path}/node")
                     for c in el if c.tag == "node")
    return TreeVal(payload, children)


def _decode_sense(el: ET.Element, state, schema: Schema, language: str,
                  acc_class: str, path: str) -> SenseNode:
    accs = [c for c in el if c.tag == "acception"]
    senses = [c for c in el if c.tag == "sense"]
    if accs and senses:
        raise FormatError(path, "sense mixes an acception with sub-senses")
    if len(accs) > 1:
        raise FormatError(path, "sense holds more than one acception")
    if accs:
        acc_el = accs[0]
        acc_id = acc_el.attrib.get("id", "")
        if not acc_id:
            raise FormatError(f"{path}/acception", "acception misses id=")
        if acc_id in state.acceptions:
            raise FormatError(f"{path}/acception", f"duplicate acception id {acc_id}")
        body = schema.class_named(acc_class).body
        features = _decode_feature_list(acc_el, body, schema, f"{path}/{acc_id}")
        state.acceptions[acc_id] = MonolingualAcception(
            acc_id, language, acc_el.attrib.get("name", acc_id), features,
            acc_el.attrib.get("axie", ""),
            delayed=acc_el.attrib.get("delayed") == "true")
        return SenseNode(acception=acc_id)
    node = SenseNode()
    for i, sense in enumerate(senses):
        node.children.append(_decode_sense(sense, state, schema, language,
                                           acc_class, f"{path}/sense[{i}]"))
    return node


def _decode_dictionary(el: ET.Element, state, schema: Schema, language: str):
    info = schema.dictionary_for_language(language)
    if info is None:
        raise FormatError("dictionary", f"language {language!r} is not declared")
    body = schema.class_named(info.entry_class).body
    for entry_el in el:
        if entry_el.tag != "entry":
            raise FormatError("dictionary", f"unexpected element {entry_el.tag!r}")
        entry_id = entry_el.attrib.get("id", "")
        if not entry_id:
            raise FormatError("entry", "entry misses id=")
        if entry_id in state.entries:
            raise FormatError(entry_id, "duplicate entry id")
        features = _decode_feature_list(entry_el, body, schema, entry_id)
        entry = Entry(entry_id, info.language, entry_el.attrib.get("lemma", ""),
                      features,
                      validated=entry_el.attrib.get("validated") == "true",
                      delayed=entry_el.attrib.get("delayed") == "true")
        for i, sense in enumerate(c for c in entry_el if c.tag == "sense"):
            entry.senses.children.append(_decode_sense(
                sense, state, schema, info.language, info.acception_class,
                f"{entry_id}/sense[{i}]"))
        state.entries[entry_id] = entry


def _decode_axies(el: ET.Element, state):
    for axie_el in el:
        if axie_el.tag != "axie":
            raise FormatError("axies", f"unexpected element {axie_el.tag!r}")
        axie_id = axie_el.attrib.get("id", "")
        if not axie_id:
            raise FormatError("axie", "axie misses id=")
        if axie_id in state.axies:
            raise FormatError(axie_id, "duplicate axie id")
        axie = Axie(axie_id, mnemonic=axie_el.attrib.get("name", ""),
                    provisional=axie_el.attrib.get("provisional") == "true")
        for c in axie_el:
            if c.tag == "gloss":
                axie.gloss = c.text or ""
            elif c.tag == "tag":
                axie.tags.add((c.text or "").strip())
            elif c.tag == "sub":
                axie.sub_links.append((c.attrib.get("ref", ""),
                                       c.attrib.get("label", "")))
            elif c.tag == "quasi":
                axie.quasi_links.add(c.attrib.get("ref", ""))
            else:
                raise FormatError(axie_id, f"unexpected element {c.tag!r}")
        state.axies[axie_id] = axie
    for axie in state.axies.values():
        for child, _label in axie.sub_links:
            if child not in state.axies:
                raise FormatError(axie.id, f"sub-acception ref {child!r} undeclared")
        for quasi in axie.quasi_links:
            if quasi not in state.axies:
                raise FormatError(axie.id, f"quasi ref {quasi!r} undeclared")


def _derive_counters(state):
    counters: dict[str, int] = {}
    for ident in (*state.entries, *state.acceptions, *state.axies):
        prefix, _sep, tail = ident.rpartition(":")
        if prefix and tail.isdigit():
            counters[prefix] = max(counters.get(prefix, 0), int(tail))
    state.counters = counters


def _check_document_header(attrs: dict[str, str], schema: Schema, name_key: str,
                           what: str):
    name = attrs.get(name_key, "")
    if name != schema.database_name:
        raise FormatError(what, f"database {name!r} does not match "
                                f"{schema.database_name!r}")
    found_hash = attrs.get("schema-hash", "")
    if found_hash != schema.schema_hash():
        raise FormatError(what, f"schema hash {found_hash!r} does not match "
                                f"{schema.schema_hash()!r}")


def import_db(data: bytes | InterchangeDocument, schema: Schema,
              mode: str = "strict", rules: Sequence = ()):
    """Load a bundle document into a fresh in-memory database.

    Strict mode re-checks well-formedness, feature validity and critical
    rules, raising ImportRejected on any critical violation; raw mode loads
    the graph as-is so it can be repaired via check_wellformed.
    """
    from .lexbase.store import Database, DbState

    if isinstance(data, InterchangeDocument):
        data = canonical_bytes(data)
    root = _parse_xml(data, "mldb")
    if root.tag != "mldb":
        raise FormatError("/", f"expected <mldb>, found <{root.tag}>")
    _check_document_header(root.attrib, schema, "name", "mldb")

    state = DbState()
    for section in root:
        if section.tag == "dictionary":
            _decode_dictionary(section, state, schema,
                               section.attrib.get("language", ""))
        elif section.tag == "axies":
            _decode_axies(section, state)
        else:
            raise FormatError("mldb", f"unexpected element {section.tag!r}")
    _derive_counters(state)

    db = Database(schema, rules=rules)
    db._state = state
    if mode == "strict":
        violations = _strict_check(db)
        if violations:
            raise ImportRejected(violations)
    return db


def _strict_check(db) -> list[Violation]:
    from .dls.validate import validate_value

    violations = [v for v in db.check_all() if v.strength == Strength.CRITICAL]
    state, schema = db.state, db.schema
    for acc in state.acceptions.values():
        info = schema.dictionary_for_language(acc.language)
        report = validate_value(acc.features, info.acception_class, schema)
        violations.extend(Violation("Validation", Strength.CRITICAL, (acc.id,),
                                    str(f)) for f in report.faults)
    for entry in state.entries.values():
        info = schema.dictionary_for_language(entry.language)
        report = validate_value(entry.features, info.entry_class, schema)
        violations.extend(Violation("Validation", Strength.CRITICAL, (entry.id,),
                                    str(f)) for f in report.faults)
    return violations


def load_state_from_directory(location: Path, schema: Schema):
    """Rebuild a state from the per-dictionary files and axies.xml."""
    from .lexbase.store import DbState

    state = DbState()
    for d in schema.dictionaries:
        path = location / f"{d.language}.dict.xml"
        if not path.exists():
            raise FormatError(str(path), "missing dictionary file")
        root = _parse_xml(path.read_bytes(), str(path))
        if root.tag != "dictionary":
            raise FormatError(str(path), f"expected <dictionary>, found <{root.tag}>")
        _check_document_header(root.attrib, schema, "database", str(path))
        _decode_dictionary(root, state, schema, root.attrib.get("language", ""))
    axies_path = location / "axies.xml"
    if not axies_path.exists():
        raise FormatError(str(axies_path), "missing axies file")
    root = _parse_xml(axies_path.read_bytes(), str(axies_path))
    if root.tag != "axies":
        raise FormatError(str(axies_path), f"expected <axies>, found <{root.tag}>")
    _check_document_header(root.attrib, schema, "database", str(axies_path))
    _decode_axies(root, state)
    _derive_counters(state)
    return state
