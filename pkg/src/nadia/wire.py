"""JSON wire encodings shared by the HTTP service and the CLI.

Feature values: a JSON string is a text value; everything else is a
one-key tagged object ({"sym": …}, {"fs": …}, {"set": …}, {"list": …},
{"tree": …}, {"graph": …}, {"automaton": …}).
"""

from __future__ import annotations

from typing import Any

from .dls.ast import (
    AnyOf, AutomatonType, ClassRef, FeatureStructureType, GraphOf, ListOf,
    OneOf, SetOf, StringType, SymbolType, TreeOf, TypeExpr,
)
from .dls.schema import Schema
from .lexbase.model import (
    AddAcception, AddQuasiSynonym, CreateEntry, DeleteAcception, DeleteEntry,
    Entry, LinkToAxie, LinkTranslation, MakeSubAcception, Mutation, SenseNode,
    Transaction, UpdateAcceptionFeatures, UpdateAxie, UpdateEntryFeatures,
    ValidateEntry, Violation,
)
from .lexbase.store import Database, TranslationResult
from .values import (
    Atom, AutomatonVal, FS, GraphVal, ListVal, SetVal, Text, TreeVal, Value,
)


class WireError(ValueError):
    pass


# --- feature values -----------------------------------------------------

def value_to_json(v: Value) -> Any:
    if isinstance(v, Text):
        return v.value
    if isinstance(v, Atom):
        return {"sym": v.symbol}
    if isinstance(v, FS):
        return {"fs": {name: value_to_json(fv) for name, fv in v.features}}
    if isinstance(v, ListVal):
        return {"list": [value_to_json(i) for i in v.items]}
    if isinstance(v, SetVal):
        return {"set": [value_to_json(i) for i in v.items]}
    if isinstance(v, TreeVal):
        return {"tree": _tree_to_json(v)}
    if isinstance(v, GraphVal):
        return {"graph": {
            "nodes": [{"id": nid, "value": value_to_json(p) if p is not None else None}
                      for nid, p in v.nodes],
            "edges": [{"from": f, "to": t, "label": l} for f, t, l in v.edges],
        }}
    if isinstance(v, AutomatonVal):
        return {"automaton": {
            "states": list(v.states), "alphabet": list(v.alphabet),
            "transitions": [list(t) for t in v.transitions],
            "start": v.start, "finals": list(v.finals),
        }}
    raise WireError(f"unencodable value {v!r}")


def _tree_to_json(t: TreeVal) -> dict:
    return {"node": value_to_json(t.node),
            "children": [_tree_to_json(c) for c in t.children]}


def value_from_json(obj: Any) -> Value:
    if isinstance(obj, str):
        return Text(obj)
    if not isinstance(obj, dict) or len(obj) != 1:
        raise WireError(f"bad value encoding: {obj!r}")
    (tag, payload), = obj.items()
    if tag == "sym":
        return Atom(str(payload))
    if tag == "fs":
        return FS(tuple((name, value_from_json(v)) for name, v in payload.items()))
    if tag == "list":
        return ListVal(tuple(value_from_json(i) for i in payload))
    if tag == "set":
        return SetVal(tuple(value_from_json(i) for i in payload))
    if tag == "tree":
        return _tree_from_json(payload)
    if tag == "graph":
        return GraphVal(
            tuple((n["id"], value_from_json(n["value"]) if n.get("value") is not None
                   else None) for n in payload.get("nodes", [])),
            tuple((e["from"], e["to"], e.get("label", ""))
                  for e in payload.get("edges", [])))
    if tag == "automaton":
        return AutomatonVal(
            tuple(payload.get("states", [])), tuple(payload.get("alphabet", [])),
            tuple(tuple(t) for t in payload.get("transitions", [])),
            payload.get("start", ""), tuple(payload.get("finals", [])))
    raise WireError(f"unknown value tag {tag!r}")


def _tree_from_json(obj: dict) -> TreeVal:
    return TreeVal(value_from_json(obj["node"]),
                   tuple(_tree_from_json(c) for c in obj.get("children", [])))


def features_from_json(obj: Any) -> FS:
    if obj is None:
        return FS(())
    v = value_from_json(obj if isinstance(obj, dict) and "fs" in obj else {"fs": obj})
    if not isinstance(v, FS):
        raise WireError("features must be a feature structure")
    return v


# --- schema types -------------------------------------------------------

def type_to_json(t: TypeExpr) -> dict:
    if isinstance(t, StringType):
        return {"kind": "string"}
    if isinstance(t, SymbolType):
        return {"kind": "symbol"}
    if isinstance(t, AutomatonType):
        return {"kind": "automaton"}
    if isinstance(t, OneOf):
        return {"kind": "one-of", "symbols": list(t.symbols)}
    if isinstance(t, AnyOf):
        return {"kind": "any-of", "symbols": list(t.symbols)}
    if isinstance(t, ClassRef):
        return {"kind": "class", "name": t.name}
    if isinstance(t, FeatureStructureType):
        return {"kind": "fs", "features": [
            {"name": n, "type": type_to_json(ft)} for n, ft in t.features]}
    for cls, kind in ((ListOf, "list-of"), (SetOf, "set-of"),
                      (TreeOf, "tree-of"), (GraphOf, "graph-of")):
        if isinstance(t, cls):
            return {"kind": kind, "elem": type_to_json(t.elem)}
    raise WireError(f"unencodable type {t!r}")


def schema_to_json(schema: Schema) -> dict:
    return {
        "database": schema.database_name,
        "schemaHash": schema.schema_hash(),
        "dictionaries": [
            {
                "name": d.name,
                "language": d.language,
                "languageLabel": d.language_label,
                "entryClass": d.entry_class,
                "acceptionClass": d.acception_class,
            }
            for d in schema.dictionaries
        ],
        "classes": {name: type_to_json(rc.body)
                    for name, rc in sorted(schema.classes.items())},
    }


# --- views ----------------------------------------------------------------

def violation_to_json(v: Violation) -> dict:
    return {
        "code": v.code,
        "strength": v.strength.label,
        "subjects": list(v.subjects),
        "message": v.message,
        "suggestedFix": v.suggested_fix,
    }


def transaction_to_json(t: Transaction) -> dict:
    return {
        "seq": t.seq,
        "outcome": t.outcome,
        "violations": [violation_to_json(v) for v in t.violations],
        "results": list(t.results),
        "events": [list(e) for e in t.events],
    }


def _sense_to_json(node: SenseNode, db: Database) -> dict:
    if node.acception is not None:
        acc = db.state.acceptions[node.acception]
        return {"acception": {
            "id": acc.id,
            "displayName": acc.display_name,
            "axie": acc.axie_ref,
            "delayed": acc.delayed,
            "features": value_to_json(acc.features),
        }}
    return {"senses": [_sense_to_json(c, db) for c in node.children]}


def entry_to_json(entry: Entry, db: Database) -> dict:
    return {
        "id": entry.id,
        "language": entry.language,
        "lemma": entry.lemma,
        "validated": entry.validated,
        "delayed": entry.delayed,
        "features": value_to_json(entry.features),
        "senses": [_sense_to_json(c, db) for c in entry.senses.children],
    }


def translation_to_json(r: TranslationResult) -> dict:
    return {
        "lemma": r.lemma,
        "from": r.source_language,
        "to": r.target_language,
        "acceptions": [
            {
                "acception": a.acception_id,
                "displayName": a.display_name,
                "axie": a.axie_id,
                "untranslatable": a.untranslatable,
                "hits": [
                    {
                        "kind": h.kind,
                        "path": list(h.path),
                        "acceptionId": h.acception_id,
                        "displayName": h.display_name,
                        "entryId": h.entry_id,
                        "lemma": h.lemma,
                        "delayed": h.delayed,
                    }
                    for h in a.hits
                ],
            }
            for a in r.acceptions
        ],
    }


# --- mutations --------------------------------------------------------------

def mutation_from_json(obj: dict) -> Mutation:
    if not isinstance(obj, dict) or "op" not in obj:
        raise WireError("mutation needs an op field")
    op = obj["op"]

    def need(key: str) -> Any:
        if key not in obj:
            raise WireError(f"{op} needs {key!r}")
        return obj[key]

    if op == "createEntry":
        return CreateEntry(need("language"), need("lemma"),
                           features_from_json(obj.get("features")))
    if op == "addAcception":
        return AddAcception(need("entry"), tuple(obj.get("sensePath", [])),
                            features_from_json(obj.get("features")),
                            obj.get("displayName", ""))
    if op == "updateEntryFeatures":
        return UpdateEntryFeatures(need("entry"), features_from_json(need("features")))
    if op == "updateAcceptionFeatures":
        return UpdateAcceptionFeatures(need("acception"),
                                       features_from_json(need("features")))
    if op == "deleteEntry":
        return DeleteEntry(need("entry"))
    if op == "deleteAcception":
        return DeleteAcception(need("acception"))
    if op == "linkTranslation":
        return LinkTranslation(need("a"), need("b"))
    if op == "linkToAxie":
        return LinkToAxie(need("acception"), need("axie"))
    if op == "makeSubAcception":
        return MakeSubAcception(need("parentAxie"), need("label"),
                                obj.get("gloss", ""), tuple(obj.get("tags", [])),
                                obj.get("mnemonic", ""),
                                obj.get("existingAxie", ""))
    if op == "addQuasiSynonym":
        return AddQuasiSynonym(need("a"), need("b"))
    if op == "updateAxie":
        tags = obj.get("tags")
        return UpdateAxie(need("axie"), obj.get("mnemonic"), obj.get("gloss"),
                          tuple(tags) if tags is not None else None)
    if op == "validateEntry":
        return ValidateEntry(need("entry"))
    raise WireError(f"unknown mutation op {op!r}")
