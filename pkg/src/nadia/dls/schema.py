"""Schema resolution: class inheritance, reference checking, dictionaries.

A resolved schema is immutable and safe to share across threads.  The two
predefined classes `entry` and `acception` carry empty feature structures;
user classes extend them by single inheritance, and a child's feature list
is its parent's followed by its own.
"""

from __future__ import annotations

import hashlib
import unicodedata
from dataclasses import dataclass
from typing import Optional

from .ast import (
    ClassDecl, ClassRef, DatabaseDecl, Decl, FeatureStructureType, GraphOf,
    ListOf, SetOf, TreeOf, TypeExpr,
)
from .printer import print_type, quote_string

PREDEFINED = ("entry", "acception")

_EMPTY_FS = FeatureStructureType(())


class SchemaError(Exception):
    pass


class UnknownClass(SchemaError):
    def __init__(self, name: str):
        super().__init__(f"unknown class {name!r}")
        self.name = name


class DuplicateClass(SchemaError):
    def __init__(self, name: str):
        super().__init__(f"class {name!r} declared more than once")
        self.name = name


class DuplicateFeature(SchemaError):
    def __init__(self, class_name: str, feature: str):
        super().__init__(f"class {class_name!r} redeclares feature {feature!r}")
        self.class_name = class_name
        self.feature = feature


class MissingPredefinedParent(SchemaError):
    def __init__(self, class_name: str, expected: str):
        super().__init__(f"class {class_name!r} does not inherit {expected!r}")
        self.class_name = class_name
        self.expected = expected


class IllegalRecursion(SchemaError):
    def __init__(self, class_path: list[str]):
        super().__init__("illegal recursive containment: " + " -> ".join(class_path))
        self.class_path = class_path


def norm_language(lang: str) -> str:
    return unicodedata.normalize("NFC", lang).lower()


@dataclass(frozen=True)
class DictionaryInfo:
    name: str
    language: str        # normalized lookup key
    language_label: str  # as declared
    owner: str
    comment: str
    entry_class: str
    acception_class: str


@dataclass(frozen=True)
class ResolvedClass:
    name: str
    parent: Optional[str]
    declared_body: TypeExpr
    body: TypeExpr  # feature structures flattened through the parent chain


class Schema:
    def __init__(self, database_name: str, owner: str, comment: str,
                 dictionaries: tuple[DictionaryInfo, ...],
                 classes: dict[str, ResolvedClass]):
        self.database_name = database_name
        self.owner = owner
        self.comment = comment
        self.dictionaries = dictionaries
        self.classes = classes
        self._by_language = {d.language: d for d in dictionaries}
        self._by_name = {d.name: d for d in dictionaries}

    def class_named(self, name: str) -> ResolvedClass:
        try:
            return self.classes[name]
        except KeyError:
            raise UnknownClass(name) from None

    def has_class(self, name: str) -> bool:
        return name in self.classes

    def dictionary_for_language(self, language: str) -> Optional[DictionaryInfo]:
        return self._by_language.get(norm_language(language))

    def dictionary_named(self, name: str) -> Optional[DictionaryInfo]:
        return self._by_name.get(name)

    def languages(self) -> list[str]:
        return [d.language for d in self.dictionaries]

    def is_subclass(self, child: str, ancestor: str) -> bool:
        cur: Optional[str] = child
        while cur is not None:
            if cur == ancestor:
                return True
            cur = self.classes[cur].parent if cur in self.classes else None
        return False

    def article_class(self, language: str, what: str) -> str:
        d = self._by_language[norm_language(language)]
        return d.entry_class if what == "entry" else d.acception_class

    def canonical_text(self) -> str:
        lines = [f"(database {self.database_name} :owner {quote_string(self.owner)})"]
        for d in self.dictionaries:
            lines.append(
                f"(dictionary {d.name} :language {quote_string(d.language)} "
                f":entry '{d.entry_class} :acception '{d.acception_class})")
        for name in sorted(self.classes):
            c = self.classes[name]
            parent = c.parent or ""
            lines.append(f"(class {name} ({parent}) {print_type(c.body)})")
        return "\n".join(lines) + "\n"

    def schema_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()[:16]


def resolve_schema(decls: list[Decl]) -> Schema:
    """Resolve declarations into a schema; raises SchemaError subclasses."""
    databases = [d for d in decls if isinstance(d, DatabaseDecl)]
    if len(databases) != 1:
        raise SchemaError(f"expected exactly one define-database, found {len(databases)}")
    db = databases[0]

    class_decls: dict[str, ClassDecl] = {}
    for d in decls:
        if isinstance(d, ClassDecl):
            if d.name in class_decls or d.name in PREDEFINED:
                raise DuplicateClass(d.name)
            class_decls[d.name] = d

    resolved: dict[str, ResolvedClass] = {
        name: ResolvedClass(name, None, _EMPTY_FS, _EMPTY_FS) for name in PREDEFINED
    }

    resolving: list[str] = []

    def resolve(name: str) -> ResolvedClass:
        if name in resolved:
            return resolved[name]
        if name not in class_decls:
            raise UnknownClass(name)
        if name in resolving:
            raise IllegalRecursion(resolving[resolving.index(name):] + [name])
        decl = class_decls[name]
        if len(decl.parents) > 1:
            raise SchemaError(f"class {decl.name!r} declares multiple parents; "
                              "single inheritance only")
        resolving.append(name)
        try:
            parent_name = decl.parents[0] if decl.parents else None
            body = decl.body
            if parent_name is not None:
                parent = resolve(parent_name)
                if not isinstance(parent.body, FeatureStructureType) or \
                        not isinstance(body, FeatureStructureType):
                    raise SchemaError(
                        f"class {name!r} and its parent must both be feature structures")
                merged = list(parent.body.features)
                names = {n for n, _ in merged}
                for fname, ftype in body.features:
                    if fname in names:
                        raise DuplicateFeature(name, fname)
                    merged.append((fname, ftype))
                body = FeatureStructureType(tuple(merged))
            rc = ResolvedClass(name, parent_name, decl.body, body)
            resolved[name] = rc
            return rc
        finally:
            resolving.pop()

    for name in class_decls:
        resolve(name)

    # every class reference must resolve, wherever it occurs
    for rc in resolved.values():
        for ref in _all_refs(rc.body):
            if ref not in resolved:
                raise UnknownClass(ref)

    _check_containment(resolved)

    dictionaries = []
    seen_names, seen_langs = set(), set()
    for dd in db.dictionaries:
        if dd.name in seen_names:
            raise SchemaError(f"duplicate dictionary name {dd.name!r}")
        lang = norm_language(dd.language)
        if lang in seen_langs:
            raise SchemaError(f"duplicate dictionary language {dd.language!r}")
        seen_names.add(dd.name)
        seen_langs.add(lang)
        for cls_name, root in ((dd.entry_class, "entry"), (dd.acception_class, "acception")):
            if cls_name not in resolved:
                raise UnknownClass(cls_name)
            if not _inherits(resolved, cls_name, root):
                raise MissingPredefinedParent(cls_name, root)
        dictionaries.append(DictionaryInfo(
            name=dd.name, language=lang, language_label=dd.language,
            owner=dd.owner, comment=dd.comment,
            entry_class=dd.entry_class, acception_class=dd.acception_class))

    return Schema(db.name, db.owner, db.comment, tuple(dictionaries), resolved)


def _inherits(classes: dict[str, ResolvedClass], name: str, ancestor: str) -> bool:
    cur: Optional[str] = name
    while cur is not None:
        if cur == ancestor:
            return True
        cur = classes[cur].parent
    return False


def _all_refs(t: TypeExpr) -> list[str]:
    if isinstance(t, ClassRef):
        return [t.name]
    if isinstance(t, FeatureStructureType):
        return [r for _, ft in t.features for r in _all_refs(ft)]
    if isinstance(t, (ListOf, SetOf, TreeOf, GraphOf)):
        return _all_refs(t.elem)
    return []


def _direct_refs(t: TypeExpr) -> list[str]:
    """Refs that force containment; collections break the expansion."""
    if isinstance(t, ClassRef):
        return [t.name]
    if isinstance(t, FeatureStructureType):
        return [r for _, ft in t.features for r in _direct_refs(ft)]
    return []


def _check_containment(classes: dict[str, ResolvedClass]) -> None:
    graph = {name: _direct_refs(rc.body) for name, rc in classes.items()}
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(name: str, stack: list[str]):
        state[name] = 1
        stack.append(name)
        for ref in graph[name]:
            if state.get(ref) == 1:
                raise IllegalRecursion(stack[stack.index(ref):] + [ref])
            if state.get(ref) != 2:
                visit(ref, stack)
        stack.pop()
        state[name] = 2

    for name in sorted(graph):
        if state.get(name) != 2:
            visit(name, [])
