"""Runtime values for linguistic feature structures.

A value is one of: an atom (interned symbol), a text string, a feature
structure (named features, all optional), an ordered list, a set, a tree,
a labeled graph, or a finite-state acceptor.  Absence of a feature is the
canonical "empty" state; there is no null value.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

Value = Union[
    "Atom", "Text", "FS", "ListVal", "SetVal", "TreeVal", "GraphVal", "AutomatonVal"
]


def norm_symbol(name: str) -> str:
    """Symbols are case-insensitive and stored lowercased, NFC."""
    return unicodedata.normalize("NFC", name).lower()


def norm_text(s: str) -> str:
    return unicodedata.normalize("NFC", s)


@dataclass(frozen=True)
class Atom:
    symbol: str

    def __post_init__(self):
        object.__setattr__(self, "symbol", norm_symbol(self.symbol))


@dataclass(frozen=True)
class Text:
    value: str

    def __post_init__(self):
        object.__setattr__(self, "value", norm_text(self.value))


@dataclass(frozen=True)
class FS:
    features: tuple[tuple[str, Value], ...]

    def __post_init__(self):
        seen = set()
        for name, _ in self.features:
            if name in seen:
                raise ValueError(f"duplicate feature {name!r}")
            seen.add(name)

    def get(self, name: str) -> Optional[Value]:
        for n, v in self.features:
            if n == name:
                return v
        return None

    def names(self) -> list[str]:
        return [n for n, _ in self.features]

    def with_feature(self, name: str, value: Value) -> "FS":
        if self.get(name) is not None:
            return FS(tuple((n, value if n == name else v) for n, v in self.features))
        return FS(self.features + ((name, value),))

    def __eq__(self, other):
        # feature order is presentational; equality is by mapping
        if not isinstance(other, FS):
            return NotImplemented
        return dict(self.features) == dict(other.features)

    def __hash__(self):
        return hash(frozenset(self.features))


@dataclass(frozen=True)
class ListVal:
    items: tuple[Value, ...]


@dataclass(frozen=True)
class SetVal:
    items: tuple[Value, ...]

    def __post_init__(self):
        # canonical member order, duplicates collapsed
        uniq: list[Value] = []
        for it in self.items:
            if it not in uniq:
                uniq.append(it)
        uniq.sort(key=value_sort_key)
        object.__setattr__(self, "items", tuple(uniq))


@dataclass(frozen=True)
class TreeVal:
    node: Value
    children: tuple["TreeVal", ...] = ()


@dataclass(frozen=True)
class GraphVal:
    nodes: tuple[tuple[str, Optional[Value]], ...]
    edges: tuple[tuple[str, str, str], ...]  # (from, to, label)


@dataclass(frozen=True)
class AutomatonVal:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    transitions: tuple[tuple[str, str, str], ...]  # (from, symbol, to)
    start: str
    finals: tuple[str, ...]


def fs(mapping: Mapping[str, Value] | Iterable[tuple[str, Value]] = ()) -> FS:
    items = mapping.items() if isinstance(mapping, Mapping) else mapping
    return FS(tuple(items))


def atom(symbol: str) -> Atom:
    return Atom(symbol)


def text(s: str) -> Text:
    return Text(s)


def setv(*symbols: str) -> SetVal:
    return SetVal(tuple(Atom(s) for s in symbols))


def value_sort_key(v: Value) -> str:
    """Total order used to canonicalize set members."""
    if isinstance(v, Atom):
        return "a:" + v.symbol
    if isinstance(v, Text):
        return "t:" + v.value
    return "z:" + repr(v)


def describe_kind(v: Value) -> str:
    return {
        Atom: "symbol",
        Text: "string",
        FS: "feature structure",
        ListVal: "list",
        SetVal: "set",
        TreeVal: "tree",
        GraphVal: "graph",
        AutomatonVal: "automaton",
    }[type(v)]
