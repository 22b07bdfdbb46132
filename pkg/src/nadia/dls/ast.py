"""Declaration and expression trees produced by the DLS parser.

Source positions are carried for diagnostics but excluded from equality,
so that a reparse of a canonical reprint compares equal to the original.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

from ..values import Value


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


NOPOS = Pos(0, 0)


def _pos_field():
    return field(default=NOPOS, compare=False, repr=False)


# --- type expressions -------------------------------------------------------

@dataclass(frozen=True)
class StringType:
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SymbolType:
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class OneOf:
    symbols: tuple[str, ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class AnyOf:
    symbols: tuple[str, ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class ClassRef:
    name: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class FeatureStructureType:
    features: tuple[tuple[str, "TypeExpr"], ...]
    pos: Pos = _pos_field()

    def feature(self, name: str) -> Optional["TypeExpr"]:
        for n, t in self.features:
            if n == name:
                return t
        return None


@dataclass(frozen=True)
class ListOf:
    elem: "TypeExpr"
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SetOf:
    elem: "TypeExpr"
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class TreeOf:
    elem: "TypeExpr"
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class GraphOf:
    elem: "TypeExpr"
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class AutomatonType:
    pos: Pos = _pos_field()


TypeExpr = Union[
    StringType, SymbolType, OneOf, AnyOf, ClassRef, FeatureStructureType,
    ListOf, SetOf, TreeOf, GraphOf, AutomatonType,
]


# --- rule expressions -------------------------------------------------------

@dataclass(frozen=True)
class And:
    args: tuple["RuleExpr", ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Or:
    args: tuple["RuleExpr", ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Not:
    arg: "RuleExpr"
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Cond:
    branches: tuple[tuple["RuleExpr", "RuleExpr"], ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Equal:
    a: "RuleExpr"
    b: "RuleExpr"
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class IsOneOf:
    arg: "RuleExpr"
    symbols: tuple[str, ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class EmptyP:
    path: "FieldAccess"
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class FieldAccess:
    var: str
    features: tuple[str, ...]  # outermost access last
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SymbolConst:
    symbol: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class StringConst:
    value: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class TrueConst:
    pos: Pos = _pos_field()


RuleExpr = Union[
    And, Or, Not, Cond, Equal, IsOneOf, EmptyP, FieldAccess,
    SymbolConst, StringConst, TrueConst,
]


# --- declarations -----------------------------------------------------------

class Kind(enum.Enum):
    INTEGRITY = "integrity"
    LOCAL = "local"
    GLOBAL = "global"


@dataclass(frozen=True)
class DictionaryDecl:
    name: str
    language: str
    owner: str = ""
    comment: str = ""
    entry_class: str = ""
    acception_class: str = ""
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class DatabaseDecl:
    name: str
    owner: str = ""
    comment: str = ""
    dictionaries: tuple[DictionaryDecl, ...] = ()
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class ClassDecl:
    name: str
    parents: tuple[str, ...]
    body: TypeExpr
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class RuleParam:
    var: str
    class_name: str
    dictionary: str = "*"


@dataclass(frozen=True)
class RuleDecl:
    name: str
    kind: Kind
    strength: str  # warning | delay | critical
    params: tuple[RuleParam, ...]
    body: RuleExpr
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class DefaultDecl:
    name: str
    params: tuple[RuleParam, ...]
    guard: RuleExpr
    assignments: tuple[tuple[FieldAccess, Value], ...]
    pos: Pos = _pos_field()


Decl = Union[DatabaseDecl, DictionaryDecl, ClassDecl, RuleDecl, DefaultDecl]
