from .ast import (
    AnyOf,
    AutomatonType,
    ClassDecl,
    ClassRef,
    Cond,
    DatabaseDecl,
    DefaultDecl,
    DictionaryDecl,
    Equal,
    EmptyP,
    FeatureStructureType,
    FieldAccess,
    GraphOf,
    IsOneOf,
    Kind,
    ListOf,
    And,
    Not,
    OneOf,
    Or,
    RuleDecl,
    RuleParam,
    SetOf,
    StringConst,
    StringType,
    SymbolConst,
    SymbolType,
    TreeOf,
    TrueConst,
)
from .parser import DlsSyntaxError, parse_dls
from .printer import print_decl, print_decls
from .schema import (
    DuplicateClass,
    DuplicateFeature,
    IllegalRecursion,
    MissingPredefinedParent,
    Schema,
    SchemaError,
    UnknownClass,
    resolve_schema,
)
from .validate import Fault, ValidationReport, validate_value

__all__ = [
    "parse_dls",
    "DlsSyntaxError",
    "print_decl",
    "print_decls",
    "resolve_schema",
    "Schema",
    "SchemaError",
    "UnknownClass",
    "DuplicateClass",
    "DuplicateFeature",
    "MissingPredefinedParent",
    "IllegalRecursion",
    "validate_value",
    "ValidationReport",
    "Fault",
    "DatabaseDecl",
    "DictionaryDecl",
    "ClassDecl",
    "RuleDecl",
    "RuleParam",
    "DefaultDecl",
    "Kind",
    "StringType",
    "SymbolType",
    "OneOf",
    "AnyOf",
    "ClassRef",
    "FeatureStructureType",
    "ListOf",
    "SetOf",
    "TreeOf",
    "GraphOf",
    "AutomatonType",
    "And",
    "Or",
    "Not",
    "Cond",
    "Equal",
    "IsOneOf",
    "EmptyP",
    "FieldAccess",
    "SymbolConst",
    "StringConst",
    "TrueConst",
]
