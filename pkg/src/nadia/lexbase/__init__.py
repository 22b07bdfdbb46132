from .model import (
    Axie,
    Entry,
    MonolingualAcception,
    SenseNode,
    Strength,
    Transaction,
    Violation,
    CorruptStore,
    SchemaMismatch,
    TransactionRejected,
    UnknownId,
    UnknownLemma,
    AddAcception,
    AddQuasiSynonym,
    CreateEntry,
    DeleteAcception,
    DeleteEntry,
    LinkToAxie,
    LinkTranslation,
    MakeSubAcception,
    SetCoverage,
    UpdateAcceptionFeatures,
    UpdateAxie,
    UpdateEntryFeatures,
    ValidateEntry,
)
from .store import Database, open_database
from .wf import check_wellformed

__all__ = [
    "Database",
    "open_database",
    "check_wellformed",
    "Entry",
    "MonolingualAcception",
    "Axie",
    "SenseNode",
    "Violation",
    "Strength",
    "Transaction",
    "UnknownId",
    "UnknownLemma",
    "TransactionRejected",
    "SchemaMismatch",
    "CorruptStore",
    "CreateEntry",
    "UpdateEntryFeatures",
    "DeleteEntry",
    "AddAcception",
    "UpdateAcceptionFeatures",
    "DeleteAcception",
    "LinkTranslation",
    "LinkToAxie",
    "MakeSubAcception",
    "AddQuasiSynonym",
    "UpdateAxie",
    "ValidateEntry",
    "SetCoverage",
]
