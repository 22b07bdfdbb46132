"""Domain objects of the lexical graph and the transaction vocabulary.

Ids are opaque strings allocated by the store: `<language>:entry:<n>`,
`<language>:acc:<n>` and `axie:<n>`.  Mnemonic labels such as
`#épouser_semarier` are display metadata, unique per database.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from ..values import FS, fs


class Strength(enum.IntEnum):
    WARNING = 1
    DELAY = 2
    CRITICAL = 3

    @classmethod
    def parse(cls, name: str) -> "Strength":
        return cls[name.upper()]

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class Violation:
    code: str
    strength: Strength
    subjects: tuple[str, ...]
    message: str
    suggested_fix: Optional[dict] = None

    def sort_key(self):
        head = self.subjects[0] if self.subjects else ""
        return (self.code, id_sort_key(head), self.subjects)


def id_sort_key(ident: str):
    """Natural order for store ids: numeric tail sorts numerically."""
    parts = ident.split(":")
    key: list[Any] = []
    for p in parts:
        key.append((1, int(p)) if p.isdigit() else (0, p))
    return tuple(key)


@dataclass
class SenseNode:
    """Sense-tree node; leaves carry exactly one acception id."""
    acception: Optional[str] = None
    children: list["SenseNode"] = field(default_factory=list)

    def is_leaf(self) -> bool:
        return self.acception is not None

    def leaves(self) -> list[str]:
        if self.acception is not None:
            return [self.acception]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out

    def clone(self) -> "SenseNode":
        return SenseNode(self.acception, [c.clone() for c in self.children])


@dataclass
class Entry:
    id: str
    language: str
    lemma: str
    features: FS = field(default_factory=fs)
    senses: SenseNode = field(default_factory=SenseNode)
    validated: bool = False
    delayed: bool = False

    def clone(self) -> "Entry":
        return Entry(self.id, self.language, self.lemma, self.features,
                     self.senses.clone(), self.validated, self.delayed)


@dataclass
class MonolingualAcception:
    id: str
    language: str
    display_name: str
    features: FS = field(default_factory=fs)
    axie_ref: str = ""
    delayed: bool = False

    def clone(self) -> "MonolingualAcception":
        return MonolingualAcception(self.id, self.language, self.display_name,
                                    self.features, self.axie_ref, self.delayed)


@dataclass
class Axie:
    """Interlingual acception: the pivot node of the translation graph."""
    id: str
    mnemonic: str = ""
    gloss: str = ""
    tags: set[str] = field(default_factory=set)
    sub_links: list[tuple[str, str]] = field(default_factory=list)  # (child id, label)
    quasi_links: set[str] = field(default_factory=set)
    provisional: bool = False

    def clone(self) -> "Axie":
        return Axie(self.id, self.mnemonic, self.gloss, set(self.tags),
                    list(self.sub_links), set(self.quasi_links), self.provisional)


# --- transactions -----------------------------------------------------------

@dataclass(frozen=True)
class CreateEntry:
    language: str
    lemma: str
    features: FS = field(default_factory=fs)


@dataclass(frozen=True)
class UpdateEntryFeatures:
    entry_id: str
    features: FS


@dataclass(frozen=True)
class DeleteEntry:
    entry_id: str


@dataclass(frozen=True)
class AddAcception:
    entry_id: str
    sense_path: tuple[int, ...] = ()
    features: FS = field(default_factory=fs)
    display_name: str = ""


@dataclass(frozen=True)
class UpdateAcceptionFeatures:
    acception_id: str
    features: FS


@dataclass(frozen=True)
class DeleteAcception:
    acception_id: str


@dataclass(frozen=True)
class LinkTranslation:
    acception_a: str
    acception_b: str


@dataclass(frozen=True)
class LinkToAxie:
    acception_id: str
    axie_id: str


@dataclass(frozen=True)
class MakeSubAcception:
    parent_axie: str
    label: str
    gloss: str = ""
    tags: tuple[str, ...] = ()
    mnemonic: str = ""
    existing_axie: str = ""  # link this axie as the sub instead of a fresh one


@dataclass(frozen=True)
class AddQuasiSynonym:
    axie_a: str
    axie_b: str


@dataclass(frozen=True)
class UpdateAxie:
    axie_id: str
    mnemonic: Optional[str] = None
    gloss: Optional[str] = None
    tags: Optional[tuple[str, ...]] = None


@dataclass(frozen=True)
class ValidateEntry:
    entry_id: str


@dataclass(frozen=True)
class SetCoverage:
    source_language: str
    target_language: str
    enabled: bool = True


Mutation = Union[
    CreateEntry, UpdateEntryFeatures, DeleteEntry,
    AddAcception, UpdateAcceptionFeatures, DeleteAcception,
    LinkTranslation, LinkToAxie, MakeSubAcception, AddQuasiSynonym,
    UpdateAxie, ValidateEntry, SetCoverage,
]


@dataclass
class Transaction:
    seq: int
    mutations: tuple[Mutation, ...]
    outcome: str = "committed"  # committed | rolledBack
    violations: list[Violation] = field(default_factory=list)
    results: list[Optional[str]] = field(default_factory=list)  # created id per mutation
    events: list[tuple[str, str]] = field(default_factory=list)  # e.g. ("gc-axie", id)

    @property
    def committed(self) -> bool:
        return self.outcome == "committed"


# --- errors -----------------------------------------------------------------

class UnknownId(Exception):
    def __init__(self, ident: str):
        super().__init__(f"unknown id {ident!r}")
        self.id = ident


class UnknownLemma(Exception):
    def __init__(self, lemma: str, language: str):
        super().__init__(f"no entry {lemma!r} in {language!r}")
        self.lemma = lemma
        self.language = language


class TransactionRejected(Exception):
    def __init__(self, txn: "Transaction"):
        lines = "; ".join(f"{v.code}: {v.message}" for v in txn.violations
                          if v.strength == Strength.CRITICAL)
        super().__init__(f"transaction rolled back: {lines}")
        self.transaction = txn

    @property
    def violations(self) -> list[Violation]:
        return self.transaction.violations


class SchemaMismatch(Exception):
    def __init__(self, expected: str, found: str):
        super().__init__(f"store does not match schema: expected {expected}, found {found}")
        self.expected = expected
        self.found = found


class CorruptStore(Exception):
    pass
