"""Transactional store for the multilingual lexical graph.

Single-writer, multi-reader: mutations are serialized by a lock and build
a working copy of the state; readers always see the last committed state.
A transaction commits only if no critical violation was raised, otherwise
the working copy is discarded and the store is untouched.  The acception
dictionary is system-managed: every new acception gets a fresh axie,
translation links merge axies, and orphaned axies are collected at commit.
"""

from __future__ import annotations

import json
import os
import threading
import unicodedata
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

from ..dls.schema import Schema
from ..dls.validate import validate_value
from ..rules import BoundArticle, CompiledDefault, CompiledRule, apply_defaults, run_rules
from ..values import FS, fs, norm_text
from .model import (
    AddAcception, AddQuasiSynonym, Axie, CorruptStore, CreateEntry,
    DeleteAcception, DeleteEntry, Entry, LinkToAxie, LinkTranslation,
    MakeSubAcception, MonolingualAcception, Mutation, SchemaMismatch,
    SenseNode, SetCoverage, Strength, Transaction, TransactionRejected,
    UnknownId, UnknownLemma, UpdateAcceptionFeatures, UpdateAxie,
    UpdateEntryFeatures, ValidateEntry, Violation, id_sort_key,
)
from .wf import check_wellformed


class UnknownLanguage(Exception):
    def __init__(self, language: str):
        super().__init__(f"no dictionary for language {language!r}")
        self.language = language


@dataclass(frozen=True)
class LogRecord:
    seq: int
    actor: str
    violation: Violation


class DbState:
    """The whole graph; cloned per transaction, swapped on commit."""

    def __init__(self):
        self.entries: dict[str, Entry] = {}
        self.acceptions: dict[str, MonolingualAcception] = {}
        self.axies: dict[str, Axie] = {}
        self.counters: dict[str, int] = {}
        self.coverage: set[tuple[str, str]] = set()

    def clone(self) -> "DbState":
        st = DbState()
        st.entries = {k: v.clone() for k, v in self.entries.items()}
        st.acceptions = {k: v.clone() for k, v in self.acceptions.items()}
        st.axies = {k: v.clone() for k, v in self.axies.items()}
        st.counters = dict(self.counters)
        st.coverage = set(self.coverage)
        return st

    def next_id(self, kind: str) -> str:
        n = self.counters.get(kind, 0) + 1
        self.counters[kind] = n
        return f"{kind}:{n}"

    def entry_map(self) -> dict[str, str]:
        """acception id -> owning entry id"""
        return {leaf: e.id for e in self.entries.values() for leaf in e.senses.leaves()}

    def accs_by_axie(self) -> dict[str, list[MonolingualAcception]]:
        out: dict[str, list[MonolingualAcception]] = {}
        for acc in self.acceptions.values():
            out.setdefault(acc.axie_ref, []).append(acc)
        for accs in out.values():
            accs.sort(key=lambda a: id_sort_key(a.id))
        return out


@dataclass
class TranslationHit:
    kind: str  # direct | sub | quasi
    path: tuple[str, ...]
    acception_id: str
    display_name: str
    entry_id: str
    lemma: str
    delayed: bool


@dataclass
class AcceptionTranslation:
    acception_id: str
    display_name: str
    axie_id: str
    hits: list[TranslationHit]

    @property
    def untranslatable(self) -> bool:
        return not self.hits


@dataclass
class TranslationResult:
    lemma: str
    source_language: str
    target_language: str
    acceptions: list[AcceptionTranslation]


def _norm_lemma(lemma: str) -> str:
    return unicodedata.normalize("NFC", lemma)


class Database:
    def __init__(self, schema: Schema, rules: Sequence[CompiledRule] = (),
                 defaults: Sequence[CompiledDefault] = (),
                 location: Optional[str | Path] = None):
        self.schema = schema
        self.rules = list(rules)
        self.defaults = list(defaults)
        self.location = Path(location) if location is not None else None
        self._lock = threading.RLock()
        self._state = DbState()
        self._log: list[LogRecord] = []
        self._txn_seq = 0
        if self.location is not None:
            self._load_or_init()

    # --- snapshots -----------------------------------------------------

    @property
    def state(self) -> DbState:
        return self._state

    def log_records(self) -> list[LogRecord]:
        with self._lock:
            return list(self._log)

    # --- transactions --------------------------------------------------

    def apply_transaction(self, mutations: Sequence[Mutation], actor: str = "",
                          timeout: Optional[float] = None) -> Transaction:
        acquired = self._lock.acquire(timeout=timeout if timeout is not None else -1)
        if not acquired:
            raise TimeoutError("writer busy")
        try:
            return self._apply_locked(tuple(mutations), actor)
        finally:
            self._lock.release()

    def _apply_locked(self, mutations: tuple[Mutation, ...], actor: str) -> Transaction:
        self._txn_seq += 1
        txn = Transaction(seq=self._txn_seq, mutations=mutations)
        work = self._state.clone()
        changed: set[str] = set()
        cleared_entries: list[str] = []
        link_targets: list[str] = []

        for m in mutations:
            m = _resolve_placeholders(m, txn.results)
            result = self._apply_mutation(work, m, changed, txn, cleared_entries,
                                          link_targets)
            txn.results.append(result)

        self._collect_orphans(work, txn)
        for axie in work.axies.values():
            if axie.provisional and any(a.axie_ref == axie.id
                                        for a in work.acceptions.values()):
                axie.provisional = False

        structural = check_wellformed(work, include_coverage=False)
        if link_targets:
            structural = [self._with_merge_fix(v, link_targets) for v in structural]
        txn.violations.extend(structural)
        txn.violations.extend(run_rules(
            self._articles(work), changed, self.rules, self.schema))

        if any(v.strength == Strength.CRITICAL for v in txn.violations):
            txn.outcome = "rolledBack"
            return txn

        delay_subjects = {s for v in txn.violations if v.strength == Strength.DELAY
                          for s in v.subjects}
        for ident in changed | delay_subjects:
            art = work.entries.get(ident) or work.acceptions.get(ident)
            if art is None:
                continue
            art.delayed = ident in delay_subjects
        # delay findings on changed articles were re-derived above; drop the
        # stale records before appending the current ones
        self._log = [r for r in self._log
                     if not (r.violation.strength == Strength.DELAY
                             and set(r.violation.subjects) & changed)]
        for entry_id in cleared_entries:
            self._clear_entry_warnings(work, entry_id)
        present = {r.violation for r in self._log}
        for v in txn.violations:
            if v not in present:
                self._log.append(LogRecord(txn.seq, actor, v))
                present.add(v)

        self._state = work
        self._persist()
        return txn

    def _with_merge_fix(self, v: Violation, link_targets: list[str]) -> Violation:
        if v.code != "WF2" or v.suggested_fix is not None:
            return v
        axie_id = v.subjects[0]
        if axie_id not in link_targets:
            return v
        return replace(v, suggested_fix=_sub_acception_fix(axie_id, v.subjects[-1]))

    def _clear_entry_warnings(self, work: DbState, entry_id: str):
        entry = work.entries.get(entry_id)
        owned = {entry_id}
        if entry is not None:
            owned.update(entry.senses.leaves())
        self._log = [r for r in self._log
                     if not (r.violation.strength == Strength.WARNING
                             and set(r.violation.subjects) & owned)]

    # --- mutation application -------------------------------------------

    def _apply_mutation(self, work: DbState, m: Mutation, changed: set[str],
                        txn: Transaction, cleared_entries: list[str],
                        link_targets: list[str]) -> Optional[str]:
        if isinstance(m, CreateEntry):
            info = self.schema.dictionary_for_language(m.language)
            if info is None:
                raise UnknownLanguage(m.language)
            lemma = _norm_lemma(m.lemma)
            entry_id = work.next_id(f"{info.language}:entry")
            if not lemma:
                txn.violations.append(Violation(
                    "EmptyLemma", Strength.CRITICAL, (entry_id,),
                    "entry lemma must be nonempty"))
            self._validate_features(m.features, info.entry_class, entry_id, txn)
            for other in work.entries.values():
                if other.language == info.language and other.lemma == lemma:
                    txn.violations.append(Violation(
                        "Homograph", Strength.WARNING, (entry_id, other.id),
                        f"entry {lemma!r} duplicates {other.id} in {info.language}"))
                    break
            work.entries[entry_id] = Entry(entry_id, info.language, lemma, m.features)
            changed.add(entry_id)
            return entry_id

        if isinstance(m, UpdateEntryFeatures):
            entry = self._entry(work, m.entry_id)
            info = self.schema.dictionary_for_language(entry.language)
            self._validate_features(m.features, info.entry_class, entry.id, txn)
            entry.features = m.features
            changed.add(entry.id)
            return None

        if isinstance(m, DeleteEntry):
            entry = self._entry(work, m.entry_id)
            for leaf in entry.senses.leaves():
                work.acceptions.pop(leaf, None)
            del work.entries[entry.id]
            return None

        if isinstance(m, AddAcception):
            entry = self._entry(work, m.entry_id)
            node = self._sense_node(entry, m.sense_path)
            info = self.schema.dictionary_for_language(entry.language)
            acc_id = work.next_id(f"{info.language}:acc")
            self._validate_features(m.features, info.acception_class, acc_id, txn)
            display = m.display_name or f"{entry.lemma}_{len(entry.senses.leaves()) + 1}"
            axie_id = work.next_id("axie")
            work.axies[axie_id] = Axie(axie_id)
            work.acceptions[acc_id] = MonolingualAcception(
                acc_id, info.language, display, m.features, axie_id)
            node.children.append(SenseNode(acception=acc_id))
            changed.update((acc_id, entry.id, axie_id))
            return acc_id

        if isinstance(m, UpdateAcceptionFeatures):
            acc = self._acception(work, m.acception_id)
            info = self.schema.dictionary_for_language(acc.language)
            self._validate_features(m.features, info.acception_class, acc.id, txn)
            acc.features = m.features
            changed.add(acc.id)
            return None

        if isinstance(m, DeleteAcception):
            acc = self._acception(work, m.acception_id)
            for entry in work.entries.values():
                if acc.id in entry.senses.leaves():
                    _remove_leaf(entry.senses, acc.id)
                    changed.add(entry.id)
                    break
            del work.acceptions[acc.id]
            return None

        if isinstance(m, LinkTranslation):
            a = self._acception(work, m.acception_a)
            b = self._acception(work, m.acception_b)
            changed.update((a.id, b.id))
            if a.language == b.language and a.id != b.id:
                txn.violations.append(Violation(
                    "WF2", Strength.CRITICAL, (b.axie_ref, a.id, b.id),
                    f"{a.id} and {b.id} are both {a.language}; acceptions of one "
                    "language may not share an axie",
                    suggested_fix=_sub_acception_fix(b.axie_ref, a.id)))
                return b.axie_ref
            survivor = self._merge_axies(work, a.axie_ref, b.axie_ref, txn)
            link_targets.append(survivor)
            changed.add(survivor)
            return survivor

        if isinstance(m, LinkToAxie):
            acc = self._acception(work, m.acception_id)
            if m.axie_id not in work.axies:
                raise UnknownId(m.axie_id)
            changed.add(acc.id)
            survivor = self._merge_axies(work, acc.axie_ref, m.axie_id, txn,
                                         prefer=m.axie_id)
            link_targets.append(survivor)
            changed.add(survivor)
            return survivor

        if isinstance(m, MakeSubAcception):
            parent = self._axie(work, m.parent_axie)
            if m.existing_axie:
                child_id = self._axie(work, m.existing_axie).id
            else:
                child_id = work.next_id("axie")
                self._check_mnemonic(work, m.mnemonic, child_id, txn)
                work.axies[child_id] = Axie(
                    child_id, mnemonic=m.mnemonic, gloss=norm_text(m.gloss),
                    tags={norm_text(t).lower() for t in m.tags})
            parent.sub_links.append((child_id, norm_text(m.label).lower()))
            changed.update((parent.id, child_id))
            return child_id

        if isinstance(m, AddQuasiSynonym):
            a = self._axie(work, m.axie_a)
            b = self._axie(work, m.axie_b)
            if a.id == b.id:
                raise ValueError("quasi-synonymy links two distinct axies")
            a.quasi_links.add(b.id)
            b.quasi_links.add(a.id)
            changed.update((a.id, b.id))
            return None

        if isinstance(m, UpdateAxie):
            axie = self._axie(work, m.axie_id)
            if m.mnemonic is not None:
                self._check_mnemonic(work, m.mnemonic, axie.id, txn)
                axie.mnemonic = norm_text(m.mnemonic)
            if m.gloss is not None:
                axie.gloss = norm_text(m.gloss)
            if m.tags is not None:
                axie.tags = {norm_text(t).lower() for t in m.tags}
            changed.add(axie.id)
            return None

        if isinstance(m, ValidateEntry):
            entry = self._entry(work, m.entry_id)
            entry.validated = True
            cleared_entries.append(entry.id)
            changed.add(entry.id)
            return None

        if isinstance(m, SetCoverage):
            for lang in (m.source_language, m.target_language):
                if self.schema.dictionary_for_language(lang) is None:
                    raise UnknownLanguage(lang)
            pair = (m.source_language.lower(), m.target_language.lower())
            if m.enabled:
                work.coverage.add(pair)
            else:
                work.coverage.discard(pair)
            return None

        raise TypeError(f"unknown mutation {m!r}")

    def _validate_features(self, features: FS, class_name: str, subject: str,
                           txn: Transaction):
        report = validate_value(features, class_name, self.schema)
        for fault in report.faults:
            txn.violations.append(Violation(
                "Validation", Strength.CRITICAL, (subject,),
                f"{fault.code} at {fault.path or '<root>'}: {fault.message}"))

    def _check_mnemonic(self, work: DbState, mnemonic: str, self_id: str,
                        txn: Transaction):
        if not mnemonic:
            return
        for axie in work.axies.values():
            if axie.id != self_id and axie.mnemonic == norm_text(mnemonic):
                txn.violations.append(Violation(
                    "DuplicateMnemonic", Strength.CRITICAL, (self_id, axie.id),
                    f"mnemonic {mnemonic!r} already names {axie.id}"))
                return

    def _merge_axies(self, work: DbState, left: str, right: str, txn: Transaction,
                     prefer: Optional[str] = None) -> str:
        if left == right:
            return left
        if prefer is not None:
            keep, absorb = prefer, (left if prefer == right else right)
        else:
            keep, absorb = sorted((left, right), key=id_sort_key)
        kept = work.axies[keep]
        gone = work.axies[absorb]
        for acc in work.acceptions.values():
            if acc.axie_ref == absorb:
                acc.axie_ref = keep
        known = set(kept.sub_links)
        for link in gone.sub_links:
            if link not in known:
                kept.sub_links.append(link)
        if not kept.gloss:
            kept.gloss = gone.gloss
        if not kept.mnemonic:
            kept.mnemonic = gone.mnemonic
        kept.tags |= gone.tags
        kept.quasi_links = (kept.quasi_links | gone.quasi_links) - {keep, absorb}
        kept.provisional = kept.provisional and gone.provisional
        del work.axies[absorb]
        for axie in work.axies.values():
            axie.sub_links = [(keep if c == absorb else c, lbl)
                              for c, lbl in axie.sub_links]
            if absorb in axie.quasi_links:
                axie.quasi_links.discard(absorb)
                if axie.id != keep:
                    axie.quasi_links.add(keep)
                    kept.quasi_links.add(axie.id)
        txn.events.append(("merge-axie", f"{absorb}->{keep}"))
        return keep

    def _collect_orphans(self, work: DbState, txn: Transaction):
        while True:
            referenced = {a.axie_ref for a in work.acceptions.values()}
            has_parent = {c for axie in work.axies.values() for c, _ in axie.sub_links}
            doomed = [aid for aid, axie in work.axies.items()
                      if aid not in referenced and aid not in has_parent
                      and not axie.provisional]
            if not doomed:
                return
            for aid in sorted(doomed, key=id_sort_key):
                del work.axies[aid]
                txn.events.append(("gc-axie", aid))
            for axie in work.axies.values():
                axie.quasi_links -= set(doomed)

    def _entry(self, work: DbState, entry_id: str) -> Entry:
        try:
            return work.entries[entry_id]
        except KeyError:
            raise UnknownId(entry_id) from None

    def _acception(self, work: DbState, acc_id: str) -> MonolingualAcception:
        try:
            return work.acceptions[acc_id]
        except KeyError:
            raise UnknownId(acc_id) from None

    def _axie(self, work: DbState, axie_id: str) -> Axie:
        try:
            return work.axies[axie_id]
        except KeyError:
            raise UnknownId(axie_id) from None

    def _sense_node(self, entry: Entry, path: tuple[int, ...]) -> SenseNode:
        node = entry.senses
        for index in path:
            if node.is_leaf() or index >= len(node.children):
                raise ValueError(f"sense path {list(path)} not in {entry.id}")
            node = node.children[index]
        if node.is_leaf():
            raise ValueError(f"sense path {list(path)} addresses a leaf of {entry.id}")
        return node

    def _articles(self, work: DbState) -> list[BoundArticle]:
        arts = []
        entry_of = work.entry_map()
        for e in work.entries.values():
            info = self.schema.dictionary_for_language(e.language)
            arts.append(BoundArticle(
                kind="entry", id=e.id, class_name=info.entry_class,
                dictionary=info.name, features=e.features, lemma=e.lemma))
        for a in work.acceptions.values():
            info = self.schema.dictionary_for_language(a.language)
            arts.append(BoundArticle(
                kind="acception", id=a.id, class_name=info.acception_class,
                dictionary=info.name, features=a.features,
                entry_id=entry_of.get(a.id, "")))
        for x in work.axies.values():
            arts.append(BoundArticle(
                kind="axie", id=x.id, class_name="axie",
                gloss=x.gloss, mnemonic=x.mnemonic))
        return arts

    # --- convenience mutations -------------------------------------------

    def _one(self, mutation: Mutation, actor: str = "") -> Optional[str]:
        txn = self.apply_transaction([mutation], actor=actor)
        if not txn.committed:
            raise TransactionRejected(txn)
        return txn.results[0]

    def create_entry(self, language: str, lemma: str, features: FS = fs(),
                     actor: str = "") -> str:
        return self._one(CreateEntry(language, lemma, features), actor)

    def add_acception(self, entry_id: str, sense_path: Iterable[int] = (),
                      features: FS = fs(), display_name: str = "",
                      actor: str = "") -> str:
        return self._one(AddAcception(entry_id, tuple(sense_path), features,
                                      display_name), actor)

    def link_translation(self, acception_a: str, acception_b: str,
                         actor: str = "") -> str:
        return self._one(LinkTranslation(acception_a, acception_b), actor)

    def link_to_axie(self, acception_id: str, axie_id: str, actor: str = "") -> str:
        return self._one(LinkToAxie(acception_id, axie_id), actor)

    def make_sub_acception(self, parent_axie: str, label: str, gloss: str = "",
                           tags: Iterable[str] = (), mnemonic: str = "",
                           existing_axie: str = "", actor: str = "") -> str:
        return self._one(MakeSubAcception(parent_axie, label, gloss,
                                          tuple(tags), mnemonic, existing_axie),
                         actor)

    def add_quasi_synonym(self, axie_a: str, axie_b: str, actor: str = ""):
        self._one(AddQuasiSynonym(axie_a, axie_b), actor)

    def update_axie(self, axie_id: str, mnemonic: Optional[str] = None,
                    gloss: Optional[str] = None,
                    tags: Optional[Iterable[str]] = None, actor: str = ""):
        self._one(UpdateAxie(axie_id, mnemonic, gloss,
                             tuple(tags) if tags is not None else None), actor)

    def validate_entry(self, entry_id: str, actor: str = ""):
        self._one(ValidateEntry(entry_id), actor)

    def enable_coverage(self, source_language: str, target_language: str,
                        enabled: bool = True):
        self._one(SetCoverage(source_language, target_language, enabled))

    # --- queries ----------------------------------------------------------

    def lookup_entry(self, language: str, prefix: str = "") -> list[Entry]:
        state = self._state
        lang = self.schema.dictionary_for_language(language)
        if lang is None:
            return []
        prefix = _norm_lemma(prefix)
        found = [e for e in state.entries.values()
                 if e.language == lang.language and e.lemma.startswith(prefix)]
        found.sort(key=lambda e: (e.lemma, id_sort_key(e.id)))
        return found

    def translate(self, lemma: str, source_language: str,
                  target_language: str) -> TranslationResult:
        state = self._state
        src = self.schema.dictionary_for_language(source_language)
        tgt = self.schema.dictionary_for_language(target_language)
        if src is None:
            raise UnknownLanguage(source_language)
        if tgt is None:
            raise UnknownLanguage(target_language)
        lemma = _norm_lemma(lemma)
        entries = [e for e in state.entries.values()
                   if e.language == src.language and e.lemma == lemma]
        if not entries:
            raise UnknownLemma(lemma, src.language)
        entries.sort(key=lambda e: id_sort_key(e.id))

        by_axie = state.accs_by_axie()
        entry_of = state.entry_map()
        result = TranslationResult(lemma, src.language, tgt.language, [])
        untranslatable_axies = []
        for entry in entries:
            for acc_id in entry.senses.leaves():
                acc = state.acceptions[acc_id]
                hits = self._hits_for(state, by_axie, entry_of, acc, tgt.language)
                result.acceptions.append(AcceptionTranslation(
                    acc.id, acc.display_name, acc.axie_ref, hits))
                if not hits:
                    untranslatable_axies.append(acc.axie_ref)
        for axie_id in untranslatable_axies:
            self._record_t2(axie_id, src.language, tgt.language)
        return result

    def _hits_for(self, state, by_axie, entry_of, acc, target: str) -> list[TranslationHit]:
        def hits_at(axie_id: str, kind: str, path: tuple[str, ...]):
            out = []
            for other in by_axie.get(axie_id, []):
                if other.language == target:
                    out.append(self._hit(state, entry_of, other, kind, path))
            return out

        hits = hits_at(acc.axie_ref, "direct", ())
        if hits:
            return hits
        # breadth-first through sub-acceptions, tracking contrastive labels
        queue = [(acc.axie_ref, ())]
        seen = {acc.axie_ref}
        sub_hits: list[TranslationHit] = []
        while queue:
            next_queue = []
            for axie_id, path in queue:
                axie = state.axies.get(axie_id)
                if axie is None:
                    continue
                for child, label in axie.sub_links:
                    if child in seen or child not in state.axies:
                        continue
                    seen.add(child)
                    child_path = path + (label,)
                    sub_hits.extend(hits_at(child, "sub", child_path))
                    next_queue.append((child, child_path))
            queue = next_queue
        if sub_hits:
            return sub_hits
        quasi_hits = []
        axie = state.axies.get(acc.axie_ref)
        if axie is not None:
            for quasi in sorted(axie.quasi_links, key=id_sort_key):
                quasi_hits.extend(hits_at(quasi, "quasi", ()))
        return quasi_hits

    def _hit(self, state, entry_of, acc, kind: str, path: tuple[str, ...]) -> TranslationHit:
        entry_id = entry_of.get(acc.id, "")
        entry = state.entries.get(entry_id)
        lemma = entry.lemma if entry else ""
        delayed = acc.delayed or bool(entry and entry.delayed)
        return TranslationHit(kind, path, acc.id, acc.display_name,
                              entry_id, lemma, delayed)

    def _record_t2(self, axie_id: str, source: str, target: str):
        violation = Violation(
            "T2", Strength.WARNING, (axie_id,),
            f"axie {axie_id} reachable from {source} has no {target} counterpart")
        with self._lock:
            for r in self._log:
                if r.violation == violation:
                    return
            self._log.append(LogRecord(self._txn_seq, "", violation))

    def browse_axie(self, axie_id: str, depth: int = 1) -> dict:
        state = self._state
        if axie_id not in state.axies:
            raise UnknownId(axie_id)
        return self._axie_view(state, state.accs_by_axie(), state.entry_map(),
                               axie_id, depth)

    def _axie_view(self, state, by_axie, entry_of, axie_id: str, depth: int) -> dict:
        axie = state.axies[axie_id]
        languages = {}
        for acc in by_axie.get(axie_id, []):
            entry = state.entries.get(entry_of.get(acc.id, ""))
            languages[acc.language] = {
                "acception": acc.id,
                "displayName": acc.display_name,
                "entryId": entry.id if entry else "",
                "lemma": entry.lemma if entry else "",
                "delayed": acc.delayed or bool(entry and entry.delayed),
            }
        subs = []
        for child, label in axie.sub_links:
            if depth <= 0:
                subs.append({"label": label, "id": child})
            else:
                view = self._axie_view(state, by_axie, entry_of, child, depth - 1)
                view["label"] = label
                subs.append(view)
        return {
            "id": axie.id,
            "mnemonic": axie.mnemonic,
            "gloss": axie.gloss,
            "tags": sorted(axie.tags),
            "provisional": axie.provisional,
            "languages": languages,
            "subs": subs,
            "quasi": sorted(axie.quasi_links, key=id_sort_key),
        }

    def stats(self) -> dict:
        state = self._state
        per = {}
        for d in self.schema.dictionaries:
            entries = [e for e in state.entries.values() if e.language == d.language]
            accs = [a for a in state.acceptions.values() if a.language == d.language]
            per[d.language] = {"entries": len(entries), "acceptions": len(accs)}
        with_parent = {c for axie in state.axies.values() for c, _ in axie.sub_links}
        return {
            "perDictionary": per,
            "axieCount": len(state.axies),
            "subAcceptionCount": len(with_parent & set(state.axies)),
        }

    def check_wellformed(self) -> list[Violation]:
        return check_wellformed(self._state)

    def check_all(self) -> list[Violation]:
        """Full re-check: structural criteria plus every registered rule on
        every article."""
        state = self._state
        violations = check_wellformed(state)
        everything = set(state.entries) | set(state.acceptions) | set(state.axies)
        violations.extend(run_rules(self._articles(state), everything,
                                    self.rules, self.schema))
        return violations

    def violations_logged(self, strength: Optional[Strength] = None) -> list[Violation]:
        with self._lock:
            out = [r.violation for r in self._log]
        if strength is not None:
            out = [v for v in out if v.strength == strength]
        return out

    def preview_defaults(self, article_id: str) -> list[tuple[str, object]]:
        state = self._state
        if article_id in state.entries:
            art = state.entries[article_id]
            info = self.schema.dictionary_for_language(art.language)
            cls = info.entry_class
        elif article_id in state.acceptions:
            art = state.acceptions[article_id]
            info = self.schema.dictionary_for_language(art.language)
            cls = info.acception_class
        else:
            raise UnknownId(article_id)
        _, proposals = apply_defaults(art.features, cls, info.name,
                                      self.defaults, self.schema,
                                      mode="interactive")
        return proposals

    def apply_defaults_batch(self, class_name: Optional[str] = None,
                             actor: str = "") -> int:
        """Defaults every matching article in place; returns how many changed."""
        state = self._state
        mutations: list[Mutation] = []
        for art, cls, info, update in self._defaultable_articles(state):
            if class_name is not None and cls != class_name:
                continue
            new_features, applied = apply_defaults(
                art.features, cls, info.name, self.defaults, self.schema)
            if applied:
                mutations.append(update(new_features))
        if mutations:
            txn = self.apply_transaction(mutations, actor=actor)
            if not txn.committed:
                raise TransactionRejected(txn)
        return len(mutations)

    def _defaultable_articles(self, state):
        for e in sorted(state.entries.values(), key=lambda a: id_sort_key(a.id)):
            info = self.schema.dictionary_for_language(e.language)
            yield e, info.entry_class, info, \
                (lambda f, eid=e.id: UpdateEntryFeatures(eid, f))
        for a in sorted(state.acceptions.values(), key=lambda x: id_sort_key(x.id)):
            info = self.schema.dictionary_for_language(a.language)
            yield a, info.acception_class, info, \
                (lambda f, aid=a.id: UpdateAcceptionFeatures(aid, f))

    # --- persistence -------------------------------------------------------

    def save_as(self, location: str | Path):
        """Bind an in-memory database to a directory and write it out."""
        with self._lock:
            self.location = Path(location)
            self._persist()

    def _meta(self) -> dict:
        return {
            "database": self.schema.database_name,
            "schemaHash": self.schema.schema_hash(),
            "counters": dict(sorted(self._state.counters.items())),
            "coverage": sorted(list(p) for p in self._state.coverage),
            "txnSeq": self._txn_seq,
            "log": [
                {
                    "seq": r.seq,
                    "actor": r.actor,
                    "code": r.violation.code,
                    "strength": r.violation.strength.label,
                    "subjects": list(r.violation.subjects),
                    "message": r.violation.message,
                    "suggestedFix": r.violation.suggested_fix,
                }
                for r in self._log
            ],
        }

    def _persist(self):
        if self.location is None:
            return
        from ..interchange import axies_document, canonical_bytes, dictionary_document

        self.location.mkdir(parents=True, exist_ok=True)
        files: dict[str, bytes] = {
            "db.meta": (json.dumps(self._meta(), ensure_ascii=False, indent=2,
                                   sort_keys=True) + "\n").encode("utf-8"),
            "axies.xml": canonical_bytes(axies_document(
                self._state, self.schema, include_delayed=True)),
        }
        for d in self.schema.dictionaries:
            files[f"{d.language}.dict.xml"] = canonical_bytes(dictionary_document(
                self._state, self.schema, d.language, include_delayed=True))
        _atomic_write(self.location, files)

    def _load_or_init(self):
        from ..interchange import FormatError, load_state_from_directory

        loc = self.location
        _finish_pending_commit(loc)
        meta_path = loc / "db.meta"
        if not loc.exists() or not meta_path.exists():
            if loc.exists() and any(loc.iterdir()):
                raise CorruptStore(f"{loc} is not empty and has no db.meta")
            self._persist()
            return
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptStore(f"unreadable db.meta: {exc}") from exc
        if meta.get("database") != self.schema.database_name:
            raise SchemaMismatch(self.schema.database_name, str(meta.get("database")))
        if meta.get("schemaHash") != self.schema.schema_hash():
            raise SchemaMismatch(self.schema.schema_hash(), str(meta.get("schemaHash")))
        try:
            state = load_state_from_directory(loc, self.schema)
        except FormatError as exc:
            raise CorruptStore(str(exc)) from exc
        state.counters = {str(k): int(v) for k, v in meta.get("counters", {}).items()}
        state.coverage = {(p[0], p[1]) for p in meta.get("coverage", [])}
        self._state = state
        self._txn_seq = int(meta.get("txnSeq", 0))
        self._log = [
            LogRecord(int(r["seq"]), r.get("actor", ""), Violation(
                r["code"], Strength.parse(r["strength"]),
                tuple(r["subjects"]), r["message"], r.get("suggestedFix")))
            for r in meta.get("log", [])
        ]


def _resolve_placeholders(m: Mutation, results: list[Optional[str]]) -> Mutation:
    """Id fields of the form `$<n>` name the result of the n-th mutation of
    the same transaction, so a multi-step draft commits atomically."""
    updates = {}
    for name, value in vars(m).items():
        if isinstance(value, str) and value.startswith("$") and value[1:].isdigit():
            index = int(value[1:])
            if index >= len(results) or results[index] is None:
                raise UnknownId(value)
            updates[name] = results[index]
    return replace(m, **updates) if updates else m


def _sub_acception_fix(parent_axie: str, move_acception: str) -> dict:
    return {
        "action": "create-sub-acception",
        "parentAxie": parent_axie,
        "moveAcception": move_acception,
        "label": "",
    }


def _remove_leaf(node: SenseNode, acc_id: str) -> bool:
    for i, child in enumerate(node.children):
        if child.acception == acc_id:
            del node.children[i]
            return True
        if _remove_leaf(child, acc_id):
            if not child.children and child.acception is None:
                node.children.remove(child)
            return True
    return False


def _atomic_write(directory: Path, files: dict[str, bytes]):
    """Write-ahead commit: temp files, an intent file, then renames."""
    pending = []
    for name, data in files.items():
        tmp = directory / (name + ".tmp")
        with open(tmp, "wb") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        pending.append(name)
    intent = directory / "commit.intent"
    with open(intent, "w", encoding="utf-8") as f:
        json.dump(pending, f)
        f.flush()
        os.fsync(f.fileno())
    for name in pending:
        os.replace(directory / (name + ".tmp"), directory / name)
    intent.unlink()


def _finish_pending_commit(directory: Path):
    intent = directory / "commit.intent"
    if not intent.exists():
        return
    try:
        pending = json.loads(intent.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        pending = []
    for name in pending:
        tmp = directory / (name + ".tmp")
        if tmp.exists():
            os.replace(tmp, directory / name)
    intent.unlink()


def open_database(location: Optional[str | Path], schema: Schema,
                  rules: Sequence[CompiledRule] = (),
                  defaults: Sequence[CompiledDefault] = ()) -> Database:
    """Open or initialize a database directory; None keeps it in memory."""
    return Database(schema, rules=rules, defaults=defaults, location=location)
