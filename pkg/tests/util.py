"""Shared generators and independent oracles for the test suite.

The oracles deliberately use different algorithms than the code under
test: well-formedness is re-derived by exhaustive enumeration over all
(axie, language) pairs and all references, cycles by per-node
reachability, and merge partitions by a plain union-find.
"""

from __future__ import annotations

import random

from nadia.dls import parse_dls, resolve_schema
from nadia.lexbase.model import (
    AddAcception, Axie, CreateEntry, Entry, LinkTranslation,
    MonolingualAcception, SenseNode,
)
from nadia.lexbase.store import Database, DbState
from nadia.values import atom, fs

LANG_NAMES = ["alpha", "beta", "gamma", "delta"]


def gen_schema(num_langs: int):
    dicts = "\n".join(
        f"(define-dictionary D{i} :language \"{LANG_NAMES[i]}\" "
        f":entry 'gen-entry :acception 'gen-acception)"
        for i in range(num_langs))
    text = f"""
(define-database genbase :owner "tests" :dictionaries
{dicts})
(def-linguistic-class gen-entry (entry)
  (feature-structure (category (one-of 'a 'b 'c))))
(def-linguistic-class gen-acception (acception)
  (feature-structure (cat (one-of 'a 'b 'c)) (note string)))
"""
    return resolve_schema(parse_dls(text, "<gen>"))


def random_db(rng: random.Random, max_axies: int = 50) -> Database:
    """A valid database: random entries and acceptions, translation links
    that respect one-acception-per-language, sub-acceptions, quasi links."""
    num_langs = rng.randint(2, 4)
    db = Database(gen_schema(num_langs))
    langs = LANG_NAMES[:num_langs]

    mutations = []
    acc_slots = []  # placeholder index of each acception's AddAcception
    for lang in langs:
        for e in range(rng.randint(1, 4)):
            entry_index = len(mutations)
            mutations.append(CreateEntry(lang, f"{lang}-word-{e}",
                                         fs({"category": atom(rng.choice("abc"))})))
            for _s in range(rng.randint(1, 3)):
                mutations.append(AddAcception(
                    f"${entry_index}", (), fs({"cat": atom(rng.choice("abc"))})))
                acc_slots.append(len(mutations) - 1)
    txn = db.apply_transaction(mutations)
    assert txn.committed, txn.violations
    acc_ids = [txn.results[i] for i in acc_slots]

    for _ in range(rng.randint(0, 2 * len(acc_ids))):
        a, b = rng.choice(acc_ids), rng.choice(acc_ids)
        db.apply_transaction([LinkTranslation(a, b)])  # rejects just roll back

    axies = sorted(db.state.axies)
    for _ in range(rng.randint(0, 4)):
        if len(db.state.axies) >= max_axies:
            break
        parent = rng.choice(sorted(db.state.axies))
        db.make_sub_acception(parent, rng.choice(["one", "two", "three"]))
    axies = sorted(db.state.axies)
    for _ in range(rng.randint(0, 3)):
        a, b = rng.choice(axies), rng.choice(axies)
        if a != b:
            db.add_quasi_synonym(a, b)
    assert len(db.state.axies) <= max_axies
    return db


# --- brute-force well-formedness oracle --------------------------------------

def wf_signatures(state: DbState) -> set[tuple]:
    """Exhaustive re-derivation of WF1/WF2/WF3/cycle findings."""
    out: set[tuple] = set()

    children_of = {aid: [c for c, _ in state.axies[aid].sub_links
                         if c in state.axies]
                   for aid in state.axies}
    has_parent = {c for kids in children_of.values() for c in kids}

    for aid, axie in state.axies.items():
        holders = [a for a in state.acceptions.values() if a.axie_ref == aid]
        if not holders and aid not in has_parent and not axie.provisional:
            out.add(("WF1", aid))

    languages = {a.language for a in state.acceptions.values()}
    for aid in state.axies:
        for lang in languages:
            holders = [a.id for a in state.acceptions.values()
                       if a.axie_ref == aid and a.language == lang]
            if len(holders) > 1:
                out.add(("WF2", aid, frozenset(holders)))

    for acc in state.acceptions.values():
        if acc.axie_ref not in state.axies:
            out.add(("WF3", acc.id))

    def reaches(src: str, dst: str) -> bool:
        stack, seen = [src], set()
        while stack:
            cur = stack.pop()
            for nxt in children_of.get(cur, []):
                if nxt == dst:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    cyclic = {aid for aid in state.axies if reaches(aid, aid)}
    grouped: set[frozenset] = set()
    for aid in cyclic:
        component = frozenset(o for o in cyclic
                              if o == aid or (reaches(aid, o) and reaches(o, aid)))
        grouped.add(component)
    for component in grouped:
        out.add(("CYCLE", component))
    return out


def impl_signatures(violations) -> set[tuple]:
    out: set[tuple] = set()
    for v in violations:
        if v.code == "WF1":
            out.add(("WF1", v.subjects[0]))
        elif v.code == "WF2":
            out.add(("WF2", v.subjects[0], frozenset(v.subjects[1:])))
        elif v.code == "WF3":
            out.add(("WF3", v.subjects[0]))
        elif v.code == "CyclicContrastive":
            out.add(("CYCLE", frozenset(v.subjects)))
    return out


def inject_all(state: DbState) -> tuple[DbState, set[tuple]]:
    """Corrupt a copy of the state with one violation of each class and
    return the copy plus the expected signatures."""
    bad = state.clone()
    expected: set[tuple] = set()

    orphan = "axie:9001"
    bad.axies[orphan] = Axie(orphan)
    expected.add(("WF1", orphan))

    axie_with_acc = next(a.axie_ref for a in bad.acceptions.values())
    lang = next(a.language
                for a in bad.acceptions.values() if a.axie_ref == axie_with_acc)
    twin_entry = f"{lang}:entry:9002"
    twin_acc = f"{lang}:acc:9002"
    bad.entries[twin_entry] = Entry(twin_entry, lang, "injected-duplicate",
                                    fs(), SenseNode(children=[
                                        SenseNode(acception=twin_acc)]))
    bad.acceptions[twin_acc] = MonolingualAcception(
        twin_acc, lang, "injected", fs(), axie_with_acc)
    original = next(a.id for a in state.acceptions.values()
                    if a.axie_ref == axie_with_acc and a.language == lang)
    expected.add(("WF2", axie_with_acc, frozenset({original, twin_acc})))

    dangle_entry = f"{lang}:entry:9003"
    dangle_acc = f"{lang}:acc:9003"
    bad.entries[dangle_entry] = Entry(dangle_entry, lang, "injected-dangling",
                                      fs(), SenseNode(children=[
                                          SenseNode(acception=dangle_acc)]))
    bad.acceptions[dangle_acc] = MonolingualAcception(
        dangle_acc, lang, "injected", fs(), "axie:9999")
    expected.add(("WF3", dangle_acc))

    loop_axie = sorted(bad.axies)[0]
    bad.axies[loop_axie].sub_links.append((loop_axie, "loop"))
    expected.add(("CYCLE", frozenset({loop_axie})))

    return bad, expected


# --- union-find oracle --------------------------------------------------------

class UnionFindOracle:
    """Plain union-find that refuses merges putting two acceptions of one
    language into one class, mirroring the store's WF2 rejection."""

    def __init__(self, languages: dict[str, str]):
        self.parent = {x: x for x in languages}
        self.languages = languages

    def find(self, x: str) -> str:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def members(self, root: str) -> list[str]:
        return [x for x in self.parent if self.find(x) == root]

    def union(self, a: str, b: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return True
        langs_a = [self.languages[m] for m in self.members(ra)]
        langs_b = [self.languages[m] for m in self.members(rb)]
        if set(langs_a) & set(langs_b):
            return False  # would put two same-language acceptions together
        self.parent[ra] = rb
        return True

    def partition(self) -> set[frozenset]:
        groups: dict[str, set] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), set()).add(x)
        return {frozenset(g) for g in groups.values()}


def store_partition(state: DbState) -> set[frozenset]:
    groups: dict[str, set] = {}
    for acc in state.acceptions.values():
        groups.setdefault(acc.axie_ref, set()).add(acc.id)
    return {frozenset(g) for g in groups.values()}
