"""Structural well-formedness of the lexical graph.

Checked invariants: every axie without a parent sub-link carries at least
one acception (WF1, sub-acceptions and provisional imports exempt); an
axie carries at most one acception per language (WF2); every acception
references an existing axie (WF3); the sub-acception relation is acyclic.
With coverage tracking enabled for a language pair, axies reachable from
the source language but unreachable from the target, directly, through
sub-acceptions or through one quasi-synonymy hop, are reported at warning
strength (T2).
"""

from __future__ import annotations

from collections import deque

from .model import Strength, Violation, id_sort_key


def check_wellformed(state, include_coverage: bool = True) -> list[Violation]:
    violations: list[Violation] = []

    by_axie: dict[str, list] = {}
    for acc in state.acceptions.values():
        by_axie.setdefault(acc.axie_ref, []).append(acc)

    has_parent: set[str] = set()
    for axie in state.axies.values():
        for child, _label in axie.sub_links:
            has_parent.add(child)

    for axie_id in state.axies:
        axie = state.axies[axie_id]
        if axie_id in has_parent or axie.provisional:
            continue
        if not by_axie.get(axie_id):
            violations.append(Violation(
                "WF1", Strength.CRITICAL, (axie_id,),
                f"axie {axie_id} has no acception and no parent sub-acception"))

    for axie_id, accs in by_axie.items():
        if axie_id not in state.axies:
            continue  # reported per acception as WF3
        per_lang: dict[str, list[str]] = {}
        for acc in accs:
            per_lang.setdefault(acc.language, []).append(acc.id)
        for lang in sorted(per_lang):
            ids = sorted(per_lang[lang], key=id_sort_key)
            if len(ids) > 1:
                violations.append(Violation(
                    "WF2", Strength.CRITICAL, (axie_id, *ids),
                    f"axie {axie_id} holds {len(ids)} acceptions of {lang}: "
                    + ", ".join(ids)))

    for acc_id in state.acceptions:
        acc = state.acceptions[acc_id]
        if not acc.axie_ref or acc.axie_ref not in state.axies:
            violations.append(Violation(
                "WF3", Strength.CRITICAL, (acc_id,),
                f"acception {acc_id} references missing axie {acc.axie_ref!r}"))

    for component in _cyclic_components(state.axies):
        violations.append(Violation(
            "CyclicContrastive", Strength.CRITICAL, tuple(component),
            "sub-acception cycle through " + ", ".join(component)))

    if include_coverage:
        violations.extend(_coverage_warnings(state, by_axie))

    violations.sort(key=Violation.sort_key)
    return violations


def _cyclic_components(axies) -> list[list[str]]:
    """Strongly connected components of the sub-link graph that contain a
    cycle (size > 1, or a self-loop), as sorted id lists."""
    graph = {aid: [c for c, _ in axies[aid].sub_links if c in axies] for aid in axies}

    order: list[str] = []
    seen: set[str] = set()
    for start in graph:
        if start in seen:
            continue
        stack = [(start, iter(graph[start]))]
        seen.add(start)
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append((nxt, iter(graph[nxt])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()

    reverse: dict[str, list[str]] = {aid: [] for aid in graph}
    for aid, children in graph.items():
        for c in children:
            reverse[c].append(aid)

    assigned: set[str] = set()
    components: list[list[str]] = []
    for node in reversed(order):
        if node in assigned:
            continue
        component = []
        queue = deque([node])
        assigned.add(node)
        while queue:
            cur = queue.popleft()
            component.append(cur)
            for prev in reverse[cur]:
                if prev not in assigned:
                    assigned.add(prev)
                    queue.append(prev)
        if len(component) > 1 or component[0] in graph[component[0]]:
            components.append(sorted(component, key=id_sort_key))
    components.sort(key=lambda c: id_sort_key(c[0]))
    return components


def sub_descendants(state, axie_id: str) -> list[str]:
    """Breadth-first closure of sub-acceptions, excluding the start node."""
    out: list[str] = []
    seen = {axie_id}
    queue = deque([axie_id])
    while queue:
        cur = queue.popleft()
        axie = state.axies.get(cur)
        if axie is None:
            continue
        for child, _label in axie.sub_links:
            if child not in seen and child in state.axies:
                seen.add(child)
                out.append(child)
                queue.append(child)
    return out


def _coverage_warnings(state, by_axie) -> list[Violation]:
    out = []
    for src, tgt in sorted(state.coverage):
        for axie_id in sorted(state.axies, key=id_sort_key):
            accs = by_axie.get(axie_id, [])
            if not any(a.language == src for a in accs):
                continue
            if _covers(state, by_axie, axie_id, tgt):
                continue
            out.append(Violation(
                "T2", Strength.WARNING, (axie_id,),
                f"axie {axie_id} reachable from {src} has no {tgt} counterpart"))
    return out


def _covers(state, by_axie, axie_id: str, language: str) -> bool:
    def direct(aid: str) -> bool:
        return any(a.language == language for a in by_axie.get(aid, []))

    if direct(axie_id):
        return True
    for descendant in sub_descendants(state, axie_id):
        if direct(descendant):
            return True
    for quasi in state.axies[axie_id].quasi_links:
        if direct(quasi):
            return True
    return False
