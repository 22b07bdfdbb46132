// Pure HTML-string rendering of the three-column browse view:
// entry + acceptions | axie + sub-acceptions | target hits.

import { BrowseState, leafAcceptions, selectedTranslation } from "./state.js";
import type {
    AxieSub, AxieView, FeatureValue, TranslationAcceptionJson, ViolationJson,
} from "./types.js";

export function esc(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;")
        .replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function featureSummary(value: FeatureValue): string {
    if (typeof value === "string") return value;
    if ("sym" in value) return value.sym;
    if ("fs" in value) {
        return Object.entries(value.fs)
            .map(([k, v]) => `${k}:${featureSummary(v)}`).join(" ");
    }
    if ("set" in value) return "{" + value.set.map(featureSummary).join(",") + "}";
    if ("list" in value) return "[" + value.list.map(featureSummary).join(",") + "]";
    return "…";
}

export function renderColumns(state: BrowseState): string {
    return `<div class="columns">
<section class="column" id="col-entries">${renderEntryColumn(state)}</section>
<section class="column" id="col-axie">${renderAxieColumn(state)}</section>
<section class="column" id="col-target">${renderTargetColumn(state)}</section>
</div>
${state.error ? `<p class="error">${esc(state.error)}</p>` : ""}`;
}

export function renderEntryColumn(state: BrowseState): string {
    const parts = [`<h2>SOURCE: ${esc(state.sourceLanguage)}</h2>`];
    if (!state.entries.length) {
        parts.push(`<p class="empty">no entries</p>`);
    }
    for (const entry of state.entries) {
        const selected = state.selectedEntry?.id === entry.id;
        const flags = [
            entry.delayed ? "delayed" : "",
            entry.validated ? "" : "to-complete",
        ].filter(Boolean).join(" ");
        parts.push(`<div class="entry${selected ? " selected" : ""}">` +
            `<a href="#" data-action="select-entry" data-id="${esc(entry.id)}">` +
            `${esc(entry.lemma)}</a>` +
            (flags ? ` <span class="flags">${esc(flags)}</span>` : "") +
            `</div>`);
        if (selected) {
            for (const acception of leafAcceptions(entry)) {
                const current = state.selectedAcception?.id === acception.id;
                parts.push(`<div class="acception${current ? " selected" : ""}">` +
                    `<a href="#" data-action="select-acception" ` +
                    `data-id="${esc(acception.id)}" data-axie="${esc(acception.axie)}">` +
                    `${esc(acception.displayName)}</a> ` +
                    `<span class="features">${esc(featureSummary(acception.features))}</span>` +
                    `</div>`);
            }
        }
    }
    return parts.join("\n");
}

function renderSub(sub: AxieSub): string {
    const gloss = sub.gloss ? ` — ${esc(sub.gloss)}` : "";
    const langs = sub.languages
        ? Object.entries(sub.languages)
            .map(([lang, slot]) => `°${esc(lang)} ${esc(slot.lemma)}`).join(" ")
        : "";
    return `<li class="sub"><span class="label">${esc(sub.label)}</span>` +
        `${gloss}${langs ? ` <span class="langs">${langs}</span>` : ""}</li>`;
}

export function renderAxieColumn(state: BrowseState): string {
    const axie = state.axie;
    if (!axie) {
        return `<h2>acception</h2><p class="empty">select an acception</p>`;
    }
    const tags = axie.tags.map(t => `<span class="tag">°${esc(t)}</span>`).join(" ");
    const langs = Object.entries(axie.languages)
        .map(([lang, slot]) =>
            `<li>${esc(lang)}: ${esc(slot.displayName)} (${esc(slot.lemma)})</li>`)
        .join("\n");
    return `<h2>acception</h2>
<div class="axie">
<p class="mnemonic">${esc(axie.mnemonic || axie.id)}</p>
<p class="gloss">${esc(axie.gloss)}</p>
<p class="tags">${tags}</p>
<ul class="languages">${langs}</ul>
<ul class="subs">${axie.subs.map(renderSub).join("\n")}</ul>
</div>`;
}

function renderHits(chosen: string[] | null,
                    translation: TranslationAcceptionJson): string {
    const direct = translation.hits.filter(h => h.kind === "direct");
    if (direct.length) {
        return direct.map(h =>
            `<p class="hit">${esc(h.lemma)} <span class="detail">` +
            `${esc(h.displayName)}${h.delayed ? " (delayed)" : ""}</span></p>`).join("\n");
    }
    const subs = translation.hits.filter(h => h.kind === "sub");
    if (subs.length) {
        if (chosen === null) {
            const options = subs.map(h =>
                `<a href="#" class="sub-choice" data-action="choose-sub" ` +
                `data-path="${esc(h.path.join("/"))}">${esc(h.path.join(" / "))}</a>`);
            return `<p class="prompt">choose a sub-acception:</p>` + options.join(" ");
        }
        const key = chosen.join("/");
        const picked = subs.filter(h => h.path.join("/") === key);
        return picked.map(h =>
            `<p class="hit">${esc(h.lemma)} <span class="detail">` +
            `${esc(h.path.join(" / "))}${h.delayed ? " (delayed)" : ""}</span></p>`).join("\n");
    }
    const quasi = translation.hits.filter(h => h.kind === "quasi");
    if (quasi.length) {
        return quasi.map(h =>
            `<p class="hit">≈ ${esc(h.lemma)} <span class="detail">quasi</span></p>`).join("\n");
    }
    return `<p class="empty">untranslatable</p>`;
}

export function renderTargetColumn(state: BrowseState): string {
    const head = `<h2>CIBLE: ${esc(state.targetLanguage ?? "—")}</h2>`;
    if (!state.targetLanguage) {
        return head + `<p class="empty">select a target language</p>`;
    }
    const translation = selectedTranslation(state);
    if (!translation) {
        return head + `<p class="empty">select an acception</p>`;
    }
    return head + renderHits(state.chosenSubPath, translation);
}

export function renderLanguageBar(languages: string[], source: string,
                                  target: string | null): string {
    const options = (selected: string | null, action: string) => languages.map(l =>
        `<option value="${esc(l)}"${l === selected ? " selected" : ""}>${esc(l)}</option>`)
        .join("");
    return `<label>source <select data-action="set-source">` +
        `${options(source, "set-source")}</select></label>
<label>target <select data-action="set-target">` +
        `<option value=""${target ? "" : " selected"}>—</option>` +
        `${options(target, "set-target")}</select></label>`;
}

export function renderViolation(v: ViolationJson): string {
    const fix = v.suggestedFix
        ? ` <a href="#" data-action="apply-fix" ` +
          `data-parent="${esc(v.suggestedFix.parentAxie)}" ` +
          `data-move="${esc(v.suggestedFix.moveAcception)}" class="fix">` +
          `create contrastive sub-acception</a>`
        : "";
    return `<li class="violation ${esc(v.strength)}">` +
        `<span class="code">${esc(v.code)}</span> ${esc(v.message)}${fix}</li>`;
}
