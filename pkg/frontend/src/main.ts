// Application shell: wires the api client, browse state, wizard and inbox
// into the page. All rendering goes through the pure functions in
// render.ts/forms.ts; every mutation waits for the transaction outcome.

import { ApiClient, ApiError } from "./api.js";
import { countLeafFields, formFields, readForm, renderForm, FormValues } from "./forms.js";
import { renderInbox, InboxFilter } from "./inbox.js";
import { renderColumns, renderLanguageBar, renderViolation, esc } from "./render.js";
import {
    BrowseState, chooseSubPath, initialState, leafAcceptions, selectAcception,
    selectEntry, selectTarget, withEntries, withError,
} from "./state.js";
import type { SchemaInfo, SuggestedFix, TransactionJson } from "./types.js";
import { draftMutations, emptyDraft, fixMutations, IndexingDraft } from "./wizard.js";

const api = new ApiClient("");
let schema: SchemaInfo;
let state: BrowseState;
let draft: IndexingDraft;
let pendingFix: SuggestedFix | null = null;
let inboxFilter: InboxFilter = { strength: "", language: "" };

function $(id: string): HTMLElement {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el;
}

function repaint() {
    $("browse").innerHTML = renderColumns(state);
    $("language-bar").innerHTML = renderLanguageBar(
        schema.dictionaries.map(d => d.language),
        state.sourceLanguage, state.targetLanguage);
}

async function refreshEntries(prefix: string) {
    const entries = await api.entries(state.sourceLanguage, prefix);
    state = withEntries(state, prefix, entries);
    repaint();
}

async function refreshInbox() {
    const violations = await api.violations();
    $("inbox").innerHTML = renderInbox(violations, inboxFilter);
}

function renderWizardForm() {
    const dictionary = schema.dictionaries.find(
        d => d.language === state.sourceLanguage)!;
    const entryFields = formFields(dictionary.entryClass, schema.classes);
    const accFields = formFields(dictionary.acceptionClass, schema.classes);
    $("wizard-entry-form").innerHTML = renderForm(entryFields);
    $("wizard-acception-form").innerHTML = renderForm(accFields);
    const total = countLeafFields(entryFields) + countLeafFields(accFields);
    $("wizard-field-count").textContent = `${total} features`;
}

function collectForm(container: HTMLElement): FormValues {
    const values: FormValues = new Map();
    container.querySelectorAll<HTMLSelectElement>("select").forEach(el => {
        values.set(el.name, el.value);
    });
    container.querySelectorAll<HTMLInputElement>("input[type=text],input:not([type])")
        .forEach(el => values.set(el.name, el.value));
    container.querySelectorAll<HTMLInputElement>("input[type=checkbox]:checked")
        .forEach(el => {
            const prior = values.get(el.name);
            if (Array.isArray(prior)) prior.push(el.value);
            else values.set(el.name, [el.value]);
        });
    return values;
}

function showTransaction(txn: TransactionJson) {
    const box = $("txn-result");
    const lines = txn.violations.map(renderViolation).join("\n");
    box.innerHTML = `<p class="outcome ${txn.outcome}">${txn.outcome}</p>` +
        (lines ? `<ul>${lines}</ul>` : "");
    pendingFix = txn.violations.find(v => v.suggestedFix)?.suggestedFix ?? null;
}

async function submitDraft() {
    const dictionary = schema.dictionaries.find(
        d => d.language === state.sourceLanguage)!;
    const entryFields = formFields(dictionary.entryClass, schema.classes);
    const acceptionFields = formFields(dictionary.acceptionClass, schema.classes);
    draft = emptyDraft(state.sourceLanguage);
    draft.lemma = ($("wizard-lemma") as HTMLInputElement).value;
    draft.features = readForm(entryFields, collectForm($("wizard-entry-form")));
    const linkTo = ($("wizard-link") as HTMLInputElement).value.trim();
    draft.senses = [{
        displayName: "",
        features: readForm(acceptionFields, collectForm($("wizard-acception-form"))),
        action: linkTo
            ? (linkTo.startsWith("axie:")
                ? { kind: "link-axie", axieId: linkTo }
                : { kind: "link-acception", acceptionId: linkTo })
            : { kind: "none" },
    }];
    try {
        const txn = await api.submitTransaction(draftMutations(draft));
        showTransaction(txn);
        await refreshEntries(state.prefix);
        await refreshInbox();
    } catch (error) {
        if (error instanceof ApiError && error.transaction) {
            showTransaction(error.transaction);
        } else {
            state = withError(state, String(error));
            repaint();
        }
    }
}

async function applyPendingFix() {
    if (!pendingFix) return;
    const label = window.prompt("contrastive label", "") ?? "";
    try {
        const txn = await api.submitTransaction(fixMutations(pendingFix, label));
        showTransaction(txn);
        pendingFix = null;
        await refreshInbox();
    } catch (error) {
        if (error instanceof ApiError && error.transaction) {
            showTransaction(error.transaction);
        }
    }
}

async function onClick(event: Event) {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    event.preventDefault();
    const action = target.dataset.action!;
    try {
        if (action === "select-entry") {
            const entry = state.entries.find(e => e.id === target.dataset.id)!;
            state = selectEntry(state, entry);
            repaint();
        } else if (action === "select-acception") {
            const entry = state.selectedEntry!;
            const acception = leafAcceptions(entry)
                .find(a => a.id === target.dataset.id)!;
            const axie = await api.axie(acception.axie, 1);
            state = selectAcception(state, acception, axie);
            if (state.targetLanguage) {
                const translation = await api.translate(
                    entry.lemma, state.sourceLanguage, state.targetLanguage);
                state = selectTarget(state, state.targetLanguage, translation);
            }
            repaint();
        } else if (action === "choose-sub") {
            state = chooseSubPath(state, (target.dataset.path ?? "").split("/"));
            repaint();
        } else if (action === "validate-entry") {
            await api.validateEntry(target.dataset.id!);
            await refreshInbox();
        } else if (action === "apply-fix") {
            pendingFix = {
                action: "create-sub-acception",
                parentAxie: target.dataset.parent!,
                moveAcception: target.dataset.move!,
                label: "",
            };
            await applyPendingFix();
        }
    } catch (error) {
        state = withError(state, String(error));
        repaint();
    }
}

async function onChange(event: Event) {
    const target = event.target as HTMLSelectElement;
    const action = target.dataset.action;
    if (action === "set-source") {
        state = initialState(target.value);
        renderWizardForm();
        await refreshEntries("");
    } else if (action === "set-target") {
        if (!target.value) return;
        if (state.selectedEntry) {
            const translation = await api.translate(
                state.selectedEntry.lemma, state.sourceLanguage, target.value);
            state = selectTarget(state, target.value, translation);
        } else {
            state = { ...state, targetLanguage: target.value };
        }
        repaint();
    }
}

async function start() {
    schema = await api.dictionaries();
    state = initialState(schema.dictionaries[0].language);
    draft = emptyDraft(state.sourceLanguage);
    renderWizardForm();
    document.body.addEventListener("click", onClick);
    document.body.addEventListener("change", onChange);
    $("search").addEventListener("input", () =>
        refreshEntries(($("search") as HTMLInputElement).value));
    $("wizard-submit").addEventListener("click", event => {
        event.preventDefault();
        void submitDraft();
    });
    await refreshEntries("");
    await refreshInbox();
}

void start();
