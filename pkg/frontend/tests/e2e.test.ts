// End-to-end: spawns the real service on the sample database and drives
// the workbench flows through it.

import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { renderColumns, renderTargetColumn, renderViolation } from "../src/render.js";
import {
    chooseSubPath, initialState, leafAcceptions, selectAcception, selectEntry,
    selectTarget, withEntries,
} from "../src/state.js";
import {
    draftMutations, draftMutationsWithFix, emptyDraft, fixMutations,
} from "../src/wizard.js";
import type { TransactionJson } from "../src/types.js";

const PY = process.env.PYTHON ?? "python3";
const PORT = 18000 + Math.floor(Math.random() * 10000);

let workdir: string;
let server: ChildProcess;
const api = new ApiClient(`http://127.0.0.1:${PORT}`);

async function waitReady(): Promise<void> {
    for (let i = 0; i < 120; i++) {
        try {
            await api.stats();
            return;
        } catch {
            await new Promise(r => setTimeout(r, 250));
        }
    }
    throw new Error("service did not come up");
}

beforeAll(async () => {
    workdir = mkdtempSync(join(tmpdir(), "nadia-e2e-"));
    execFileSync(PY, ["-c",
        "import sys; from nadia.fixtures import build_figures_db, parax_mldb_source;" +
        "build_figures_db(sys.argv[1]);" +
        "open(sys.argv[2], 'w', encoding='utf-8').write(parax_mldb_source())",
        join(workdir, "db"), join(workdir, "parax.dls")]);
    server = spawn(PY, ["-m", "nadia.cli",
        "--db", join(workdir, "db"), "--dls", join(workdir, "parax.dls"),
        "serve", "--bind", "127.0.0.1", "--port", String(PORT)],
        { stdio: "ignore" });
    await waitReady();
}, 60000);

afterAll(() => {
    server?.kill();
    rmSync(workdir, { recursive: true, force: true });
});

async function browseToTarget(target: string) {
    let state = initialState("français");
    state = withEntries(state, "épous", await api.entries("français", "épous"));
    const entry = state.entries[0];
    state = selectEntry(state, entry);
    const acception = leafAcceptions(entry)[0];
    state = selectAcception(state, acception, await api.axie(acception.axie, 1));
    const translation = await api.translate(entry.lemma, "français", target);
    return selectTarget(state, target, translation);
}

describe("browse flow against the live service", () => {
    it("reproduces the German translation on screen", async () => {
        const state = await browseToTarget("allemand");
        const html = renderColumns(state);
        expect(html).toContain("épouser_1");
        expect(html).toContain("#épouser_semarier");
        expect(html).toContain("CIBLE: allemand");
        expect(html).toContain("heiraten");
    }, 20000);

    it("walks the Russian gender split through the chooser", async () => {
        const state = await browseToTarget("russe");
        const prompt = renderTargetColumn(state);
        expect(prompt).toContain("choose a sub-acception");
        expect(prompt).not.toContain("жениться");
        expect(renderTargetColumn(chooseSubPath(state, ["homme"])))
            .toContain("жениться");
        expect(renderTargetColumn(chooseSubPath(state, ["femme"])))
            .toContain("замуж (выйти - за)");
    }, 20000);
});

describe("indexing wizard against the live service", () => {
    it("links a new English verb to the existing heiraten acception", async () => {
        const draft = emptyDraft("anglais");
        draft.lemma = "marry";
        draft.features = { fs: { category: { sym: "vb" } } };
        draft.senses = [{
            displayName: "",
            features: { fs: { cat: { sym: "vb" } } },
            action: { kind: "link-acception", acceptionId: "allemand:acc:1" },
        }];
        const txn = await api.submitTransaction(draftMutations(draft));
        expect(txn.outcome).toBe("committed");
        const axie = await api.axie("axie:1", 0);
        expect(axie.languages["français"].lemma).toBe("épouser");
        expect(axie.languages["allemand"].lemma).toBe("heiraten");
        expect(axie.languages["anglais"].lemma).toBe("marry");
        // the new sense shares the axie: visible in the middle column
        const merged = await api.entries("anglais", "marry");
        expect(leafAcceptions(merged[0])[0].axie).toBe("axie:1");
    }, 20000);

    it("resolves a same-language draft conflict through the offered fix",
       async () => {
        // a second French verb on heiraten_1's axie violates the
        // one-acception-per-language criterion; the fix proposes a
        // contrastive sub-acception and the draft resubmits onto it
        const draft = emptyDraft("français");
        draft.lemma = "se marier";
        draft.features = { fs: { category: { sym: "vb" } } };
        draft.senses = [{
            displayName: "",
            features: { fs: { cat: { sym: "vb" } } },
            action: { kind: "link-acception", acceptionId: "allemand:acc:1" },
        }];
        let rejection: TransactionJson | null = null;
        try {
            await api.submitTransaction(draftMutations(draft));
        } catch (error) {
            rejection = (error as ApiError).transaction;
        }
        expect(rejection?.outcome).toBe("rolledBack");
        const wf2 = rejection!.violations.find(v => v.code === "WF2")!;
        expect(renderViolation(wf2)).toContain("create contrastive sub-acception");

        const txn = await api.submitTransaction(
            draftMutationsWithFix(draft, 0, wf2.suggestedFix!, "réfl"));
        expect(txn.outcome).toBe("committed");
        const parent = await api.axie(wf2.suggestedFix!.parentAxie, 1);
        const sub = parent.subs.find(s => s.label === "réfl")!;
        expect(sub.languages!["français"].lemma).toBe("se marier");
        expect(parent.languages["français"].lemma).toBe("épouser");
    }, 20000);

    it("creates a flagged partial entry for an unindexed translation", async () => {
        const draft = emptyDraft("français");
        draft.lemma = "chanter";
        draft.features = { fs: { category: { sym: "vb" } } };
        draft.senses = [{
            displayName: "",
            features: { fs: { cat: { sym: "vb" } } },
            action: {
                kind: "create-target",
                targetLanguage: "anglais",
                targetLemma: "sing",
                targetFeatures: { fs: { category: { sym: "vb" } } },
                targetAcceptionFeatures: { fs: { cat: { sym: "vb" } } },
            },
        }];
        const txn = await api.submitTransaction(draftMutations(draft));
        expect(txn.outcome).toBe("committed");
        const targets = await api.entries("anglais", "sing");
        expect(targets).toHaveLength(1);
        expect(targets[0].validated).toBe(false); // to-complete flag
        let state = initialState("anglais");
        state = withEntries(state, "sing", targets);
        expect(renderColumns(state)).toContain("to-complete");
        const french = await api.entries("français", "chanter");
        expect(leafAcceptions(french[0])[0].axie)
            .toBe(leafAcceptions(targets[0])[0].axie);
    }, 20000);

    it("renders the suggested fix on a same-language conflict and applies it",
       async () => {
        let rejected: TransactionJson | null = null;
        try {
            await api.submitTransaction([
                { op: "linkTranslation", a: "français:acc:2", b: "français:acc:3" },
            ]);
        } catch (error) {
            expect(error).toBeInstanceOf(ApiError);
            rejected = (error as ApiError).transaction;
        }
        expect(rejected).not.toBeNull();
        expect(rejected!.outcome).toBe("rolledBack");
        const wf2 = rejected!.violations.find(v => v.code === "WF2")!;
        expect(wf2.suggestedFix).not.toBeNull();
        const html = renderViolation(wf2);
        expect(html).toContain("create contrastive sub-acception");
        expect(html).toContain(`data-parent="${wf2.suggestedFix!.parentAxie}"`);

        const fixTxn = await api.submitTransaction(
            fixMutations(wf2.suggestedFix!, "nuance"));
        expect(fixTxn.outcome).toBe("committed");
        const parent = await api.axie(wf2.suggestedFix!.parentAxie, 1);
        const nuance = parent.subs.find(s => s.label === "nuance")!;
        expect(nuance).toBeDefined();
        expect(nuance.languages!["français"].acception)
            .toBe(wf2.suggestedFix!.moveAcception);
    }, 20000);

    it("routes warnings to the inbox and clears them on validation", async () => {
        const draft = emptyDraft("français");
        draft.lemma = "épouser"; // homograph: warning strength
        draft.features = { fs: { category: { sym: "vb" } } };
        draft.senses = [];
        const txn = await api.submitTransaction(draftMutations(draft));
        expect(txn.outcome).toBe("committed");
        expect(txn.violations.map(v => v.code)).toContain("Homograph");
        let warnings = await api.violations("warning");
        expect(warnings.some(v => v.code === "Homograph")).toBe(true);
        await api.validateEntry(txn.results[0]!);
        warnings = await api.violations("warning");
        expect(warnings.some(v => v.code === "Homograph")).toBe(false);
    }, 20000);
});
