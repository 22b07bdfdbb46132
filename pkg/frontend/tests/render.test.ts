import { describe, expect, it } from "vitest";

import { renderColumns, renderTargetColumn, featureSummary } from "../src/render.js";
import {
    chooseSubPath, initialState, selectAcception, selectEntry, selectTarget,
    withEntries,
} from "../src/state.js";
import type { AxieView, EntryJson, TranslationJson } from "../src/types.js";

const epouser: EntryJson = {
    id: "français:entry:1",
    language: "français",
    lemma: "épouser",
    validated: true,
    delayed: false,
    features: { fs: { category: { sym: "vb" } } },
    senses: [1, 2, 3].map(i => ({
        acception: {
            id: `français:acc:${i}`,
            displayName: `épouser_${i}`,
            axie: `axie:${i}`,
            delayed: false,
            features: { fs: { cat: { sym: "vb" } } },
        },
    })),
};

const semarier: AxieView = {
    id: "axie:1",
    mnemonic: "#épouser_semarier",
    gloss: "prendre pour époux, épouse, se marier avec",
    tags: ["al", "an", "fr"],
    provisional: false,
    languages: {
        "français": { acception: "français:acc:1", displayName: "épouser_1",
                      entryId: "français:entry:1", lemma: "épouser", delayed: false },
        "allemand": { acception: "allemand:acc:1", displayName: "heiraten_1",
                      entryId: "allemand:entry:1", lemma: "heiraten", delayed: false },
    },
    subs: [
        { label: "homme", id: "axie:5" },
        { label: "femme", id: "axie:6" },
        { label: "relig", id: "axie:7" },
    ],
    quasi: [],
};

const german: TranslationJson = {
    lemma: "épouser", from: "français", to: "allemand",
    acceptions: [{
        acception: "français:acc:1", displayName: "épouser_1", axie: "axie:1",
        untranslatable: false,
        hits: [{ kind: "direct", path: [], acceptionId: "allemand:acc:1",
                 displayName: "heiraten_1", entryId: "allemand:entry:1",
                 lemma: "heiraten", delayed: false }],
    }],
};

const russian: TranslationJson = {
    lemma: "épouser", from: "français", to: "russe",
    acceptions: [{
        acception: "français:acc:1", displayName: "épouser_1", axie: "axie:1",
        untranslatable: false,
        hits: [
            { kind: "sub", path: ["homme"], acceptionId: "russe:acc:1",
              displayName: "жениться_1", entryId: "russe:entry:1",
              lemma: "жениться", delayed: false },
            { kind: "sub", path: ["femme"], acceptionId: "russe:acc:2",
              displayName: "замуж_1", entryId: "russe:entry:2",
              lemma: "замуж (выйти - за)", delayed: false },
        ],
    }],
};

function browseTo(target: "de" | "ru") {
    let state = initialState("français");
    state = withEntries(state, "épous", [epouser]);
    state = selectEntry(state, epouser);
    state = selectAcception(state, epouser.senses[0].acception!, semarier);
    if (target === "de") return selectTarget(state, "allemand", german);
    return selectTarget(state, "russe", russian);
}

describe("three-column browse view", () => {
    it("always renders the three columns", () => {
        for (const state of [initialState("français"), browseTo("de"), browseTo("ru")]) {
            const html = renderColumns(state);
            expect(html).toContain('id="col-entries"');
            expect(html).toContain('id="col-axie"');
            expect(html).toContain('id="col-target"');
        }
    });

    it("lists the selected entry's acceptions", () => {
        let state = withEntries(initialState("français"), "épous", [epouser]);
        state = selectEntry(state, epouser);
        const html = renderColumns(state);
        for (const name of ["épouser_1", "épouser_2", "épouser_3"]) {
            expect(html).toContain(name);
        }
    });

    it("shows the axie with gloss and sub-acceptions", () => {
        const html = renderColumns(browseTo("de"));
        expect(html).toContain("#épouser_semarier");
        expect(html).toContain("prendre pour époux");
        for (const label of ["homme", "femme", "relig"]) {
            expect(html).toContain(label);
        }
    });

    it("shows a direct German hit in the right column", () => {
        const html = renderColumns(browseTo("de"));
        expect(html).toContain("heiraten");
        expect(html).toContain("CIBLE: allemand");
    });

    it("prompts for a sub-acception before revealing Russian lemmas", () => {
        const state = browseTo("ru");
        const before = renderTargetColumn(state);
        expect(before).toContain("choose a sub-acception");
        expect(before).not.toContain("жениться");
        const after = renderTargetColumn(chooseSubPath(state, ["homme"]));
        expect(after).toContain("жениться");
        expect(after).not.toContain("замуж");
        const other = renderTargetColumn(chooseSubPath(state, ["femme"]));
        expect(other).toContain("замуж (выйти - за)");
    });

    it("is a pure function of the state", () => {
        const state = browseTo("ru");
        expect(renderColumns(state)).toBe(renderColumns(state));
        const copy = JSON.parse(JSON.stringify(state));
        expect(renderColumns(copy)).toBe(renderColumns(state));
    });

    it("escapes markup in data", () => {
        const hostile = { ...epouser, lemma: `<script>alert(1)</script>` };
        const state = withEntries(initialState("français"), "", [hostile]);
        const html = renderColumns(state);
        expect(html).not.toContain("<script>alert");
        expect(html).toContain("&lt;script&gt;");
    });
});

describe("feature summaries", () => {
    it("renders atoms, strings, sets and nested structures", () => {
        expect(featureSummary({ sym: "vb" })).toBe("vb");
        expect(featureSummary("épouser")).toBe("épouser");
        expect(featureSummary({ set: [{ sym: "masc" }, { sym: "fem" }] }))
            .toBe("{masc,fem}");
        expect(featureSummary({ fs: { cat: { sym: "vb" } } })).toBe("cat:vb");
    });
});
