import { describe, expect, it } from "vitest";

import {
    draftMutations, draftMutationsWithFix, emptyDraft, fixMutations,
} from "../src/wizard.js";

describe("indexing drafts", () => {
    it("links a sense to an existing target acception in one transaction", () => {
        const draft = emptyDraft("français");
        draft.lemma = "se marier";
        draft.features = { fs: { category: { sym: "vb" } } };
        draft.senses = [{
            displayName: "",
            features: { fs: { cat: { sym: "vb" } } },
            action: { kind: "link-acception", acceptionId: "allemand:acc:1" },
        }];
        expect(draftMutations(draft)).toEqual([
            { op: "createEntry", language: "français", lemma: "se marier",
              features: { fs: { category: { sym: "vb" } } } },
            { op: "addAcception", entry: "$0", displayName: "",
              features: { fs: { cat: { sym: "vb" } } } },
            { op: "linkTranslation", a: "$1", b: "allemand:acc:1" },
        ]);
    });

    it("creates a partial target entry when the translation is unindexed", () => {
        const draft = emptyDraft("français");
        draft.lemma = "chanter";
        draft.senses = [{
            displayName: "",
            features: { fs: {} },
            action: {
                kind: "create-target",
                targetLanguage: "anglais",
                targetLemma: "sing",
                targetFeatures: { fs: {} },
                targetAcceptionFeatures: { fs: {} },
            },
        }];
        const mutations = draftMutations(draft);
        expect(mutations.map(m => m.op)).toEqual([
            "createEntry", "addAcception", "createEntry", "addAcception",
            "linkTranslation"]);
        expect(mutations[2]).toMatchObject({ language: "anglais", lemma: "sing" });
        expect(mutations[3]).toMatchObject({ entry: "$2" });
        expect(mutations[4]).toMatchObject({ a: "$1", b: "$3" });
    });

    it("keeps multi-sense drafts atomic with correct placeholders", () => {
        const draft = emptyDraft("français");
        draft.lemma = "porter";
        draft.senses = [
            { displayName: "", features: { fs: {} }, action: { kind: "none" } },
            { displayName: "", features: { fs: {} },
              action: { kind: "link-axie", axieId: "axie:7" } },
        ];
        const mutations = draftMutations(draft);
        expect(mutations.map(m => m.op)).toEqual([
            "createEntry", "addAcception", "addAcception", "linkToAxie"]);
        expect(mutations[2]).toMatchObject({ entry: "$0" });
        expect(mutations[3]).toMatchObject({ acception: "$2", axie: "axie:7" });
    });

    it("turns a suggested fix into sub-acception + relink", () => {
        expect(fixMutations({
            action: "create-sub-acception", parentAxie: "axie:1",
            moveAcception: "français:acc:9", label: "",
        }, "nuance")).toEqual([
            { op: "makeSubAcception", parentAxie: "axie:1", label: "nuance" },
            { op: "linkToAxie", acception: "français:acc:9", axie: "$0" },
        ]);
    });

    it("resubmits a rejected draft onto the proposed sub-acception", () => {
        const draft = emptyDraft("français");
        draft.lemma = "se marier";
        draft.senses = [{
            displayName: "",
            features: { fs: {} },
            action: { kind: "link-acception", acceptionId: "allemand:acc:1" },
        }];
        const fix = { action: "create-sub-acception", parentAxie: "axie:1",
                      moveAcception: "français:acc:4", label: "" };
        const mutations = draftMutationsWithFix(draft, 0, fix, "réfl");
        expect(mutations.map(m => m.op)).toEqual([
            "makeSubAcception", "createEntry", "addAcception", "linkToAxie"]);
        expect(mutations[0]).toMatchObject({ parentAxie: "axie:1", label: "réfl" });
        expect(mutations[2]).toMatchObject({ entry: "$1" });
        expect(mutations[3]).toMatchObject({ acception: "$2", axie: "$0" });
    });
});
