// Guided indexing: an in-progress entry with its senses and, per sense,
// the chosen linking action. Nothing persists until the draft is
// submitted as one transaction; rejected drafts surface the violations
// and any suggested fix.

import type { FeatureValue, MutationJson, SuggestedFix } from "./types.js";

export type SenseAction =
    | { kind: "none" }
    | { kind: "link-acception"; acceptionId: string }
    | { kind: "link-axie"; axieId: string }
    | {
        kind: "create-target";
        targetLanguage: string;
        targetLemma: string;
        targetFeatures: FeatureValue;
        targetAcceptionFeatures: FeatureValue;
    };

export interface DraftSense {
    displayName: string;
    features: FeatureValue;
    action: SenseAction;
}

export interface IndexingDraft {
    language: string;
    lemma: string;
    features: FeatureValue;
    senses: DraftSense[];
}

export function emptyDraft(language: string): IndexingDraft {
    return { language, lemma: "", features: { fs: {} }, senses: [] };
}

// One transaction for the whole draft; `$n` placeholders wire later
// mutations to the ids allocated by earlier ones. `offset` shifts the
// placeholder base when the draft is prepended with other mutations.
export function draftMutations(draft: IndexingDraft, offset = 0): MutationJson[] {
    const mutations: MutationJson[] = [];
    const ref = () => `$${offset + mutations.length - 1}`;
    mutations.push({
        op: "createEntry",
        language: draft.language,
        lemma: draft.lemma,
        features: draft.features,
    });
    const entryRef = ref();
    for (const sense of draft.senses) {
        mutations.push({
            op: "addAcception",
            entry: entryRef,
            features: sense.features,
            displayName: sense.displayName,
        });
        const senseRef = ref();
        const action = sense.action;
        if (action.kind === "link-acception") {
            mutations.push({ op: "linkTranslation", a: senseRef, b: action.acceptionId });
        } else if (action.kind === "link-axie") {
            mutations.push({ op: "linkToAxie", acception: senseRef, axie: action.axieId });
        } else if (action.kind === "create-target") {
            mutations.push({
                op: "createEntry",
                language: action.targetLanguage,
                lemma: action.targetLemma,
                features: action.targetFeatures,
            });
            const targetEntryRef = ref();
            mutations.push({
                op: "addAcception",
                entry: targetEntryRef,
                features: action.targetAcceptionFeatures,
            });
            mutations.push({ op: "linkTranslation", a: senseRef, b: ref() });
        }
    }
    return mutations;
}

// The one-click resolution of a same-language conflict on existing
// articles: a contrastive sub-acception under the merged axie, with the
// refused acception moved onto it.
export function fixMutations(fix: SuggestedFix, label: string): MutationJson[] {
    return [
        { op: "makeSubAcception", parentAxie: fix.parentAxie, label },
        { op: "linkToAxie", acception: fix.moveAcception, axie: "$0" },
    ];
}

// Resubmission of a rejected draft: create the proposed contrastive
// sub-acception first, then the whole draft with the conflicting sense
// redirected onto it — still one atomic transaction.
export function draftMutationsWithFix(draft: IndexingDraft, senseIndex: number,
                                      fix: SuggestedFix,
                                      label: string): MutationJson[] {
    const redirected: IndexingDraft = {
        ...draft,
        senses: draft.senses.map((sense, i) =>
            i === senseIndex
                ? { ...sense, action: { kind: "link-axie" as const, axieId: "$0" } }
                : sense),
    };
    return [
        { op: "makeSubAcception", parentAxie: fix.parentAxie, label },
        ...draftMutations(redirected, 1),
    ];
}
