// Browse-view state and its pure transitions. The render layer is a pure
// function of this state; every transition returns a fresh object.

import type {
    AcceptionView, AxieView, EntryJson, SenseJson, TranslationAcceptionJson,
    TranslationJson,
} from "./types.js";

export interface BrowseState {
    sourceLanguage: string;
    targetLanguage: string | null;
    prefix: string;
    entries: EntryJson[];
    selectedEntry: EntryJson | null;
    selectedAcception: AcceptionView | null;
    axie: AxieView | null;
    translation: TranslationJson | null;
    chosenSubPath: string[] | null;
    error: string | null;
}

export function initialState(sourceLanguage: string): BrowseState {
    return {
        sourceLanguage,
        targetLanguage: null,
        prefix: "",
        entries: [],
        selectedEntry: null,
        selectedAcception: null,
        axie: null,
        translation: null,
        chosenSubPath: null,
        error: null,
    };
}

export function leafAcceptions(entry: EntryJson): AcceptionView[] {
    const out: AcceptionView[] = [];
    const walk = (senses: SenseJson[]) => {
        for (const sense of senses) {
            if (sense.acception) out.push(sense.acception);
            if (sense.senses) walk(sense.senses);
        }
    };
    walk(entry.senses);
    return out;
}

export function withEntries(state: BrowseState, prefix: string,
                            entries: EntryJson[]): BrowseState {
    return { ...state, prefix, entries, error: null };
}

export function selectEntry(state: BrowseState, entry: EntryJson): BrowseState {
    return {
        ...state, selectedEntry: entry, selectedAcception: null,
        axie: null, translation: null, chosenSubPath: null, error: null,
    };
}

export function selectAcception(state: BrowseState, acception: AcceptionView,
                                axie: AxieView): BrowseState {
    return {
        ...state, selectedAcception: acception, axie,
        translation: null, chosenSubPath: null, error: null,
    };
}

export function selectTarget(state: BrowseState, language: string,
                             translation: TranslationJson): BrowseState {
    return {
        ...state, targetLanguage: language, translation,
        chosenSubPath: null, error: null,
    };
}

export function chooseSubPath(state: BrowseState, path: string[]): BrowseState {
    return { ...state, chosenSubPath: path, error: null };
}

export function withError(state: BrowseState, message: string): BrowseState {
    return { ...state, error: message };
}

export function selectedTranslation(state: BrowseState): TranslationAcceptionJson | null {
    if (!state.translation || !state.selectedAcception) return null;
    return state.translation.acceptions.find(
        a => a.acception === state.selectedAcception!.id) ?? null;
}
