// Wire types mirroring the service's JSON encodings.

export type FeatureValue =
    | string
    | { sym: string }
    | { fs: Record<string, FeatureValue> }
    | { set: FeatureValue[] }
    | { list: FeatureValue[] }
    | { tree: TreeValue }
    | { graph: GraphValue }
    | { automaton: AutomatonValue };

export interface TreeValue {
    node: FeatureValue;
    children: TreeValue[];
}

export interface GraphValue {
    nodes: { id: string; value: FeatureValue | null }[];
    edges: { from: string; to: string; label: string }[];
}

export interface AutomatonValue {
    states: string[];
    alphabet: string[];
    transitions: [string, string, string][];
    start: string;
    finals: string[];
}

export type TypeJson =
    | { kind: "string" }
    | { kind: "symbol" }
    | { kind: "automaton" }
    | { kind: "one-of"; symbols: string[] }
    | { kind: "any-of"; symbols: string[] }
    | { kind: "class"; name: string }
    | { kind: "fs"; features: { name: string; type: TypeJson }[] }
    | { kind: "list-of" | "set-of" | "tree-of" | "graph-of"; elem: TypeJson };

export interface DictionaryInfo {
    name: string;
    language: string;
    languageLabel: string;
    entryClass: string;
    acceptionClass: string;
}

export interface SchemaInfo {
    database: string;
    schemaHash: string;
    dictionaries: DictionaryInfo[];
    classes: Record<string, TypeJson>;
}

export interface AcceptionView {
    id: string;
    displayName: string;
    axie: string;
    delayed: boolean;
    features: FeatureValue;
}

export interface SenseJson {
    acception?: AcceptionView;
    senses?: SenseJson[];
}

export interface EntryJson {
    id: string;
    language: string;
    lemma: string;
    validated: boolean;
    delayed: boolean;
    features: FeatureValue;
    senses: SenseJson[];
}

export interface AxieLanguageSlot {
    acception: string;
    displayName: string;
    entryId: string;
    lemma: string;
    delayed: boolean;
}

export interface AxieView {
    id: string;
    mnemonic: string;
    gloss: string;
    tags: string[];
    provisional: boolean;
    languages: Record<string, AxieLanguageSlot>;
    subs: AxieSub[];
    quasi: string[];
}

export type AxieSub = ({ label: string; id: string } & Partial<AxieView>);

export interface SuggestedFix {
    action: string;
    parentAxie: string;
    moveAcception: string;
    label: string;
}

export interface ViolationJson {
    code: string;
    strength: "warning" | "delay" | "critical";
    subjects: string[];
    message: string;
    suggestedFix: SuggestedFix | null;
}

export interface TransactionJson {
    seq: number;
    outcome: "committed" | "rolledBack";
    violations: ViolationJson[];
    results: (string | null)[];
    events: [string, string][];
}

export interface TranslationHitJson {
    kind: "direct" | "sub" | "quasi";
    path: string[];
    acceptionId: string;
    displayName: string;
    entryId: string;
    lemma: string;
    delayed: boolean;
}

export interface TranslationAcceptionJson {
    acception: string;
    displayName: string;
    axie: string;
    untranslatable: boolean;
    hits: TranslationHitJson[];
}

export interface TranslationJson {
    lemma: string;
    from: string;
    to: string;
    acceptions: TranslationAcceptionJson[];
}

export type MutationJson = { op: string } & Record<string, unknown>;

export interface StatsJson {
    perDictionary: Record<string, { entries: number; acceptions: number }>;
    axieCount: number;
    subAcceptionCount: number;
}
