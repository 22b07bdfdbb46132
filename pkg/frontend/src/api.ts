// HTTP client for the service. Every mutation returns the transaction
// outcome; rejected transactions surface as ApiError with the payload.

import type {
    AxieView, EntryJson, MutationJson, SchemaInfo, StatsJson,
    TransactionJson, TranslationJson, ViolationJson,
} from "./types.js";

export class ApiError extends Error {
    status: number;
    transaction: TransactionJson | null;

    constructor(status: number, message: string, transaction: TransactionJson | null) {
        super(message);
        this.status = status;
        this.transaction = transaction;
    }
}

export class ApiClient {
    base: string;
    actor: string;

    constructor(base = "", actor = "workbench") {
        this.base = base.replace(/\/$/, "");
        this.actor = actor;
    }

    private async request(method: string, path: string, body?: unknown): Promise<unknown> {
        const response = await fetch(this.base + path, {
            method,
            headers: {
                "Content-Type": "application/json",
                "X-Actor": this.actor,
            },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const text = await response.text();
        let payload: unknown = null;
        try {
            payload = text ? JSON.parse(text) : null;
        } catch {
            payload = null;
        }
        if (!response.ok) {
            const record = payload as Record<string, unknown> | null;
            const transaction = record && "outcome" in record
                ? (payload as TransactionJson) : null;
            const message = record && typeof record.error === "string"
                ? record.error : `HTTP ${response.status}`;
            throw new ApiError(response.status, message, transaction);
        }
        return payload;
    }

    dictionaries(): Promise<SchemaInfo> {
        return this.request("GET", "/dictionaries") as Promise<SchemaInfo>;
    }

    async entries(lang: string, prefix: string): Promise<EntryJson[]> {
        const query = `?lang=${encodeURIComponent(lang)}&prefix=${encodeURIComponent(prefix)}`;
        const body = await this.request("GET", "/entries" + query);
        return (body as { entries: EntryJson[] }).entries;
    }

    axie(id: string, depth = 1): Promise<AxieView> {
        const query = `?depth=${depth}`;
        return this.request("GET", `/axies/${encodeURIComponent(id)}` + query) as Promise<AxieView>;
    }

    translate(lemma: string, from: string, to: string): Promise<TranslationJson> {
        return this.request("POST", "/translate", { lemma, from, to }) as Promise<TranslationJson>;
    }

    submitTransaction(mutations: MutationJson[]): Promise<TransactionJson> {
        return this.request("POST", "/transactions", { mutations }) as Promise<TransactionJson>;
    }

    async violations(strength?: string): Promise<ViolationJson[]> {
        const query = strength ? `?strength=${encodeURIComponent(strength)}` : "";
        const body = await this.request("GET", "/violations" + query);
        return (body as { violations: ViolationJson[] }).violations;
    }

    validateEntry(entryId: string): Promise<TransactionJson> {
        return this.request("POST",
            `/entries/${encodeURIComponent(entryId)}/validate`) as Promise<TransactionJson>;
    }

    entry(id: string): Promise<EntryJson> {
        return this.request("GET", `/entries/${encodeURIComponent(id)}`) as Promise<EntryJson>;
    }

    stats(): Promise<StatsJson> {
        return this.request("GET", "/stats") as Promise<StatsJson>;
    }
}
