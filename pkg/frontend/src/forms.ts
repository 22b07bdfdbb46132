// Schema-driven form generation: one-of features become single selects,
// any-of features multi-selects, nested feature structures collapsible
// groups. Reading a form back produces the wire encoding of the values.

import { esc } from "./render.js";
import type { FeatureValue, TypeJson } from "./types.js";

export interface FieldSpec {
    path: string[];           // feature path inside the class
    label: string;
    control: "text" | "select" | "multi" | "group" | "json";
    options?: string[];
    children?: FieldSpec[];
}

function deref(t: TypeJson, classes: Record<string, TypeJson>): TypeJson {
    let current = t;
    while (current.kind === "class") {
        const next = classes[current.name];
        if (!next) throw new Error(`unknown class ${current.name}`);
        current = next;
    }
    return current;
}

export function formFields(className: string,
                           classes: Record<string, TypeJson>): FieldSpec[] {
    const body = deref({ kind: "class", name: className }, classes);
    if (body.kind !== "fs") throw new Error(`${className} is not a feature structure`);
    return fsFields(body, [], classes);
}

function fsFields(body: { features: { name: string; type: TypeJson }[] },
                  prefix: string[],
                  classes: Record<string, TypeJson>): FieldSpec[] {
    return body.features.map(({ name, type }) => {
        const t = deref(type, classes);
        const path = [...prefix, name];
        if (t.kind === "one-of") {
            return { path, label: name, control: "select" as const, options: t.symbols };
        }
        if (t.kind === "any-of") {
            return { path, label: name, control: "multi" as const, options: t.symbols };
        }
        if (t.kind === "string" || t.kind === "symbol") {
            return { path, label: name, control: "text" as const };
        }
        if (t.kind === "fs") {
            return { path, label: name, control: "group" as const,
                     children: fsFields(t, path, classes) };
        }
        return { path, label: name, control: "json" as const };
    });
}

export function fieldId(field: FieldSpec): string {
    return "f-" + field.path.join(".");
}

export function renderForm(fields: FieldSpec[]): string {
    return fields.map(renderField).join("\n");
}

function renderField(field: FieldSpec): string {
    const id = fieldId(field);
    if (field.control === "select") {
        const options = ['<option value="">—</option>',
            ...field.options!.map(s => `<option value="${esc(s)}">${esc(s)}</option>`)];
        return `<label class="field" for="${id}">${esc(field.label)}` +
            `<select id="${id}" name="${id}">${options.join("")}</select></label>`;
    }
    if (field.control === "multi") {
        const boxes = field.options!.map(s =>
            `<label class="option"><input type="checkbox" name="${id}" ` +
            `value="${esc(s)}"> ${esc(s)}</label>`).join("");
        return `<fieldset class="field" id="${id}">` +
            `<legend>${esc(field.label)}</legend>${boxes}</fieldset>`;
    }
    if (field.control === "group") {
        return `<details class="field group" id="${id}">` +
            `<summary>${esc(field.label)}</summary>` +
            renderForm(field.children!) + `</details>`;
    }
    if (field.control === "json") {
        return `<label class="field" for="${id}">${esc(field.label)}` +
            ` <input id="${id}" name="${id}" placeholder="json value"></label>`;
    }
    return `<label class="field" for="${id}">${esc(field.label)}` +
        ` <input id="${id}" name="${id}"></label>`;
}

export type FormValues = Map<string, string | string[]>;

export function readForm(fields: FieldSpec[], values: FormValues): FeatureValue {
    const out: Record<string, FeatureValue> = {};
    for (const field of fields) {
        const value = readField(field, values);
        if (value !== null) out[field.path[field.path.length - 1]] = value;
    }
    return { fs: out };
}

function readField(field: FieldSpec, values: FormValues): FeatureValue | null {
    const raw = values.get(fieldId(field));
    if (field.control === "group") {
        const inner = readForm(field.children!, values) as { fs: Record<string, FeatureValue> };
        return Object.keys(inner.fs).length ? inner : null;
    }
    if (raw === undefined || raw === "" ||
        (Array.isArray(raw) && raw.length === 0)) return null;
    if (field.control === "select") {
        return { sym: raw as string };
    }
    if (field.control === "multi") {
        const items = Array.isArray(raw) ? raw : [raw];
        return { set: items.map(s => ({ sym: s })) };
    }
    if (field.control === "json") {
        return JSON.parse(raw as string) as FeatureValue;
    }
    return raw as string;
}

export function countLeafFields(fields: FieldSpec[]): number {
    return fields.reduce((n, f) =>
        n + (f.control === "group" ? countLeafFields(f.children!) : 1), 0);
}
