import { describe, expect, it } from "vitest";

import {
    countLeafFields, fieldId, formFields, readForm, renderForm,
} from "../src/forms.js";
import type { TypeJson } from "../src/types.js";

// the French acception class, as served by /dictionaries
const classes: Record<string, TypeJson> = {
    "category": { kind: "one-of", symbols: ["nc", "np", "vb", "vbimp", "vbrefl",
                                            "adj", "card", "deict", "repr",
                                            "sub", "coord"] },
    "valency": { kind: "any-of", symbols: ["nom", "à+nom", "inf", "zéro"] },
    "french-acception": {
        kind: "fs",
        features: [
            { name: "cat", type: { kind: "class", name: "category" } },
            { name: "drvv", type: { kind: "fs", features: [
                { name: "deriv-kind", type: { kind: "one-of", symbols: ["naction", "verbe"] } },
                { name: "deriv-from", type: { kind: "symbol" } },
            ] } },
            { name: "val0", type: { kind: "class", name: "valency" } },
            { name: "gnr", type: { kind: "any-of", symbols: ["masc", "fem"] } },
            { name: "aux", type: { kind: "one-of", symbols: ["être", "avoir"] } },
        ],
    },
};

describe("schema-driven forms", () => {
    it("renders every feature of the class exactly once", () => {
        const fields = formFields("french-acception", classes);
        const html = renderForm(fields);
        const names = ["cat", "drvv", "deriv-kind", "deriv-from", "val0", "gnr", "aux"];
        for (const name of names) {
            const ids = html.match(new RegExp(`id="f-[^"]*${name}"`, "g")) ?? [];
            expect(ids.length, name).toBe(1);
        }
        expect(countLeafFields(fields)).toBe(6); // drvv is a group of two
    });

    it("maps one-of to a single select and any-of to checkboxes", () => {
        const html = renderForm(formFields("french-acception", classes));
        expect(html).toContain('<select id="f-aux"');
        expect(html).toContain('<option value="avoir">');
        expect(html).toContain('type="checkbox" name="f-gnr" value="masc"');
        expect(html).toContain('type="checkbox" name="f-gnr" value="fem"');
    });

    it("nests feature structures as collapsible groups", () => {
        const html = renderForm(formFields("french-acception", classes));
        expect(html).toContain('<details class="field group" id="f-drvv">');
        expect(html).toContain("<summary>drvv</summary>");
    });

    it("reads values back into the wire encoding", () => {
        const fields = formFields("french-acception", classes);
        const values = new Map<string, string | string[]>([
            ["f-cat", "vb"],
            ["f-aux", ""],
            ["f-gnr", ["masc", "fem"]],
            ["f-drvv.deriv-kind", "verbe"],
        ]);
        expect(readForm(fields, values)).toEqual({
            fs: {
                cat: { sym: "vb" },
                gnr: { set: [{ sym: "masc" }, { sym: "fem" }] },
                drvv: { fs: { "deriv-kind": { sym: "verbe" } } },
            },
        });
    });

    it("omits empty groups entirely", () => {
        const fields = formFields("french-acception", classes);
        const out = readForm(fields, new Map([["f-cat", "nc"]]));
        expect(out).toEqual({ fs: { cat: { sym: "nc" } } });
    });

    it("field ids follow the feature path", () => {
        const fields = formFields("french-acception", classes);
        const drvv = fields.find(f => f.label === "drvv")!;
        expect(fieldId(drvv.children![0])).toBe("f-drvv.deriv-kind");
    });
});
