// Warnings inbox: log entries filtered by strength and dictionary, with a
// validate action that clears an entry's warnings.

import { esc, renderViolation } from "./render.js";
import type { ViolationJson } from "./types.js";

export interface InboxFilter {
    strength: "" | "warning" | "delay" | "critical";
    language: string;
}

export function filterViolations(violations: ViolationJson[],
                                 filter: InboxFilter): ViolationJson[] {
    return violations.filter(v => {
        if (filter.strength && v.strength !== filter.strength) return false;
        if (filter.language &&
            !v.subjects.some(s => s.startsWith(filter.language + ":"))) return false;
        return true;
    });
}

function entrySubject(v: ViolationJson): string | null {
    return v.subjects.find(s => s.includes(":entry:")) ?? null;
}

export function renderInbox(violations: ViolationJson[],
                            filter: InboxFilter): string {
    const visible = filterViolations(violations, filter);
    if (!visible.length) {
        return `<p class="empty">inbox empty</p>`;
    }
    const items = visible.map(v => {
        const entry = entrySubject(v);
        const validate = entry && v.strength === "warning"
            ? ` <a href="#" data-action="validate-entry" data-id="${esc(entry)}">` +
              `validate entry</a>`
            : "";
        return renderViolation(v).replace("</li>", validate + "</li>");
    });
    return `<ul class="inbox">${items.join("\n")}</ul>`;
}
