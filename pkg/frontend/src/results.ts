/**
 * Results panel: faceted record table with support and import actions.
 *
 * The facet dropdown re-requests the grouped view from the results endpoint;
 * import posts the marked record indices plus the selected target node, and
 * on success the page refreshes the tree so the new subtrees appear.
 */

import { importTarget, type UiState } from "./state.js";
import type { PublicationRecord, ResultGroup, SupportMaterial } from "./types.js";

export interface ResultsHandlers {
  onFacetChange: (facet: string) => void;
  onSupport: (recordIndex: number) => void;
  onToggleImport: (recordIndex: number) => void;
  onImport: () => void;
}

const FACETS = ["", "date", "forum", "author"];

function materialBadge(doc: Document, material: SupportMaterial): HTMLElement {
  const badge = doc.createElement("span");
  badge.className = material.verified ? "material verified" : "material unverified";
  const label = material.verified ? "verified" : "unverified";
  badge.textContent = `${material.kind} (${label}: ${material.evidence})`;
  if (material.url) {
    const anchor = doc.createElement("a");
    anchor.href = material.url;
    anchor.textContent = " ↗";
    anchor.target = "_blank";
    badge.appendChild(anchor);
  }
  return badge;
}

function recordRow(doc: Document, state: UiState, record: PublicationRecord,
                   index: number, handlers: ResultsHandlers): HTMLElement {
  const row = doc.createElement("tr");
  row.className = "record-row";
  row.setAttribute("data-record-index", String(index));

  const mark = doc.createElement("td");
  const checkbox = doc.createElement("input");
  checkbox.type = "checkbox";
  checkbox.className = "import-mark";
  checkbox.checked = state.pendingImport.has(index);
  checkbox.addEventListener("change", () => handlers.onToggleImport(index));
  mark.appendChild(checkbox);
  row.appendChild(mark);

  const title = doc.createElement("td");
  title.className = "record-title";
  if (record.url) {
    const anchor = doc.createElement("a");
    anchor.href = record.url;
    anchor.textContent = record.title;
    anchor.target = "_blank";
    title.appendChild(anchor);
  } else {
    title.textContent = record.title;
  }
  const meta = doc.createElement("div");
  meta.className = "record-meta";
  const venue = record.venue_norm ? record.venue_norm[0] : record.venue_raw;
  meta.textContent = [record.authors.join(", "), venue,
                      record.date ?? ""].filter(Boolean).join(" · ");
  title.appendChild(meta);
  const materials = state.supportByRecord.get(index) ?? [];
  if (materials.length > 0) {
    const list = doc.createElement("div");
    list.className = "record-materials";
    for (const material of materials) {
      list.appendChild(materialBadge(doc, material));
    }
    title.appendChild(list);
  }
  row.appendChild(title);

  const source = doc.createElement("td");
  source.textContent = record.source_id;
  row.appendChild(source);

  const actions = doc.createElement("td");
  const supportButton = doc.createElement("button");
  supportButton.className = "support-button";
  supportButton.textContent = "support";
  supportButton.addEventListener("click", () => handlers.onSupport(index));
  actions.appendChild(supportButton);
  row.appendChild(actions);

  return row;
}

function recordsTable(doc: Document, state: UiState, indices: number[],
                      handlers: ResultsHandlers): HTMLElement {
  const table = doc.createElement("table");
  table.className = "records";
  const body = doc.createElement("tbody");
  for (const index of indices) {
    const record = state.results!.records[index];
    body.appendChild(recordRow(doc, state, record, index, handlers));
  }
  table.appendChild(body);
  return table;
}

export function renderResults(container: HTMLElement, state: UiState,
                              handlers: ResultsHandlers): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  if (state.results === null) {
    return;
  }

  const header = doc.createElement("div");
  header.className = "results-header";
  const query = doc.createElement("span");
  query.className = "results-query";
  query.textContent = `query: ${state.results.query} · ` +
    `${state.results.records.length} records`;
  header.appendChild(query);

  const facetSelect = doc.createElement("select");
  facetSelect.className = "facet-select";
  for (const facet of FACETS) {
    const option = doc.createElement("option");
    option.value = facet;
    option.textContent = facet === "" ? "no facet" : `by ${facet}`;
    if (facet === state.facet) {
      option.selected = true;
    }
    facetSelect.appendChild(option);
  }
  facetSelect.addEventListener("change", () => handlers.onFacetChange(facetSelect.value));
  header.appendChild(facetSelect);

  const importButton = doc.createElement("button");
  importButton.className = "import-button";
  const target = importTarget(state);
  importButton.textContent = target === null
    ? "import (select one target node)"
    : `import ${state.pendingImport.size} → ${target}`;
  importButton.disabled = target === null || state.pendingImport.size === 0;
  importButton.addEventListener("click", () => handlers.onImport());
  header.appendChild(importButton);

  container.appendChild(header);

  const diagnostics = doc.createElement("div");
  diagnostics.className = "diagnostics";
  for (const [source, diag] of Object.entries(state.results.diagnostics)) {
    const chip = doc.createElement("span");
    chip.className = `diag diag-${diag.status}`;
    chip.textContent = diag.status === "ok"
      ? `${source}: ${diag.count}`
      : `${source}: ${diag.message ?? diag.status}`;
    diagnostics.appendChild(chip);
  }
  container.appendChild(diagnostics);

  const groups: ResultGroup[] = state.results.groups ??
    [{ label: "", record_indices: state.results.records.map((_r, i) => i) }];
  for (const group of groups) {
    const section = doc.createElement("section");
    section.className = "result-group";
    if (group.label !== "") {
      const heading = doc.createElement("h3");
      heading.className = "group-label";
      heading.textContent = `${group.label} (${group.record_indices.length})`;
      section.appendChild(heading);
    }
    section.appendChild(recordsTable(doc, state, group.record_indices, handlers));
    container.appendChild(section);
  }
}

export function renderTerms(container: HTMLElement, state: UiState): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  if (state.terms.length === 0) {
    return;
  }
  const heading = doc.createElement("h3");
  heading.textContent = "expansion terms";
  container.appendChild(heading);
  const list = doc.createElement("ol");
  list.className = "term-list";
  for (const term of state.terms) {
    const item = doc.createElement("li");
    item.className = "term";
    item.textContent = `${term.term} (${term.score.toFixed(3)})`;
    list.appendChild(item);
  }
  container.appendChild(list);
}
