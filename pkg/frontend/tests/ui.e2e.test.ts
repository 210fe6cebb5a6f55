/**
 * Headless UI acceptance run against the live fixture-backed service.
 *
 * A real DOM (happy-dom) renders the actual app, interactions go through
 * dispatched events, and assertions read the rendered tree as well as the
 * service API, so the whole loop is exercised: load map, select a node,
 * check the blue/green flags against the preview endpoint, search, fetch
 * support, import two records and watch the tree grow two subtrees.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { Window } from "happy-dom";
import { beforeAll, describe, expect, inject, it } from "vitest";

import { App } from "../src/app.js";
import { WorkbenchClient } from "../src/api.js";

const HERE = dirname(fileURLToPath(import.meta.url));


declare module "vitest" {
  interface ProvidedContext {
    serviceUrl: string;
  }
}

const nodeFetch: typeof fetch = (...args) => fetch(...args);

function pageShell(): Document {
  const html = readFileSync(join(HERE, "..", "index.html"), "utf-8");
  const window = new Window({
    url: "http://localhost/",
    settings: {
      disableCSSFileLoading: true,
      disableJavaScriptFileLoading: true,
      disableJavaScriptEvaluation: true,
    },
  });
  window.document.write(html);
  return window.document as unknown as Document;
}

async function waitFor<T>(probe: () => T | null | undefined | false,
                          what: string, timeoutMs = 10000): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    const value = probe();
    if (value) {
      return value;
    }
    await new Promise((r) => setTimeout(r, 50));
  }
  throw new Error(`timed out waiting for ${what}`);
}

function click(doc: Document, element: Element, shiftKey = false): void {
  const window = doc.defaultView!;
  element.dispatchEvent(new window.MouseEvent("click",
                                              { bubbles: true, shiftKey }));
}

function treeRow(doc: Document, nodeId: string): Element {
  const item = doc.querySelector(`[data-node-id="${nodeId}"]`);
  if (item === null) {
    throw new Error(`node ${nodeId} not rendered`);
  }
  return item.querySelector(".tree-row")!;
}

describe("workbench UI against the fixture service", () => {
  const serviceUrl = inject("serviceUrl");
  let doc: Document;
  let app: App;
  let client: WorkbenchClient;

  beforeAll(async () => {
    doc = pageShell();
    client = new WorkbenchClient(serviceUrl, nodeFetch);
    app = new App(doc, client);
    app.bindControls();
    await app.start();
  });

  it("loads the map and shows the microRNA root", async () => {
    const label = await waitFor(
      () => doc.querySelector('[data-node-id="root"] .tree-label'),
      "root node label");
    expect(label.textContent).toBe("microRNA");
  });

  it("selecting a node shows blue/green flags that match the preview API", async () => {
    click(doc, treeRow(doc, "nb").querySelector(".tree-label")!);
    await waitFor(() => treeRow(doc, "nb").querySelector(".flag-blue"),
                  "blue flag on the selected node");

    const preview = await client.previewExpansion({
      selected_ids: ["nb"], level: 1, k: 4, add_ids: [], remove_ids: [],
    });
    const greenExpected = preview.neighbourhood_ids.filter((id) => id !== "nb");
    for (const id of greenExpected) {
      await waitFor(() => treeRow(doc, id).querySelector(".flag-green"),
                    `green flag on ${id}`);
    }
    const greenRendered = [...doc.querySelectorAll(".flag-green")]
      .map((flag) => flag.closest("[data-node-id]")!.getAttribute("data-node-id"))
      .sort();
    expect(greenRendered).toEqual(greenExpected.sort());

    const terms = await waitFor(() => {
      const items = [...doc.querySelectorAll("#terms-panel .term")];
      return items.length > 0 ? items : null;
    }, "expansion term preview");
    expect(terms.map((t) => t.textContent?.split(" ")[0])).toContain("methods");
  });

  it("unmarking a green node refreshes the term list from the API", async () => {
    click(doc, treeRow(doc, "t11").querySelector(".tree-label")!, true);
    await waitFor(() => treeRow(doc, "t11").querySelector(".flag-green") === null,
                  "green flag removed");
    await waitFor(() => {
      const terms = [...doc.querySelectorAll("#terms-panel .term")]
        .map((t) => t.textContent?.split(" ")[0]);
      return !terms.includes("prediction") ? true : null;
    }, "terms without the unmarked node's vocabulary");

    // mark it back for the search below
    click(doc, treeRow(doc, "t11").querySelector(".tree-label")!, true);
    await waitFor(() => treeRow(doc, "t11").querySelector(".flag-green"),
                  "green flag restored");
  });

  it("runs a search and renders the faceted results", async () => {
    const queryInput = doc.getElementById("base-query") as HTMLInputElement;
    queryInput.value = "Naive Bayes";
    queryInput.dispatchEvent(new (doc.defaultView!).Event("input", { bubbles: true }));

    click(doc, doc.getElementById("search-button")!);
    const rows = await waitFor(() => {
      const found = doc.querySelectorAll(".record-row");
      return found.length > 0 ? found : null;
    }, "result rows");
    expect(rows.length).toBe(7);
    expect(doc.querySelector(".results-query")!.textContent).toContain("7 records");
    expect(doc.querySelector(".diag-ok")).not.toBeNull();
  });

  it("support fetch shows a verified badge with evidence", async () => {
    const naiveRow = await waitFor(() => {
      return [...doc.querySelectorAll(".record-row")].find((row) =>
        row.querySelector(".record-title")!.textContent!.startsWith("Naive Bayes"));
    }, "the classifier paper row");
    click(doc, naiveRow.querySelector(".support-button")!);
    // the panel re-renders after the fetch, so query the document fresh
    const badge = await waitFor(
      () => doc.querySelector("#results-panel .material.verified"),
      "verified material badge");
    expect(badge!.textContent).toContain("verified");
    expect(badge!.textContent).toContain("title-substring");
  });

  it("importing two records grows the tree by two subtrees", async () => {
    // direct children of the target node only, not nested subtree internals
    const directChildren = '[data-node-id="nb"] > .tree-children > [data-node-id]';
    const before = doc.querySelectorAll(directChildren).length;

    const rows = [...doc.querySelectorAll(".record-row")];
    const naive = rows.find((row) => row.querySelector(".record-title")!
      .textContent!.startsWith("Naive Bayes"))!;
    const krek = rows.find((row) => row.querySelector(".record-title")!
      .textContent!.startsWith("Combinatorial"))!;
    for (const row of [naive, krek]) {
      const mark = row.querySelector(".import-mark") as HTMLInputElement;
      mark.checked = true;
      mark.dispatchEvent(new (doc.defaultView!).Event("change", { bubbles: true }));
    }
    const importButton = await waitFor(() => {
      const button = doc.querySelector(".import-button") as HTMLButtonElement;
      return button && !button.disabled ? button : null;
    }, "enabled import button");
    click(doc, importButton);

    await waitFor(() => {
      const status = doc.getElementById("status-bar")!.textContent ?? "";
      return status.includes("imported 2") ? true : null;
    }, "import confirmation");

    // the rendered tree gained two subtrees under the target node
    const subtreeRoots = await waitFor(() => {
      const children = doc.querySelectorAll(directChildren);
      return children.length >= 2 ? children : null;
    }, "two imported subtrees in the tree view");
    expect(subtreeRoots.length - before).toBe(2);
    const texts = [...subtreeRoots].map(
      (item) => item.querySelector(".tree-label")!.textContent);
    expect(texts.some((t) => t!.startsWith("Naive Bayes for microRNA"))).toBe(true);

    // the service agrees with the rendered view
    const tree = await client.getMindmap();
    const stack = [tree.root];
    let nbChildren = 0;
    while (stack.length > 0) {
      const node = stack.pop()!;
      if (node.id === "nb") {
        nbChildren = node.children.length;
      }
      stack.push(...node.children);
    }
    expect(nbChildren).toBe(2);
  });
});
