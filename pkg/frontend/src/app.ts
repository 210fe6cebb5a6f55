/**
 * Application controller: glues the API client, the state and the renderers.
 *
 * Constructed with an explicit document and client so the same code runs in
 * the browser and under a headless DOM in tests. All failures surface in the
 * status bar; nothing is fatal.
 */

import { ApiRequestError, WorkbenchClient } from "./api.js";
import { renderResults, renderTerms, type ResultsHandlers } from "./results.js";
import {
  applyPreview,
  applyResults,
  applySupport,
  importTarget,
  initialState,
  refreshTree,
  setTree,
  toggleCollapsed,
  toggleImportMark,
  toggleNeighbourhood,
  toggleSelection,
  type UiState,
} from "./state.js";
import { autoCollapse, renderTree, type TreeHandlers } from "./tree.js";

export class App {
  readonly state: UiState;
  private readonly doc: Document;
  private readonly client: WorkbenchClient;
  private searching = false;

  constructor(doc: Document, client: WorkbenchClient) {
    this.doc = doc;
    this.client = client;
    this.state = initialState();
  }

  private panel(id: string): HTMLElement {
    const element = this.doc.getElementById(id);
    if (element === null) {
      throw new Error(`missing #${id} in the page shell`);
    }
    return element;
  }

  async start(): Promise<void> {
    await this.guard(async () => {
      const mindmap = await this.client.getMindmap();
      setTree(this.state, mindmap.root);
      autoCollapse(this.state, mindmap.root);
      const sources = await this.client.sources();
      this.state.status =
        `loaded map · sources: ${sources.sources.map((s) => s.name).join(", ")}`;
    });
    this.renderAll();
  }

  private async guard(action: () => Promise<void>): Promise<void> {
    try {
      await action();
    } catch (error) {
      if (error instanceof ApiRequestError) {
        this.state.status = `error ${error.code}: ${error.message}`;
      } else {
        this.state.status = `error: ${String(error)}`;
      }
    }
  }

  // interactions

  async select(nodeId: string): Promise<void> {
    toggleSelection(this.state, nodeId);
    await this.refreshPreview();
    this.renderAll();
  }

  async flag(nodeId: string): Promise<void> {
    if (this.state.selection.size === 0) {
      this.state.status = "select a node before refining its neighbourhood";
      this.renderAll();
      return;
    }
    toggleNeighbourhood(this.state, nodeId);
    await this.refreshPreview();
    this.renderAll();
  }

  private async refreshPreview(): Promise<void> {
    if (this.state.selection.size === 0) {
      this.state.neighbourhood.clear();
      this.state.terms = [];
      return;
    }
    await this.guard(async () => {
      const preview = await this.client.previewExpansion({
        selected_ids: [...this.state.selection],
        level: this.state.level,
        k: this.state.k,
        add_ids: [...this.state.addIds],
        remove_ids: [...this.state.removeIds],
      });
      applyPreview(this.state, preview);
    });
  }

  async search(): Promise<void> {
    if (this.searching) {
      return;
    }
    this.searching = true;
    await this.guard(async () => {
      const started = await this.client.search({
        base_query: this.state.baseQuery,
        selected_ids: [...this.state.selection],
        level: this.state.level,
        k: this.state.k,
      });
      const results = await this.client.results(started.task_id,
                                                this.state.facet || undefined);
      applyResults(this.state, started.task_id, results);
      this.state.status = `query: ${started.query}`;
    });
    this.searching = false;
    this.renderAll();
  }

  async changeFacet(facet: string): Promise<void> {
    this.state.facet = facet;
    if (this.state.taskId !== null) {
      await this.guard(async () => {
        const results = await this.client.results(this.state.taskId!,
                                                  facet || undefined);
        applyResults(this.state, this.state.taskId!, results);
      });
    }
    this.renderAll();
  }

  async support(recordIndex: number): Promise<void> {
    if (this.state.taskId === null) {
      return;
    }
    await this.guard(async () => {
      const response = await this.client.support(this.state.taskId!, recordIndex);
      applySupport(this.state, recordIndex, response.materials);
      const failures = Object.entries(response.errors);
      this.state.status = failures.length === 0
        ? `fetched ${response.materials.length} materials`
        : `some material lookups failed: ` +
          failures.map(([kind, err]) => `${kind}: ${err}`).join("; ");
    });
    this.renderAll();
  }

  async importMarked(): Promise<void> {
    const target = importTarget(this.state);
    if (this.state.taskId === null || target === null ||
        this.state.pendingImport.size === 0) {
      return;
    }
    await this.guard(async () => {
      const outcome = await this.client.importRecords(
        this.state.taskId!, [...this.state.pendingImport].sort((a, b) => a - b), target);
      const mindmap = await this.client.getMindmap();
      refreshTree(this.state, mindmap.root);
      this.state.pendingImport.clear();
      this.state.status =
        `imported ${outcome.imported}, skipped ${outcome.skipped} under ${target}`;
    });
    this.renderAll();
  }

  async save(): Promise<void> {
    await this.guard(async () => {
      const saved = await this.client.saveMindmap();
      this.state.status = `saved to ${saved.saved_to}`;
    });
    this.renderAll();
  }

  collapse(nodeId: string): void {
    toggleCollapsed(this.state, nodeId);
    this.renderAll();
  }

  // rendering

  renderAll(): void {
    const treeHandlers: TreeHandlers = {
      onSelect: (id) => void this.select(id),
      onFlag: (id) => void this.flag(id),
      onCollapse: (id) => this.collapse(id),
    };
    const resultsHandlers: ResultsHandlers = {
      onFacetChange: (facet) => void this.changeFacet(facet),
      onSupport: (index) => void this.support(index),
      onToggleImport: (index) => {
        toggleImportMark(this.state, index);
        this.renderAll();
      },
      onImport: () => void this.importMarked(),
    };
    renderTree(this.panel("tree-panel"), this.state, treeHandlers);
    renderTerms(this.panel("terms-panel"), this.state);
    renderResults(this.panel("results-panel"), this.state, resultsHandlers);
    this.panel("status-bar").textContent = this.state.status;
  }

  bindControls(): void {
    const query = this.panel("base-query") as HTMLInputElement;
    query.addEventListener("input", () => {
      this.state.baseQuery = query.value;
    });
    const level = this.panel("level-input") as HTMLInputElement;
    level.addEventListener("change", () => {
      this.state.level = Math.max(1, Number(level.value) || 1);
      void this.refreshPreview().then(() => this.renderAll());
    });
    const k = this.panel("k-input") as HTMLInputElement;
    k.addEventListener("change", () => {
      this.state.k = Math.max(0, Number(k.value) || 0);
      void this.refreshPreview().then(() => this.renderAll());
    });
    this.panel("search-button").addEventListener("click", () => void this.search());
    this.panel("save-button").addEventListener("click", () => void this.save());
  }
}

export function boot(doc: Document, baseUrl = ""): App {
  const app = new App(doc, new WorkbenchClient(baseUrl));
  app.bindControls();
  void app.start();
  return app;
}
