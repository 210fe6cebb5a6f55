/**
 * UI state and its transitions.
 *
 * Everything here is pure data plus synchronous transition functions, so the
 * whole interaction flow can be exercised headlessly: feed in API payloads,
 * assert the state, render, assert the DOM. Selection carries the blue
 * flags, the previewed neighbourhood the green ones; user overrides of the
 * neighbourhood travel as add/remove sets on the next preview call.
 */

import type {
  MindmapNode,
  PreviewResponse,
  ResultsResponse,
  SupportMaterial,
  TermScore,
} from "./types.js";

export interface UiState {
  tree: MindmapNode | null;
  selection: Set<string>;
  neighbourhood: Set<string>;
  addIds: Set<string>;
  removeIds: Set<string>;
  level: number;
  k: number;
  terms: TermScore[];
  baseQuery: string;
  taskId: string | null;
  results: ResultsResponse | null;
  facet: string;
  pendingImport: Set<number>;
  supportByRecord: Map<number, SupportMaterial[]>;
  collapsed: Set<string>;
  status: string;
}

export function initialState(): UiState {
  return {
    tree: null,
    selection: new Set(),
    neighbourhood: new Set(),
    addIds: new Set(),
    removeIds: new Set(),
    level: 1,
    k: 4,
    terms: [],
    baseQuery: "",
    taskId: null,
    results: null,
    facet: "",
    pendingImport: new Set(),
    supportByRecord: new Map(),
    collapsed: new Set(),
    status: "",
  };
}

export function setTree(state: UiState, tree: MindmapNode): void {
  state.tree = tree;
  state.selection.clear();
  state.neighbourhood.clear();
  state.addIds.clear();
  state.removeIds.clear();
  state.terms = [];
}

/** Click: toggle the blue selection flag. */
export function toggleSelection(state: UiState, nodeId: string): void {
  if (state.selection.has(nodeId)) {
    state.selection.delete(nodeId);
  } else {
    state.selection.add(nodeId);
  }
  // a fresh selection invalidates previous manual refinements
  state.addIds.clear();
  state.removeIds.clear();
}

/** Shift-click: mark/unmark a node of the green neighbourhood. */
export function toggleNeighbourhood(state: UiState, nodeId: string): void {
  if (state.neighbourhood.has(nodeId)) {
    // currently green: request its removal unless it was a manual add
    if (state.addIds.has(nodeId)) {
      state.addIds.delete(nodeId);
    } else {
      state.removeIds.add(nodeId);
    }
    state.neighbourhood.delete(nodeId);
  } else {
    if (state.removeIds.has(nodeId)) {
      state.removeIds.delete(nodeId);
    } else {
      state.addIds.add(nodeId);
    }
    state.neighbourhood.add(nodeId);
  }
}

export function applyPreview(state: UiState, response: PreviewResponse): void {
  state.neighbourhood = new Set(response.neighbourhood_ids);
  state.terms = response.terms;
}

export function applyResults(state: UiState, taskId: string,
                             response: ResultsResponse): void {
  // re-faceting the same task keeps import marks and fetched materials
  if (state.taskId !== taskId) {
    state.pendingImport.clear();
    state.supportByRecord.clear();
  }
  state.taskId = taskId;
  state.results = response;
}

/** Replace the tree after an import without dropping flags or session. */
export function refreshTree(state: UiState, tree: MindmapNode): void {
  state.tree = tree;
}

export function toggleImportMark(state: UiState, recordIndex: number): void {
  if (state.pendingImport.has(recordIndex)) {
    state.pendingImport.delete(recordIndex);
  } else {
    state.pendingImport.add(recordIndex);
  }
}

export function applySupport(state: UiState, recordIndex: number,
                             materials: SupportMaterial[]): void {
  state.supportByRecord.set(recordIndex, materials);
}

export function toggleCollapsed(state: UiState, nodeId: string): void {
  if (state.collapsed.has(nodeId)) {
    state.collapsed.delete(nodeId);
  } else {
    state.collapsed.add(nodeId);
  }
}

/** The single selected node that imports should target, if unambiguous. */
export function importTarget(state: UiState): string | null {
  if (state.selection.size === 1) {
    return [...state.selection][0];
  }
  return null;
}

export function findNode(tree: MindmapNode | null, id: string): MindmapNode | null {
  if (tree === null) {
    return null;
  }
  if (tree.id === id) {
    return tree;
  }
  for (const child of tree.children) {
    const hit = findNode(child, id);
    if (hit !== null) {
      return hit;
    }
  }
  return null;
}

export function countNodes(tree: MindmapNode | null): number {
  if (tree === null) {
    return 0;
  }
  return 1 + tree.children.reduce((n, child) => n + countNodes(child), 0);
}
