/**
 * Collapsible mindmap tree.
 *
 * Renders the whole map as nested lists with a toggle per branch and the
 * blue/green flag markers driven entirely by the state object. For big maps
 * collapsed branches are not materialized at all, which keeps the DOM small
 * without a virtual scroller.
 */

import type { UiState } from "./state.js";
import type { MindmapNode } from "./types.js";

export interface TreeHandlers {
  onSelect: (nodeId: string) => void;
  onFlag: (nodeId: string) => void;
  onCollapse: (nodeId: string) => void;
}

const AUTO_COLLAPSE_DEPTH = 3;

function renderNode(doc: Document, state: UiState, node: MindmapNode,
                    depth: number, handlers: TreeHandlers): HTMLElement {
  const item = doc.createElement("li");
  item.className = "tree-node";
  item.setAttribute("data-node-id", node.id);

  const row = doc.createElement("div");
  row.className = "tree-row";

  const collapsed = state.collapsed.has(node.id);
  if (node.children.length > 0) {
    const toggle = doc.createElement("button");
    toggle.className = "tree-toggle";
    toggle.textContent = collapsed ? "▸" : "▾";
    toggle.addEventListener("click", (event) => {
      event.stopPropagation();
      handlers.onCollapse(node.id);
    });
    row.appendChild(toggle);
  } else {
    const spacer = doc.createElement("span");
    spacer.className = "tree-toggle tree-toggle-none";
    row.appendChild(spacer);
  }

  const label = doc.createElement("span");
  label.className = "tree-label";
  label.textContent = node.text || "(untitled)";
  label.title = `${node.kind}${node.link ? ` → ${node.link}` : ""}`;
  label.addEventListener("click", (event) => {
    const mouse = event as MouseEvent;
    if (mouse.shiftKey) {
      handlers.onFlag(node.id);
    } else {
      handlers.onSelect(node.id);
    }
  });
  row.appendChild(label);

  if (state.selection.has(node.id)) {
    const flag = doc.createElement("span");
    flag.className = "flag flag-blue";
    flag.textContent = "⚑";
    flag.title = "selected";
    row.appendChild(flag);
  }
  if (state.neighbourhood.has(node.id) && !state.selection.has(node.id)) {
    const flag = doc.createElement("span");
    flag.className = "flag flag-green";
    flag.textContent = "⚑";
    flag.title = "in semantic neighbourhood";
    row.appendChild(flag);
  }
  if (node.link) {
    const anchor = doc.createElement("a");
    anchor.className = "node-link";
    anchor.href = node.link;
    anchor.textContent = "↗";
    anchor.target = "_blank";
    row.appendChild(anchor);
  }

  item.appendChild(row);

  if (node.children.length > 0 && !collapsed) {
    const list = doc.createElement("ul");
    list.className = "tree-children";
    for (const child of node.children) {
      list.appendChild(renderNode(doc, state, child, depth + 1, handlers));
    }
    item.appendChild(list);
  }
  return item;
}

/** Collapse everything deeper than the default depth on first render. */
export function autoCollapse(state: UiState, node: MindmapNode, depth = 0): void {
  if (depth >= AUTO_COLLAPSE_DEPTH && node.children.length > 0) {
    state.collapsed.add(node.id);
  }
  for (const child of node.children) {
    autoCollapse(state, child, depth + 1);
  }
}

export function renderTree(container: HTMLElement, state: UiState,
                           handlers: TreeHandlers): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  if (state.tree === null) {
    const empty = doc.createElement("p");
    empty.className = "empty";
    empty.textContent = "no mindmap loaded";
    container.appendChild(empty);
    return;
  }
  const root = doc.createElement("ul");
  root.className = "tree-root";
  root.appendChild(renderNode(doc, state, state.tree, 0, handlers));
  container.appendChild(root);
}
