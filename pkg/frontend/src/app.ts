/**
 * Browser wiring: renders the workspace into the page and translates DOM
 * events into workspace operations. Logic-free by design; see workspace.ts.
 */

import { ServiceClient } from "./api.js";
import { buildNotation, previewNotation, prop, type DraftNode } from "./notation.js";
import { TYPE_LABELS, type MetadataData } from "./types.js";
import { Workspace } from "./workspace.js";

const SERVICE_URL = (window as unknown as { ARGNOTA_SERVICE?: string }).ARGNOTA_SERVICE
  ?? "http://127.0.0.1:8765";

const DEMO_METADATA: MetadataData = {
  kind: "original_judgment",
  case_number: "",
  court: "",
  court_level: "Basic",
  trial_level: "First",
  judgment_date: "2024-01-01",
  case_category: "Civil",
  cause_of_action: "",
  outcome_type: "Dismissed",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

class App {
  workspace: Workspace;
  stack: DraftNode[] = [];

  private readonly scopePane = el("div", "scope-pane");
  private readonly typeBar = el("div", "type-bar");
  private readonly paletteBar = el("div", "palette-bar");
  private readonly previewLine = el("code", "preview-line");
  private readonly diagnosticsPane = el("ul", "diagnostics-pane");
  private readonly warningsPane = el("ul", "warnings-pane");
  private readonly diagramPane = el("div", "diagram-pane");

  constructor(root: HTMLElement, workspace: Workspace) {
    this.workspace = workspace;
    root.append(
      this.scopePane,
      this.typeBar,
      this.paletteBar,
      this.previewLine,
      this.warningsPane,
      this.diagnosticsPane,
      this.diagramPane,
    );
    this.buildTypeBar();
    this.buildPaletteBar();
    this.renderAll();
  }

  private buildTypeBar(): void {
    for (const label of TYPE_LABELS) {
      const button = el("button", "type-button", label);
      button.addEventListener("click", () => this.onCreateProposition(label));
      this.typeBar.append(button);
    }
    const gmHint = el("span", "gm-hint", "GM needs a subtype: pick one of the GM-x buttons");
    this.typeBar.append(gmHint);
  }

  private buildPaletteBar(): void {
    const pushers: Array<[string, () => DraftNode]> = [
      ["S(a,b)", () => ({ kind: "S", first: this.pop(), second: this.pop() })],
      ["A(a,b)", () => ({ kind: "A", first: this.pop(), second: this.pop() })],
      ["M(ps,pg)", () => ({ kind: "M", first: this.pop(), second: this.pop() })],
      ["J(...)", () => ({ kind: "J", members: this.drain() })],
      ["I(...)", () => ({ kind: "I", members: this.drain() })],
    ];
    for (const [label, make] of pushers) {
      const button = el("button", "palette-button", label);
      button.addEventListener("click", () => {
        this.stack.push(make());
        this.renderPreview();
      });
      this.paletteBar.append(button);
    }
    const commit = el("button", "commit-button", "commit relation");
    commit.addEventListener("click", () => void this.onCommit());
    this.paletteBar.append(commit);
  }

  private pop(): DraftNode | null {
    return this.stack.pop() ?? null;
  }

  private drain(): DraftNode[] {
    const members = [...this.stack];
    this.stack.length = 0;
    return members;
  }

  private onCreateProposition(label: string): void {
    const selection = window.getSelection();
    if (selection && selection.rangeCount > 0 && !selection.isCollapsed) {
      const range = selection.getRangeAt(0);
      const start = rangeOffset(this.scopePane, range.startContainer, range.startOffset);
      const end = rangeOffset(this.scopePane, range.endContainer, range.endOffset);
      if (start !== null && end !== null && start < end) {
        this.workspace.setSelection(start, end);
      }
    }
    try {
      const created = this.workspace.createProposition(label);
      this.stack.push(prop(created.id));
    } catch (error) {
      this.workspace.warnings.push(String(error));
    }
    this.renderAll();
  }

  private async onCommit(): Promise<void> {
    const node = this.stack.pop();
    if (!node || buildNotation(node) === null) {
      if (node) {
        this.stack.push(node);
      }
      return; // incomplete drafts never reach the service
    }
    await this.workspace.commitRelation(node);
    this.renderAll();
  }

  private renderPreview(): void {
    const top = this.stack[this.stack.length - 1];
    this.previewLine.textContent = top ? previewNotation(top) : "";
  }

  private renderAll(): void {
    this.renderScope();
    this.renderPreview();
    this.renderLists();
    this.diagramPane.innerHTML = this.workspace.diagramSvg;
  }

  private renderScope(): void {
    const text = this.workspace.document.scope_text;
    const spans = this.workspace.document.propositions
      .filter((p) => p.span)
      .sort((a, b) => a.span![0] - b.span![0]);
    this.scopePane.textContent = "";
    let cursor = 0;
    for (const propData of spans) {
      const [start, end] = propData.span!;
      if (start > cursor) {
        this.scopePane.append(text.slice(cursor, start));
      }
      const mark = el("mark", "prop-span", text.slice(Math.max(start, cursor), end));
      mark.title = `p${propData.id} ${propData.type}`;
      this.scopePane.append(mark);
      cursor = Math.max(cursor, end);
    }
    this.scopePane.append(text.slice(cursor));
  }

  private renderLists(): void {
    this.diagnosticsPane.textContent = "";
    for (const diagnostic of this.workspace.diagnostics) {
      this.diagnosticsPane.append(
        el("li", `diag-${diagnostic.severity}`, `${diagnostic.code}: ${diagnostic.message}`),
      );
    }
    this.warningsPane.textContent = "";
    for (const warning of this.workspace.warnings) {
      this.warningsPane.append(el("li", "warning", warning));
    }
  }
}

function rangeOffset(root: Node, container: Node, offset: number): number | null {
  // flatten the highlight marks back into scope-text offsets
  let total = 0;
  const walker = document.createTreeWalker(root, NodeFilter.SHOW_TEXT);
  for (let node = walker.nextNode(); node !== null; node = walker.nextNode()) {
    if (node === container) {
      return total + offset;
    }
    total += (node.textContent ?? "").length;
  }
  return null;
}

export function start(): void {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const client = new ServiceClient(SERVICE_URL);
  const workspace = Workspace.newDocument(client, {
    docId: "untitled",
    annotatorId: "me",
    metadata: DEMO_METADATA,
    scopeText: "Paste or load the reasoning section, then select spans to annotate.",
  });
  new App(root, workspace);
}

start();
