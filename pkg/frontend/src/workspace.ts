/**
 * Client-side state of one annotation session: the document mirror, the
 * current text selection, the relation draft, and the panels fed by the
 * service (diagnostics, diagram). The workspace computes nothing itself;
 * committing a relation round-trips the canonical string through
 * /parse-expr, gates on /validate, and refreshes the diagram via /render,
 * so the panels always show exactly what the service said.
 */

import type { ServiceClient } from "./api.js";
import { buildNotation, type DraftNode } from "./notation.js";
import type {
  DiagnosticData,
  DocumentData,
  MetadataData,
  PropositionData,
  Span,
  TypeLabel,
} from "./types.js";
import { TYPE_LABELS } from "./types.js";

export interface NewDocumentOptions {
  docId: string;
  annotatorId: string;
  guidelineVersion?: string;
  metadata: MetadataData;
  scopeText: string;
}

export interface CommitOutcome {
  ok: boolean;
  canonical: string | null;
  diagnostics: DiagnosticData[];
}

export class Workspace {
  document: DocumentData;
  selection: Span | null = null;
  draft: DraftNode | null = null;
  /** Verbatim diagnostics from the last service response. */
  diagnostics: DiagnosticData[] = [];
  /** Last rendered diagram panel content (SVG text from /render). */
  diagramSvg = "";
  /** Non-blocking notices, e.g. overlapping spans. */
  warnings: string[] = [];
  etag: string | null = null;

  constructor(
    readonly client: ServiceClient,
    document: DocumentData,
  ) {
    this.document = document;
  }

  static newDocument(client: ServiceClient, options: NewDocumentOptions): Workspace {
    return new Workspace(client, {
      format_version: "1.0",
      doc_id: options.docId,
      annotator_id: options.annotatorId,
      guideline_version: options.guidelineVersion ?? "1.0",
      metadata: options.metadata,
      scope_text: options.scopeText,
      propositions: [],
      relations: [],
    });
  }

  get storageKey(): string {
    return `${this.document.doc_id}__${this.document.annotator_id}`;
  }

  setSelection(start: number, end: number): void {
    const length = this.document.scope_text.length;
    if (!(0 <= start && start < end && end <= length)) {
      throw new Error(`selection [${start}, ${end}) is outside the scope text`);
    }
    this.selection = [start, end];
  }

  clearSelection(): void {
    this.selection = null;
  }

  nextFreeId(): number {
    let highest = 0;
    for (const prop of this.document.propositions) {
      highest = Math.max(highest, prop.id);
    }
    return highest + 1;
  }

  /**
   * Turn the current selection into a proposition. The text defaults to the
   * selected slice; annotators may pass a normalized restatement instead
   * (the span still records where the judgment was made). A bare "GM" is
   * refused before it ever reaches the document: the palette requires a
   * subtype pick to enable the commit.
   */
  createProposition(typeLabel: string, textOverride?: string): PropositionData {
    if (this.selection === null) {
      throw new Error("select a span of the reasoning text first");
    }
    if (typeLabel === "GM") {
      throw new Error("GmSubtypeMissing: pick one GM subtype before committing");
    }
    if (!(TYPE_LABELS as readonly string[]).includes(typeLabel)) {
      throw new Error(`unknown proposition type ${typeLabel}`);
    }
    const [start, end] = this.selection;
    const text = textOverride ?? this.document.scope_text.slice(start, end);
    const created: PropositionData = {
      id: this.nextFreeId(),
      text,
      span: [start, end],
      type: typeLabel as TypeLabel,
    };
    for (const existing of this.document.propositions) {
      if (existing.span && overlaps(existing.span, created.span!)) {
        this.warnings.push(
          `span of p${created.id} overlaps p${existing.id}; check the segmentation`,
        );
      }
    }
    this.document.propositions.push(created);
    this.selection = null;
    return created;
  }

  /**
   * Commit the relation draft: assemble the canonical string, let the
   * service parse it, then gate on a permissive /validate of the document
   * with the relation added. On rejection the document is left untouched
   * and the service's diagnostics are surfaced; on success the diagram
   * panel is re-rendered.
   */
  async commitRelation(draft?: DraftNode): Promise<CommitOutcome> {
    const node = draft ?? this.draft;
    if (node === null || node === undefined) {
      return { ok: false, canonical: null, diagnostics: [] };
    }
    const canonical = buildNotation(node);
    if (canonical === null) {
      return { ok: false, canonical: null, diagnostics: [] };
    }
    const parsed = await this.client.parseExpr(canonical);
    this.diagnostics = parsed.diagnostics;
    if (!parsed.ok || parsed.result === null) {
      return { ok: false, canonical, diagnostics: parsed.diagnostics };
    }
    const candidate: DocumentData = {
      ...this.document,
      relations: [...this.document.relations, parsed.result.canonical],
    };
    const validated = await this.client.validate(candidate, "permissive");
    this.diagnostics = validated.diagnostics;
    if (!validated.ok) {
      return { ok: false, canonical, diagnostics: validated.diagnostics };
    }
    this.document = candidate;
    this.draft = null;
    await this.refreshDiagram();
    return { ok: true, canonical: parsed.result.canonical, diagnostics: validated.diagnostics };
  }

  /** Strict-mode preview for the diagnostics panel; does not gate saving. */
  async strictPreview(): Promise<DiagnosticData[]> {
    const envelope = await this.client.validate(this.document, "strict");
    this.diagnostics = envelope.diagnostics;
    return envelope.diagnostics;
  }

  async refreshDiagram(): Promise<void> {
    const envelope = await this.client.render(this.document, "svg");
    if (envelope.ok && envelope.result !== null) {
      this.diagramSvg = envelope.result.text;
    } else {
      this.diagnostics = envelope.diagnostics;
    }
  }

  /** Export the client mirror in the file format's canonical ordering. */
  export(): DocumentData {
    const propositions = [...this.document.propositions]
      .sort((a, b) => a.id - b.id)
      .map((p) => {
        const item: PropositionData = { id: p.id, text: p.text, type: p.type };
        if (p.span) {
          item.span = [p.span[0], p.span[1]];
        }
        return item;
      });
    return { ...this.document, propositions, relations: [...this.document.relations] };
  }

  /**
   * Save through the service. Saving requires a permissive-mode pass (the
   * validator's error/warning split: warnings never block).
   */
  async save(): Promise<{ ok: boolean; diagnostics: DiagnosticData[] }> {
    const exported = this.export();
    const validated = await this.client.validate(exported, "permissive");
    this.diagnostics = validated.diagnostics;
    if (!validated.ok) {
      return { ok: false, diagnostics: validated.diagnostics };
    }
    const body = JSON.stringify(exported, null, 2) + "\n";
    const stored = await this.client.putDocument(this.storageKey, body, this.etag);
    if (stored.ok && stored.result !== null) {
      this.etag = stored.result.token;
    }
    return { ok: stored.ok, diagnostics: stored.diagnostics };
  }
}

function overlaps(a: Span, b: Span): boolean {
  return Math.max(a[0], b[0]) < Math.min(a[1], b[1]);
}
