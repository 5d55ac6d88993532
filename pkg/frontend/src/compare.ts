/**
 * View model for the side-by-side disagreement display. Rows come verbatim
 * from /compare; clicking one scrolls both panes to the involved spans, so
 * each row carries the resolved spans where the service named propositions.
 */

import type { ServiceClient } from "./api.js";
import type {
  AgreementReportData,
  DiagnosticData,
  DisagreementData,
  DocumentData,
  Span,
} from "./types.js";

export interface DisagreementRow {
  category: DisagreementData["category"];
  detail: string;
  spanA: Span | null;
  spanB: Span | null;
}

export interface CompareView {
  /** Set when the two documents do not annotate the same text. */
  blockingError: string | null;
  report: AgreementReportData | null;
  rendered: string;
  kappaBanner: string;
  rows: DisagreementRow[];
}

function spanOf(doc: DocumentData, id: number | null): Span | null {
  if (id === null) {
    return null;
  }
  const prop = doc.propositions.find((p) => p.id === id);
  return prop?.span ?? null;
}

function banner(report: AgreementReportData): string {
  const kappa =
    report.base_type_kappa === null ? "undefined" : report.base_type_kappa.toFixed(4);
  const f1 = report.relation_f1.toFixed(4);
  return `base kappa ${kappa}, relation F1 ${f1}`;
}

export async function buildCompareView(
  client: ServiceClient,
  docA: DocumentData,
  docB: DocumentData,
  threshold = 0.5,
): Promise<CompareView> {
  const envelope = await client.compare(docA, docB, threshold);
  if (!envelope.ok || envelope.result === null) {
    const blocking = envelope.diagnostics.find(
      (d: DiagnosticData) => d.code === "ScopeMismatch" || d.code === "MissingSpans",
    );
    return {
      blockingError: blocking ? blocking.message : "comparison failed",
      report: null,
      rendered: "",
      kappaBanner: "",
      rows: [],
    };
  }
  const report = envelope.result.report;
  const rows: DisagreementRow[] = report.disagreements.map((d) => ({
    category: d.category,
    detail: d.detail,
    spanA: spanOf(docA, d.a_id),
    spanB: spanOf(docB, d.b_id),
  }));
  return {
    blockingError: null,
    report,
    rendered: envelope.result.rendered,
    kappaBanner: banner(report),
    rows,
  };
}
