/**
 * Wire types mirroring the service's document schema and response envelope.
 * The workspace never interprets these beyond display; every rule check is a
 * service call.
 */

export type Span = [number, number];

export interface PropositionData {
  id: number;
  text: string;
  span?: Span;
  type: string;
}

export interface MetadataData {
  kind: "original_judgment" | "guiding_case" | "reference_case";
  [field: string]: string;
}

export interface DocumentData {
  format_version: "1.0";
  doc_id: string;
  annotator_id: string;
  guideline_version: string;
  metadata: MetadataData;
  scope_text: string;
  propositions: PropositionData[];
  relations: string[];
}

export interface DiagnosticData {
  severity: "error" | "warning";
  code: string;
  locus?: string;
  position?: number;
  item_index?: number | null;
  message: string;
}

export interface Envelope<T> {
  ok: boolean;
  result: T | null;
  diagnostics: DiagnosticData[];
}

export interface ValidateResult {
  rendered: string;
  error_count: number;
  warning_count: number;
}

export interface RenderResult {
  format: string;
  text: string;
}

export interface RolesResult {
  roles: Record<string, string>;
  rendered: string;
}

export interface AlignedPairData {
  a: number;
  b: number;
  overlap: number;
}

export interface DisagreementData {
  category: "Label" | "Boundary" | "RelationDirectionOrTarget";
  detail: string;
  a_id: number | null;
  b_id: number | null;
  relation: string | null;
  side: string | null;
}

export interface AgreementReportData {
  base_type_kappa: number | null;
  subtype_kappa: number | null;
  relation_precision: number;
  relation_recall: number;
  relation_f1: number;
  boundary_mean_overlap: number;
  aligned_pairs: AlignedPairData[];
  unmatched_a: number[];
  unmatched_b: number[];
  disagreements: DisagreementData[];
}

export interface CompareResult {
  report: AgreementReportData;
  rendered: string;
}

export interface ParseExprResult {
  canonical: string;
}

/** The nine assignable proposition type labels, as stored in files. */
export const TYPE_LABELS = [
  "SF",
  "GF",
  "SM",
  "GM-L",
  "GM-I",
  "GM-C",
  "GM-U",
  "GM-M",
  "GM-O",
] as const;

export type TypeLabel = (typeof TYPE_LABELS)[number];
