/**
 * Thin typed client for the annotation service. All computation happens
 * server-side; this module only moves JSON.
 */

import type {
  CompareResult,
  DocumentData,
  Envelope,
  ParseExprResult,
  RenderResult,
  RolesResult,
  ValidateResult,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface StoredDocument {
  text: string;
  etag: string | null;
}

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly envelope: Envelope<unknown> | null,
  ) {
    super(message);
  }
}

export class ServiceClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async post<T>(path: string, body: unknown): Promise<Envelope<T>> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const envelope = (await response.json()) as Envelope<T>;
    if (!response.ok && response.status >= 500) {
      throw new ServiceError(`service failure on ${path}`, response.status, envelope);
    }
    return envelope;
  }

  async listDocuments(): Promise<string[]> {
    const response = await this.fetchImpl(`${this.baseUrl}/documents`);
    const envelope = (await response.json()) as Envelope<{ documents: string[] }>;
    return envelope.result?.documents ?? [];
  }

  async getDocument(key: string): Promise<StoredDocument | null> {
    const response = await this.fetchImpl(`${this.baseUrl}/documents/${key}`);
    if (response.status === 404) {
      return null;
    }
    return { text: await response.text(), etag: response.headers.get("ETag") };
  }

  /**
   * Store a document under its `<doc_id>__<annotator_id>` key. `etag` must
   * echo the token from the last read when overwriting; the service answers
   * 409 when someone else wrote in between.
   */
  async putDocument(
    key: string,
    text: string,
    etag: string | null,
  ): Promise<Envelope<{ id: string; token: string }>> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (etag !== null) {
      headers["If-Match"] = etag;
    }
    const response = await this.fetchImpl(`${this.baseUrl}/documents/${key}`, {
      method: "PUT",
      headers,
      body: text,
    });
    return (await response.json()) as Envelope<{ id: string; token: string }>;
  }

  validate(document: DocumentData, mode: "strict" | "permissive"): Promise<Envelope<ValidateResult>> {
    return this.post("/validate", { document, mode });
  }

  render(document: DocumentData, format: "svg" | "dot"): Promise<Envelope<RenderResult>> {
    return this.post("/render", { document, format });
  }

  roles(document: DocumentData): Promise<Envelope<RolesResult>> {
    return this.post("/roles", { document });
  }

  compare(
    docA: DocumentData,
    docB: DocumentData,
    threshold = 0.5,
  ): Promise<Envelope<CompareResult>> {
    return this.post("/compare", { doc_a: docA, doc_b: docB, threshold });
  }

  parseExpr(text: string): Promise<Envelope<ParseExprResult>> {
    return this.post("/parse-expr", { text });
  }
}
