/**
 * Scripted annotation walkthrough against the real service: an annotator
 * reproduces the bundled labor-dispute example step by step (span picks,
 * type picks, structural relation drafts) and the exported file must equal
 * the golden fixture structurally, with the diagram panel byte-equal to a
 * direct render call after every single commit.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { buildCompareView } from "../src/compare.js";
import { joint, match, prop, support, type DraftNode } from "../src/notation.js";
import type { DocumentData, MetadataData } from "../src/types.js";
import { Workspace } from "../src/workspace.js";

const PORT = 8917;
const BASE = `http://127.0.0.1:${PORT}`;
const GOLDEN_PATH = join(__dirname, "..", "..", "tests", "data", "document_I.json");

const METADATA: MetadataData = {
  kind: "original_judgment",
  case_number: "(2023) Su 0106 Min Chu No. 18909",
  court: "Nanjing Gulou District People’s Court of Jiangsu Province",
  court_level: "Basic",
  trial_level: "First",
  judgment_date: "2023-12-28",
  case_category: "Civil",
  cause_of_action: "Labor contract dispute",
  outcome_type: "PartiallyUpheld",
};

// the annotator's script: selection offsets, type pick, and the normalized
// wording entered for the proposition (the span keeps the raw location)
const PROPOSITION_STEPS: Array<{ span: [number, number]; type: string; text: string }> = [
  { span: [0, 82], type: "GM-L", text: "A contract formed in accordance with the law shall take effect upon its formation." },
  { span: [83, 179], type: "GM-L", text: "The parties shall fully perform their respective obligations in accordance with their agreement." },
  { span: [180, 337], type: "GM-L", text: "Where one party fails to pay the price, remuneration, rent, interest, or other monetary debts, the other party may request payment." },
  { span: [359, 436], type: "SM", text: "The plaintiff and the defendant are in a labor service contract relationship." },
  { span: [437, 488], type: "SF", text: "The plaintiff has provided labor services as agreed." },
  { span: [494, 590], type: "SM", text: "The defendant shall pay labor remuneration in accordance with the agreement between the parties." },
  { span: [694, 765], type: "SF", text: "The defendant still owes the plaintiff RMB 11,000 in labor remuneration." },
  { span: [771, 828], type: "SM", text: "The defendant shall pay the RMB 11,000 to the plaintiff." },
  { span: [829, 901], type: "SF", text: "The plaintiff claims an additional RMB 600 in labor remuneration." },
  { span: [912, 970], type: "SF", text: "The evidence provided is insufficient to prove this claim." },
  { span: [982, 1101], type: "SM", text: "The court does not support the plaintiff's request that the defendant pay the additional RMB 600." },
];

const RELATION_STEPS: Array<{ draft: () => DraftNode; canonical: string }> = [
  { draft: () => joint(prop(4), prop(5)), canonical: "J(p4,p5)" },
  { draft: () => joint(prop(6), prop(7)), canonical: "J(p6,p7)" },
  { draft: () => match(joint(prop(4), prop(5)), prop(2)), canonical: "M(J(p4,p5),p2)" },
  { draft: () => match(joint(prop(6), prop(7)), prop(3)), canonical: "M(J(p6,p7),p3)" },
  {
    draft: () => support(match(joint(prop(4), prop(5)), prop(2)), prop(6)),
    canonical: "S(M(J(p4,p5),p2),p6)",
  },
  {
    draft: () => support(match(joint(prop(6), prop(7)), prop(3)), prop(8)),
    canonical: "S(M(J(p6,p7),p3),p8)",
  },
  { draft: () => support(prop(10), prop(11)), canonical: "S(p10,p11)" },
];

let service: ChildProcess;
let storeDir: string;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/documents`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      throw new Error("service did not come up in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
}

beforeAll(async () => {
  storeDir = mkdtempSync(join(tmpdir(), "argnota-store-"));
  const python = process.env.PYTHON ?? "python3";
  service = spawn(
    python,
    ["-m", "argnota", "serve", "--root", storeDir, "--bind", `127.0.0.1:${PORT}`],
    { stdio: "ignore" },
  );
  await waitForService();
}, 30_000);

afterAll(() => {
  service?.kill();
  rmSync(storeDir, { recursive: true, force: true });
});

describe("annotation walkthrough", () => {
  it("reproduces the golden document and keeps the diagram panel live", async () => {
    const golden = JSON.parse(readFileSync(GOLDEN_PATH, "utf-8")) as DocumentData;
    const client = new ServiceClient(BASE);
    const workspace = Workspace.newDocument(client, {
      docId: "document_I",
      annotatorId: "A1",
      guidelineVersion: "1.0",
      metadata: METADATA,
      scopeText: golden.scope_text, // the judgment text under annotation
    });

    for (const step of PROPOSITION_STEPS) {
      workspace.setSelection(step.span[0], step.span[1]);
      workspace.createProposition(step.type, step.text);
    }
    expect(workspace.document.propositions).toHaveLength(11);
    expect(workspace.warnings).toEqual([]); // the segmentation never overlaps

    for (const step of RELATION_STEPS) {
      const outcome = await workspace.commitRelation(step.draft());
      expect(outcome.ok).toBe(true);
      expect(outcome.canonical).toBe(step.canonical);

      // the diagram panel must equal a direct render of the current document
      const direct = await client.render(workspace.export(), "svg");
      expect(direct.ok).toBe(true);
      expect(workspace.diagramSvg).toBe(direct.result!.text);
    }

    // the exported workspace equals the golden fixture structurally
    expect(workspace.export()).toEqual(golden);

    // a strict validation pass over the finished annotation is clean
    const strict = await workspace.strictPreview();
    expect(strict).toEqual([]);

    // saving stores it under the dual-annotation key, byte-faithfully
    const saved = await workspace.save();
    expect(saved.ok).toBe(true);
    const listed = await client.listDocuments();
    expect(listed).toContain("document_I__A1");
    const stored = await client.getDocument("document_I__A1");
    expect(stored).not.toBeNull();
    expect(JSON.parse(stored!.text)).toEqual(golden);
  }, 30_000);

  it("shows inferred roles from the service for the finished annotation", async () => {
    const golden = JSON.parse(readFileSync(GOLDEN_PATH, "utf-8")) as DocumentData;
    const client = new ServiceClient(BASE);
    const roles = await client.roles(golden);
    expect(roles.ok).toBe(true);
    expect(roles.result!.roles["p8"]).toBe("Conclusion");
    expect(roles.result!.roles["p6"]).toBe("SubConclusion");
    expect(roles.result!.roles["p1"]).toBe("Isolated");
  });
});

describe("compare view against the live service", () => {
  it("lists one Label row for a single relabeling", async () => {
    const golden = JSON.parse(readFileSync(GOLDEN_PATH, "utf-8")) as DocumentData;
    const other: DocumentData = {
      ...golden,
      annotator_id: "A2",
      propositions: golden.propositions.map((p) => (p.id === 4 ? { ...p, type: "SF" } : p)),
    };
    const view = await buildCompareView(new ServiceClient(BASE), golden, other);
    expect(view.blockingError).toBeNull();
    expect(view.kappaBanner).toContain("0.8625");
    const labelRows = view.rows.filter((r) => r.category === "Label");
    expect(labelRows).toHaveLength(1);
    expect(labelRows[0]!.spanA).toEqual([359, 436]); // clickable target in pane A
  });

  it("turns a direction flip into two relation rows", async () => {
    const golden = JSON.parse(readFileSync(GOLDEN_PATH, "utf-8")) as DocumentData;
    const other: DocumentData = {
      ...golden,
      annotator_id: "A2",
      relations: golden.relations.map((r) => (r === "S(p10,p11)" ? "S(p11,p10)" : r)),
    };
    const view = await buildCompareView(new ServiceClient(BASE), golden, other);
    expect(view.rows.filter((r) => r.category === "RelationDirectionOrTarget")).toHaveLength(2);
  });

  it("raises a blocking banner on a scope mismatch", async () => {
    const golden = JSON.parse(readFileSync(GOLDEN_PATH, "utf-8")) as DocumentData;
    const other: DocumentData = { ...golden, annotator_id: "A2", scope_text: golden.scope_text + " " };
    const view = await buildCompareView(new ServiceClient(BASE), golden, other);
    expect(view.blockingError).toMatch(/scope/i);
    expect(view.report).toBeNull();
  });

  it("identical annotations report perfect agreement", async () => {
    const golden = JSON.parse(readFileSync(GOLDEN_PATH, "utf-8")) as DocumentData;
    const view = await buildCompareView(new ServiceClient(BASE), golden, {
      ...golden,
      annotator_id: "A2",
    });
    expect(view.kappaBanner).toBe("base kappa 1.0000, relation F1 1.0000");
    expect(view.rows).toEqual([]);
  });
});
