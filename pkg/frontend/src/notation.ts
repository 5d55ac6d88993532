/**
 * Structural relation drafts and their notation preview.
 *
 * The palette builds relations by nesting picks instead of free-text entry;
 * this module assembles the canonical string shown in the preview line and
 * sent to the service for parsing and validation. It deliberately knows
 * nothing about typing or nesting rules; an incomplete draft (an unfilled
 * slot, a group below two members) simply has no notation yet, which is what
 * disables the commit button.
 */

export type DraftNode =
  | { kind: "prop"; id: number }
  | { kind: "S" | "A" | "M"; first: DraftNode | null; second: DraftNode | null }
  | { kind: "J" | "I"; members: DraftNode[] };

export function prop(id: number): DraftNode {
  return { kind: "prop", id };
}

export function support(first: DraftNode | null = null, second: DraftNode | null = null): DraftNode {
  return { kind: "S", first, second };
}

export function attack(first: DraftNode | null = null, second: DraftNode | null = null): DraftNode {
  return { kind: "A", first, second };
}

export function match(first: DraftNode | null = null, second: DraftNode | null = null): DraftNode {
  return { kind: "M", first, second };
}

export function joint(...members: DraftNode[]): DraftNode {
  return { kind: "J", members };
}

export function identity(...members: DraftNode[]): DraftNode {
  return { kind: "I", members };
}

export function isComplete(node: DraftNode): boolean {
  switch (node.kind) {
    case "prop":
      return Number.isInteger(node.id) && node.id >= 1;
    case "S":
    case "A":
    case "M":
      return (
        node.first !== null &&
        node.second !== null &&
        isComplete(node.first) &&
        isComplete(node.second)
      );
    case "J":
    case "I":
      return node.members.length >= 2 && node.members.every(isComplete);
  }
}

/** Canonical notation for a complete draft, or null while slots are open. */
export function buildNotation(node: DraftNode): string | null {
  if (!isComplete(node)) {
    return null;
  }
  return render(node);
}

function render(node: DraftNode): string {
  switch (node.kind) {
    case "prop":
      return `p${node.id}`;
    case "S":
    case "A":
    case "M":
      return `${node.kind}(${render(node.first!)},${render(node.second!)})`;
    case "J":
    case "I":
      return `${node.kind}(${node.members.map(render).join(",")})`;
  }
}

/** Preview line for the palette: open slots render as an underscore. */
export function previewNotation(node: DraftNode): string {
  switch (node.kind) {
    case "prop":
      return `p${node.id}`;
    case "S":
    case "A":
    case "M": {
      const first = node.first === null ? "_" : previewNotation(node.first);
      const second = node.second === null ? "_" : previewNotation(node.second);
      return `${node.kind}(${first},${second})`;
    }
    case "J":
    case "I": {
      const members = node.members.map(previewNotation);
      while (members.length < 2) {
        members.push("_");
      }
      return `${node.kind}(${members.join(",")})`;
    }
  }
}
