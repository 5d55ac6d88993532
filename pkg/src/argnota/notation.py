"""Parser and canonical serializer for the relation notation.

Grammar (whitespace allowed between tokens, never emitted on output):

    expr := prop
          | "S(" expr "," expr ")"
          | "A(" expr "," expr ")"
          | "M(" expr "," expr ")"
          | "J(" expr ("," expr)+ ")"
          | "I(" prop ("," prop)+ ")"
    prop := "p" digits          (positive integer, no leading zeros)

Parsing is total: any input yields either an expression tree or a
`NotationError` carrying a positioned diagnostic, never a crash. Nesting
depth is capped at 64.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Attack, Identity, Joint, Match, PropRef, RelationExpr, Support, slots

MAX_DEPTH = 64

_RELATION_HEADS = {"S": Support, "A": Attack, "M": Match}


class DiagnosticKind(Enum):
    UNEXPECTED_TOKEN = "UnexpectedToken"
    UNBALANCED_PAREN = "UnbalancedParen"
    ARITY_ERROR = "ArityError"
    BAD_PROP_ID = "BadPropId"
    IDENTITY_NON_LEAF = "IdentityNonLeaf"
    TRAILING_INPUT = "TrailingInput"


@dataclass(frozen=True)
class ParseDiagnostic:
    """A positioned parse failure; position is a 0-based character offset."""

    position: int
    kind: DiagnosticKind
    message: str
    item_index: int | None = None  # set when parsing a ";"-separated list


class NotationError(ValueError):
    """Raised for any input the grammar rejects; carries the diagnostic."""

    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(format_parse_diagnostic(diagnostic))
        self.diagnostic = diagnostic


def format_parse_diagnostic(diag: ParseDiagnostic) -> str:
    where = f"position {diag.position}"
    if diag.item_index is not None:
        where = f"item {diag.item_index}, {where}"
    return f"{diag.kind.value} at {where}: {diag.message}"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, kind: DiagnosticKind, message: str, pos: int | None = None) -> None:
        raise NotationError(ParseDiagnostic(self.pos if pos is None else pos, kind, message))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        if self.pos < len(self.text):
            return self.text[self.pos]
        return ""

    def expect(self, char: str, *, inside: str) -> None:
        self.skip_ws()
        got = self.peek()
        if got == char:
            self.pos += 1
            return
        if got == "":
            self.fail(
                DiagnosticKind.UNBALANCED_PAREN,
                f"unexpected end of input inside {inside}, expected {char!r}",
            )
        self.fail(DiagnosticKind.UNEXPECTED_TOKEN, f"expected {char!r} but found {got!r}")

    def parse_prop(self) -> PropRef:
        self.skip_ws()
        start = self.pos
        if self.peek() != "p":
            self.fail(
                DiagnosticKind.UNEXPECTED_TOKEN,
                f"expected a proposition reference but found {self.peek()!r}"
                if self.peek()
                else "expected a proposition reference but found end of input",
            )
        self.pos += 1
        digits_start = self.pos
        while self.peek().isdigit() and self.peek().isascii():
            self.pos += 1
        digits = self.text[digits_start : self.pos]
        if not digits:
            self.fail(DiagnosticKind.BAD_PROP_ID, "'p' must be followed by digits", pos=start)
        if digits[0] == "0":
            self.fail(
                DiagnosticKind.BAD_PROP_ID,
                f"proposition ids are positive integers without leading zeros, got p{digits}",
                pos=start,
            )
        return PropRef(int(digits))

    def parse_expr(self, depth: int) -> RelationExpr:
        if depth > MAX_DEPTH:
            self.fail(
                DiagnosticKind.UNEXPECTED_TOKEN, f"nesting depth exceeds the limit of {MAX_DEPTH}"
            )
        self.skip_ws()
        head = self.peek()
        if head == "p":
            return self.parse_prop()
        if head in _RELATION_HEADS:
            self.pos += 1
            self.expect("(", inside=head)
            first = self.parse_expr(depth + 1)
            self.skip_ws()
            if self.peek() == ")":
                self.fail(
                    DiagnosticKind.ARITY_ERROR,
                    f"{head} takes exactly 2 arguments, got 1",
                    pos=self.pos,
                )
            self.expect(",", inside=head)
            second = self.parse_expr(depth + 1)
            self.skip_ws()
            if self.peek() == ",":
                self.fail(
                    DiagnosticKind.ARITY_ERROR,
                    f"{head} takes exactly 2 arguments",
                    pos=self.pos,
                )
            self.expect(")", inside=head)
            return _RELATION_HEADS[head](first, second)
        if head == "J":
            self.pos += 1
            self.expect("(", inside="J")
            members = [self.parse_expr(depth + 1)]
            self.skip_ws()
            if self.peek() == ")":
                self.fail(DiagnosticKind.ARITY_ERROR, "J requires at least 2 members, got 1")
            while True:
                self.expect(",", inside="J")
                members.append(self.parse_expr(depth + 1))
                self.skip_ws()
                if self.peek() == ")":
                    self.pos += 1
                    return Joint(tuple(members))
                if self.peek() == "":
                    self.fail(
                        DiagnosticKind.UNBALANCED_PAREN,
                        "unexpected end of input inside J, expected ',' or ')'",
                    )
                if self.peek() != ",":
                    self.fail(
                        DiagnosticKind.UNEXPECTED_TOKEN,
                        f"expected ',' or ')' but found {self.peek()!r}",
                    )
        if head == "I":
            self.pos += 1
            self.expect("(", inside="I")
            members = [self.parse_identity_member(depth + 1)]
            self.skip_ws()
            if self.peek() == ")":
                self.fail(DiagnosticKind.ARITY_ERROR, "I requires at least 2 members, got 1")
            while True:
                self.expect(",", inside="I")
                members.append(self.parse_identity_member(depth + 1))
                self.skip_ws()
                if self.peek() == ")":
                    self.pos += 1
                    return Identity(tuple(members))
                if self.peek() == "":
                    self.fail(
                        DiagnosticKind.UNBALANCED_PAREN,
                        "unexpected end of input inside I, expected ',' or ')'",
                    )
                if self.peek() != ",":
                    self.fail(
                        DiagnosticKind.UNEXPECTED_TOKEN,
                        f"expected ',' or ')' but found {self.peek()!r}",
                    )
        if head == "":
            self.fail(DiagnosticKind.UNBALANCED_PAREN, "unexpected end of input, expected an expression")
        self.fail(DiagnosticKind.UNEXPECTED_TOKEN, f"expected an expression but found {head!r}")
        raise AssertionError("unreachable")

    def parse_identity_member(self, depth: int) -> PropRef:
        self.skip_ws()
        head = self.peek()
        if head in _RELATION_HEADS or head in ("J", "I"):
            self.fail(
                DiagnosticKind.IDENTITY_NON_LEAF,
                f"identity members must be proposition references, found {head}(...)",
            )
        return self.parse_prop()


def parse_expr(text: str) -> RelationExpr:
    """Parse one expression; the whole input must be consumed."""
    parser = _Parser(text)
    expr = parser.parse_expr(depth=1)
    parser.skip_ws()
    if parser.pos < len(text):
        parser.fail(
            DiagnosticKind.TRAILING_INPUT,
            f"unexpected input after expression: {text[parser.pos : parser.pos + 10]!r}",
        )
    return expr


def serialize_expr(expr: RelationExpr) -> str:
    """Canonical form: no whitespace, lowercase p, members in stored order."""
    match expr:
        case PropRef(id=pid):
            return f"p{pid}"
        case Support(source=s, target=t):
            return f"S({serialize_expr(s)},{serialize_expr(t)})"
        case Attack(source=s, target=t):
            return f"A({serialize_expr(s)},{serialize_expr(t)})"
        case Match(particular=p, general=g):
            return f"M({serialize_expr(p)},{serialize_expr(g)})"
        case Joint(members=ms):
            return "J(" + ",".join(serialize_expr(m) for m in ms) + ")"
        case Identity(members=ms):
            return "I(" + ",".join(serialize_expr(m) for m in ms) + ")"
    raise TypeError(f"not a relation expression: {expr!r}")


def expr_depth(expr: RelationExpr) -> int:
    children = [child for _, child in slots(expr)]
    if not children:
        return 1
    return 1 + max(expr_depth(child) for child in children)


def parse_relation_list(text: str) -> list[RelationExpr]:
    """Parse a ";"-separated list of expressions; blank items are skipped.

    The ";" splits only at parenthesis depth 0. Diagnostics carry the item
    index and a position relative to the full input.
    """
    items: list[tuple[int, str]] = []  # (absolute offset, item text)
    depth = 0
    start = 0
    for pos, char in enumerate(text):
        if char == "(":
            depth += 1
        elif char == ")":
            depth = max(0, depth - 1)
        elif char == ";" and depth == 0:
            items.append((start, text[start:pos]))
            start = pos + 1
    items.append((start, text[start:]))

    out: list[RelationExpr] = []
    index = 0
    for offset, item in items:
        if not item.strip():
            continue
        try:
            out.append(parse_expr(item))
        except NotationError as err:
            diag = err.diagnostic
            raise NotationError(
                ParseDiagnostic(diag.position + offset, diag.kind, diag.message, item_index=index)
            ) from None
        index += 1
    return out
