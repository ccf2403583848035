"""Instance files: a small line grammar for one monodromy and its roots.

A file declares a signature, a group built from the three constructors,
one image per presentation generator, and optionally a pair of square
roots plus glide markings for them:

    signature (2; -; [3,3])
    group direct_product(cyclic(8), cyclic(3, "t"))
    image d1 = (u,1)
    image d2 = (u^7,1)
    image x1 = (1,t)
    image x2 = (1,t^2)
    pair g1 = (u,t)
    pair g2 = (u^5,t)

Element expressions are products of named generator powers, the literal
1, or a (left,right) tuple when the group is a direct product.  Marking
lines list glide words separated by commas, e.g.

    marking g1 = d1, x2^-1*d1*x2

Declarations are processed top to bottom, so the signature and group
must appear before anything that refers to them.  Errors carry the line
and column of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .groups import FiniteGroup, cyclic, direct_product, semidirect_c2
from .monodromy import Monodromy
from .signature import (
    NecConstructionError,
    NecSignature,
    Presentation,
    Word,
    canonical_presentation,
    parse_signature,
)


class InstanceError(ValueError):
    """Parse or resolution failure, positioned at line and column."""

    def __init__(self, line: int, column: int, message: str) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


GroupExpr = tuple  # ("cyclic", n, name) | ("direct_product", a, b) | ("semidirect_c2", n, twist)


def build_group(expr: GroupExpr) -> FiniteGroup:
    head = expr[0]
    if head == "cyclic":
        return cyclic(expr[1], expr[2])
    if head == "direct_product":
        return direct_product(build_group(expr[1]), build_group(expr[2]))
    if head == "semidirect_c2":
        return semidirect_c2(expr[1], expr[2])
    raise ValueError(f"unknown group expression {expr!r}")


def render_group(expr: GroupExpr) -> str:
    head = expr[0]
    if head == "cyclic":
        if expr[2] == "u":
            return f"cyclic({expr[1]})"
        return f'cyclic({expr[1]}, "{expr[2]}")'
    if head == "direct_product":
        return f"direct_product({render_group(expr[1])}, {render_group(expr[2])})"
    if head == "semidirect_c2":
        return f"semidirect_c2({expr[1]}, {expr[2]})"
    raise ValueError(f"unknown group expression {expr!r}")


@dataclass(frozen=True)
class InstanceFile:
    """Parsed instance; group and monodromy are rebuilt on demand."""

    signature: NecSignature
    group_expr: GroupExpr
    images: tuple[tuple[str, int], ...]
    pair: Optional[tuple[int, int]] = None
    markings: tuple[tuple[str, tuple[Word, ...]], ...] = ()

    def build_group(self) -> FiniteGroup:
        return build_group(self.group_expr)

    def presentation(self) -> Presentation:
        return canonical_presentation(self.signature)

    def monodromy(self, group: Optional[FiniteGroup] = None) -> Monodromy:
        return Monodromy(self.presentation(), group or self.build_group(), dict(self.images))

    def marking_for(self, root: str) -> Optional[tuple[Word, ...]]:
        for label, words in self.markings:
            if label == root:
                return words
        return None


# ---------------------------------------------------------------------------
# tokenizer


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<int>-?\d+)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<str>\"[^\"]*\")"
    r"|(?P<punct>[()^*,=])"
    r"|(?P<bad>.)"
)


class _Tokens:
    """One statement line as a cursor over (kind, text, column) triples."""

    def __init__(self, line_no: int, text: str, start: int) -> None:
        self.line_no = line_no
        self.end_column = len(text) + 1
        self.items = []
        for match in _TOKEN_RE.finditer(text, start):
            kind = match.lastgroup
            if kind == "ws":
                continue
            if kind == "bad":
                raise InstanceError(line_no, match.start() + 1, f"unexpected character {match.group()!r}")
            self.items.append((kind, match.group(), match.start() + 1))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self, expect_kind=None, expect_text=None, what=""):
        token = self.peek()
        if token is None:
            raise InstanceError(self.line_no, self.end_column, f"expected {what or expect_text or expect_kind}, got end of line")
        kind, text, column = token
        if expect_kind is not None and kind != expect_kind:
            raise InstanceError(self.line_no, column, f"expected {what or expect_kind}, got {text!r}")
        if expect_text is not None and text != expect_text:
            raise InstanceError(self.line_no, column, f"expected {expect_text!r}, got {text!r}")
        self.pos += 1
        return token

    def done(self) -> None:
        token = self.peek()
        if token is not None:
            raise InstanceError(self.line_no, token[2], f"unexpected trailing {token[1]!r}")


# ---------------------------------------------------------------------------
# expression parsers


def _parse_group_expr(tokens: _Tokens) -> GroupExpr:
    kind, ctor, column = tokens.next("name", what="group constructor")
    if ctor == "cyclic":
        tokens.next(expect_text="(")
        n = int(tokens.next("int", what="group order")[1])
        name = "u"
        if tokens.peek() and tokens.peek()[1] == ",":
            tokens.next()
            name = tokens.next("str", what="generator name string")[1].strip('"')
        tokens.next(expect_text=")")
        return ("cyclic", n, name)
    if ctor == "direct_product":
        tokens.next(expect_text="(")
        left = _parse_group_expr(tokens)
        tokens.next(expect_text=",")
        right = _parse_group_expr(tokens)
        tokens.next(expect_text=")")
        return ("direct_product", left, right)
    if ctor == "semidirect_c2":
        tokens.next(expect_text="(")
        n = int(tokens.next("int", what="subgroup order")[1])
        tokens.next(expect_text=",")
        twist = int(tokens.next("int", what="twist")[1])
        tokens.next(expect_text=")")
        return ("semidirect_c2", n, twist)
    raise InstanceError(tokens.line_no, column, f"unknown group constructor {ctor!r}")


def _parse_power(tokens: _Tokens, group: FiniteGroup) -> int:
    kind, name, column = tokens.next("name", what="generator name")
    if name not in group.gen_names:
        known = ", ".join(sorted(group.gen_names))
        raise InstanceError(tokens.line_no, column, f"unknown generator {name!r} (group has {known})")
    exp = 1
    if tokens.peek() and tokens.peek()[1] == "^":
        tokens.next()
        exp = int(tokens.next("int", what="integer exponent")[1])
    return group.power(group.gen_names[name], exp)


def _parse_element(tokens: _Tokens, group: FiniteGroup) -> int:
    token = tokens.peek()
    if token is None:
        raise InstanceError(tokens.line_no, tokens.end_column, "expected element expression, got end of line")
    kind, text, column = token
    if kind == "int":
        tokens.next()
        if text != "1":
            raise InstanceError(tokens.line_no, column, "the only numeric element literal is the identity 1")
        return 0
    if text == "(":
        if group.direct_factors is None:
            raise InstanceError(tokens.line_no, column, f"{group.name} is not a direct product, tuple forms do not apply")
        left_group, right_group = group.direct_factors
        tokens.next()
        left = _parse_element(tokens, left_group)
        tokens.next(expect_text=",")
        right = _parse_element(tokens, right_group)
        tokens.next(expect_text=")")
        return left * right_group.order + right
    value = _parse_power(tokens, group)
    while tokens.peek() and tokens.peek()[1] == "*":
        tokens.next()
        value = group.mul(value, _parse_power(tokens, group))
    return value


def _parse_word(tokens: _Tokens, names) -> Word:
    letters = []
    while True:
        kind, name, column = tokens.next("name", what="presentation generator")
        if name not in names:
            known = ", ".join(names)
            raise InstanceError(tokens.line_no, column, f"unknown generator {name!r} (presentation has {known})")
        exp = 1
        if tokens.peek() and tokens.peek()[1] == "^":
            tokens.next()
            exp = int(tokens.next("int", what="integer exponent")[1])
        letters.append((name, exp))
        if tokens.peek() and tokens.peek()[1] == "*":
            tokens.next()
            continue
        return tuple(letters)


# ---------------------------------------------------------------------------
# file parser and printer


_ROOTS = ("g1", "g2")


def parse_instance(text: str) -> InstanceFile:
    """Parse instance text; raises InstanceError with line and column."""
    signature: Optional[NecSignature] = None
    group_expr: Optional[GroupExpr] = None
    group: Optional[FiniteGroup] = None
    presentation: Optional[Presentation] = None
    images: dict[str, int] = {}
    pair: dict[str, int] = {}
    markings: dict[str, tuple[Word, ...]] = {}

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        keyword = stripped.split()[0]
        offset = line.index(keyword) + len(keyword)

        if keyword == "signature":
            if signature is not None:
                raise InstanceError(line_no, 1, "duplicate signature declaration")
            try:
                signature = parse_signature(line[offset:])
            except NecConstructionError as err:
                raise InstanceError(line_no, offset + 1, str(err)) from None
            presentation = canonical_presentation(signature)
            continue

        tokens = _Tokens(line_no, line, offset)
        if keyword == "group":
            if group_expr is not None:
                raise InstanceError(line_no, 1, "duplicate group declaration")
            group_expr = _parse_group_expr(tokens)
            tokens.done()
            group = build_group(group_expr)
        elif keyword == "image":
            if presentation is None or group is None:
                raise InstanceError(line_no, 1, "images need the signature and group declared first")
            kind, name, column = tokens.next("name", what="presentation generator")
            if name not in presentation.generator_names:
                known = ", ".join(presentation.generator_names)
                raise InstanceError(line_no, column, f"unknown generator {name!r} (presentation has {known})")
            if name in images:
                raise InstanceError(line_no, column, f"duplicate image for {name!r}")
            tokens.next(expect_text="=")
            images[name] = _parse_element(tokens, group)
            tokens.done()
        elif keyword == "pair":
            if group is None:
                raise InstanceError(line_no, 1, "pair declarations need the group declared first")
            kind, root, column = tokens.next("name", what="root label g1 or g2")
            if root not in _ROOTS:
                raise InstanceError(line_no, column, f"root label must be g1 or g2, got {root!r}")
            if root in pair:
                raise InstanceError(line_no, column, f"duplicate pair declaration for {root}")
            tokens.next(expect_text="=")
            pair[root] = _parse_element(tokens, group)
            tokens.done()
        elif keyword == "marking":
            if presentation is None:
                raise InstanceError(line_no, 1, "markings need the signature declared first")
            kind, root, column = tokens.next("name", what="root label g1 or g2")
            if root not in _ROOTS:
                raise InstanceError(line_no, column, f"root label must be g1 or g2, got {root!r}")
            if root in markings:
                raise InstanceError(line_no, column, f"duplicate marking for {root}")
            tokens.next(expect_text="=")
            words = [_parse_word(tokens, presentation.generator_names)]
            while tokens.peek() and tokens.peek()[1] == ",":
                tokens.next()
                words.append(_parse_word(tokens, presentation.generator_names))
            tokens.done()
            markings[root] = tuple(words)
        else:
            raise InstanceError(line_no, line.index(keyword) + 1, f"unknown declaration {keyword!r}")

    if signature is None:
        raise InstanceError(0, 0, "missing signature declaration")
    if group_expr is None:
        raise InstanceError(0, 0, "missing group declaration")
    missing = [name for name in presentation.generator_names if name not in images]
    if missing:
        raise InstanceError(0, 0, f"missing images for {', '.join(missing)}")
    if pair and sorted(pair) != ["g1", "g2"]:
        raise InstanceError(0, 0, "a pair block needs both g1 and g2")
    if markings and not pair:
        raise InstanceError(0, 0, "markings refer to roots, declare the pair block")

    return InstanceFile(
        signature=signature,
        group_expr=group_expr,
        images=tuple((name, images[name]) for name in presentation.generator_names),
        pair=(pair["g1"], pair["g2"]) if pair else None,
        markings=tuple((root, markings[root]) for root in _ROOTS if root in markings),
    )


def _render_word(word: Word) -> str:
    return "*".join(name if exp == 1 else f"{name}^{exp}" for name, exp in word)


def render_instance(instance: InstanceFile) -> str:
    """Canonical text for an instance; parsing it back gives an equal value."""
    group = instance.build_group()
    lines = [
        f"signature {instance.signature}",
        f"group {render_group(instance.group_expr)}",
    ]
    for name, element in instance.images:
        lines.append(f"image {name} = {group.labels[element]}")
    if instance.pair is not None:
        lines.append(f"pair g1 = {group.labels[instance.pair[0]]}")
        lines.append(f"pair g2 = {group.labels[instance.pair[1]]}")
    for root, words in instance.markings:
        rendered = ", ".join(_render_word(word) for word in words)
        lines.append(f"marking {root} = {rendered}")
    return "\n".join(lines) + "\n"
