"""Boolean query language.

Syntax: bare terms, quoted phrases, field:value filters (value may be
quoted), uppercase AND / OR / NOT, parentheses. Adjacent atoms combine
with an implicit AND. A query whose root is a bare negation is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from ..errors import ArchiveLensError


class MalformedQuery(ArchiveLensError):
    pass


@dataclass(frozen=True)
class Term:
    text: str


@dataclass(frozen=True)
class Phrase:
    words: tuple[str, ...]


@dataclass(frozen=True)
class FieldFilter:
    field: str
    value: str


@dataclass(frozen=True)
class And:
    parts: tuple["Node", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Node", ...]


@dataclass(frozen=True)
class Not:
    part: "Node"


Node = Union[Term, Phrase, FieldFilter, And, Or, Not]

_FIELD_CHUNK = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*):(.*)$", re.DOTALL)


def _lex(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()":
            tokens.append((ch, ch))
            i += 1
            continue
        if ch == '"':
            end = text.find('"', i + 1)
            if end == -1:
                raise MalformedQuery("unterminated phrase")
            tokens.append(("phrase", text[i + 1:end]))
            i = end + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in '()"':
            j += 1
        chunk = text[i:j]
        i = j
        m = _FIELD_CHUNK.match(chunk)
        if m:
            tokens.append(("field", m.group(1)))
            if m.group(2):
                tokens.append(("word", m.group(2)))
            continue
        if chunk in ("AND", "OR", "NOT"):
            tokens.append((chunk, chunk))
        else:
            tokens.append(("word", chunk))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise MalformedQuery("unexpected end of query")
        self.pos += 1
        return tok

    def parse_or(self) -> Node:
        parts = [self.parse_and()]
        while self.peek() is not None and self.peek()[0] == "OR":
            self.take()
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> Node:
        parts = [self.parse_not()]
        while True:
            tok = self.peek()
            if tok is None or tok[0] in ("OR", ")"):
                break
            if tok[0] == "AND":
                self.take()
            parts.append(self.parse_not())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_not(self) -> Node:
        tok = self.peek()
        if tok is not None and tok[0] == "NOT":
            self.take()
            return Not(self.parse_not())
        return self.parse_atom()

    def parse_atom(self) -> Node:
        kind, value = self.take()
        if kind == "(":
            inner = self.parse_or()
            closing = self.peek()
            if closing is None or closing[0] != ")":
                raise MalformedQuery("missing closing parenthesis")
            self.take()
            return inner
        if kind == "phrase":
            words = tuple(value.split())
            if not words:
                raise MalformedQuery("empty phrase")
            return Phrase(words)
        if kind == "field":
            nxt = self.peek()
            if nxt is None or nxt[0] not in ("word", "phrase"):
                raise MalformedQuery(f"field {value!r} lacks a value")
            return FieldFilter(value, self.take()[1])
        if kind == "word":
            return Term(value)
        raise MalformedQuery(f"unexpected {value!r}")


def parse_query(text: str) -> Node:
    tokens = _lex(text)
    if not tokens:
        raise MalformedQuery("empty query")
    parser = _Parser(tokens)
    node = parser.parse_or()
    if parser.peek() is not None:
        raise MalformedQuery(f"unexpected {parser.peek()[1]!r} after query")
    if isinstance(node, Not):
        raise MalformedQuery("a query cannot be a bare negation")
    return node
