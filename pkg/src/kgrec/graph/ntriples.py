"""Line-based reader and writer for a subset of N-Triples.

Supported line forms::

    <iri> <iri> <iri> .
    <iri> <iri> "lexical form" .
    <iri> <iri> "lexical form"^^<datatype-iri> .

plus ``#`` comments and blank lines.  Blank nodes, language tags and
prefixed names are rejected.
"""

from __future__ import annotations

import io
import re
from typing import Iterable, TextIO, Union

from .store import KnowledgeGraph
from .terms import Term, Triple, triple_key

_WS = r"[ \t]*"
_IRIREF = r"<([^<>\"{}|^`\\\x00-\x20]*)>"
_STRING = r'"((?:[^"\\\n\r]|\\.)*)"'
_LINE = re.compile(
    "^" + _WS + _IRIREF + _WS + _IRIREF + _WS
    + "(?:" + _IRIREF + "|" + _STRING + r"(?:\^\^" + _IRIREF + ")?)"
    + _WS + r"\." + _WS + r"(?:#.*)?$"
)
_UNESCAPE = re.compile(r'\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))')
_SIMPLE_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


class NTriplesParseError(ValueError):
    """Raised on the first malformed line; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, fragment: str, reason: str = "malformed triple"):
        self.lineno = lineno
        self.fragment = fragment
        self.reason = reason
        super().__init__(f"line {lineno}: {reason}: {fragment!r}")


def _unescape(body: str, lineno: int, line: str) -> str:
    def repl(m):
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        ch = m.group(3)
        if ch not in _SIMPLE_ESCAPES:
            raise NTriplesParseError(lineno, line, f"unknown escape \\{ch}")
        return _SIMPLE_ESCAPES[ch]

    return _UNESCAPE.sub(repl, body)


def parse_line(line: str, lineno: int = 1):
    """Parse one line; returns a :class:`Triple` or ``None`` for blank/comment lines."""
    stripped = line.rstrip("\r\n")
    content = stripped.strip(" \t")
    if not content or content.startswith("#"):
        return None
    m = _LINE.match(stripped)
    if m is None:
        raise NTriplesParseError(lineno, content)
    s, p, o_iri, o_lex, o_dt = m.groups()
    try:
        if o_iri is not None:
            obj = Term("iri", o_iri)
        else:
            obj = Term("literal", _unescape(o_lex, lineno, content), o_dt)
        return Triple(Term("iri", s), Term("iri", p), obj)
    except ValueError as exc:
        if isinstance(exc, NTriplesParseError):
            raise
        raise NTriplesParseError(lineno, content, str(exc)) from None


def parse_ntriples(source: Union[str, TextIO, Iterable[str]]) -> KnowledgeGraph:
    """Parse N-Triples text (a string, an open file or an iterable of lines).

    Raises :class:`NTriplesParseError` on the first bad line, in which case no
    graph is returned.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    triples = []
    for lineno, line in enumerate(source, start=1):
        t = parse_line(line, lineno)
        if t is not None:
            triples.append(t)
    return KnowledgeGraph(triples)


def read_ntriples(path) -> KnowledgeGraph:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_ntriples(fh)


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    """Canonical serialization: distinct triples, one per line, lexically sorted."""
    lines = [t.n3() for t in sorted(set(triples), key=triple_key)]
    return "".join(line + "\n" for line in lines)


def write_ntriples(graph: Iterable[Triple], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_ntriples(graph))


_TERM = re.compile("^(?:" + _IRIREF + "|" + _STRING + r"(?:\^\^" + _IRIREF + ")?)$")


def parse_term(text: str) -> Term:
    """Parse a single IRI or literal in N-Triples notation."""
    m = _TERM.match(text)
    if m is None:
        raise ValueError(f"not an N-Triples term: {text!r}")
    iri, lex, dt = m.groups()
    if iri is not None:
        return Term("iri", iri)
    return Term("literal", _unescape(lex, 1, text), dt)
