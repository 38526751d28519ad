"""RDF terms and triples.

Only IRIs and (optionally datatyped) literals are modelled; blank nodes and
language tags are not supported.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Union

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
NUMERIC_DATATYPES = frozenset({XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE})

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_SUBCLASS_OF = "http://www.w3.org/2000/01/rdf-schema#subClassOf"

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape(text: str, escape_space: bool) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ch == " " and escape_space:
            out.append("\\u0020")
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class Term:
    """An IRI or a literal.

    Use :func:`IRI` and :func:`Literal` rather than calling this directly.
    """

    kind: str
    value: str
    datatype: Optional[str] = None

    def __post_init__(self):
        if self.kind == "iri":
            if not self.value or not _SCHEME.match(self.value) or _IRI_FORBIDDEN.search(self.value):
                raise ValueError(f"not an absolute IRI: {self.value!r}")
            if self.datatype is not None:
                raise ValueError("IRIs carry no datatype")
        elif self.kind == "literal":
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", None)
            if self.datatype is not None:
                Term("iri", self.datatype)
                if self.datatype in NUMERIC_DATATYPES:
                    try:
                        number = float(self.value) if self.datatype != XSD_INTEGER else int(self.value)
                    except ValueError:
                        raise ValueError(f"bad {self.datatype} lexical form: {self.value!r}") from None
                    if not math.isfinite(number):
                        raise ValueError(f"non-finite numeric literal: {self.value!r}")
        else:
            raise ValueError(f"unknown term kind {self.kind!r}")
        object.__setattr__(self, "_n3", self._render(False))

    @property
    def is_iri(self) -> bool:
        return self.kind == "iri"

    @property
    def is_literal(self) -> bool:
        return self.kind == "literal"

    @property
    def is_numeric(self) -> bool:
        return self.kind == "literal" and self.datatype in NUMERIC_DATATYPES

    def to_python(self) -> Union[str, int, float]:
        if self.datatype == XSD_INTEGER:
            return int(self.value)
        if self.is_numeric:
            return float(self.value)
        return self.value

    @property
    def local_name(self) -> str:
        """Fragment or last path segment of an IRI; the lexical form of a literal."""
        if self.kind != "iri":
            return self.value
        tail = re.split(r"[#/:]", self.value.rstrip("/#"))[-1]
        return tail or self.value

    def n3(self, escape_space: bool = False) -> str:
        if not escape_space:
            return self._n3
        return self._render(True)

    def _render(self, escape_space: bool) -> str:
        if self.kind == "iri":
            return f"<{self.value}>"
        body = f'"{_escape(self.value, escape_space)}"'
        if self.datatype is not None:
            body += f"^^<{self.datatype}>"
        return body

    def __str__(self) -> str:
        return self.n3()

    def __lt__(self, other: "Term") -> bool:
        return self._n3 < other._n3


def IRI(value: str) -> Term:
    return Term("iri", value)


def Literal(value, datatype: Optional[str] = None) -> Term:
    """Build a literal; Python ints and floats get xsd:integer / xsd:decimal."""
    if isinstance(value, bool):
        raise TypeError("boolean literals are not supported")
    if isinstance(value, int) and datatype is None:
        return Term("literal", str(value), XSD_INTEGER)
    if isinstance(value, float) and datatype is None:
        return Term("literal", repr(value), XSD_DECIMAL)
    return Term("literal", str(value), datatype)


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if not self.subject.is_iri:
            raise ValueError(f"subject must be an IRI, got {self.subject}")
        if not self.predicate.is_iri:
            raise ValueError(f"predicate must be an IRI, got {self.predicate}")

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."

    def __str__(self) -> str:
        return self.n3()


def term_key(term) -> str:
    """Lexical sort key used for every deterministic ordering in the package."""
    return term.n3() if isinstance(term, Term) else str(term)


def triple_key(t: Triple):
    return (t.subject.n3(), t.predicate.n3(), t.object.n3())
