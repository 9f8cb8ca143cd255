"""
Exception hierarchy for ontomatch-bench.

Every error raised on purpose by the library derives from OntoBenchError, so
the command line front end can map it to the "data error" exit status. Each
concrete class also inherits the closest builtin exception.
"""

from __future__ import annotations

from typing import Optional


class OntoBenchError(Exception):
    """Base class for all library errors."""


class UnknownClassError(OntoBenchError, KeyError):
    """Raised when a class IRI is not present in an ontology snapshot."""

    def __init__(self, iri: str) -> None:
        super().__init__(iri)
        self.iri = iri

    def __str__(self) -> str:
        return f"Unknown class: {self.iri}"


class MalformedDocumentError(OntoBenchError, ValueError):
    """Raised when an XML document cannot be parsed."""

    def __init__(
        self, message: str, line: Optional[int] = None, column: Optional[int] = None
    ) -> None:
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"Malformed XML{location}: {message}")
        self.line = line
        self.column = column


class SchemaError(OntoBenchError, ValueError):
    """Raised when a JSON document does not follow the expected schema."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"Schema violation at {path}: {message}")
        self.path = path


class InfeasiblePlanError(OntoBenchError, ValueError):
    """Raised when a sampling plan asks for more negatives than available."""


class EmptyInputError(OntoBenchError, ValueError):
    """Raised when an operation receives an empty input it cannot work on."""
