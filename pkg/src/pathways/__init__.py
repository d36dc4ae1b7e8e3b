"""Cross-repository interoperability toolkit.

Reference repositories expose three interfaces over a shared surrogate
format: obtain (identifier resolution), harvest (datestamp-based incremental
collection) and put (deposit). A service registry maps provider identifiers
to endpoint locations; client tooling composes the interfaces into
federation-wide workflows.
"""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    Datastream,
    DigitalObject,
    Entity,
    ProviderInfo,
    Violation,
    canonicalize,
    entity_uri,
    validate,
    walk,
)
from .surrogate import SurrogateDocument, parse, serialize  # noqa: F401
