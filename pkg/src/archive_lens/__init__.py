"""archive-lens: ALTO OCR to searchable, annotated digital editions."""

from .alto import AltoPage, CollectionMeta, parse_alto
from .document import StructuredDocument, assemble_document, extract_docbook_text, to_docbook
from .errors import ArchiveLensError, ConfigError
from .normalize import Lexicon, edit_distance, normalize_lines

__version__ = "0.1.0"

__all__ = [
    "AltoPage",
    "ArchiveLensError",
    "CollectionMeta",
    "ConfigError",
    "Lexicon",
    "StructuredDocument",
    "__version__",
    "assemble_document",
    "edit_distance",
    "extract_docbook_text",
    "normalize_lines",
    "parse_alto",
    "to_docbook",
]
