"""Exception types shared across the pipeline."""


class CompgraphError(Exception):
    """Base class for all errors raised by this package."""


# --- filing retrieval ---

class NotFound(CompgraphError):
    """The archive has no document for the requested reference."""


class RateLimited(CompgraphError):
    """The archive throttled us; the caller must back off."""


class DecodeError(CompgraphError):
    """Filing bytes are not decodable as UTF-8 or Latin-1."""


class InvalidRange(CompgraphError):
    """A year range is empty or out of order."""


# --- parsing / segmentation ---

class MalformedFiling(CompgraphError):
    """No extractable text in the filing HTML."""


class NoItemsFound(CompgraphError):
    """The document has no recognizable item headings."""


class MissingBusinessSection(CompgraphError):
    """Itemization produced no Item 1 section."""


# --- recognition ---

class EndpointUnavailable(CompgraphError):
    """An external recognizer endpoint could not be reached."""


class InvalidResponse(CompgraphError):
    """An external recognizer returned spans that fail validation."""


# --- linkage ---

class EmptyName(CompgraphError):
    """A name to normalize was blank."""


class SchemaError(CompgraphError):
    """A file does not match its documented schema."""


class DuplicateId(CompgraphError):
    """A knowledge base file repeats a company id."""


# --- graph ---

class UnknownFiler(CompgraphError):
    """A record's filer id is not present in the knowledge base."""


class UnknownNode(CompgraphError):
    """A node id is not present in the graph."""


class IoError(CompgraphError):
    """Reading or writing an artifact file failed."""


# --- evaluation ---

class EmptyTruth(CompgraphError):
    """Coverage was requested against an empty ground-truth edge set."""


# --- orchestration ---

class ConfigError(CompgraphError):
    """Pipeline configuration is invalid."""


class EmptyCorpus(CompgraphError):
    """No filings matched the configured corpus."""
