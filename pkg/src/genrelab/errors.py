"""Exception hierarchy shared across the toolkit.

Data problems (bad manifests, schema violations, invalid arguments derived
from data) raise :class:`DataError`; failures of external bibliographic
services raise :class:`ExternalServiceError`.  The CLI maps these onto its
exit codes.
"""


class GenrelabError(Exception):
    """Base class for all toolkit errors."""


class DataError(GenrelabError):
    """A manifest, document, or derived artifact violates its contract."""


class ManifestSchemaError(DataError):
    """A serialized manifest record failed validation.

    Carries the offending record id (when known) and field name.
    """

    def __init__(self, message, record_id=None, field=None):
        super().__init__(message)
        self.record_id = record_id
        self.field = field


class ExternalServiceError(GenrelabError):
    """An external bibliographic service failed after retries."""
