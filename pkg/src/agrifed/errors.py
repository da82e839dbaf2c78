"""Exception taxonomy shared across the platform.

Every error carries a stable ``code`` string (the class name) that the HTTP
layer serializes as ``{code, message, field?}`` and the frontend maps to
user-facing text. Keep codes append-only.
"""


class AgrifedError(Exception):
    """Base class; ``code`` is the wire-level error identifier."""

    http_status = 400

    def __init__(self, message: str = "", field: str | None = None):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.field = field

    @property
    def code(self) -> str:
        return self.__class__.__name__

    def to_json(self) -> dict:
        body = {"code": self.code, "message": self.message}
        if self.field is not None:
            body["field"] = self.field
        return body


# -- computational kernel ----------------------------------------------------

class NonPositiveArgument(AgrifedError):
    pass


class EmptyDataset(AgrifedError):
    pass


class NonNumericFeature(AgrifedError):
    pass


class DimensionMismatch(AgrifedError):
    pass


class InsufficientSamples(AgrifedError):
    pass


class SchemaMismatch(AgrifedError):
    pass


# -- model training / aggregation --------------------------------------------

class InvalidDimensions(AgrifedError):
    pass


class NonFiniteLoss(AgrifedError):
    pass


class NonFiniteInput(AgrifedError):
    pass


class ShapeMismatch(AgrifedError):
    pass


class EmptyUpdateSet(AgrifedError):
    pass


class RoundMismatch(AgrifedError):
    pass


# -- risk scoring --------------------------------------------------------------

class EmptyPartition(AgrifedError):
    pass


class DegenerateSampleSet(AgrifedError):
    pass


class NonPositiveQ0(AgrifedError):
    pass


# -- CSV ingestion -------------------------------------------------------------

class NotCsv(AgrifedError):
    pass


class MissingHeader(AgrifedError):
    pass


class MissingLabelColumn(AgrifedError):
    pass


class EmptyFile(AgrifedError):
    pass


class RowArityMismatch(AgrifedError):
    pass


class MissingValue(AgrifedError):
    pass


class PayloadTooLarge(AgrifedError):
    http_status = 413


# -- persistence / authorization ------------------------------------------------

class NotFound(AgrifedError):
    http_status = 404


class Forbidden(AgrifedError):
    http_status = 403


class Conflict(AgrifedError):
    http_status = 409


# -- farmer compute slot ---------------------------------------------------------

class Unauthorized(AgrifedError):
    http_status = 401


class UnknownDataset(AgrifedError):
    http_status = 404


class DuplicateRequest(AgrifedError):
    http_status = 409


class UpstreamComputationError(AgrifedError):
    http_status = 502

    def __init__(self, message: str = "", request_id: str | None = None):
        super().__init__(message)
        self.request_id = request_id

    def to_json(self) -> dict:
        body = super().to_json()
        if self.request_id is not None:
            body["request_id"] = self.request_id
        return body


# -- training jobs -----------------------------------------------------------------

class UnknownCollaborator(AgrifedError):
    pass


class EmptyCollaboratorList(AgrifedError):
    pass


class CollaboratorFailure(AgrifedError):
    pass


class ModelNotTrained(AgrifedError):
    pass


class ReportUnavailable(AgrifedError):
    http_status = 404


# -- accounts / sessions --------------------------------------------------------------

class UnknownUser(AgrifedError):
    http_status = 404


class InvalidCredentials(AgrifedError):
    http_status = 401


class EmptyBody(AgrifedError):
    pass


class BodyTooLarge(AgrifedError):
    pass


class NoCompatiblePeers(AgrifedError):
    pass


class MissingField(AgrifedError):
    pass


# -- scenario harness --------------------------------------------------------------------

class StackUnreachable(AgrifedError):
    pass


class ScenarioFailed(AgrifedError):
    pass


def _subclasses(cls) -> dict[str, type]:
    found = {}
    for sub in cls.__subclasses__():
        found[sub.__name__] = sub
        found.update(_subclasses(sub))
    return found


def error_from_wire(code: str, message: str, field: str | None = None) -> AgrifedError:
    """Rebuild a typed error from its wire form; unknown codes degrade to base."""
    cls = _subclasses(AgrifedError).get(code)
    if cls is None:
        err = AgrifedError(f"{code}: {message}", field)
        return err
    if cls is UpstreamComputationError:
        return cls(message)
    return cls(message, field)


#: Wire-level error codes the public API may emit; the frontend keeps a
#: user-facing message for each (exhaustiveness-tested there).
API_ERROR_CODES = [
    "NonPositiveArgument",
    "EmptyDataset",
    "SchemaMismatch",
    "NotCsv",
    "MissingHeader",
    "MissingLabelColumn",
    "EmptyFile",
    "RowArityMismatch",
    "MissingValue",
    "PayloadTooLarge",
    "NotFound",
    "Forbidden",
    "Conflict",
    "Unauthorized",
    "UnknownCollaborator",
    "EmptyCollaboratorList",
    "ModelNotTrained",
    "ReportUnavailable",
    "UnknownUser",
    "InvalidCredentials",
    "EmptyBody",
    "BodyTooLarge",
    "MissingField",
    "NonFiniteInput",
    "DimensionMismatch",
    "UpstreamComputationError",
    "InternalError",
]
