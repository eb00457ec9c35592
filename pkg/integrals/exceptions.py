class IntegralsError(Exception):
    """Base class for every error raised by the integrals package."""


class SpecValidationError(IntegralsError):
    """A spec file or generator config violates an invariant before computing.

    Args:
        field (str): dotted location of the offending field (e.g. `function.terms[1].set`)
        message (str): what is wrong with it
    """

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super(SpecValidationError, self).__init__(f"{field}: {message}")


class InvalidSetError(IntegralsError, ValueError):
    """A measurable set cannot be built from the given data."""


class InvalidMeasureError(IntegralsError, ValueError):
    """A measure cannot be built from the given data."""


class ComputationError(IntegralsError):
    """Raised while computing on values that were valid on their own."""


class SpaceMismatchError(ComputationError):
    pass


class OverlappingSetsError(ComputationError):
    pass


class PointOutsideDomainError(ComputationError):
    pass


class VectorOrderError(ComputationError):
    pass


class NegativeIntegrandError(ComputationError):
    pass


class UnsupportedIntegrandError(ComputationError):
    pass


class MissingCertificateError(ComputationError):
    pass


class CertificateViolationError(ComputationError):
    pass


class TheoremViolationError(ComputationError):
    pass
