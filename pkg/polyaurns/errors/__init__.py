"""
Domain errors. Bad input is a ValidationError (see polyaurns.validators);
everything here is a failure of an operation on valid data.
"""
from ..validators import ValidationError


class PolyaError(Exception):
    pass


class NotInjective(PolyaError):
    def __init__(self, mapping, target_colour_count):
        self.mapping = tuple(mapping)
        self.target_colour_count = target_colour_count
        super(NotInjective, self).__init__(
            'map {0} is not an injection into {1} colours'.format(
                list(self.mapping), target_colour_count))


class SizeCapExceeded(PolyaError):
    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super(SizeCapExceeded, self).__init__(
            '{0} of size {1} exceeds search cap {2}'.format(what, size, cap))


class ConvergenceFailure(PolyaError):
    pass


class NonRealTop(PolyaError):
    def __init__(self, eigenvalue, tol):
        self.eigenvalue = eigenvalue
        self.tol = tol
        super(NonRealTop, self).__init__(
            'top eigenvalue {0} has imaginary part above {1}'.format(eigenvalue, tol))


class AssumptionsFail(PolyaError):
    def __init__(self, which, assumptions):
        self.which = which
        self.assumptions = tuple(assumptions)
        super(AssumptionsFail, self).__init__(
            '{0} urn violates {1}'.format(which, ', '.join(self.assumptions)))


class DegenerateNormalization(PolyaError):
    pass


class AlreadyExtinct(PolyaError):
    pass


class ZeroSteps(PolyaError):
    pass


class NotASlowedProduct(PolyaError):
    pass


class UrnValidationError(ValidationError):
    """
    Invalid urn data. ``path`` names the offending colour and atom, e.g.
    ``replacements.1.2`` for atom 2 of colour 1.
    """

    def __init__(self, message, path=None, value=None):
        super(UrnValidationError, self).__init__(message, path=path, value=value)

    def __str__(self):
        path_display = ".".join(str(p) for p in reversed(self.path)) or '<urn>'
        return "Invalid urn at {0}: {1}".format(path_display, self.message)


class ShapeMismatch(UrnValidationError):
    pass


class SupportViolation(UrnValidationError):
    pass


class ProbabilityMass(UrnValidationError):
    pass


class ZeroActivityRule(UrnValidationError):
    pass


class NegativeActivity(UrnValidationError):
    pass


class NegativeInitial(UrnValidationError):
    pass
