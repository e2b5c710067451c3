"""Exception hierarchy.

Two branches matter for the CLI exit code: InputError (bad files,
bad arguments, contract violations -> exit 1) and NumericalError
(a computation could not be completed -> exit 2).
"""


class ToolkitError(Exception):
    pass


class InputError(ToolkitError):
    pass


class NumericalError(ToolkitError):
    pass


# data_io
class MalformedHeader(InputError):
    pass


class NonFiniteValue(InputError):
    pass


class DuplicateId(InputError):
    pass


class RowSumViolation(InputError):
    pass


class NegativeProbability(InputError):
    pass


class UnsortedIterations(InputError):
    pass


class IoFailure(InputError):
    pass


class LabelOutOfRange(InputError):
    pass


# stats
class DegenerateInput(InputError):
    pass


class NotSymmetric(InputError):
    pass


class EigenFailure(NumericalError):
    pass


class DimMismatch(InputError):
    pass


class LengthMismatch(InputError):
    pass


class ZeroVariance(NumericalError):
    pass


# gmm
class TooFewSamples(InputError):
    pass


class SingularCovariance(NumericalError):
    pass


# baseline metrics
class SubsetTooLarge(InputError):
    pass


class EmptyInput(InputError):
    pass


# pseudo supervision
class EmptyCluster(NumericalError):
    pass


class TooManyClasses(InputError):
    pass


class IdMismatch(InputError):
    pass


class SingleClassPresent(InputError):
    pass


class NotBinary(InputError):
    pass


# reporting
class MissingTrueLabels(InputError):
    pass
