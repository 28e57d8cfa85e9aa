class LPSensitivityException(Exception):
    def __init__(self, message, additional_info=None):
        self.message = message
        self.additional_context = additional_info
        super(LPSensitivityException, self).__init__(self.message)


class LinearProgramError(LPSensitivityException):
    """Base linear program exception/error."""


class DegenerateRowError(LinearProgramError):
    """Constraint matrix has an all-zero row."""


class InconsistentBoundsError(LinearProgramError):
    """A variable has a lower bound above its upper bound."""


class DimensionMismatchError(LinearProgramError):
    """Vector or matrix dimensions do not agree."""


class NonFiniteDataError(LinearProgramError):
    """Problem data contains NaN or infinite entries."""


class AssumptionError(LPSensitivityException):
    """Base assumption check exception."""


class NominalInfeasibleError(AssumptionError):
    """The nominal primal or dual feasible set is empty."""


class RestrictedSetEmptyError(AssumptionError):
    """No perturbation admits both primal and dual feasibility."""


class AssumptionViolationError(AssumptionError):
    """
    The nominal feasible sets are nonempty but neither is bounded,
    so best- and worst-case values are not guaranteed finite.
    """


class UncertaintySetError(LPSensitivityException):
    """Base uncertainty set exception."""


class ZeroNotContainedError(UncertaintySetError):
    """The zero perturbation is not a member of the set."""


class UnboundedUncertaintySetError(UncertaintySetError):
    """A parameter coordinate is unbounded over the set."""


class NonPolytopalSetError(UncertaintySetError):
    """The set has conic rows; vertex enumeration is undefined."""


class InvalidSetParameterError(UncertaintySetError):
    """Constructor received an invalid radius, interval or map."""


class ConicBackendError(LPSensitivityException):
    """Base conic backend exception."""


class BackendNotImplementedError(ConicBackendError):
    """Requested backend is not registered."""


class UnsupportedConeError(ConicBackendError):
    """Backend cannot handle a cone present in the program."""


class NumericalFailureError(ConicBackendError):
    """Solver failed; additional_info carries the failure stage."""


class RelaxationError(LPSensitivityException):
    """Base relaxation exception."""


class RelaxationTooLargeError(RelaxationError):
    """Lifted dimension exceeds the configured cap."""


class HeuristicError(LPSensitivityException):
    """Base heuristic exception."""


class SamplingAbortedError(HeuristicError):
    """Too many sampling trials failed."""


class VertexLimitExceededError(HeuristicError):
    """Vertex enumeration would exceed the combination guard."""


class InstanceError(LPSensitivityException):
    """Base instance file exception."""


class InstanceSchemaError(InstanceError):
    """Instance file violates the schema."""


class UnknownTargetError(InstanceSchemaError):
    """Uncertainty block targets an unknown row or column."""


class CorpusError(LPSensitivityException):
    """Base regression corpus exception."""


class UnknownCorpusError(CorpusError):
    """Corpus name is not registered."""


class SettingsError(LPSensitivityException):
    """Illegal settings key or value."""
