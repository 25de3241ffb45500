"""Exception types raised across the package."""


class PTSpectrumError(Exception):
    """Base class for all package errors."""


class CapabilityError(PTSpectrumError):
    """Requested quantity lies outside what the implementation supports."""


class DriveRangeError(PTSpectrumError, ValueError):
    """Sampled drive evaluated outside its time span."""


class DivergenceError(PTSpectrumError, ArithmeticError):
    """Integration produced non-finite or runaway values."""


class ConsistencyError(PTSpectrumError, ValueError):
    """A shift solution does not solve the auxiliary ODE for the given drive."""


class TruncationError(PTSpectrumError):
    """The spatial grid is too narrow for the state to have decayed."""


class NotApplicableError(PTSpectrumError):
    """A symmetry check was requested for a drive it does not apply to."""


class UndecidableError(PTSpectrumError):
    """Time parity of a sampled drive cannot be decided on its span."""


class ReflectionWarning(UserWarning):
    """Propagated amplitude reached the Dirichlet boundary."""
