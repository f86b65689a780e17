"""Exception types raised across the package."""


class DoubleTwistError(Exception):
    """Base class for all package errors."""


class NotUnimodular(DoubleTwistError):
    pass


class VarMismatch(DoubleTwistError):
    pass


class ZeroPolynomial(DoubleTwistError):
    pass


class DegreeZero(DoubleTwistError):
    pass


class DegenerateParameter(DoubleTwistError):
    pass


class BadIndex(DoubleTwistError):
    """Index outside the supported range, e.g. m in {-1, 0} for canonical-component formulas."""


class NotOnVariety(DoubleTwistError):
    pass


class NoConvergence(DoubleTwistError):
    pass


class BranchJump(DoubleTwistError):
    """Corrector converged to a root far from the predicted point."""

    def __init__(self, msg, omega=None, z=None, path=None):
        super().__init__(msg)
        self.omega = omega
        self.z = z
        self.path = path


class StepUnderflow(DoubleTwistError):
    def __init__(self, msg, omega=None, z=None, path=None):
        super().__init__(msg)
        self.omega = omega
        self.z = z
        self.path = path


class SingularPoint(DoubleTwistError):
    pass


class NoAdmissibleBranch(DoubleTwistError):
    pass


class QuadratureFailure(DoubleTwistError):
    pass
