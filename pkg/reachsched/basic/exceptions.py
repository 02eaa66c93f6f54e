class ReachSchedError(Exception):
    pass


class ContractViolationError(ReachSchedError, ValueError):
    """ Raised when the arguments of an operation violate its contract (dimensions, signs, ranges). """
    pass


class ConfigError(ReachSchedError):
    pass


class InfeasibilityError(ReachSchedError):
    """ Raised when no accepting run (or no feasible optimum) exists.

    :param message: human readable description
    :param layer: first time layer that could not be reached, if known
    """

    def __init__(self, message, layer=None):
        super(InfeasibilityError, self).__init__(message)
        self.layer = layer


class PlanningFailureError(ReachSchedError):
    def __init__(self, message, stats=None):
        super(PlanningFailureError, self).__init__(message)
        self.stats = stats if stats is not None else {}


class InvalidReferenceError(ReachSchedError):
    pass


class ConstructionError(ReachSchedError):
    pass


class OutOfRangeError(ReachSchedError, ValueError):
    pass


class StageOrderError(ReachSchedError):
    pass


class InvariantViolationError(ReachSchedError):
    pass


class PreconditionError(ReachSchedError):
    pass
