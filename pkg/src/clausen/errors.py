"""Exception hierarchy shared by the evaluation engines and the CLI."""


class ClausenError(Exception):
    """Base class for every error raised by this package."""


class ParseError(ClausenError, ValueError):
    pass


class PoleInRange(ClausenError):
    """A denominator Pochhammer symbol vanishes inside the summation range."""


class NotTerminating(ClausenError):
    pass


class NotConvergent(ClausenError):
    pass


class MaxTermsExceeded(ClausenError):
    pass


class TailDivergent(NotConvergent):
    pass


class ReversalInapplicable(ClausenError):
    pass


class PoleAtNonpositiveInteger(ClausenError, ValueError):
    pass


class DomainError(ClausenError, ValueError):
    pass


class PoleInClosedForm(ClausenError):
    """A Gamma or Pochhammer factor of a closed form is undefined."""


class SideConditionViolated(ClausenError):
    def __init__(self, condition, detail=""):
        self.condition = condition
        msg = f"side condition violated: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnknownParameter(ClausenError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownTheorem(ClausenError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownEdge(ClausenError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class QuadratureFailure(ClausenError):
    pass
