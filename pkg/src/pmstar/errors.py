"""Exception types shared across the package."""


class PMError(Exception):
    """Base class for computation errors (CLI exit code 1)."""


class DecompositionOutOfChart(PMError):
    pass


class SingularPrefactor(PMError):
    pass


class ExpressionSyntaxError(PMError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
            if text is not None:
                message += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class UnrepresentableDenominator(PMError):
    pass


class NotClassPreserving(PMError):
    pass


class PoleAtPoint(PMError):
    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"pole at point: factor {factor} vanishes")


class NoFiniteLimit(PMError):
    pass


class ZeroFunction(PMError):
    pass


class MethodNotApplicable(PMError):
    pass


class NonPolynomialRestriction(PMError):
    pass


class OutsideDeformationDomain(PMError):
    pass


class BudgetExhausted(PMError):
    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class CertificationUnavailable(PMError):
    """No Cauchy radius R with R^2 > alpha avoids the poles of the operands."""


class DomainPairingViolation(PMError):
    pass


class UnknownSuite(PMError):
    pass
