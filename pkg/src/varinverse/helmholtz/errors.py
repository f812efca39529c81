"""Errors raised by the inverse-problem checks."""


class HelmholtzError(ValueError):
    """Base class for check failures that are not verdicts."""


class NotSemiBasic(HelmholtzError):
    def __init__(self, residual: float):
        super().__init__(f"form is not semi-basic: |i_J theta| = {residual:.3e}")
        self.residual = residual


class PreconditionFailed(HelmholtzError):
    def __init__(self, what: str, residual: float = float("nan")):
        super().__init__(f"precondition failed: {what} (residual {residual:.3e})")
        self.what = what
        self.residual = residual


class PostconditionFailed(HelmholtzError):
    def __init__(self, what: str, residual: float):
        super().__init__(f"postcondition failed: {what} (residual {residual:.3e})")
        self.what = what
        self.residual = residual


class NotSpray(PreconditionFailed):
    def __init__(self):
        super().__init__("semispray is not a spray")


class ZeroDegree(HelmholtzError):
    def __init__(self):
        super().__init__("potential degree k = 0 is excluded")


class NotHomogeneous(HelmholtzError):
    def __init__(self, what: str):
        super().__init__(f"not homogeneous: {what}")
        self.what = what


class NotFlat(HelmholtzError):
    def __init__(self, residual: float):
        super().__init__(f"spray is not flat: |R| = {residual:.3e}")
        self.residual = residual
