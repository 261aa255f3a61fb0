"""
Exception hierarchy
"""

from typing import Any, Optional


class FluxlimError(Exception):
    """Base class for all laboratory errors"""


class ConfigError(FluxlimError, ValueError):
    """Invalid experiment configuration"""

    def __init__(self, message: str, key: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        self.key = key
        self.line = line
        self.column = column
        location = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{location}{message}")


class SupportError(FluxlimError, ValueError):
    """Quantile support does not fit in the target grid"""


class NonFiniteFieldError(FluxlimError, ValueError):
    """A field contains NaN or Inf"""


class BlowUpError(FluxlimError):
    """Time integration produced non-finite values"""

    def __init__(self, t: float, last_good: Any):
        self.t = t
        self.last_good = last_good
        super().__init__(f"blow-up detected at t={t:.6g}")


class StiffnessCollapseError(FluxlimError):
    """Stable time step fell below the representable range"""

    def __init__(self, t: float, dt: float):
        self.t = t
        self.dt = dt
        super().__init__(f"stiffness collapse at t={t:.6g} (dt={dt:.3g})")


class NewtonFailure(FluxlimError):
    """Damped Newton did not reach the gradient tolerance"""

    def __init__(self, step: int, iterate: Any, grad_norm: float, reason: str = "max iterations"):
        self.step = step
        self.iterate = iterate
        self.grad_norm = grad_norm
        super().__init__(f"Newton failure at step {step}: {reason}, |grad|={grad_norm:.3e}")
