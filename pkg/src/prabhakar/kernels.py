r"""Prabhakar kernel and its Sumudu-domain symbol.

The kernel is

.. math::

    e^{\gamma}_{\rho,\mu,\omega}(t) = t^{\mu - 1} E^{\gamma}_{\rho,\mu}(\omega t^\rho),

and its Sumudu transform is :math:`u^{\mu-1} (1 - \omega u^\rho)^{-\gamma}` on
the real branch :math:`1 - \omega u^\rho > 0`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from prabhakar.errors import DomainError
from prabhakar.mlfn import DEFAULT_CONTROL, MLParams, SeriesControl, ml3


@dataclass(frozen=True)
class PrabhakarParams:
    """Kernel parameters ``(rho, mu, omega, gamma_upper)``.

    ``mu > 0`` is only enforced where the kernel is integrated; pointwise
    evaluation accepts any real ``mu``.
    """

    rho: float
    mu: float
    omega: float = 0.0
    gamma_upper: float = 1.0

    def __post_init__(self) -> None:
        for name in ("rho", "mu", "omega", "gamma_upper"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.rho <= 0:
            raise DomainError(f"rho must be positive, got {self.rho}")

    @property
    def ml(self) -> MLParams:
        return MLParams(self.rho, self.mu, self.gamma_upper)

    def is_identity(self) -> bool:
        """Order-zero, upper-zero operator, which acts as the identity."""
        return self.mu == 0.0 and self.gamma_upper == 0.0


def kernel_eval(p: PrabhakarParams, t, ctl: SeriesControl = DEFAULT_CONTROL):
    """Evaluate :math:`t^{\\mu-1} E^{\\gamma}_{\\rho,\\mu}(\\omega t^\\rho)` for ``t > 0``."""
    tarr = np.asarray(t, dtype=np.float64)
    if np.any(tarr <= 0) or not np.all(np.isfinite(tarr)):
        raise DomainError("kernel is evaluated pointwise for t > 0 only")
    out = tarr ** (p.mu - 1.0) * ml3(p.ml, p.omega * tarr**p.rho, ctl)
    return float(out) if np.ndim(out) == 0 else out


def branch_factor(rho: float, omega: float, u) -> np.ndarray:
    """``1 - omega u**rho``, checked to be positive."""
    u = np.asarray(u, dtype=np.float64)
    if np.any(u <= 0):
        raise DomainError("Sumudu variable must be positive")
    b = 1.0 - omega * u**rho
    if np.any(b <= 0):
        raise DomainError(
            f"real branch violated: 1 - omega u^rho = {np.min(b):.3g} <= 0 "
            f"(omega={omega}, rho={rho})"
        )
    return b


def sumudu_symbol(p: PrabhakarParams, u):
    """Sumudu image ``u**(mu-1) (1 - omega u**rho)**(-gamma)`` of the kernel."""
    u = np.asarray(u, dtype=np.float64)
    out = u ** (p.mu - 1.0) * branch_factor(p.rho, p.omega, u) ** (-p.gamma_upper)
    return float(out) if out.ndim == 0 else out
