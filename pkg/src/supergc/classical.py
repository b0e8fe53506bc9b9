"""Classical conformally parametrized surfaces in R^3.

``z`` and ``zbar`` are treated as independent jet variables: the jet
direction ``plus`` is ``z`` and ``minus`` is ``zbar``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BaseMismatch, SingularMetric
from .jets import Jet, jet_fun, jet_partial


@dataclass(frozen=True)
class ClassicalData:
    u: Jet
    H: Jet
    Q: Jet
    Qbar: Jet

    def __post_init__(self):
        jets = (self.u, self.H, self.Q, self.Qbar)
        if len({j.base for j in jets}) != 1:
            raise BaseMismatch("classical data at different base points")
        if len({j.order for j in jets}) != 1:
            raise ValueError("classical data must share a jet order")


@dataclass(frozen=True)
class ClassicalCurvatures:
    B: np.ndarray
    k1: complex
    k2: complex
    Hmean: complex
    K: complex
    umbilic: bool


def classical_gc_residuals(d: ClassicalData) -> dict:
    """Gauss and the two Codazzi residuals."""
    dz = lambda j: jet_partial(j, "plus")  # noqa: E731
    dzb = lambda j: jet_partial(j, "minus")  # noqa: E731
    eu = jet_fun(d.u, "exp")
    emu = jet_fun(-d.u, "exp")
    gauss = dz(dzb(d.u)) + (0.5 * d.H * d.H * eu - 2 * d.Q * d.Qbar * emu).truncate(d.u.order - 2)
    codazzi1 = dz(d.Qbar) - (0.5 * eu).truncate(d.u.order - 1) * dzb(d.H)
    codazzi2 = dzb(d.Q) - (0.5 * eu).truncate(d.u.order - 1) * dz(d.H)
    return {"gauss": gauss, "codazzi_zbar": codazzi1, "codazzi_z": codazzi2}


def classical_fundamental_forms(d: ClassicalData):
    """``(I, II)`` as 2x2 matrices in ``(dx, dy)`` at the base point."""
    U = np.exp(d.u.value)
    Q, Qb, H = d.Q.value, d.Qbar.value, d.H.value
    first = U * np.eye(2, dtype=complex)
    second = np.array(
        [[Q + Qb + U * H, 1j * (Q - Qb)], [1j * (Q - Qb), -(Q + Qb) + U * H]],
        dtype=complex,
    )
    return first, second


def classical_curvatures(d: ClassicalData, tol: float = 1e-12) -> ClassicalCurvatures:
    U = np.exp(d.u.value)
    if not np.isfinite(U) or abs(U) < 1e-300:
        raise SingularMetric(f"e^u = {U} is not invertible")
    _, second = classical_fundamental_forms(d)
    B = second / U
    k = np.linalg.eigvals(B)
    Q, Qb, H = d.Q.value, d.Qbar.value, d.H.value
    K = H * H - 4 * Q * Qb / (U * U)
    return ClassicalCurvatures(
        B=B,
        k1=complex(k[0]),
        k2=complex(k[1]),
        Hmean=complex(0.5 * np.trace(B)),
        K=complex(K),
        umbilic=abs(Q * Qb) <= tol,
    )
