"""Polynomial equation systems with dense coefficient tensors.

A system of N equations in V real variables is stored as one dense tensor
per polynomial order: ``coeffs[0]`` is the constant vector (N,),
``coeffs[1]`` the linear matrix (N, V), ``coeffs[2]`` the quadratic tensor
(N, V, V), and so on up to the system degree.  Residual i is

    F_i(x) = coeffs[0][i] + sum_j coeffs[1][i, j] x_j
           + sum_{j,k} coeffs[2][i, j, k] x_j x_k + ...

Index contraction is ordered: tensors of order >= 2 are *not* assumed
symmetric, so ``coeffs[2][i, 0, 1]`` and ``coeffs[2][i, 1, 0]`` are distinct
entries that both contribute to the x_0 x_1 monomial.

Solution vectors are plain 1-D numpy arrays of length V.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PolynomialSystem",
    "evaluate_residuals",
    "chi_squared",
    "load_system",
    "save_system",
]


@dataclass(frozen=True, eq=False)
class PolynomialSystem:
    """Immutable real-coefficient polynomial system.

    Attributes:
        coeffs: tuple of dense float arrays, one per order.  ``coeffs[n]``
            has shape ``(N,) + (V,) * n``.
    """

    coeffs: tuple[np.ndarray, ...] = field()

    def __init__(self, coeffs) -> None:
        arrays = tuple(np.asarray(c, dtype=float) for c in coeffs)
        if not arrays:
            raise ValueError("a system needs at least the constant tensor coeffs[0]")
        if arrays[0].ndim != 1:
            raise ValueError(
                f"coeffs[0] must be a vector of constants, got shape {arrays[0].shape}"
            )
        n = arrays[0].shape[0]
        if n < 1:
            raise ValueError("system must have at least one equation")
        v = arrays[1].shape[1] if len(arrays) > 1 else 1
        for order, arr in enumerate(arrays):
            expected = (n,) + (v,) * order
            if arr.shape != expected:
                raise ValueError(
                    f"coeffs[{order}] has shape {arr.shape}, expected {expected}"
                )
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"coeffs[{order}] contains non-finite entries")
        object.__setattr__(self, "coeffs", arrays)

    @property
    def num_equations(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def num_variables(self) -> int:
        return self.coeffs[1].shape[1] if len(self.coeffs) > 1 else 1

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self) -> str:
        return (
            f"PolynomialSystem(equations={self.num_equations}, "
            f"variables={self.num_variables}, degree={self.degree})"
        )


def _check_point(system: PolynomialSystem, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    v = system.num_variables
    if x.shape == () or x.shape[-1] != v:
        raise ValueError(
            f"solution vector has {x.shape[-1] if x.ndim else 0} components, "
            f"system coeffs[1] expects {v}"
        )
    if not np.all(np.isfinite(x)):
        raise ValueError("solution vector contains non-finite entries")
    return x


def evaluate_residuals(system: PolynomialSystem, x) -> np.ndarray:
    """Evaluate all equation residuals F_i(x).

    ``x`` may be a single point of shape (V,) or a batch (..., V); the result
    has shape (..., N) accordingly.
    """
    x = _check_point(system, x)
    batch = x.shape[:-1]
    res = np.broadcast_to(system.coeffs[0], batch + (system.num_equations,)).copy()
    monomial = np.ones(batch + (1,))
    for order in range(1, system.degree + 1):
        # monomial holds the flattened n-fold outer power of x, in the same
        # ordered-index layout as the flattened coefficient tensor
        monomial = (monomial[..., :, None] * x[..., None, :]).reshape(batch + (-1,))
        flat = system.coeffs[order].reshape(system.num_equations, -1)
        res = res + monomial @ flat.T
    return res


def chi_squared(system: PolynomialSystem, x) -> float | np.ndarray:
    """Residual sum of squares sum_i F_i(x)^2 (batched like the residuals)."""
    res = evaluate_residuals(system, x)
    out = np.sum(res * res, axis=-1)
    return float(out) if out.ndim == 0 else out


def load_system(path) -> PolynomialSystem:
    """Read a system from a JSON document.

    Expected fields: ``n_equations``, ``n_variables``, ``degree`` and
    ``coeffs`` (a list of nested arrays, one per order).  The declared sizes
    are cross-checked against the tensor shapes.
    """
    with open(path) as fh:
        doc = json.load(fh)
    for key in ("n_equations", "n_variables", "degree", "coeffs"):
        if key not in doc:
            raise ValueError(f"system file {path} is missing field '{key}'")
    system = PolynomialSystem(doc["coeffs"])
    declared = (doc["n_equations"], doc["n_variables"], doc["degree"])
    actual = (system.num_equations, system.num_variables, system.degree)
    if declared != actual:
        raise ValueError(
            f"system file {path} declares (n_equations, n_variables, degree)="
            f"{declared} but coeffs imply {actual}"
        )
    return system


def save_system(system: PolynomialSystem, path) -> None:
    """Write a system to the JSON document format read by :func:`load_system`."""
    doc = {
        "n_equations": system.num_equations,
        "n_variables": system.num_variables,
        "degree": system.degree,
        "coeffs": [c.tolist() for c in system.coeffs],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
