"""Scalar fields sampled on the nodes of a base manifold."""

from __future__ import annotations

import numpy as np

from .errors import DomainError, FieldMismatchError


class ScalarField:
    """A real-valued function given by one value per manifold node.

    Values are stored as an immutable float64 array whose length equals the
    manifold's node count.  Arithmetic between fields requires a common base.
    """

    __slots__ = ("values", "base")

    def __init__(self, base, values):
        arr = np.asarray(values, dtype=float)
        if arr.ndim == 0:
            arr = np.full(base.node_count, float(arr))
        if arr.shape != (base.node_count,):
            raise FieldMismatchError(
                f"field has {arr.shape} values, manifold has {base.node_count} nodes"
            )
        if not np.all(np.isfinite(arr)):
            raise DomainError("field values must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "base", base)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarField is immutable")

    # -- helpers ---------------------------------------------------------

    def same_base(self, other: "ScalarField") -> None:
        if other.base is not self.base:
            raise FieldMismatchError("fields live on different manifolds")

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def with_values(self, values) -> "ScalarField":
        return ScalarField(self.base, values)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ScalarField):
            self.same_base(other)
            return other.values
        return other

    def __add__(self, other):
        return ScalarField(self.base, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ScalarField(self.base, self.values - self._coerce(other))

    def __rsub__(self, other):
        return ScalarField(self.base, self._coerce(other) - self.values)

    def __mul__(self, other):
        return ScalarField(self.base, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ScalarField(self.base, self.values / self._coerce(other))

    def __neg__(self):
        return ScalarField(self.base, -self.values)

    def __repr__(self):
        return f"ScalarField(n={self.values.size}, range=[{self.min():g}, {self.max():g}])"
