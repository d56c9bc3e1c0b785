"""(t, s)-Wronskians and the Wronskian-formula operators built from them.

``W_{t,s}(f_0, ..., f_{t+s})`` is the determinant whose row ``i`` is

    f_i, ∂x f_i, ..., ∂x^t f_i, ∂y f_i, ..., ∂y^s f_i.
"""
from __future__ import annotations

from dataclasses import dataclass

import sympy as sp

from . import expr as ex
from .errors import DenominatorVanishes, SizeMismatch
from .lpdo import LPDO


@dataclass(frozen=True)
class WronskianSpec:
    t: int
    s: int
    functions: tuple

    def __init__(self, t, s, functions):
        if t < 0 or s < 0:
            raise SizeMismatch(f"negative order ({t}, {s})")
        functions = tuple(sp.sympify(f) for f in functions)
        if len(functions) != t + s + 1:
            raise SizeMismatch(f"W_{{{t},{s}}} needs {t + s + 1} functions, got {len(functions)}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "functions", functions)


def columns(t, s):
    """Bidegrees of the derivatives making up the columns of W_{t,s}."""
    return [(a, 0) for a in range(t + 1)] + [(0, b) for b in range(1, s + 1)]


def _row(f, cols):
    return [sp.diff(f, ex.x, i, ex.y, j) for i, j in cols]


def _det(rows):
    return ex.det(rows)


def wronskian(spec):
    cols = columns(spec.t, spec.s)
    return _det([_row(f, cols) for f in spec.functions])


def wronskian_operator(m, n, psis, **zero_kw):
    """The operator ``M`` with ``M(ψ) = ±W_{m,n}(ψ, ψ_1, ...) / W(ψ_1, ...)``.

    The numerator is expanded along its first row, so the coefficient of
    each ``Dx^a`` / ``Dy^b`` is a signed minor of the ``psis`` rows.  The
    denominator is ``W_{m-1,n}`` for ``m >= 1`` and ``W_{0,n-1}`` for
    ``m = 0``; in both cases it is the minor of the highest column.
    """
    psis = [sp.sympify(p) for p in psis]
    if m < 0 or n < 0 or m + n < 1:
        raise SizeMismatch(f"need m + n >= 1, got ({m}, {n})")
    if len(psis) != m + n:
        raise SizeMismatch(f"need {m + n} functions, got {len(psis)}")
    cols = columns(m, n)
    rows = [_row(p, cols) for p in psis]
    minors = []
    for c in range(len(cols)):
        minors.append(_det([r[:c] + r[c + 1:] for r in rows]))
    top = m if m >= 1 else n
    denominator = minors[top]
    if ex.is_zero(denominator, **zero_kw).zero:
        raise DenominatorVanishes("the Wronskian of psis vanishes")
    sign = (-1) ** (m + n)
    return LPDO({cols[c]: sign * (-1) ** c * minors[c] / denominator for c in range(len(cols))})


_FORM_12 = {(1, 1), (1, 0), (0, 1), (0, 0)}
_FORM_13 = {(2, 0), (1, 0), (0, 1), (0, 0)}


def has_existence_guarantee(L):
    """True for ``Dx*Dy + ...`` and ``Dx^2 + ... + b*Dy + ...``, where Wronskian
    operators are known to generate Darboux transformations."""
    support = set(L.support())
    if support <= _FORM_12 and L.coeff(1, 1) == 1:
        return True
    return support <= _FORM_13 and L.coeff(2, 0) == 1
