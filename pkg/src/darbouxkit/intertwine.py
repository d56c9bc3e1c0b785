"""Brute-force completion of a Darboux pair by coefficient matching.

Given ``L`` and ``M``, write ``N`` and ``L1`` with unknown lower-order
coefficients (principal symbols fixed to those of ``M`` and ``L``), expand
``N ∘ L - L1 ∘ M`` and solve the resulting linear system over the field of
coefficients.  This is deliberately independent of the right-division route
in :mod:`darbouxkit.darboux` and serves as its cross-check.
"""
from __future__ import annotations

import sympy as sp

from . import expr as ex
from .lpdo import LPDO, compose


def _template(order, top, unknowns, fixed=None):
    coeffs = {}
    for i in range(order + 1):
        for j in range(order + 1 - i):
            if i + j == order:
                coeffs[(i, j)] = top.coeff(i, j)
            elif fixed is not None:
                coeffs[(i, j)] = fixed.coeff(i, j)
            else:
                u = sp.Dummy(f"u{len(unknowns)}")
                unknowns.append(u)
                coeffs[(i, j)] = u
    return coeffs


def solve_intertwining(L, M, N=None):
    """Return ``(N, L1)`` with ``N ∘ L = L1 ∘ M`` or None if no solution exists.

    If ``N`` is given only ``L1`` is solved for.  Free parameters of an
    underdetermined system are set to zero.
    """
    unknowns = []
    n_coeffs = _template(M.order, M, unknowns, fixed=N)
    l1_coeffs = _template(L.order, L, unknowns)
    N_generic = LPDO(n_coeffs)
    L1_generic = LPDO(l1_coeffs)
    residual = compose(N_generic, L) - compose(L1_generic, M)
    equations = [sp.fraction(c)[0] for _, c in residual.items()]
    if not unknowns:
        return (N_generic, L1_generic) if not equations else None
    solutions = sp.linsolve(equations, unknowns)
    if not solutions:
        return None
    (solution,) = solutions
    free = {u: 0 for u in unknowns}
    values = {u: ex.canonicalize(sp.sympify(v).subs(free)) for u, v in zip(unknowns, solution)}

    def substitute(coeffs):
        return LPDO({k: sp.sympify(c).subs(values) for k, c in coeffs.items()})

    return substitute(n_coeffs), substitute(l1_coeffs)
