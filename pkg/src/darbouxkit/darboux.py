"""First-order Darboux transformations ``N ∘ L = L1 ∘ M``.

For ``M = Dx`` everything is decided by the pure ``Dy`` part of ``L``
(coefficients ``a_0j``; mirrored to ``a_i0`` for ``M = Dy``):

* a transformation exists iff all ratios ``a_0j / a_0k`` are functions of
  ``y`` alone;
* ``N = Dx + n`` with ``n = -a_0k,x / a_0k`` for any nonzero ``a_0k``;
* ``L1`` is the right quotient of ``N ∘ L`` by ``Dx``;
* ``ker L ∩ ker Dx`` has dimension ``max{j : a_0j != 0}``, or is infinite
  when the pure part vanishes.

Transformations generated by ``D + m`` are reduced to this case by a gauge
``g`` with ``g_x / g = -m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import sympy as sp

from . import expr as ex
from .errors import (ConditionViolated, GaugeNotRepresentable, NotApplicable,
                     NotHyperbolicNormalForm, NotInKernel, RatioNotSeparated,
                     TooFewSolutions, WronskianVanishes, ZeroGauge, ZeroInvariant)
from .lpdo import (EXACT, LPDO, Direction, Status, Verdict, apply, compose, equal, gauge,
                   generator, right_divide)
from .wronskian import WronskianSpec, wronskian


@dataclass(frozen=True)
class ConditionReport:
    direction: Direction
    holds: Verdict
    witnesses: dict = field(default_factory=dict)
    failing_pair: tuple | None = None
    counterexample: sp.Expr | None = None

    def as_dict(self):
        from .syntax import print_expr
        d = {
            "direction": self.direction.value,
            "holds": self.holds.as_dict(),
            "witnesses": {f"{j},{k}": print_expr(g) for (j, k), g in self.witnesses.items()},
        }
        if self.failing_pair is not None:
            d["failing_pair"] = list(self.failing_pair)
            d["counterexample"] = print_expr(self.counterexample)
        return d


class Kernel(Enum):
    INVERTIBLE = "invertible"
    FINITE = "finite_kernel"
    INFINITE = "infinite_kernel"


@dataclass(frozen=True)
class InvertibilityClass:
    kind: Kernel
    dimension: int | None = None

    @classmethod
    def finite(cls, d):
        return cls(Kernel.FINITE, d)

    def __str__(self):
        if self.kind is Kernel.FINITE:
            return f"FiniteKernel({self.dimension})"
        return "Invertible" if self.kind is Kernel.INVERTIBLE else "InfiniteKernel"

    def as_dict(self):
        d = {"class": self.kind.value}
        if self.kind is Kernel.FINITE:
            d["dimension"] = self.dimension
        return d


INVERTIBLE = InvertibilityClass(Kernel.INVERTIBLE)
INFINITE_KERNEL = InvertibilityClass(Kernel.INFINITE)


@dataclass(frozen=True)
class DarbouxResult:
    M: LPDO
    N: LPDO
    L1: LPDO
    gauge_used: sp.Expr
    invertibility: InvertibilityClass
    verification: Verdict
    direction: Direction
    L: LPDO

    def as_dict(self):
        from .syntax import print_expr, print_operator
        return {
            "direction": self.direction.value,
            "L": print_operator(self.L),
            "M": print_operator(self.M),
            "N": print_operator(self.N),
            "L1": print_operator(self.L1),
            "gauge": print_expr(self.gauge_used),
            "invertibility": self.invertibility.as_dict(),
            "verification": self.verification.as_dict(),
        }


@dataclass(frozen=True)
class LaplaceInvariants:
    h: sp.Expr
    k: sp.Expr


# -- the pure part of L -----------------------------------------------------

def pure_part(L, direction, **zero_kw):
    """Nonzero coefficients of the powers of the *other* derivation.

    Returns ``({index: coefficient}, verdict)``; coefficients found only
    probably zero are dropped and weaken the verdict.
    """
    found, verdict = {}, EXACT
    for bidegree, c in L.items():
        k = direction.pure_index(bidegree)
        if k is None:
            continue
        t = ex.is_zero(c, **zero_kw)
        if t.zero:
            verdict = verdict & Verdict.from_zero_test(t)
        else:
            found[k] = c
    return dict(sorted(found.items())), verdict


def largest_pure_index(L, direction, **zero_kw):
    """``d_y`` (``d_x`` for Dy): the largest j with a_0j != 0, or None."""
    pure, _ = pure_part(L, direction, **zero_kw)
    return max(pure, default=None)


def check_condition(L, direction, **zero_kw):
    """Can ``L`` be transformed by ``M = D`` in ``direction``?

    Ratios against the highest nonzero pure coefficient must depend on the
    other variable only.
    """
    pure, verdict = pure_part(L, direction, **zero_kw)
    if not pure:
        return ConditionReport(direction, verdict)
    pivot = max(pure)
    witnesses = {}
    for j, c in pure.items():
        ratio = ex.canonicalize(c / pure[pivot])
        t = ex.separation(ratio, direction.other, **zero_kw)
        if not t.zero:
            return ConditionReport(
                direction, Verdict(Status.FAILS, t.trials, f"a ratio depends on {direction.var}"),
                witnesses, (j, pivot), ex.diff(ratio, direction.var))
        verdict = verdict & Verdict.from_zero_test(t)
        witnesses[(j, pivot)] = ratio
    return ConditionReport(direction, verdict, witnesses)


def classify(L, direction, **zero_kw):
    report = check_condition(L, direction, **zero_kw)
    if not report.holds.ok:
        raise NotApplicable(f"L admits no Darboux transformation generated by {generator(direction)}")
    return _classify_pure(pure_part(L, direction, **zero_kw)[0])


def _classify_pure(pure):
    if not pure:
        return INFINITE_KERNEL
    d = max(pure)
    return INVERTIBLE if d == 0 else InvertibilityClass.finite(d)


def induced_kernel_ode(L, direction):
    """``L(g)`` for ``g`` a function of the other variable only, as an ODE.

    Returns ``{order: coefficient}`` of ``g, g', g'', ...`` with zero
    coefficients removed; built by differentiating an undefined function.
    """
    t = direction.other
    g = sp.Function("g")(t)
    applied = sp.expand(sum(c * sp.diff(g, ex.x, i, ex.y, j) for (i, j), c in L.items()))
    ode = {}
    for k in range(L.order + 1):
        target = g if k == 0 else sp.Derivative(g, (t, k))
        c = ex.canonicalize(applied.coeff(target))
        if c != 0:
            ode[k] = c
    return ode


# -- construction -----------------------------------------------------------

def construct(L, direction, **zero_kw):
    """Darboux transformation of ``L`` generated by ``M = Dx`` (or ``Dy``)."""
    report = check_condition(L, direction, **zero_kw)
    if not report.holds.ok:
        raise ConditionViolated(
            f"no Darboux transformation generated by {generator(direction)}: "
            f"ratio a{report.failing_pair} depends on {direction.var}", report)
    pure, verdict = pure_part(L, direction, **zero_kw)
    verdict = verdict & report.holds
    v = direction.var
    if pure:
        pivot = pure[max(pure)]
        n = ex.canonicalize(-sp.diff(pivot, v) / pivot)
        for j, c in pure.items():
            t = ex.is_zero(n * c + sp.diff(c, v), **zero_kw)
            if not t.zero:
                raise ConditionViolated(f"determining equation for index {j} is inconsistent", report)
            verdict = verdict & Verdict.from_zero_test(t)
    else:
        n = sp.S.Zero
    D = generator(direction)
    N = D + LPDO.scalar(n)
    L1, remainder = right_divide(compose(N, L), direction)
    rest = equal(remainder, LPDO(), **zero_kw)
    if not rest.ok:
        raise ConditionViolated("N ∘ L is not right divisible by the generator", report)
    verdict = verdict & rest
    check = verify_intertwining(N, L, L1, D, **zero_kw)
    return DarbouxResult(D, N, L1, sp.S.One, _classify_pure(pure), verdict & check, direction, L)


def construct_with_gauge(L, g, direction, **zero_kw):
    """Transformation generated by ``M = D - g_D / g``.

    Runs :func:`construct` on ``L^g`` and conjugates the resulting triple back.
    """
    g = ex.canonicalize(g)
    if ex.is_zero(g, **zero_kw).zero:
        raise ZeroGauge("gauge function must be nonzero")
    inner = construct(gauge(L, g, **zero_kw), direction, **zero_kw)
    back = ex.canonicalize(1 / g)
    M, N, L1 = (gauge(op, back, **zero_kw) for op in (inner.M, inner.N, inner.L1))
    check = verify_intertwining(N, L, L1, M, **zero_kw)
    return DarbouxResult(M, N, L1, g, inner.invertibility, inner.verification & check, direction, L)


def darboux_from_solution(L, psi1, direction, **zero_kw):
    """Transformation generated by ``M = D - psi1_D / psi1`` for ``psi1`` in ker L."""
    psi1 = ex.canonicalize(psi1)
    if ex.is_zero(psi1, **zero_kw).zero:
        raise NotInKernel("psi1 must be a nonzero element of ker L")
    t = ex.is_zero(apply(L, psi1), **zero_kw)
    if not t.zero:
        raise NotInKernel("L(psi1) does not vanish")
    result = construct_with_gauge(L, psi1, direction, **zero_kw)
    if t.status is ex.ZeroStatus.PROBABLY_ZERO:
        result = _weaken(result, Verdict.from_zero_test(t))
    return result


def _weaken(result, verdict):
    return DarbouxResult(result.M, result.N, result.L1, result.gauge_used, result.invertibility,
                         result.verification & verdict, result.direction, result.L)


def verify_intertwining(N, L, L1, M, **zero_kw):
    return equal(compose(N, L), compose(L1, M), **zero_kw)


# -- solution families ------------------------------------------------------

@dataclass(frozen=True)
class SolutionFamilyReport:
    """What :func:`check_solution_family` established before constructing."""

    required: int
    ratios: tuple
    wronskian: sp.Expr
    verdict: Verdict


def required_solutions(L, direction):
    """``d`` if the top pure coefficient is nonzero, else ``d - 1`` (at least 1)."""
    d = L.order
    top = L.coeff(*direction.pure(d))
    k = d if ex.canonicalize(top) != 0 else d - 1
    return max(k, 1)


def check_solution_family(L, psis, direction, **zero_kw):
    """Check the solution-family conditions and build ``M = D - psi1_D/psi1``.

    ``psis[i] / psis[0]`` must be functions of the other variable and their
    Wronskian with ``1`` must not vanish.  Returns ``(M, report, result)``.
    """
    psis = [ex.canonicalize(p) for p in psis]
    for i, psi in enumerate(psis, start=1):
        if ex.is_zero(psi, **zero_kw).zero:
            raise NotInKernel(f"psi_{i} is zero", i)
        if not ex.is_zero(apply(L, psi), **zero_kw).zero:
            raise NotInKernel(f"psi_{i} is not in ker L", i)
    k = required_solutions(L, direction)
    if len(psis) < k:
        raise TooFewSolutions(k, len(psis))
    family = psis[:k]
    verdict = EXACT
    ratios = []
    for i, psi in enumerate(family[1:], start=2):
        ratio = ex.canonicalize(psi / family[0])
        t = ex.separation(ratio, direction.other, **zero_kw)
        if not t.zero:
            raise RatioNotSeparated(i, ex.diff(ratio, direction.var))
        verdict = verdict & Verdict.from_zero_test(t)
        ratios.append(ratio)
    t_s = (0, k - 1) if direction is Direction.DX else (k - 1, 0)
    w = wronskian(WronskianSpec(*t_s, [sp.S.One, *ratios]))
    tw = ex.is_zero(w, **zero_kw)
    if tw.zero:
        raise WronskianVanishes(f"W{t_s}(1, T_2, ..., T_{k}) vanishes")
    v = direction.var
    M = generator(direction) + LPDO.scalar(-sp.diff(family[0], v) / family[0])
    result = darboux_from_solution(L, family[0], direction, **zero_kw)
    return M, SolutionFamilyReport(k, tuple(ratios), w, verdict), result


# -- Laplace transformations ------------------------------------------------

_HYPERBOLIC_SUPPORT = {(1, 1), (1, 0), (0, 1), (0, 0)}


def hyperbolic_coefficients(L):
    """``(a, b, c)`` for ``L = Dx*Dy + a*Dx + b*Dy + c``."""
    if not set(L.support()) <= _HYPERBOLIC_SUPPORT or L.coeff(1, 1) != 1:
        raise NotHyperbolicNormalForm("expected Dx*Dy + a*Dx + b*Dy + c")
    return L.coeff(1, 0), L.coeff(0, 1), L.coeff(0, 0)


def laplace_invariants(L):
    a, b, c = hyperbolic_coefficients(L)
    h = ex.canonicalize(sp.diff(a, ex.x) + a * b - c)
    k = ex.canonicalize(sp.diff(b, ex.y) + a * b - c)
    return LaplaceInvariants(h, k)


def synthesize_gauge(m, v):
    """A solution ``g`` of ``g_v / g = -m``.

    Handles ``m`` polynomial in ``v`` plus a simple pole ``c/v``, with
    coefficients free of ``v``: ``g = v^(-c) * exp(-∫ poly dv)``.
    """
    v = ex.variable(v)
    m = ex.canonicalize(m)
    num, den = sp.fraction(m)
    try:
        den_poly = sp.Poly(den, v)
        num_poly = sp.Poly(num, v)
    except sp.PolynomialError:
        raise GaugeNotRepresentable(f"cannot integrate {m}; supply g explicitly") from None
    pole = den_poly.degree()
    unit = den_poly.LC()
    if pole > 1 or den_poly != sp.Poly(unit * v**pole, v) or any(
            c.has(v) for c in (*num_poly.coeffs(), unit)):
        raise GaugeNotRepresentable(f"cannot integrate {m}; supply g explicitly")
    if pole == 1:
        quotient, residue = sp.div(num_poly, sp.Poly(v, v))
        residue = residue.as_expr() / unit
    else:
        quotient, residue = num_poly, sp.S.Zero
    integral = sp.integrate(quotient.as_expr() / unit, v)
    return v ** (-residue) * sp.exp(-integral)


def laplace_transformation(L, direction, g=None, **zero_kw):
    """Laplace transformation generated by ``Dx + b`` (or ``Dy + a``)."""
    a, b, c = hyperbolic_coefficients(L)
    inv = laplace_invariants(L)
    invariant, m = (inv.k, b) if direction is Direction.DX else (inv.h, a)
    if ex.is_zero(invariant, **zero_kw).zero:
        name = "k" if direction is Direction.DX else "h"
        raise ZeroInvariant(f"Laplace invariant {name} vanishes")
    v = direction.var
    if g is None:
        g = synthesize_gauge(m, v)
    if not ex.is_zero(sp.diff(g, v) + m * g, **zero_kw).zero:
        raise GaugeNotRepresentable(f"supplied g does not solve g_{v}/g = -({m})")
    result = construct_with_gauge(L, g, direction, **zero_kw)
    if result.invertibility != INVERTIBLE:
        raise RuntimeError(f"Laplace transformation classified {result.invertibility}")
    return result
