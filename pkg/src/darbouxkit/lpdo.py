"""The operator ring K[Dx, Dy].

An :class:`LPDO` is stored in normal form, ``sum a_ij * Dx^i * Dy^j`` with
every coefficient to the left of the derivations.  Composition renormalizes
immediately through the binomial Leibniz rule

    Dx^i Dy^j ∘ f = sum C(i,a) C(j,b) f_{x^a y^b} Dx^(i-a) Dy^(j-b),

so equality of operators reduces to equality of coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import comb

import sympy as sp

from . import expr as ex
from .errors import ZeroGauge, ZeroOperator


class Direction(Enum):
    """Which first-order generator is in play: ``Dx`` or ``Dy``."""

    DX = "dx"
    DY = "dy"

    @property
    def var(self):
        return ex.x if self is Direction.DX else ex.y

    @property
    def other(self):
        return ex.y if self is Direction.DX else ex.x

    def monomial(self, k):
        """Bidegree of ``D^k`` in this direction."""
        return (k, 0) if self is Direction.DX else (0, k)

    def pure(self, k):
        """Bidegree of the k-th power of the *other* derivation."""
        return (0, k) if self is Direction.DX else (k, 0)

    def pure_index(self, bidegree):
        """Index k if ``bidegree`` is a pure power of the other derivation, else None."""
        i, j = bidegree
        if self is Direction.DX:
            return j if i == 0 else None
        return i if j == 0 else None

    @classmethod
    def parse(cls, text):
        return cls(text.lower())


class Status(Enum):
    EXACT = "exact"
    PROBABLE = "probable"
    FAILS = "fails"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check, with the strength of the evidence behind it."""

    status: Status
    trials: int = 0
    detail: str = ""

    @property
    def ok(self):
        return self.status is not Status.FAILS

    @classmethod
    def from_zero_test(cls, t, detail=""):
        if t.status is ex.ZeroStatus.ZERO:
            return cls(Status.EXACT)
        if t.status is ex.ZeroStatus.PROBABLY_ZERO:
            return cls(Status.PROBABLE, t.trials)
        return cls(Status.FAILS, t.trials, detail)

    def __and__(self, other):
        """The weaker of two verdicts."""
        order = {Status.EXACT: 0, Status.PROBABLE: 1, Status.FAILS: 2}
        weaker = max(self, other, key=lambda v: order[v.status])
        if weaker.status is Status.PROBABLE:
            return Verdict(Status.PROBABLE, max(self.trials, other.trials))
        return weaker

    def as_dict(self):
        d = {"status": self.status.value}
        if self.status is Status.PROBABLE:
            d["trials"] = self.trials
        if self.detail:
            d["detail"] = self.detail
        return d


EXACT = Verdict(Status.EXACT)


def _grlex_key(bidegree):
    i, j = bidegree
    return (i + j, i, j)


class LPDO:
    """A linear partial differential operator in x and y.

    ``coeffs`` maps bidegrees ``(i, j)`` to coefficients of ``Dx^i Dy^j``.
    Coefficients are canonicalized; exact zeros are dropped.
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs=None):
        items = {}
        for (i, j), c in (coeffs or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative bidegree {(i, j)}")
            c = ex.canonicalize(c)
            if c != 0:
                items[(int(i), int(j))] = c
        self._coeffs = dict(sorted(items.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True))
        self._hash = None

    @classmethod
    def scalar(cls, f):
        """The operator of multiplication by ``f``."""
        return cls({(0, 0): f})

    @classmethod
    def monomial(cls, i, j, c=1):
        return cls({(i, j): c})

    @property
    def coeffs(self):
        return dict(self._coeffs)

    def coeff(self, i, j):
        return self._coeffs.get((i, j), sp.S.Zero)

    def support(self):
        """Bidegrees in graded-lexicographic descending order."""
        return list(self._coeffs)

    def items(self):
        return self._coeffs.items()

    @property
    def order(self):
        """Total order; -1 for the zero operator."""
        return max((i + j for i, j in self._coeffs), default=-1)

    def is_zero(self):
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, LPDO):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._coeffs.items()))
        return self._hash

    def __repr__(self):
        from .syntax import print_operator
        return f"LPDO({print_operator(self)!r})"

    def __str__(self):
        from .syntax import print_operator
        return print_operator(self)

    # ring operations

    def __add__(self, other):
        other = _as_lpdo(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return LPDO({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        other = _as_lpdo(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_lpdo(other)
        if other is NotImplemented:
            return other
        return compose(self, other)

    def __rmul__(self, other):
        other = _as_lpdo(other)
        if other is NotImplemented:
            return other
        return compose(other, self)

    def __pow__(self, k):
        result = ONE
        for _ in range(k):
            result = compose(result, self)
        return result

    def __call__(self, f):
        return apply(self, f)


def _as_lpdo(v):
    if isinstance(v, LPDO):
        return v
    if isinstance(v, (int, sp.Basic)):
        return LPDO.scalar(v)
    return NotImplemented


ZERO = LPDO()
ONE = LPDO.scalar(1)
DX = LPDO.monomial(1, 0)
DY = LPDO.monomial(0, 1)


def generator(direction):
    return DX if direction is Direction.DX else DY


def add(a, b):
    coeffs = dict(a.items())
    for k, c in b.items():
        coeffs[k] = coeffs.get(k, 0) + c
    return LPDO(coeffs)


class _Derivatives:
    """Memoized partial derivatives of one coefficient."""

    def __init__(self, f):
        self._cache = {(0, 0): f}

    def __getitem__(self, ab):
        if ab not in self._cache:
            a, b = ab
            if b > 0:
                self._cache[ab] = ex.diff(self[(a, b - 1)], "y")
            else:
                self._cache[ab] = ex.diff(self[(a - 1, 0)], "x")
        return self._cache[ab]


def compose(a, b):
    """``a ∘ b``."""
    terms = {}
    for (k, l), bc in b.items():
        derivs = _Derivatives(bc)
        for (i, j), ac in a.items():
            for p in range(i + 1):
                for q in range(j + 1):
                    d = derivs[(p, q)]
                    if d == 0:
                        continue
                    key = (i - p + k, j - q + l)
                    terms.setdefault(key, []).append(comb(i, p) * comb(j, q) * ac * d)
    return LPDO({key: sp.Add(*parts) for key, parts in terms.items()})


def apply(a, f):
    """``a(f)``: the operator acting on a field element."""
    derivs = _Derivatives(ex.canonicalize(f))
    parts = [c * derivs[(i, j)] for (i, j), c in a.items()]
    return ex.canonicalize(sp.Add(*parts))


@dataclass(frozen=True)
class PrincipalSymbol:
    """Top-degree part of an operator, ``sum a_ij X^i Y^j`` over i+j = order."""

    order: int
    coeffs: tuple

    def as_dict(self):
        return dict(self.coeffs)

    def as_expr(self):
        X, Y = sp.symbols("X Y")
        return sp.Add(*(c * X**i * Y**j for (i, j), c in self.coeffs))


def principal_symbol(a):
    if a.is_zero():
        raise ZeroOperator("the zero operator has no principal symbol")
    d = a.order
    return PrincipalSymbol(d, tuple((k, c) for k, c in a.items() if sum(k) == d))


def gauge(a, g, **zero_kw):
    """``g^-1 ∘ a ∘ g``."""
    g = ex.canonicalize(g)
    if ex.is_zero(g, **zero_kw).zero:
        raise ZeroGauge("gauge function must be nonzero")
    return compose(LPDO.scalar(1 / g), compose(a, LPDO.scalar(g)))


def right_divide(a, direction):
    """Split ``a = q ∘ D + r`` with ``r`` free of the derivation ``D``."""
    q, r = {}, {}
    for (i, j), c in a.items():
        if direction.pure_index((i, j)) is not None:
            r[(i, j)] = c
        elif direction is Direction.DX:
            q[(i - 1, j)] = c
        else:
            q[(i, j - 1)] = c
    return LPDO(q), LPDO(r)


def equal(a, b, **zero_kw):
    """Coefficientwise zero test of ``a - b``; the weakest coefficient verdict wins."""
    verdict = EXACT
    for key, c in (a - b).items():
        t = ex.is_zero(c, **zero_kw)
        if not t.zero:
            return Verdict(Status.FAILS, t.trials, f"coefficient of Dx^{key[0]}*Dy^{key[1]} differs")
        verdict = verdict & Verdict.from_zero_test(t)
    return verdict
