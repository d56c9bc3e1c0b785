"""The coefficient field: expressions in ``x`` and ``y``.

Elements are plain sympy expressions built from rational numbers, the two
variables, sums, products, rational powers and ``sin``, ``cos``, ``exp``,
``log``.  This module adds what sympy leaves open for our purposes: a
canonical form that is unique on rational functions (with transcendental
subterms treated as opaque atoms), zero testing that says how sure it is,
and numeric evaluation at rational probe points.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy as sp

from .errors import DomainError, PoleAtPoint, UndecidedAfterRetries

x, y = sp.symbols("x y")
VARIABLES = {"x": x, "y": y}
ELEMENTARY = (sp.sin, sp.cos, sp.exp, sp.log)

DEFAULT_TRIALS = 8
DEFAULT_TOLERANCE = 1e-9
DEFAULT_PRECISION = 128
DEFAULT_SEED = 0
SAMPLE_BOUND = 10**4
_GUARD_BITS = 32
_MAX_ATTEMPTS_PER_TRIAL = 16
_MAX_PASSES = 4


def variable(v):
    """Map ``"x"``/``"y"`` (or the symbols themselves) to the sympy symbol."""
    if isinstance(v, sp.Symbol) and v in (x, y):
        return v
    try:
        return VARIABLES[v]
    except (KeyError, TypeError):
        raise ValueError(f"unknown variable {v!r}; expected 'x' or 'y'") from None


def other_variable(v):
    return y if variable(v) == x else x


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def random(cls, rng, bound=SAMPLE_BOUND):
        def coordinate():
            return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

        return cls(coordinate(), coordinate())

    def as_dict(self):
        return {"x": str(self.x), "y": str(self.y)}


# -- canonical form ---------------------------------------------------------

# An element is read as a rational function over QQ in x, y and its
# "atoms": transcendental subterms (sin, cos, exp, log, radicals, other
# symbols) with canonical arguments, each taken as an independent
# indeterminate.  Canonicalizing means cancelling the fraction in that
# polynomial ring and making the denominator monic.

_NOT_FINITE = (sp.zoo, sp.nan, sp.oo, -sp.oo)


@lru_cache(maxsize=1 << 14)
def _leaf(e):
    """Factor a non-rational leaf into atoms.

    Returns ``(factors, None)`` with ``factors`` a tuple of ``(atom, power)``
    pairs, or ``(None, replacement)`` when the leaf evaluates to something
    that must be read again.
    """
    if isinstance(e, sp.exp):
        return _exp_factors(canonicalize(e.args[0])), None
    if e is sp.E:
        return _exp_factors(sp.S.One), None
    if isinstance(e, sp.Function):
        new = e.func(*(canonicalize(a) for a in e.args))
        return (((new, 1),), None) if isinstance(new, type(e)) else (None, new)
    if e.is_Pow:
        base = canonicalize(e.base)
        if e.exp.is_Rational:
            q, p = e.exp.q, e.exp.p
            root = sp.Pow(base, sp.Rational(1, q))
            if root.is_Pow and root.exp == sp.Rational(1, q):
                return ((root, p),), None
            return None, root**p
        if base == sp.E:
            return _exp_factors(canonicalize(e.exp)), None
        new = sp.Pow(base, canonicalize(e.exp))
        return (((new, 1),), None) if new.is_Pow else (None, new)
    return ((e, 1),), None


def _exp_factors(u):
    """``exp(sum c_i m_i)`` as ``prod exp(m_i / q_i) ^ p_i`` with ``c_i = p_i / q_i``."""
    factors = []
    for term in sp.Add.make_args(u):
        c, m = term.as_coeff_Mul()
        c = sp.Rational(c)
        factors.append((sp.exp(m / c.q, evaluate=False), c.p))
    return tuple(factors)


def _collect(e, atoms):
    if e in _NOT_FINITE:
        raise ZeroDivisionError("denominator canonicalizes to zero")
    if e.is_Number or e is x or e is y:
        return
    if e.is_Add or e.is_Mul:
        for a in e.args:
            _collect(a, atoms)
    elif e.is_Pow and e.exp.is_Integer:
        _collect(e.base, atoms)
    else:
        factors, replacement = _leaf(e)
        if factors is None:
            _collect(replacement, atoms)
        else:
            atoms.update(atom for atom, _ in factors)


@lru_cache(maxsize=256)
def _ring(atoms):
    ring, *gens = sp.ring([x, y, *atoms], sp.QQ)
    return ring, dict(zip([x, y, *atoms], gens))


def _to_pair(e, ring, gens):
    """``(numerator, denominator)`` built node by node, uncancelled.

    Terms of a sum are grouped by denominator first, which keeps the
    degrees small for the sums of products produced by composition.
    """
    if e.is_Number:
        return ring(sp.Rational(e)), ring.one
    if e is x or e is y:
        return gens[e], ring.one
    if e.is_Add:
        groups = {}
        for a in e.args:
            n, d = _to_pair(a, ring, gens)
            groups[d] = groups.get(d, ring.zero) + n
        num, den = ring.zero, ring.one
        for d, n in groups.items():
            if d == den:
                num += n
            else:
                num, den = num * d + n * den, den * d
        return num, den
    if e.is_Mul:
        num, den = ring.one, ring.one
        for a in e.args:
            n, d = _to_pair(a, ring, gens)
            num, den = num * n, den * d
        return num, den
    if e.is_Pow and e.exp.is_Integer:
        return _power(*_to_pair(e.base, ring, gens), int(e.exp))
    factors, replacement = _leaf(e)
    if factors is None:
        return _to_pair(replacement, ring, gens)
    num, den = ring.one, ring.one
    for atom, k in factors:
        n, d = _power(gens[atom], ring.one, k)
        num, den = num * n, den * d
    return num, den


def _power(n, d, k):
    if k < 0:
        if not n:
            raise ZeroDivisionError("denominator canonicalizes to zero")
        n, d, k = d, n, -k
    return n**k, d**k


def _pair(e):
    atoms = set()
    _collect(e, atoms)
    ring, gens = _ring(tuple(sorted(atoms, key=sp.default_sort_key)))
    return ring, gens, _to_pair(e, ring, gens)


def _reduced(num, den):
    """Cancelled pair with monic (grlex) denominator."""
    if not den:
        raise ZeroDivisionError("denominator canonicalizes to zero")
    num, den = num.cancel(den)
    # grlex leading coefficient; lex is kept as the ring order for speed
    _, lc = max(den.terms(), key=lambda t: (sum(t[0]), t[0]))
    return num.quo_ground(lc), den.quo_ground(lc)


def _expression(num, den):
    if den == 1:
        return num.as_expr()
    return num.as_expr() / den.as_expr()


@lru_cache(maxsize=1 << 16)
def _canonicalize(e):
    _, _, (num, den) = _pair(e)
    return _expression(*_reduced(num, den))


def canonicalize(e):
    """Return the canonical form of ``e``; idempotent.

    Raises ZeroDivisionError when a denominator cancels to zero.
    """
    e = _canonicalize(sp.sympify(e))
    # sympy may merge atoms on rebuilding (sqrt(x)**2, exp(a)*exp(b) with
    # numeric a, b), so iterate to a fixed point
    for _ in range(_MAX_PASSES):
        again = _canonicalize(e)
        if again == e:
            break
        e = again
    return e


def as_fraction(e):
    """``(numerator, denominator)`` of the canonical form, denominator monic."""
    _, _, (num, den) = _pair(canonicalize(e))
    num, den = _reduced(num, den)
    return num.as_expr(), den.as_expr()


def diff(e, v):
    """Partial derivative, by the quotient rule in the polynomial ring."""
    e, v = canonicalize(e), variable(v)
    ring, gens, (num, den) = _pair(e)
    g = gens[v]
    if len(gens) == 2:
        return _expression(*_reduced(num.diff(g) * den - num * den.diff(g), den**2))
    # chain rule through the atoms; their derivatives may bring new atoms
    chain = [(gens[a], _atom_derivative(a, v)) for a in list(gens)[2:]]
    chain = [(t, d) for t, d in chain if d != 0]

    def total(p):
        return p.diff(g).as_expr() + sp.Add(*(p.diff(t).as_expr() * d for t, d in chain))

    n, d = num.as_expr(), den.as_expr()
    return canonicalize((total(num) * d - n * total(den)) / d**2)


def det(rows):
    """Determinant of a square matrix of expressions, in canonical form.

    Rows are scaled to polynomials, eliminated fraction-free (Bareiss), and
    the row scalings are removed by trial division with their irreducible
    factors, which avoids a gcd of the large numerator.
    """
    if not rows:
        return sp.S.One
    entries = [[canonicalize(e) for e in row] for row in rows]
    atoms = set()
    for row in entries:
        for e in row:
            _collect(e, atoms)
    ring, gens = _ring(tuple(sorted(atoms, key=sp.default_sort_key)))
    matrix, scale = [], ring.one
    for row in entries:
        pairs = [_reduced(*_to_pair(e, ring, gens)) for e in row]
        common = ring.one
        for _, d in pairs:
            common = common.lcm(d)
        matrix.append([n * common.exquo(d) for n, d in pairs])
        scale *= common
    num = _bareiss(matrix, ring)
    if not num:
        return sp.S.Zero
    content, factors = scale.factor_list()
    num, den = num.quo_ground(content), ring.one
    for factor, k in factors:
        for _ in range(k):
            q, r = num.div(factor)
            if r:
                den *= factor
            else:
                num = q
    _, lc = max(den.terms(), key=lambda t: (sum(t[0]), t[0]))
    return canonicalize(_expression(num.quo_ground(lc), den.quo_ground(lc)))


def _bareiss(m, ring):
    m = [row[:] for row in m]
    n, sign, previous = len(m), 1, ring.one
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return ring.zero
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exquo(previous)
        previous = m[k][k]
    return m[n - 1][n - 1] * sign


@lru_cache(maxsize=1 << 14)
def _atom_derivative(atom, v):
    return canonicalize(sp.diff(atom, v))


def is_rational_fragment(e):
    """True when ``e`` is a rational function of x and y over the rationals."""
    for node in sp.preorder_traversal(e):
        if isinstance(node, sp.Function):
            return False
        if node.is_Pow and not node.exp.is_Integer:
            return False
        if node.is_Symbol and node not in (x, y):
            return False
        if node.is_Float or node in (sp.E, sp.pi, sp.I):
            return False
    return True


# -- evaluation -------------------------------------------------------------

@lru_cache(maxsize=4096)
def _compiled(e):
    return sp.lambdify((x, y), e, modules="mpmath")


def _mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


def _numeric(e, p):
    """Evaluate at the current mpmath precision; raise on poles and complex values."""
    if e.is_Number:
        return mpmath.mpf(sp.Rational(e).p) / sp.Rational(e).q
    try:
        v = _compiled(e)(_mp(p.x), _mp(p.y))
    except ZeroDivisionError:
        raise PoleAtPoint(f"pole at ({p.x}, {p.y})") from None
    except (ValueError, TypeError) as exc:
        raise DomainError(f"cannot evaluate at ({p.x}, {p.y}): {exc}") from None
    if isinstance(v, mpmath.mpc):
        if v.imag != 0:
            raise DomainError(f"complex value at ({p.x}, {p.y})")
        v = v.real
    v = mpmath.mpf(v)
    if mpmath.isinf(v) or mpmath.isnan(v):
        raise PoleAtPoint(f"pole at ({p.x}, {p.y})")
    return v


def _exact_value(e, p):
    return e.subs({x: sp.Rational(p.x.numerator, p.x.denominator),
                   y: sp.Rational(p.y.numerator, p.y.denominator)})


def _check_denominator(den, p):
    if is_rational_fragment(den):
        if _exact_value(den, p) == 0:
            raise PoleAtPoint(f"pole at ({p.x}, {p.y})")
        return _numeric(den, p)
    d = _numeric(den, p)
    if d == 0 or abs(d) < mpmath.mpf(2) ** (-mpmath.mp.prec // 2):
        raise PoleAtPoint(f"pole at ({p.x}, {p.y})")
    return d


def evaluate(e, p, precision=DEFAULT_PRECISION):
    """Numeric value of ``e`` at ``p`` as an mpmath float with ``precision`` bits."""
    num, den = as_fraction(e)
    with mpmath.workprec(precision + _GUARD_BITS):
        d = _check_denominator(den, p)
        v = _numeric(num, p) / d
    with mpmath.workprec(precision):
        return +v


# -- zero testing -----------------------------------------------------------

class ZeroStatus(Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    PROBABLY_ZERO = "probably_zero"


@dataclass(frozen=True)
class ZeroTest:
    status: ZeroStatus
    trials: int = 0
    witness: Point | None = None

    @property
    def zero(self):
        """Zero or ProbablyZero."""
        return self.status is not ZeroStatus.NONZERO

    @property
    def exact(self):
        return self.status is not ZeroStatus.PROBABLY_ZERO


_ZERO = ZeroTest(ZeroStatus.ZERO)


def _is_even_cos_power(node):
    return (node.is_Pow and isinstance(node.base, sp.cos)
            and node.exp.is_Integer and node.exp >= 2)


def _rewrite(e):
    """Apply the small table of transcendental identities."""
    e = e.replace(_is_even_cos_power,
                  lambda n: (1 - sp.sin(n.base.args[0]) ** 2) ** (n.exp // 2)
                  * n.base ** (n.exp % 2))
    # canonical forms split exp(a+b) into exp(a)*exp(b); merge before log∘exp
    e = sp.powsimp(e, deep=True, combine="exp")
    return e.replace(lambda n: isinstance(n, sp.log) and isinstance(n.args[0], sp.exp),
                     lambda n: n.args[0].args[0])


def _sample(c, trials, seed, tolerance, precision):
    num, den = sp.fraction(c)
    terms = sp.Add.make_args(sp.expand(num))
    rng = random.Random(seed)
    passed = 0
    with mpmath.workprec(precision):
        for _ in range(trials * _MAX_ATTEMPTS_PER_TRIAL):
            p = Point.random(rng)
            try:
                _check_denominator(den, p)
                values = [_numeric(t, p) for t in terms]
            except (PoleAtPoint, DomainError):
                continue
            scale = max(abs(v) for v in values)
            if abs(mpmath.fsum(values)) > tolerance * scale:
                return ZeroTest(ZeroStatus.NONZERO, passed + 1, p)
            passed += 1
            if passed == trials:
                return ZeroTest(ZeroStatus.PROBABLY_ZERO, trials)
    raise UndecidedAfterRetries(
        f"only {passed} of {trials} sample points were usable for {c}")


def _exact_witness(c, seed):
    num, den = sp.fraction(c)
    rng = random.Random(seed)
    while True:
        p = Point.random(rng)
        if _exact_value(den, p) != 0 and _exact_value(num, p) != 0:
            return p


def is_zero(e, *, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED,
            tolerance=DEFAULT_TOLERANCE, precision=DEFAULT_PRECISION):
    """Decide whether ``e`` vanishes identically.

    Exact on rational functions of x and y.  Otherwise the rewrite table is
    tried and, failing that, ``e`` is sampled at ``trials`` random rational
    points; a NONZERO verdict then carries the witness point.
    """
    c = canonicalize(e)
    if c == 0:
        return _ZERO
    if is_rational_fragment(c):
        return ZeroTest(ZeroStatus.NONZERO, 0, _exact_witness(c, seed))
    c = canonicalize(_rewrite(c))
    if c == 0:
        return _ZERO
    return _sample(c, trials, seed, tolerance, precision)


def separation(e, v, **kw):
    """Zero test of the derivative of ``e`` in the variable other than ``v``."""
    return is_zero(diff(e, other_variable(v)), **kw)


def depends_only_on(e, v, **kw):
    """True iff ``e`` is (probably) a function of ``v`` alone."""
    return separation(e, v, **kw).zero
