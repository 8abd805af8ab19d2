"""Maurer-Cartan elements with nilpotent coefficients and gauge actions.

Coefficients live in Q[t]/(t^(N+1)); a Maurer-Cartan element is a degree-1
form with coefficients in the ideal (t) killing the curvature expression

    d xi + 1/2 [xi, xi] + 1/6 [xi, xi, xi] = 0          (arity cap 3).

Two gauge recursions act on such elements: the classical one driven by a
degree-0 form b, and the derivation-driven one in which a derivation
(with coefficients in the ideal) acts through its curvature and action maps.
Both series terminate because the k-th correction term has ideal valuation
at least k, which is asserted at every step.  For inner derivations given by
bracketing with b the two recursions agree exactly; ``check_gauge_coincidence``
verifies that coincidence together with the three bridge identities that
drive it.

``mc_extend`` manufactures Maurer-Cartan elements order by order from a
closed degree-1 seed, reporting the first obstruction when the linear solve
fails.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

from functools import lru_cache

from . import linalg
from .deraction import Derivation, act1, act2_symbols, ad, kappa
from .graded import GradedElement, MultiTable
from .liepair import L3Pair
from .linfty import iter_normalized_tuples
from .scalars import DEFAULT_ORDER, TruncatedPoly, ideal_valuation


class MCContext:
    """A bracket structure together with a coefficient truncation order."""

    def __init__(self, l3: L3Pair, order: int = DEFAULT_ORDER):
        self.l3 = l3
        self.order = order
        self.structure = l3.structure()

    def t(self) -> TruncatedPoly:
        return TruncatedPoly.gen(self.order)

    def const(self, c) -> TruncatedPoly:
        return TruncatedPoly.const(self.order, c)

    def lift(self, elem: GradedElement, power: int = 1) -> GradedElement:
        """Tensor a rational element with t^power."""
        if power > self.order:
            return self.l3.zero()
        tp = TruncatedPoly(self.order, [0] * power + [1])
        return elem.scale(tp)

    def require_ideal(self, elem: GradedElement, what: str = "element"):
        for nm, c in elem.coords.items():
            if not isinstance(c, TruncatedPoly) or c.order != self.order:
                raise ValueError("%s must have order-%d coefficients" % (what, self.order))
            if not c.in_ideal():
                raise ValueError("%s has a nonzero constant term at %r" % (what, nm))

    def element_valuation(self, elem: GradedElement) -> int:
        """Minimum coefficient valuation; order+1 for the zero element."""
        vals = [ideal_valuation(c) for c in elem.coords.values()]
        return min(vals) if vals else self.order + 1


def mc_defect(ctx: MCContext, xi: GradedElement) -> GradedElement:
    """The curvature of a degree-1 element with ideal coefficients."""
    ctx.require_ideal(xi, "Maurer-Cartan candidate")
    if not xi.is_zero() and xi.degree() != 1:
        raise ValueError("Maurer-Cartan candidates have degree 1")
    st = ctx.structure
    total = ctx.l3.zero()
    d = st.bracket(1)
    if d is not None:
        total = total + d.evaluate([xi])
    b2 = st.bracket(2)
    if b2 is not None:
        total = total + b2.evaluate([xi, xi]).scale(Fraction(1, 2))
    b3 = st.bracket(3)
    if b3 is not None:
        total = total + b3.evaluate([xi, xi, xi]).scale(Fraction(1, 6))
    return total


class MCElement:
    """A degree-1 element with ideal coefficients satisfying the curvature
    equation (checked at construction unless explicitly waived)."""

    def __init__(self, ctx: MCContext, value: GradedElement, check: bool = True):
        ctx.require_ideal(value, "Maurer-Cartan element")
        if not value.is_zero() and value.degree() != 1:
            raise ValueError("Maurer-Cartan elements have degree 1")
        if check:
            defect = mc_defect(ctx, value)
            if not defect.is_zero():
                raise ValueError("curvature equation fails: %r" % (defect,))
        self.ctx = ctx
        self.value = value

    def __eq__(self, other):
        return isinstance(other, MCElement) and self.value == other.value

    def __repr__(self):
        return "MCElement(%r)" % (self.value,)


def twisted_bracket(ctx: MCContext, xi: GradedElement, arity: int, args) -> GradedElement:
    """Bracket of the xi-deformed structure: insert powers of xi up to the cap."""
    if arity < 1:
        raise ValueError("arity must be >= 1")
    st = ctx.structure
    total = ctx.l3.zero()
    for k in range(0, 3 - arity + 1):
        table = st.bracket(arity + k)
        if table is None or table.is_zero():
            continue
        term = table.evaluate([xi] * k + list(args))
        total = total + term.scale(Fraction(1, factorial(k)))
    return total


def _compositions(k: int, parts: int):
    """Ordered tuples of positive integers with the given sum."""
    if parts == 1:
        yield (k,)
        return
    for first in range(1, k - parts + 2):
        for rest in _compositions(k - first, parts - 1):
            yield (first,) + rest


def gauge_getzler(ctx: MCContext, b: GradedElement, xi: MCElement) -> MCElement:
    """Gauge action of a degree-0 form with ideal coefficients.

    The first correction is the twisted differential of b; the recursion

      e_{k+1} = sum_{n=1..k} 1/n! sum_{k_1+...+k_n=k} k!/(k_1!...k_n!)
                [b, e_{k_1}, ..., e_{k_n}]^xi_{n+1}

    terminates because e_k has ideal valuation at least k (asserted).
    """
    ctx.require_ideal(b, "gauge parameter")
    if not b.is_zero() and b.degree() != 0:
        raise ValueError("gauge parameters have degree 0")
    xv = xi.value
    e = {1: twisted_bracket(ctx, xv, 1, [b])}
    if ctx.element_valuation(e[1]) < 1:
        raise AssertionError("valuation of the first correction dropped below 1")
    for k in range(1, ctx.order):
        term = ctx.l3.zero()
        for n in range(1, min(k, 2) + 1):
            outer = Fraction(1, factorial(n))
            for comp in _compositions(k, n):
                weight = outer * factorial(k)
                for ki in comp:
                    weight /= factorial(ki)
                args = [b] + [e[ki] for ki in comp]
                term = term + twisted_bracket(ctx, xv, n + 1, args).scale(weight)
        e[k + 1] = term
        if ctx.element_valuation(e[k + 1]) < k + 1:
            raise AssertionError("valuation of correction %d dropped below %d" % (k + 1, k + 1))
    out = xv
    for k, ek in e.items():
        out = out - ek.scale(Fraction(1, factorial(k)))
    return MCElement(ctx, out)


class TabulatedAction:
    """The three action maps of one derivation, stored as tables.

    Gauge recursions evaluate the same derivation on many elements; going
    through tables turns each evaluation into sparse lookups.  For inner
    derivations the tables combine linearly from per-symbol building blocks.
    """

    def __init__(self, l3: L3Pair, kappa_elem: GradedElement, mu1: MultiTable, mu2: MultiTable):
        self.l3 = l3
        self.kappa = kappa_elem
        self.mu1 = mu1
        self.mu2 = mu2

    @classmethod
    def from_derivation(cls, l3: L3Pair, delta: Derivation) -> "TabulatedAction":
        basis = l3.basis
        t1 = MultiTable(basis, 1, "skew", 0)
        for nm in basis.names:
            val = act1(l3, delta, basis.unit(nm))
            if not val.is_zero():
                t1.set_value((nm,), val)
        t2 = MultiTable(basis, 2, "skew", -1)
        for key in iter_normalized_tuples(basis, 2, symmetric=False):
            val = act2_symbols(l3, delta, *key)
            if not val.is_zero():
                t2.set_value(key, val)
        return cls(l3, kappa(l3, delta), t1, t2)

    @classmethod
    def combine(cls, l3: L3Pair, parts) -> "TabulatedAction":
        """Linear combination sum(coeff * action) of tabulated actions."""
        basis = l3.basis
        kap = basis.zero()
        t1 = MultiTable(basis, 1, "skew", 0)
        t2 = MultiTable(basis, 2, "skew", -1)
        for coeff, action in parts:
            kap = kap + action.kappa.scale(coeff)
            for table, src in ((t1, action.mu1), (t2, action.mu2)):
                for key, val in src.values.items():
                    prev = table.values.get(key)
                    new = val.scale(coeff) if prev is None else prev + val.scale(coeff)
                    if new.is_zero():
                        table.values.pop(key, None)
                    else:
                        table.values[key] = new
        return cls(l3, kap, t1, t2)


@lru_cache(maxsize=None)
def _ad_symbol_action(l3: L3Pair, b_name: str) -> TabulatedAction:
    """Tabulated action of the inner derivation of one complement symbol."""
    delta = ad(l3.pair.algebra, l3.pair.algebra.unit(b_name))
    return TabulatedAction.from_derivation(l3, delta)


def ad_b_action(ctx: MCContext, b: GradedElement) -> TabulatedAction:
    """Tabulated action of ad_b, combined linearly from cached symbol blocks."""
    ctx.require_ideal(b, "bracketing parameter")
    parts = []
    for nm, c in b.coords.items():
        K, b_sym = ctx.l3.decode[nm]
        if K:
            raise ValueError("bracketing parameters have degree 0")
        parts.append((c, _ad_symbol_action(ctx.l3, b_sym)))
    return TabulatedAction.combine(ctx.l3, parts)


def _as_action(ctx: MCContext, delta) -> TabulatedAction:
    if isinstance(delta, TabulatedAction):
        return delta
    if isinstance(delta, Derivation):
        return TabulatedAction.from_derivation(ctx.l3, delta)
    raise TypeError("expected a Derivation or a TabulatedAction")


def _mu_series_first(ctx: MCContext, action: TabulatedAction, xi: GradedElement, args) -> GradedElement:
    """sum_j ((-1)^j / j!) of the (j+n)-action on (xi^j, args)."""
    l3 = ctx.l3
    n = len(args)
    total = l3.zero()
    if n == 0:
        total = total + action.kappa
    for j in range(0, 3 - n):
        m = j + n
        if m == 0:
            continue
        sign = Fraction((-1) ** j, factorial(j))
        if m == 1:
            arg = xi if j == 1 else args[0]
            total = total + action.mu1.evaluate([arg]).scale(sign)
        elif m == 2:
            if j == 0:
                total = total + action.mu2.evaluate([args[0], args[1]]).scale(sign)
            elif j == 1:
                total = total + action.mu2.evaluate([xi, args[0]]).scale(sign)
            else:
                total = total + action.mu2.evaluate([xi, xi]).scale(sign)
    return total


def gauge_h(ctx: MCContext, delta, xi: MCElement) -> MCElement:
    """Gauge action of a derivation with ideal coefficients.

    The first correction is kappa(delta) - delta |> xi + 1/2 delta |> (xi, xi);
    later corrections feed earlier ones back through the action maps with
    alternating xi insertions.  The series is finite: actions with three or
    more form arguments vanish and the k-th correction has valuation at
    least k (asserted).

    ``delta`` may be a Derivation with ideal coefficients or a pre-tabulated
    action (the fast path for inner derivations).
    """
    if isinstance(delta, Derivation):
        for nm in delta.algebra.names:
            ctx.require_ideal(delta.images[nm], "derivation parameter image of %r" % (nm,))
    action = _as_action(ctx, delta)
    ctx.require_ideal(action.kappa, "curvature of the derivation parameter")
    xv = xi.value
    e = {1: _mu_series_first(ctx, action, xv, [])}
    if ctx.element_valuation(e[1]) < 1:
        raise AssertionError("valuation of the first correction dropped below 1")
    for k in range(1, ctx.order):
        term = ctx.l3.zero()
        for n in range(1, min(k, 2) + 1):
            outer = Fraction(1, factorial(n))
            for comp in _compositions(k, n):
                weight = outer * factorial(k)
                for ki in comp:
                    weight /= factorial(ki)
                args = [e[ki] for ki in comp]
                term = term + _mu_series_first(ctx, action, xv, args).scale(weight)
        e[k + 1] = term
        if ctx.element_valuation(e[k + 1]) < k + 1:
            raise AssertionError("valuation of correction %d dropped below %d" % (k + 1, k + 1))
    out = xv
    for k, ek in e.items():
        out = out - ek.scale(Fraction(1, factorial(k)))
    return MCElement(ctx, out)


def ad_b(ctx: MCContext, b: GradedElement) -> Derivation:
    """The inner derivation bracketing with a degree-0 form parameter."""
    pair = ctx.l3.pair
    ctx.require_ideal(b, "bracketing parameter")
    b_lie = ctx.l3.to_b_element(b)
    images = {}
    for nm in pair.algebra.names:
        img = pair.algebra.bracket(b_lie, pair.algebra.unit(nm))
        images[nm] = GradedElement(
            pair.algebra.basis,
            {k: (c if isinstance(c, TruncatedPoly) else ctx.const(c)) for k, c in img.coords.items()},
        )
    return Derivation(pair.algebra, images)


def bridge_defects(ctx: MCContext, b: GradedElement):
    """The identities tying the inner derivation to the deformed brackets.

    Curvature of ad_b is the differential of b, its degree-0 action is the
    binary bracket with b, and its pairing is the ternary bracket with b;
    checked on all basis instances with truncated-polynomial coefficients.
    """
    l3 = ctx.l3
    st = ctx.structure
    action = ad_b_action(ctx, b)
    bad = []
    d = st.bracket(1)
    db = d.evaluate([b]) if d is not None else l3.zero()
    if action.kappa != db:
        bad.append(("curvature-vs-differential", ()))
    b2 = st.bracket(2)
    b3 = st.bracket(3)
    for nm in l3.basis.names:
        unit = l3.basis.unit(nm)
        rhs = b2.evaluate([b, unit]) if b2 is not None else l3.zero()
        if action.mu1.evaluate([unit]) != rhs:
            bad.append(("action1-vs-bracket2", (nm,)))
    for key in iter_normalized_tuples(l3.basis, 2, symmetric=False):
        x, y = key
        rhs = (
            b3.evaluate([b, l3.basis.unit(x), l3.basis.unit(y)]) if b3 is not None else l3.zero()
        )
        if action.mu2.eval_basis(key) != rhs:
            bad.append(("action2-vs-bracket3", key))
    return bad


def check_gauge_coincidence(ctx: MCContext, b: GradedElement, xi: MCElement, check_bridges: bool = True):
    """Compare the two gauge actions for the inner derivation of b.

    Returns (equal, difference); the bridge identities driving the
    coincidence are asserted first unless explicitly waived.
    """
    if check_bridges:
        bridges = bridge_defects(ctx, b)
        if bridges:
            raise AssertionError("bridge identities fail: %s" % (bridges,))
    lhs = gauge_h(ctx, ad_b_action(ctx, b), xi)
    rhs = gauge_getzler(ctx, b, xi)
    diff = lhs.value - rhs.value
    return diff.is_zero(), diff


class Obstruction:
    """First unsolvable order of the order-by-order extension, with the
    inhomogeneous term that has no preimage under the differential."""

    def __init__(self, order: int, element: GradedElement):
        self.order = order
        self.element = element

    def __repr__(self):
        return "Obstruction(order=%d, %r)" % (self.order, self.element)


def _differential_rows(ctx: MCContext):
    l3 = ctx.l3
    d = ctx.structure.bracket(1)
    deg1 = [nm for nm in l3.basis.names if l3.basis.degree(nm) == 1]
    deg2 = [nm for nm in l3.basis.names if l3.basis.degree(nm) == 2]
    rows = []
    for out_nm in deg2:
        row = []
        for in_nm in deg1:
            val = d.eval_basis((in_nm,)) if d is not None else None
            row.append(val.coords.get(out_nm, Fraction(0)) if val is not None else Fraction(0))
        rows.append(row)
    return deg1, deg2, rows


def mc_extend(ctx: MCContext, xi1: GradedElement):
    """Extend a closed degree-1 seed to a Maurer-Cartan element order by order.

    The seed has rational coefficients and is killed by the differential;
    each higher order solves one linear system against the differential.
    Returns an MCElement, or the first Obstruction when a system is
    inconsistent.
    """
    l3 = ctx.l3
    st = ctx.structure
    if not xi1.is_zero() and xi1.degree() != 1:
        raise ValueError("the seed must have degree 1")
    d = st.bracket(1)
    if d is not None and not d.evaluate([xi1]).is_zero():
        raise ValueError("the seed is not closed")
    deg1, deg2, rows = _differential_rows(ctx)
    layers = {1: xi1}
    for m in range(2, ctx.order + 1):
        partial = l3.zero()
        for k, layer in layers.items():
            partial = partial + ctx.lift(layer, k)
        curv = mc_defect(ctx, partial)
        c_m = {}
        for nm, c in curv.coords.items():
            coeff = c.coefficient(m)
            if coeff:
                c_m[nm] = coeff
        if not c_m:
            layers[m] = l3.zero()
            continue
        rhs = [-c_m.get(nm, Fraction(0)) for nm in deg2]
        sol = linalg.solve(rows, rhs)
        if sol is None:
            # report the unreachable right-hand side of the linear step
            return Obstruction(m, GradedElement(l3.basis, {nm: -c for nm, c in c_m.items()}))
        layers[m] = GradedElement(l3.basis, {nm: c for nm, c in zip(deg1, sol) if c})
    total = l3.zero()
    for k, layer in layers.items():
        total = total + ctx.lift(layer, k)
    return MCElement(ctx, total)


# --- seeded random instances --------------------------------------------------

def random_ideal_poly(rng: random.Random, order: int) -> TruncatedPoly:
    return TruncatedPoly(order, [0] + [rng.randint(-3, 3) for _ in range(order)])


def random_gauge_parameter(ctx: MCContext, rng: random.Random) -> GradedElement:
    """Random degree-0 form with coefficients in the ideal."""
    coords = {}
    for nm in ctx.l3.basis.names:
        if ctx.l3.basis.degree(nm) == 0:
            p = random_ideal_poly(rng, ctx.order)
            if p:
                coords[nm] = p
    return GradedElement(ctx.l3.basis, coords)


def random_mc_element(ctx: MCContext, rng: random.Random, attempts: int = 60) -> MCElement:
    """Random Maurer-Cartan element produced by extending a random closed seed.

    Seeds are random combinations of closed degree-1 directions.  Extension
    can be genuinely obstructed, so rejected seeds are retried with shrinking
    support (sparser combinations are far more likely to extend).
    """
    l3 = ctx.l3
    deg1, _deg2, rows = _differential_rows(ctx)
    kernel = linalg.nullspace(rows, len(deg1))
    if not kernel:
        return MCElement(ctx, l3.zero())
    for attempt in range(attempts):
        width = max(1, len(kernel) >> min(attempt // 3, 8))
        chosen = rng.sample(range(len(kernel)), min(width, len(kernel)))
        coords = {}
        for idx in chosen:
            c = rng.randint(-3, 3)
            if not c:
                continue
            for nm, v in zip(deg1, kernel[idx]):
                if v:
                    coords[nm] = coords.get(nm, Fraction(0)) + c * v
        seed = GradedElement(l3.basis, {k: c for k, c in coords.items() if c})
        result = mc_extend(ctx, seed)
        if isinstance(result, MCElement):
            return result
    raise RuntimeError("no unobstructed Maurer-Cartan element found in %d attempts" % attempts)
