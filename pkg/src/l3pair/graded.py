"""Graded vector spaces with named bases, sparse elements, and multilinear tables.

A ``MultiTable`` stores a graded skew- or graded-symmetric multilinear map by
its values on normalized basis tuples (sorted by basis order, Koszul sign
folded in).  Evaluation on arbitrary tuples re-normalizes with the chi (skew)
or epsilon (symmetric) sign, so table equality is plain mapping equality.

Degrees are kept unshifted everywhere; a ``ShiftedBasis`` merely re-reads the
degree of each symbol on demand.  That single source of truth for |x| is what
keeps the degree-shift bookkeeping honest.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import format_scalar, scalar_is_zero
from .signs import shift_transport_sign


class GradedBasis:
    """Ordered finite basis of a graded vector space: (name, degree) pairs."""

    def __init__(self, symbols):
        symbols = tuple((str(n), int(d)) for n, d in symbols)
        names = [n for n, _ in symbols]
        if len(set(names)) != len(names):
            raise ValueError("duplicate basis names")
        self.symbols = symbols
        self.names = tuple(names)
        self._index = {n: i for i, n in enumerate(names)}
        self._degree = {n: d for n, d in symbols}

    def index(self, name: str) -> int:
        return self._index[name]

    def degree(self, name: str) -> int:
        return self._degree[name]

    def parity(self, name: str) -> int:
        return self._degree[name] & 1

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other):
        return isinstance(other, GradedBasis) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return "GradedBasis(%r)" % (self.symbols,)

    def shifted(self, shift: int = 1) -> "ShiftedBasis":
        return ShiftedBasis(self, shift)

    def zero(self) -> "GradedElement":
        return GradedElement(self, {})

    def unit(self, name: str) -> "GradedElement":
        if name not in self._index:
            raise ValueError("unknown basis symbol %r" % (name,))
        return GradedElement(self, {name: Fraction(1)})


class ShiftedBasis:
    """View of a basis with all degrees lowered by ``shift``."""

    def __init__(self, underlying: GradedBasis, shift: int = 1):
        if isinstance(underlying, ShiftedBasis):
            shift = shift + underlying.shift
            underlying = underlying.underlying
        self.underlying = underlying
        self.shift = shift
        self.names = underlying.names
        self.symbols = tuple((n, d - shift) for n, d in underlying.symbols)
        self._degree = {n: d for n, d in self.symbols}

    def index(self, name: str) -> int:
        return self.underlying.index(name)

    def degree(self, name: str) -> int:
        return self._degree[name]

    def parity(self, name: str) -> int:
        return self._degree[name] & 1

    def __contains__(self, name: str) -> bool:
        return name in self.underlying

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, ShiftedBasis)
            and self.underlying == other.underlying
            and self.shift == other.shift
        )

    def __hash__(self):
        return hash((self.underlying, self.shift))

    def __repr__(self):
        return "ShiftedBasis(%r, %d)" % (self.underlying, self.shift)

    def zero(self) -> "GradedElement":
        return GradedElement(self, {})

    def unit(self, name: str) -> "GradedElement":
        return GradedElement(self, {name: Fraction(1)})


class GradedElement:
    """Finitely supported coordinate vector over a (possibly shifted) basis.

    Coordinates are Fractions or TruncatedPolys; zeros are scrubbed so that
    equality of elements is equality of coordinate mappings.
    """

    __slots__ = ("space", "coords")

    def __init__(self, space, coords):
        self.space = space
        self.coords = {n: c for n, c in coords.items() if not scalar_is_zero(c)}
        for n in self.coords:
            if n not in space:
                raise ValueError("symbol %r not in basis" % (n,))

    def is_zero(self) -> bool:
        return not self.coords

    def degree(self):
        """Common degree of the supported symbols; None for the zero element."""
        degs = {self.space.degree(n) for n in self.coords}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("element is not homogeneous: degrees %s" % sorted(degs))
        return degs.pop()

    def _require_same_space(self, other):
        if self.space != other.space:
            raise ValueError("elements live in different spaces")

    def __add__(self, other):
        self._require_same_space(other)
        out = dict(self.coords)
        for n, c in other.coords.items():
            out[n] = out.get(n, 0) + c
        return GradedElement(self.space, out)

    def __sub__(self, other):
        self._require_same_space(other)
        out = dict(self.coords)
        for n, c in other.coords.items():
            out[n] = out.get(n, 0) - c
        return GradedElement(self.space, out)

    def __neg__(self):
        return GradedElement(self.space, {n: -c for n, c in self.coords.items()})

    def scale(self, c) -> "GradedElement":
        if scalar_is_zero(c):
            return GradedElement(self.space, {})
        return GradedElement(self.space, {n: c * v for n, v in self.coords.items()})

    def __eq__(self, other):
        return (
            isinstance(other, GradedElement)
            and self.space == other.space
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.space), tuple(sorted(self.coords))))

    def __repr__(self):
        if not self.coords:
            return "0"
        parts = []
        for n in sorted(self.coords, key=self.space.index):
            parts.append("%r*%s" % (self.coords[n], n))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            n: format_scalar(self.coords[n])
            for n in sorted(self.coords, key=self.space.index)
        }


def element_arith(a: GradedElement, b: GradedElement, c) -> GradedElement:
    """a + c*b with sparse cleanup."""
    return a + b.scale(c)


def normalize_tuple(space, names, symmetric: bool):
    """Sort a basis tuple into normal form, returning (sign, key).

    Returns (0, None) when the corresponding word vanishes: a repeated
    even-degree symbol in a wedge, or a repeated odd-degree symbol in a
    symmetric word.
    """
    arr = list(names)
    n = len(arr)
    idx = space.index
    par = space.parity
    keys = [idx(nm) for nm in arr]
    pars = [par(nm) for nm in arr]
    exp = 0
    for i in range(1, n):
        j = i
        while j > 0 and keys[j - 1] > keys[j]:
            if symmetric:
                exp += pars[j - 1] & pars[j]
            else:
                exp += 1 + (pars[j - 1] & pars[j])
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            keys[j - 1], keys[j] = keys[j], keys[j - 1]
            pars[j - 1], pars[j] = pars[j], pars[j - 1]
            j -= 1
    return _finish_normalize(arr, pars, exp, symmetric)


def _finish_normalize(arr, pars, exp, symmetric):
    for i in range(1, len(arr)):
        if arr[i] == arr[i - 1]:
            if symmetric and pars[i]:
                return 0, None
            if not symmetric and not pars[i]:
                return 0, None
    return (-1 if exp % 2 else 1), tuple(arr)


class MultiTable:
    """Graded multilinear map stored on normalized basis tuples.

    symmetry is "skew" (values transform by chi under permutation) or
    "symmetric" (epsilon).  Stored entries are homogeneous: every output
    symbol has degree sum(input degrees) + map_degree.
    """

    def __init__(self, space, arity: int, symmetry: str, map_degree: int):
        if symmetry not in ("skew", "symmetric"):
            raise ValueError("symmetry must be 'skew' or 'symmetric'")
        if arity < 0:
            raise ValueError("arity must be >= 0")
        self.space = space
        self.arity = arity
        self.symmetry = symmetry
        self.map_degree = map_degree
        self.values = {}

    @property
    def is_symmetric(self) -> bool:
        return self.symmetry == "symmetric"

    def is_zero(self) -> bool:
        return not self.values

    def copy(self) -> "MultiTable":
        t = MultiTable(self.space, self.arity, self.symmetry, self.map_degree)
        t.values = dict(self.values)
        return t

    def normalize(self, names):
        return normalize_tuple(self.space, names, self.is_symmetric)

    def set_value(self, names, value: GradedElement):
        """Record the value on a basis tuple (any order; sign is folded in)."""
        if len(names) != self.arity:
            raise ValueError("expected %d arguments, got %d" % (self.arity, len(names)))
        if value.space != self.space:
            raise ValueError("value lives in the wrong space")
        sign, key = self.normalize(names)
        if sign == 0:
            if not value.is_zero():
                raise ValueError("nonzero value on a vanishing tuple %r" % (names,))
            return
        in_deg = sum(self.space.degree(nm) for nm in key)
        for out_sym in value.coords:
            if self.space.degree(out_sym) != in_deg + self.map_degree:
                raise ValueError(
                    "inhomogeneous entry: %r on %r breaks degree %d"
                    % (out_sym, key, self.map_degree)
                )
        stored = value if sign == 1 else -value
        if stored.is_zero():
            self.values.pop(key, None)
        else:
            self.values[key] = stored

    def eval_basis(self, names) -> GradedElement:
        """Value on a tuple of basis symbols, normalizing order and sign."""
        if len(names) != self.arity:
            raise ValueError("expected %d arguments, got %d" % (self.arity, len(names)))
        sign, key = self.normalize(names)
        if sign == 0:
            return self.space.zero()
        val = self.values.get(key)
        if val is None:
            return self.space.zero()
        return val if sign == 1 else -val

    def evaluate(self, args) -> GradedElement:
        """Multilinear evaluation on sparse elements.

        Table lookups run before any coefficient product, so mostly-missing
        supports (the common case) never touch the scalar arithmetic.
        """
        from itertools import product

        if len(args) != self.arity:
            raise ValueError("expected %d arguments, got %d" % (self.arity, len(args)))
        for a in args:
            if a.space != self.space:
                raise ValueError("argument lives in the wrong space")
        if any(a.is_zero() for a in args):
            return self.space.zero()
        choices = [list(a.coords.items()) for a in args]
        total_coords = {}
        for combo in product(*choices):
            val = self.eval_basis(tuple(nm for nm, _ in combo))
            if val.is_zero():
                continue
            coeff = combo[0][1]
            for _, c in combo[1:]:
                coeff = coeff * c
            if scalar_is_zero(coeff):
                continue
            for sym, c in val.coords.items():
                total_coords[sym] = total_coords.get(sym, 0) + coeff * c
        return GradedElement(self.space, total_coords)

    def eval_prepend(self, elem: GradedElement, rest_names) -> GradedElement:
        """Evaluate with an element in the first slot and basis symbols after it."""
        coords = {}
        for sym, c in elem.coords.items():
            val = self.eval_basis((sym,) + tuple(rest_names))
            for out, v in val.coords.items():
                coords[out] = coords.get(out, 0) + c * v
        return GradedElement(self.space, coords)

    def get_sorted(self, key):
        """Stored value on a key known to be normalized already (hot path)."""
        return self.values.get(key)

    def insert_items(self, sym: str, rest):
        """(sign, value-items) for the tuple (sym,) + rest with ``rest`` sorted.

        Returns None when the word vanishes or the table has no entry.  This
        is the single-symbol insertion used by the composition kernels.
        """
        space = self.space
        idx = space.index
        si = idx(sym)
        sp = space.parity(sym)
        symmetric = self.symmetry == "symmetric"
        exp = 0
        pos = 0
        for nm in rest:
            ni = idx(nm)
            if ni < si:
                if symmetric:
                    exp += sp & space.parity(nm)
                else:
                    exp += 1 + (sp & space.parity(nm))
                pos += 1
            elif ni == si:
                if (symmetric and sp) or (not symmetric and not sp):
                    return None
                break
            else:
                break
        key = rest[:pos] + (sym,) + rest[pos:]
        val = self.values.get(key)
        if val is None:
            return None
        if exp % 2:
            return [(nm, -c) for nm, c in val.coords.items()]
        return list(val.coords.items())

    def __eq__(self, other):
        return (
            isinstance(other, MultiTable)
            and self.space == other.space
            and self.arity == other.arity
            and self.symmetry == other.symmetry
            and self.map_degree == other.map_degree
            and self.values == other.values
        )

    def __repr__(self):
        return "MultiTable(arity=%d, %s, deg=%d, %d entries)" % (
            self.arity,
            self.symmetry,
            self.map_degree,
            len(self.values),
        )

    def support(self):
        return self.values.keys()


def shift_table(table: MultiTable, direction: str) -> MultiTable:
    """Transport a table through the degree-shift isomorphism.

    ``to_shifted`` turns a skew arity-n table of degree 2-n over V into the
    symmetric degree-1 table over V[1]; ``to_unshifted`` inverts it.  The two
    directions compose to the identity.
    """
    n = table.arity
    if direction == "to_shifted":
        if table.is_symmetric:
            raise ValueError("to_shifted expects a skew table")
        base = table.space
        if isinstance(base, ShiftedBasis):
            raise ValueError("to_shifted expects a table over an unshifted basis")
        out = MultiTable(base.shifted(1), n, "symmetric", table.map_degree + n - 1)
        for key, val in table.values.items():
            degs = [base.degree(nm) for nm in key]
            s = shift_transport_sign(n, degs)
            coords = val.coords if s == 1 else {k: -c for k, c in val.coords.items()}
            out.values[key] = GradedElement(out.space, dict(coords))
        return out
    if direction == "to_unshifted":
        if not table.is_symmetric:
            raise ValueError("to_unshifted expects a symmetric table")
        shifted = table.space
        if not isinstance(shifted, ShiftedBasis) or shifted.shift != 1:
            raise ValueError("to_unshifted expects a table over a shift-1 basis")
        base = shifted.underlying
        out = MultiTable(base, n, "skew", table.map_degree - n + 1)
        for key, val in table.values.items():
            degs = [base.degree(nm) for nm in key]
            s = shift_transport_sign(n, degs)
            coords = val.coords if s == 1 else {k: -c for k, c in val.coords.items()}
            out.values[key] = GradedElement(base, dict(coords))
        return out
    raise ValueError("direction must be 'to_shifted' or 'to_unshifted'")
