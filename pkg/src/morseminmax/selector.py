"""Minmax and maxmin critical-value selectors over every coefficient system.

Over a field the two selectors agree and sit at the unique free critical
point of the global-index degree. Over the integers the minmax is the first
filtration level whose prefix carries an integer cycle generating the global
rank-one homology; the maxmin is always evaluated through the negated
complex, so minmax and maxmin can genuinely differ over the integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .barannikov import reduce as _reduce
from .coeff import (
    Coefficients,
    image_index,
    integer_kernel_basis,
    left_inverse,
    _snf_inplace,
)
from .complexes import CriticalPoint, FilteredComplex, global_index, negate
from .errors import InternalInconsistencyError

Selected = tuple[Fraction, CriticalPoint]


def minmax_field(c: FilteredComplex, field: Coefficients) -> Selected:
    """Value and identity of the unique free critical point in the global degree."""
    if not field.is_field:
        raise ValueError("minmax_field needs Q or a prime field")
    key = ("minmax_field", field.token())
    cached = c._cache.get(key)
    if cached is not None:
        return cached
    lam = global_index(c)
    frees = _reduce(c, field).free_of_degree(lam)
    if len(frees) != 1:
        raise InternalInconsistencyError(
            f"expected one free point of degree {lam}, found "
            f"{[p.name for p in frees]}")
    result = (frees[0].value, frees[0])
    c._cache[key] = result
    return result


def maxmin_field(c: FilteredComplex, field: Coefficients) -> Selected:
    """Field maxmin through the negated complex; must equal the minmax."""
    value, point = minmax_field(negate(c), field)
    result = (-value, c.point(point.name))
    direct = minmax_field(c, field)
    if result != direct:
        raise InternalInconsistencyError(
            f"field maxmin {result[1].name} differs from minmax {direct[1].name}")
    return result


def _int_scan_data(c: FilteredComplex, lam: int):
    """Kernel lattice, boundary coordinates, and the generator functional.

    The degree-lambda cycle lattice is presented by an integer kernel basis Z;
    boundaries are rewritten in Z-coordinates, and the Smith form of that
    presentation yields a functional w that kills boundaries and maps the
    cycle lattice onto the integers, exhibiting cycles-mod-boundaries as Z.
    """
    cached = c._cache.get("int_scan")
    if cached is not None:
        return cached
    n_lam = len(c.points(lam))
    down = [list(r) for r in c.matrix(lam)] if c.points(lam - 1) else []
    Z = integer_kernel_basis(down, ncols=n_lam)
    z = len(Z)
    up_pts = c.points(lam + 1)
    up = c.matrix(lam + 1)
    bcols = [[up[i][j] for i in range(n_lam)] for j in range(len(up_pts))]
    L = left_inverse([[Z[j][i] for j in range(z)] for i in range(n_lam)]) if z else []
    Y = []
    for col in bcols:
        coords = [sum(L[r][i] * col[i] for i in range(n_lam)) for r in range(z)]
        if any(x.denominator != 1 for x in coords):
            raise InternalInconsistencyError("boundary outside the cycle lattice")
        Y.append([int(x) for x in coords])
    Ymat = [[Y[j][r] for j in range(len(Y))] for r in range(z)]
    _, S, _, Uinv, _ = _snf_inplace(Ymat, len(Y))
    r = sum(1 for i in range(min(z, len(Y))) if S[i][i] != 0)
    divisors = [S[i][i] for i in range(r)]
    if z - r != 1 or any(d != 1 for d in divisors):
        raise InternalInconsistencyError(
            "cycle/boundary presentation is not rank one and torsion free")
    w = Uinv[z - 1]
    data = (Z, Y, w, L)
    c._cache["int_scan"] = data
    return data


def minmax_int(c: FilteredComplex) -> Selected:
    """Smallest critical value whose prefix carries an integer cycle that
    generates the global homology; the witness is the point at that value."""
    cached = c._cache.get("minmax_int")
    if cached is not None:
        return cached
    lam = global_index(c)
    Z, Y, w, L = _int_scan_data(c, lam)
    n_lam = len(c.points(lam))
    down_full = [list(r) for r in c.matrix(lam)] if c.points(lam - 1) else []
    for count, point in enumerate(c.points(lam), start=1):
        if down_full:
            restricted = [row[:count] for row in down_full]
            kernel = integer_kernel_basis(restricted, ncols=count)
        else:
            kernel = integer_kernel_basis([], ncols=count)
        gens = []
        for vec in kernel:
            padded = list(vec) + [0] * (n_lam - count)
            coords = [sum(L[r][i] * padded[i] for i in range(n_lam))
                      for r in range(len(Z))]
            if any(x.denominator != 1 for x in coords):
                raise InternalInconsistencyError("prefix cycle outside the lattice")
            gens.append([int(x) for x in coords])
        if image_index(gens, w, Y) == 1:
            result = (point.value, point)
            c._cache["minmax_int"] = result
            return result
    raise InternalInconsistencyError("no prefix generates the global class")


def maxmin_int(c: FilteredComplex) -> Selected:
    """Integer maxmin through the negated complex."""
    value, point = minmax_int(negate(c))
    return -value, c.point(point.name)


@dataclass(frozen=True)
class SelectorEntry:
    coeff: Coefficients
    minmax_value: Fraction
    minmax_point: CriticalPoint
    maxmin_value: Fraction
    maxmin_point: CriticalPoint

    @property
    def equal(self) -> bool:
        return self.minmax_value == self.maxmin_value


@dataclass(frozen=True)
class SelectorReport:
    """Selector values per requested coefficient system plus consistency flags.

    ``chain_ok`` states maxmin(Z) <= maxmin(field) = minmax(field) <= minmax(Z)
    for every requested field; ``propagation_ok`` states that whenever the integer
    selectors agree, every field value equals them. The integer selectors are
    always evaluated for the flags, whether or not Z was requested.
    """

    entries: tuple[SelectorEntry, ...]
    int_equal: bool
    chain_ok: bool
    propagation_ok: bool

    def entry(self, token: str) -> SelectorEntry:
        for e in self.entries:
            if e.coeff.token() == token:
                return e
        raise KeyError(token)


def selector_report(c: FilteredComplex, coeffs) -> SelectorReport:
    """Evaluate all requested selectors and the cross-system consistency flags."""
    mm_v, mm_p = minmax_int(c)
    sm_v, sm_p = maxmin_int(c)
    entries = []
    seen = set()
    field_values = []
    for co in coeffs:
        if co.token() in seen:
            continue
        seen.add(co.token())
        if co.is_integers:
            entries.append(SelectorEntry(co, mm_v, mm_p, sm_v, sm_p))
        else:
            fv, fp = minmax_field(c, co)
            gv, gp = maxmin_field(c, co)
            entries.append(SelectorEntry(co, fv, fp, gv, gp))
            field_values.append(fv)
            if fv != gv:
                raise InternalInconsistencyError(
                    f"field selectors disagree over {co}: {fv} vs {gv}")
    int_equal = mm_v == sm_v
    chain_ok = all(sm_v <= fv <= mm_v for fv in field_values)
    propagation_ok = (not int_equal) or all(fv == mm_v for fv in field_values)
    return SelectorReport(entries=tuple(entries), int_equal=int_equal,
                          chain_ok=chain_ok, propagation_ok=propagation_ok)


def _incident(c: FilteredComplex, p: CriticalPoint) -> list[CriticalPoint]:
    """Points one degree away linked to p by a nonzero boundary coefficient."""
    out = [q for _, q in c.boundary_chain(p.name)]
    k, col = p.degree, c.points(p.degree).index(p)
    up = c.points(k + 1)
    if up:
        mat = c.matrix(k + 1)
        out += [up[j] for j in range(len(up)) if mat[col][j] != 0]
    return out


def capitanio_criterion(c: FilteredComplex, point) -> bool:
    """Incidence-gap test: every neighbor of p admits a strictly closer
    incident point. Passing does not imply freeness; the capitanio_vprime
    fixture has a point that passes without being free. Vacuously true for
    points with no incidences."""
    p = c.point(point if isinstance(point, str) else point.name)
    for eta in _incident(c, p):
        gap = abs(p.value - eta.value)
        others = (xi for xi in _incident(c, eta) if xi.name != p.name)
        if not any(abs(xi.value - eta.value) < gap for xi in others):
            return False
    return True
