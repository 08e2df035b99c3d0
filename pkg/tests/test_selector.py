from fractions import Fraction

import pytest

from morseminmax.coeff import Coefficients, INTEGERS, RATIONALS
from morseminmax.complexes import FilteredComplex, negate
from morseminmax.errors import NotAdmissibleError
from morseminmax.gen import (
    paper_fixture,
    perturb_values,
    random_admissible_complex,
    single_point,
)
from morseminmax.selector import (
    capitanio_criterion,
    maxmin_field,
    maxmin_int,
    minmax_field,
    minmax_int,
    selector_report,
)

F2 = Coefficients.prime_field(2)
F3 = Coefficients.prime_field(3)
F5 = Coefficients.prime_field(5)


@pytest.fixture
def laudenbach():
    return paper_fixture("laudenbach")


@pytest.fixture
def f0():
    return paper_fixture("f0")


@pytest.fixture
def vprime():
    return paper_fixture("capitanio_vprime")


def test_minmax_field_laudenbach(laudenbach):
    value, point = minmax_field(laudenbach, F2)
    assert (value, point.name) == (3, "xi3_n")
    value, point = minmax_field(laudenbach, RATIONALS)
    assert (value, point.name) == (2, "xi2_n")


def test_maxmin_field_laudenbach(laudenbach):
    value, point = maxmin_field(laudenbach, F2)
    assert (value, point.name) == (3, "xi3_n")
    value, point = maxmin_field(laudenbach, F5)
    assert (value, point.name) == (2, "xi2_n")


def test_field_selectors_single_point():
    c = single_point(2, Fraction(7, 2), 4)
    for field in (F2, RATIONALS):
        assert minmax_field(c, field)[0] == Fraction(7, 2)
        assert maxmin_field(c, field)[0] == Fraction(7, 2)


def test_minmax_field_requires_field(laudenbach):
    with pytest.raises(ValueError):
        minmax_field(laudenbach, INTEGERS)


def test_large_prime_field_at_runtime(laudenbach):
    f97 = Coefficients.parse("f97")
    assert minmax_field(laudenbach, f97) == (2, laudenbach.point("xi2_n"))
    assert maxmin_field(laudenbach, f97) == (2, laudenbach.point("xi2_n"))


def test_minmax_int_laudenbach(laudenbach):
    value, point = minmax_int(laudenbach)
    assert (value, point.name) == (3, "xi3_n")


def test_maxmin_int_laudenbach(laudenbach):
    value, point = maxmin_int(laudenbach)
    assert (value, point.name) == (2, "xi2_n")


def test_int_selectors_single_point():
    c = single_point(1, -4, 3)
    assert minmax_int(c)[0] == -4
    assert maxmin_int(c)[0] == -4


def test_int_selectors_f0(f0):
    assert minmax_int(f0) == (2, f0.point("xi2_n"))
    assert maxmin_int(f0) == (2, f0.point("xi2_n"))


def test_not_admissible_propagates():
    c = FilteredComplex.build(3, [("a", 1, 0), ("b", 1, 1)], {})
    with pytest.raises(NotAdmissibleError):
        minmax_int(c)
    with pytest.raises(NotAdmissibleError):
        minmax_field(c, RATIONALS)


def test_selector_report_laudenbach(laudenbach):
    report = selector_report(
        laudenbach, [INTEGERS, F2, F3, RATIONALS])
    z = report.entry("z")
    assert (z.minmax_value, z.minmax_point.name) == (3, "xi3_n")
    assert (z.maxmin_value, z.maxmin_point.name) == (2, "xi2_n")
    assert not z.equal
    f2 = report.entry("f2")
    assert (f2.minmax_value, f2.maxmin_value) == (3, 3)
    for tok in ("f3", "q"):
        e = report.entry(tok)
        assert (e.minmax_value, e.maxmin_value) == (2, 2)
        assert e.equal
    assert not report.int_equal
    assert report.chain_ok
    assert report.propagation_ok  # vacuous: integer selectors differ


def test_selector_report_single_point():
    c = single_point(2, 9, 4)
    report = selector_report(c, [INTEGERS, F2, F5, RATIONALS])
    assert all(e.minmax_value == 9 and e.maxmin_value == 9 for e in report.entries)
    assert report.int_equal and report.chain_ok and report.propagation_ok


def test_selector_report_certified_random():
    for seed in range(10):
        c = random_admissible_complex(seed, max_points=18)
        report = selector_report(c, [INTEGERS, RATIONALS, F2])
        assert report.int_equal and report.chain_ok and report.propagation_ok
        values = {(e.minmax_value, e.maxmin_value) for e in report.entries}
        assert len(values) == 1


def test_selector_report_flags_without_z(laudenbach):
    report = selector_report(laudenbach, [F2, RATIONALS])
    assert not report.int_equal
    assert report.chain_ok
    assert [e.coeff.token() for e in report.entries] == ["f2", "q"]


def test_duality_minmax_vs_negated(laudenbach):
    for c in (laudenbach, single_point(2, 3, 4)):
        neg = negate(c)
        mm = minmax_int(c)
        sm = maxmin_int(c)
        assert sm[0] == -minmax_int(neg)[0]
        assert mm[0] == -maxmin_int(neg)[0]


def test_translation_and_scaling_equivariance(laudenbach):
    def transform(c, scale, shift):
        points = [(p.name, p.degree, p.value * scale + shift) for p in c.all_points()]
        boundaries = {
            p.name: {q.name: coeff for coeff, q in c.boundary_chain(p.name)}
            for p in c.all_points() if c.boundary_chain(p.name)
        }
        return FilteredComplex.build(c.ambient_dim, points, boundaries)

    scale, shift = Fraction(3, 2), Fraction(-7, 3)
    moved = transform(laudenbach, scale, shift)
    for system in (INTEGERS, F2, RATIONALS):
        if system.is_integers:
            base_mm, base_sm = minmax_int(laudenbach), maxmin_int(laudenbach)
            got_mm, got_sm = minmax_int(moved), maxmin_int(moved)
        else:
            base_mm, base_sm = minmax_field(laudenbach, system), maxmin_field(laudenbach, system)
            got_mm, got_sm = minmax_field(moved, system), maxmin_field(moved, system)
        assert got_mm[0] == base_mm[0] * scale + shift
        assert got_sm[0] == base_sm[0] * scale + shift
        assert got_mm[1].name == base_mm[1].name
        assert got_sm[1].name == base_sm[1].name


def test_stability_under_perturbation(laudenbach):
    eps = Fraction(1, 4)
    moved = perturb_values(laudenbach, eps, seed=3)
    assert abs(minmax_int(moved)[0] - minmax_int(laudenbach)[0]) <= eps
    assert abs(maxmin_int(moved)[0] - maxmin_int(laudenbach)[0]) <= eps
    for field in (F2, F3, RATIONALS):
        assert abs(minmax_field(moved, field)[0] - minmax_field(laudenbach, field)[0]) <= eps


def test_split_complex_with_characteristic_three():
    # same shape as the laudenbach complex but with 3 in place of 2: the
    # integer selectors split and F3 is now the odd characteristic out.
    # Hand reduction: over Q (and F2) the free point is c; over F3 it is d.
    c = FilteredComplex.build(
        4,
        [("a", 1, 0), ("b", 2, 1), ("c", 2, 2), ("d", 2, 3), ("e", 3, 4)],
        {"b": {"a": 1}, "c": {"a": -3}, "d": {"a": -1}, "e": {"c": 1, "d": -3}},
    )
    assert minmax_int(c) == (3, c.point("d"))
    assert maxmin_int(c) == (2, c.point("c"))
    assert minmax_field(c, F3) == (3, c.point("d"))
    for field in (F2, F5, RATIONALS):
        assert minmax_field(c, field) == (2, c.point("c"))
        assert maxmin_field(c, field) == (2, c.point("c"))
    report = selector_report(c, [INTEGERS, F2, F3, RATIONALS])
    assert not report.int_equal
    assert report.chain_ok and report.propagation_ok


def test_capitanio_criterion(vprime):
    assert capitanio_criterion(vprime, "xi2_n") is True
    assert capitanio_criterion(vprime, "xi3_n") is True
    assert capitanio_criterion(vprime, "xi1_n") is False
    with pytest.raises(ValueError):
        capitanio_criterion(vprime, "nope")


def test_capitanio_criterion_vacuous():
    c = single_point(2, 0, 4)
    assert capitanio_criterion(c, "xi") is True


def test_capitanio_refutation(vprime):
    # the criterion passes on xi2_n although xi2_n is not free over Q
    from morseminmax.barannikov import reduce

    free = reduce(vprime, RATIONALS).free_names()
    assert free == {"xi3_n"}
    assert capitanio_criterion(vprime, "xi2_n")
    assert "xi2_n" not in free
