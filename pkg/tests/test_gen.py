from fractions import Fraction
from pathlib import Path

import pytest

from morseminmax.barannikov import reduce
from morseminmax.coeff import RATIONALS
from morseminmax.complexes import global_index, parse_complex, serialize, validate
from morseminmax.gen import (
    FIXTURE_NAMES,
    min_value_gap,
    paper_fixture,
    perturb_values,
    random_admissible_complex,
    random_complex,
    random_complex_plan,
    single_point,
)
from morseminmax.oracle import homology
from morseminmax.selector import minmax_int

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def test_all_fixtures_validate():
    for name in FIXTURE_NAMES:
        report = validate(paper_fixture(name))
        assert report.ok, name


def test_laudenbach_shape():
    c = paper_fixture("laudenbach")
    assert c.n_points == 5
    assert len(c.points(2)) == 3
    assert global_index(c) == 2
    assert validate(c).admissible


def test_f0_admissible():
    assert validate(paper_fixture("f0")).admissible


def test_capitanio_vprime_boundary_squared():
    c = paper_fixture("capitanio_vprime")
    assert validate(c).ok  # no degree-3 points, composition vacuously zero
    assert len(c.points(2)) == 3


def test_unknown_fixture():
    with pytest.raises(ValueError):
        paper_fixture("nope")


def test_single_fixture():
    c = single_point(2, 7, 4)
    assert global_index(c) == 2
    assert minmax_int(c)[0] == 7


def test_fixture_files_match():
    for name in FIXTURE_NAMES:
        text = (DATA_DIR / f"{name}.cplx").read_text()
        assert text == serialize(paper_fixture(name))
        assert parse_complex(text) == paper_fixture(name)


def test_random_complex_designed_free_point():
    c, plan = random_complex_plan(0, {1: 1, 2: 2}, 4)
    assert len(plan.free) == 1
    form = reduce(c, RATIONALS)
    assert form.free_names() == set(plan.free)
    assert form.pair_names() == set(plan.pairs)


def test_random_complex_plan_recovered_many_seeds():
    for seed in range(20):
        c, plan = random_complex_plan(seed, {0: 1, 1: 3, 2: 3, 3: 2}, 4)
        assert validate(c).ok
        form = reduce(c, RATIONALS)
        assert form.pair_names() == set(plan.pairs)
        assert form.free_names() == set(plan.free)


def test_random_complex_oracle_agreement():
    c = random_complex(7, {1: 2, 2: 3, 3: 1}, 4)
    assert validate(c).ok
    form = reduce(c, RATIONALS)
    for k in range(5):
        assert len(form.free_of_degree(k)) == homology(c, RATIONALS, k).rank


def test_random_complex_deterministic():
    a = random_complex(42, {1: 2, 2: 3}, 3)
    b = random_complex(42, {1: 2, 2: 3}, 3)
    assert serialize(a) == serialize(b)
    c = random_complex(43, {1: 2, 2: 3}, 3)
    assert serialize(c) != serialize(a)


def test_random_complex_infeasible_sizes():
    with pytest.raises(ValueError):
        random_complex(0, {}, 3)
    with pytest.raises(ValueError):
        random_complex(0, {5: 1}, 3)
    with pytest.raises(ValueError):
        random_complex(0, {1: -2}, 3)


def test_random_admissible_complex_bounds():
    for seed in range(30):
        c = random_admissible_complex(seed, max_points=40)
        assert c.n_points <= 40
        assert validate(c).admissible
        global_index(c)


def test_perturb_values_stability():
    c = paper_fixture("laudenbach")
    eps = Fraction(1, 4)
    moved = perturb_values(c, eps, seed=11)
    assert [p.name for p in moved.all_points()] == [p.name for p in c.all_points()]
    for p in c.all_points():
        assert abs(moved.point(p.name).value - p.value) <= eps
    assert abs(minmax_int(moved)[0] - minmax_int(c)[0]) <= eps
    assert validate(moved).ok


def test_perturb_values_zero_eps_is_identity():
    c = paper_fixture("laudenbach")
    assert perturb_values(c, 0, seed=5) == c


def test_perturb_values_rejects_large_eps():
    c = paper_fixture("laudenbach")
    assert min_value_gap(c) == 1
    with pytest.raises(ValueError):
        perturb_values(c, Fraction(1, 2), seed=0)
    with pytest.raises(ValueError):
        perturb_values(c, -1, seed=0)
    # a single point has no gap constraint
    perturb_values(single_point(1, 0, 2), 100, seed=0)
