import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from oracles import delete_dominated
from turnsearch.core import CostModel, SearchError, StepSequence
from turnsearch.evaluator import completion_bound, evaluate_sequence
from turnsearch.transforms import (
    is_fully_monotonic,
    is_monotonic,
    is_periodic,
    make_monotonic,
    make_periodic_fully_monotonic,
    normalize,
)

WORKED = StepSequence.from_pairs([(6, 0), (3, 1), (2, 0), (4, 1), (5, 1), (3, 0)], lam=1)


def test_worked_monotonic():
    assert make_monotonic(WORKED).steps == ((6, 0), (3, 1), (4, 1), (5, 1))


def test_worked_periodic():
    out = make_periodic_fully_monotonic(make_monotonic(WORKED), 2)
    assert out.steps == ((3, 0), (4, 1), (5, 0), (6, 1))
    assert normalize(WORKED).steps == out.steps


def test_ties_drop_later():
    assert make_monotonic(StepSequence(((5.0, 0), (5.0, 0)))).steps == ((5.0, 0),)


def test_fixed_points():
    seq = StepSequence(((1.0, 0), (2.0, 1), (3.0, 0), (4.0, 1)))
    assert make_monotonic(seq) == seq
    assert make_periodic_fully_monotonic(seq) == seq
    one = StepSequence(((7.0, 1),))
    assert make_periodic_fully_monotonic(one).steps == ((7.0, 0),)


def test_periodic_requires_monotonic():
    with pytest.raises(SearchError):
        make_periodic_fully_monotonic(WORKED)


def test_predicates():
    assert not is_monotonic(WORKED)
    assert is_periodic(StepSequence(((1.0, 0), (1.5, 1), (1.2, 2)), 1.0, 3))
    assert not is_fully_monotonic(StepSequence(((2.0, 0), (1.5, 1))))


steps_2 = hs.lists(hs.tuples(hs.floats(1.0, 1000.0), hs.integers(0, 1)), min_size=1, max_size=25)


@settings(max_examples=200, deadline=None)
@given(steps=steps_2)
def test_single_pass_matches_literal_deletion(steps):
    seq = StepSequence(tuple(steps), 1.0, 2)
    assert list(make_monotonic(seq).steps) == delete_dominated(seq.steps)


@settings(max_examples=100, deadline=None)
@given(steps=steps_2)
def test_idempotent(steps):
    seq = StepSequence(tuple(steps), 1.0, 2)
    mono = make_monotonic(seq)
    assert make_monotonic(mono) == mono
    per = make_periodic_fully_monotonic(mono)
    assert make_periodic_fully_monotonic(per) == per


@settings(max_examples=200, deadline=None)
@given(steps=steps_2, a=hs.floats(0.1, 2), b1=hs.floats(0, 2), b2=hs.floats(0, 2))
def test_monotonic_never_raises_ratio(steps, a, b1, b2):
    seq = StepSequence(tuple(steps), 1.0, 2)
    cost = CostModel(a, b1, 1.0, b2)
    assert evaluate_sequence(make_monotonic(seq), cost).supremum <= evaluate_sequence(seq, cost).supremum + 1e-9


@settings(max_examples=200, deadline=None)
@given(steps=steps_2, a=hs.floats(0.1, 2), b1=hs.floats(0, 2), b2=hs.floats(0, 2))
def test_periodic_within_completion_bound(steps, a, b1, b2):
    """The sorted cyclic rewrite never exceeds what every infinite continuation of its input must pay."""
    cost = CostModel(a, b1, 1.0, b2)
    mono = make_monotonic(StepSequence(tuple(steps), 1.0, 2))
    per = make_periodic_fully_monotonic(mono)
    before = max(evaluate_sequence(mono, cost).supremum, completion_bound(mono, cost))
    assert evaluate_sequence(per, cost).supremum <= before + 1e-9
    assert completion_bound(per, cost) <= completion_bound(mono, cost) + 1e-9


def test_finite_prefix_comparison_can_fail():
    """Without the completion bound a finite prefix that never searches one ray looks cheap."""
    mono = StepSequence.from_pairs([(132.0, 1), (937.0, 1)], lam=1, m=2)
    per = make_periodic_fully_monotonic(mono)
    assert per.steps == ((132.0, 0), (937.0, 1))
    assert evaluate_sequence(mono).supremum == 3
    assert evaluate_sequence(per).supremum == 265


@pytest.mark.parametrize("m", [3, 4])
def test_cyclic_output_shape_many_rays(m):
    rng = random.Random(m)
    for _ in range(50):
        seq = StepSequence(tuple((10 ** rng.uniform(0, 3), rng.randrange(m)) for _ in range(20)), 1.0, m)
        out = normalize(seq)
        assert is_periodic(out) and is_fully_monotonic(out) and out.m == m


def test_many_rays_exploratory_ratio():
    """For m > 2 the rewrite has no proven guarantee; record how often it holds."""
    rng = random.Random(0)
    held = 0
    for _ in range(200):
        seq = StepSequence(tuple((10 ** rng.uniform(0, 3), rng.randrange(3)) for _ in range(15)), 1.0, 3)
        mono = make_monotonic(seq)
        per = make_periodic_fully_monotonic(mono)
        before = max(evaluate_sequence(mono).supremum, completion_bound(mono, CostModel.plain()))
        held += evaluate_sequence(per).supremum <= before + 1e-9
    assert held > 0
