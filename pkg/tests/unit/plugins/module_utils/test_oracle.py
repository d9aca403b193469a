from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import numpy as np
import pytest

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    ONE_HOT,
    compile_automaton,
    conjoin,
)
from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    PlanningTimeout,
    SpecUnsatisfiableError,
)
from ansible_collections.community.ltlplan.plugins.module_utils.datagen import TaskRecord, make_task
from ansible_collections.community.ltlplan.plugins.module_utils.environment import (
    BLOCK,
    BOX,
    DONE,
    MANIPULATION,
    NAVIGATION,
    ROOM,
    Entity,
    Environment,
    random_environment,
    simulate,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import (
    FALSE_F,
    TRUE_F,
    evaluate,
    parse_formula,
)
from ansible_collections.community.ltlplan.plugins.module_utils.oracle import (
    ORACLE_BLOCK_LIMIT,
    ProductViability,
    enumerate_accepting_plans,
    export_training_pairs,
    focus,
    named_blocks,
    optimal_plan,
)

CONSTRAINT_SHAPES = ('!%s U %s', 'G(%s -> X %s)', 'G !%s', 'G(%s -> !%s U %s)')


def one_hot(env, f):
    return compile_automaton(f, env.propositions(), ONE_HOT)


def landmarks(*points):
    rooms = [Entity('room_%d' % i, ROOM, x, y, 0.0) for i, (x, y) in enumerate(points)]
    return Environment(NAVIGATION, rooms, (0.0, 0.0, 0.0))


def random_instance(rng):
    n_rooms = int(rng.integers(2, 5))
    env = landmarks(*[tuple(rng.uniform(0, 10, size=2)) for _ in range(n_rooms)])
    names = list(env.propositions())
    goal = [parse_formula('F %s' % n) for n in rng.choice(names, size=2, replace=n_rooms < 2)]
    constraints = []
    for _ in range(int(rng.integers(1, 4))):
        shape = CONSTRAINT_SHAPES[int(rng.integers(len(CONSTRAINT_SHAPES)))]
        picks = tuple(rng.choice(names, size=shape.count('%s')))
        constraints.append(parse_formula(shape % picks))
    return env, conjoin(goal + constraints)


def test_enumerate_true_with_one_landmark():
    env = landmarks((1.0, 0.0))
    result = enumerate_accepting_plans(env, one_hot(env, TRUE_F), max_len=1)

    assert [p.tokens() for p in result.plans] == [[DONE], ['Goto room_0', DONE]]
    assert not result.truncated


def test_enumerate_false():
    env = landmarks((1.0, 0.0))

    assert enumerate_accepting_plans(env, one_hot(env, FALSE_F), max_len=3).plans == []
    assert enumerate_accepting_plans(env, one_hot(env, FALSE_F), max_len=3, prune=False).plans == []


def test_enumerate_plan_cap():
    env = landmarks((1.0, 0.0), (2.0, 0.0))
    result = enumerate_accepting_plans(env, one_hot(env, TRUE_F), max_len=3, plan_cap=5)

    assert result.truncated
    assert len(result.plans) == 5


def test_enumerate_max_len():
    env = landmarks((1.0, 0.0))
    with pytest.raises(LtlPlanError):
        enumerate_accepting_plans(env, one_hot(env, TRUE_F), max_len=0)


def test_enumerated_plans_are_safe_and_pruning_loses_nothing():
    env = landmarks((1.0, 0.0), (2.0, 0.0), (0.0, 3.0))
    spec = parse_formula('F room_0 & F room_2 & !room_2 U room_1 & G(room_0 -> X room_1)')
    automaton = one_hot(env, spec)

    pruned = enumerate_accepting_plans(env, automaton, max_len=5)
    walked = enumerate_accepting_plans(env, automaton, max_len=5, prune=False)

    assert pruned.plans
    assert pruned.plans == walked.plans
    for plan in pruned.plans:
        assert evaluate(spec, simulate(env, plan)[0])


def test_optimal_true():
    env = landmarks((1.0, 0.0))
    found = optimal_plan(env, one_hot(env, TRUE_F))

    assert found.plan.tokens() == [DONE]
    assert found.cost == 0.0


def test_ordering_beats_distance():
    # room_1 is nearer but may only be visited after room_0
    env = landmarks((10.0, 0.0), (1.0, 0.0))
    spec = parse_formula('!room_1 U room_0 & F room_1')
    found = optimal_plan(env, one_hot(env, spec))

    assert found.plan.tokens() == ['Goto room_0', 'Goto room_1', DONE]
    assert found.cost == pytest.approx(19.0)


def test_optimal_plan_errors():
    env = landmarks((1.0, 0.0), (2.0, 0.0))
    with pytest.raises(SpecUnsatisfiableError):
        optimal_plan(env, one_hot(env, FALSE_F))
    with pytest.raises(PlanningTimeout):
        optimal_plan(env, one_hot(env, parse_formula('F room_0 & F room_1')), max_expansions=1)


def test_live_spec_without_a_plan():
    env = Environment(MANIPULATION, [Entity('red_block', BLOCK, 0.0, 0.0, 0.0),
                                     Entity('box_a', BOX, 0.0, 1.0, 0.0)], (0.0, 0.0, 0.0))
    automaton = one_hot(env, parse_formula('F(red_block_in_box_a & X red_block_in_box_a)'))

    assert automaton.initial not in automaton.dead
    with pytest.raises(SpecUnsatisfiableError, match='no accepting plan'):
        optimal_plan(env, automaton)


def test_optimal_plan_is_the_cheapest_enumerated_plan():
    rng = np.random.default_rng(2024)
    checked = 0
    for dummy in range(100):
        env, spec = random_instance(rng)
        automaton = one_hot(env, spec)
        enumerated = enumerate_accepting_plans(env, automaton, max_len=6).plans
        try:
            found = optimal_plan(env, automaton)
        except SpecUnsatisfiableError:
            assert not enumerated
            continue

        trace, cost = simulate(env, found.plan)
        assert evaluate(spec, trace)
        assert cost == pytest.approx(found.cost)
        if enumerated:
            cheapest = min(simulate(env, plan)[1] for plan in enumerated)
            assert found.cost <= cheapest + 1e-9
            if len(found.plan) <= 6:
                assert found.cost == pytest.approx(cheapest)
                checked += 1

    assert checked > 0


def test_export_training_pairs():
    env = landmarks((10.0, 0.0), (1.0, 0.0))
    grounding = {'A': 'room_0', 'B': 'room_1'}
    good = TaskRecord('visit A and B, A first', 'U ! B A', ['A', 'B'], grounding, 'two-rooms')
    bad = TaskRecord('visit A but never A', '& F A G ! A', ['A', 'B'], grounding, 'two-rooms')

    records, skipped = export_training_pairs([(env, good), (env, bad)])

    assert len(records) == 1
    assert records[0]['plan'] == ['Goto room_0', DONE]
    assert records[0]['cost'] == simulate(env, records[0]['plan'])[1]
    assert records[0]['ltl_prefix'] == 'U ! room_1 room_0'
    assert skipped == [{'index': 1, 'environment_id': 'two-rooms',
                        'reason': 'the specification has no accepting trace', 'rc': 3}]


@pytest.mark.parametrize('seed', [2, 5, 8])
def test_manipulation_search_is_focused(seed):
    env = random_environment(MANIPULATION, seed)
    record = make_task(env, 2, np.random.default_rng(seed))
    spec = record.grounded_spec()
    automaton = one_hot(env, spec)
    named = named_blocks(env, automaton)
    focused = focus(env, automaton)

    assert len(env.blocks) == 16
    assert len(focused.blocks) == max(ORACLE_BLOCK_LIMIT, len(named))
    assert set(named) <= set(b.name for b in focused.blocks)
    assert focused.boxes == env.boxes

    found = optimal_plan(env, automaton, max_expansions=50000)
    trace, cost = simulate(env, found.plan)
    assert evaluate(spec, trace)
    assert cost == pytest.approx(found.cost)
    assert set(a.split()[1] for a in found.plan.actions) <= set(b.name for b in focused.blocks)


def test_small_tables_are_searched_whole():
    env = Environment(MANIPULATION, [Entity('red_block', BLOCK, 0.0, 0.0, 0.0),
                                     Entity('box_a', BOX, 0.0, 1.0, 0.0)], (0.0, 0.0, 0.0))
    automaton = one_hot(env, parse_formula('F red_block_in_box_a'))

    assert focus(env, automaton) is env
    assert named_blocks(env, automaton) == ['red_block']


def test_viability_matches_the_search():
    rng = np.random.default_rng(21)
    for dummy in range(30):
        blocks = [Entity('b%d' % i, BLOCK, float(rng.uniform(0, 1)), 0.0, 0.0) for i in range(3)]
        boxes = [Entity('box_a', BOX, 0.0, 1.0, 0.0), Entity('box_b', BOX, 1.0, 1.0, 0.0)]
        env = Environment(MANIPULATION, blocks + boxes, (0.0, 0.0, 0.0))
        props = list(env.propositions())
        picks = [props[int(i)] for i in rng.choice(len(props), size=3, replace=False)]
        shape = CONSTRAINT_SHAPES[int(rng.integers(len(CONSTRAINT_SHAPES)))]
        f = conjoin([parse_formula('F %s' % picks[0]),
                     parse_formula(shape % tuple(picks[:shape.count('%s')]))])
        automaton = one_hot(env, f)

        viable = ProductViability(env, automaton).viable(env.initial_state(), automaton.initial)
        plans = enumerate_accepting_plans(env, automaton, max_len=3).plans
        assert viable == bool(plans), f
