from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import itertools

import numpy as np
import pytest

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    FULL,
    ONE_HOT,
    EquivalenceChecker,
    alphabet,
    are_equivalent,
    compile_automaton,
    conjoin,
    end_accepting,
    progress,
)
from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    MalformedTraceError,
    StateCapExceeded,
    UniverseError,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import (
    FALSE_F,
    TRUE_F,
    Formula,
    atom,
    canonical,
    dnf,
    evaluate,
    parse_formula,
)


def all_traces(universe, max_len):
    labels = alphabet(universe, FULL)
    for n in range(max_len + 1):
        for trace in itertools.product(labels, repeat=n):
            yield list(trace)


def random_formula(rng, universe, size):
    if size <= 1:
        pick = rng.integers(0, len(universe) + 1)
        return TRUE_F if pick == len(universe) else atom(universe[pick])
    op = ('not', 'and', 'or', 'implies', 'next', 'globally', 'finally', 'until')[rng.integers(0, 8)]
    if op in ('and', 'or', 'implies', 'until'):
        left = rng.integers(1, size)
        return Formula(op, (random_formula(rng, universe, left),
                            random_formula(rng, universe, size - left)))
    return Formula(op, (random_formula(rng, universe, size - 1),))


def random_trace(rng, universe, max_len):
    n = int(rng.integers(0, max_len + 1))
    return [frozenset(a for a in universe if rng.random() < 0.5) for dummy in range(n)]


def test_alphabet():
    a, b = frozenset(['A']), frozenset(['B'])

    assert alphabet(('A', 'B'), FULL) == (frozenset(), a, b, a | b)
    assert alphabet(('A', 'B'), ONE_HOT) == (a, b)
    with pytest.raises(LtlPlanError):
        alphabet(('A',), 'powerset')


@pytest.mark.parametrize(
    'text,label,expected',
    [
        ('true', [], 'true'),
        ('true', ['A'], 'true'),
        ('F B', ['A'], 'F B'),
        ('F(A & F B)', ['A'], 'F B | F(A & F B)'),
        ('F A', ['A'], 'true'),
        ('X A', [], 'A'),
        ('A U B', ['A'], 'A U B'),
        ('A U B', [], 'false'),
        ('G !A', ['A'], 'false'),
    ]
)
def test_progress(text, label, expected):
    assert progress(parse_formula(text), label) == canonical(parse_formula(expected))


def test_progress_checks_the_universe():
    with pytest.raises(UniverseError):
        progress(parse_formula('F C'), ['A'], universe=['A', 'B'])
    with pytest.raises(UniverseError):
        progress(parse_formula('F A'), ['C'], universe=['A', 'B'])


@pytest.mark.parametrize(
    'text,expected',
    [
        ('true', True),
        ('false', False),
        ('G(A -> X B)', True),
        ('F B', False),
        ('X true', False),
        ('!A', True),
        ('A U B', False),
    ]
)
def test_end_accepting(text, expected):
    f = parse_formula(text)

    assert end_accepting(f) is expected
    assert evaluate(f, []) is expected


def test_compile_false():
    automaton = compile_automaton(FALSE_F, ('A',))

    assert automaton.num_states == 1
    assert automaton.accepting == (False,)
    assert automaton.dead == frozenset([0])


def test_compile_eventually():
    automaton = compile_automaton(parse_formula('F A'), ('A',))

    assert automaton.states == (parse_formula('F A'), TRUE_F)
    assert automaton.accepting == (False, True)
    assert automaton.step(0, []) == 0
    assert automaton.step(0, ['A']) == 1
    assert automaton.step(1, []) == 1
    assert automaton.dead == frozenset()
    assert automaton.num_transitions == 4
    assert automaton.num_edges == 3


def test_contradiction_after_one_step_is_dead():
    automaton = compile_automaton(parse_formula('X A & X !A'), ('A',))

    assert automaton.is_dead(automaton.initial)
    assert not any(automaton.accepts(t) for t in all_traces(('A',), 3))


def test_unsatisfiable_initial_state_is_dead():
    automaton = compile_automaton(parse_formula('G !A & F A'), ('A',))

    assert automaton.initial in automaton.dead


@pytest.mark.parametrize(
    'text',
    ['F(A & F B)', 'G(A -> X B)', '!B U A', 'X A | G !B', '!X A', 'X true', 'G(A -> !B U C)',
     'F A & (F B & G !C)', 'A -> F B', 'G F A']
)
def test_automaton_agrees_with_semantics(text):
    universe = ('A', 'B', 'C')
    f = parse_formula(text)
    automaton = compile_automaton(f, universe)

    for trace in all_traces(universe, 3):
        assert automaton.accepts(trace) == evaluate(f, trace), trace


def test_automaton_agrees_with_semantics_on_random_formulas():
    rng = np.random.default_rng(11)
    universe = ('A', 'B')
    traces = list(all_traces(universe, 4))
    for dummy in range(40):
        f = random_formula(rng, universe, int(rng.integers(1, 7)))
        automaton = compile_automaton(f, universe)
        for trace in traces:
            assert automaton.accepts(trace) == evaluate(f, trace), (f, trace)


def test_one_hot_alphabet():
    automaton = compile_automaton(parse_formula('F A'), ('A', 'B'), ONE_HOT)

    assert automaton.num_transitions == 2 * automaton.num_states
    assert automaton.step(0, ['B']) == 0
    with pytest.raises(MalformedTraceError):
        automaton.step(0, [])
    with pytest.raises(MalformedTraceError):
        automaton.step(0, ['A', 'B'])


def test_advance_projects_onto_the_universe():
    automaton = compile_automaton(parse_formula('F A'), ('A', 'B'), ONE_HOT)

    assert automaton.advance(0, ['A', 'blue_room']) == automaton.step(0, ['A'])
    with pytest.raises(UniverseError):
        automaton.advance(0, ['blue_room'])


def test_compile_errors():
    with pytest.raises(UniverseError):
        compile_automaton(parse_formula('F C'), ('A', 'B'))
    with pytest.raises(UniverseError):
        compile_automaton(parse_formula('F A'), ('A', 'A'))
    with pytest.raises(StateCapExceeded) as e:
        compile_automaton(parse_formula('F A'), ('A',), state_cap=1)
    assert e.value.rc == 6


def test_dump_text():
    automaton = compile_automaton(parse_formula('F A'), ('A',))

    assert automaton.dump_text() == (
        'universe: A\n'
        'mode: full\n'
        'initial: 0\n'
        'states: 2\n'
        'state 0 accepting=false dead=false : F A\n'
        'state 1 accepting=true dead=false : true\n'
        'edges: 4\n'
        'edge 0 {} 0\n'
        'edge 0 {A} 1\n'
        'edge 1 {} 1\n'
        'edge 1 {A} 1\n'
    )


def test_to_dot():
    dot = compile_automaton(parse_formula('F A'), ('A',)).to_dot(fmt='prefix')

    assert dot.startswith('digraph automaton {\n')
    assert '  1 [label="true", shape=doublecircle];' in dot
    assert '  0 -> 1 [label="{A}"];' in dot
    assert '  1 -> 1 [label="{}, {A}"];' in dot


def test_graph():
    g = compile_automaton(parse_formula('G !A'), ('A',)).graph()

    assert sorted(g.edges()) == [(0, 0), (0, 1), (1, 1)]


def test_conjoin():
    fa, fb, fc = parse_formula('F A'), parse_formula('G !B'), parse_formula('F C')

    assert conjoin([fa]) == fa
    assert conjoin([fa, fb]) == parse_formula('F A & G !B')
    assert conjoin([fa, fb, fc]) == parse_formula('F A & (G !B & F C)')
    with pytest.raises(LtlPlanError):
        conjoin([])


def test_conjunction_accepts_the_intersection():
    universe = ('A', 'B')
    parts = [parse_formula('F A'), parse_formula('!A U B'), parse_formula('G(B -> X A)')]
    whole = compile_automaton(conjoin(parts), universe)
    automata = [compile_automaton(f, universe) for f in parts]

    for trace in all_traces(universe, 4):
        assert whole.accepts(trace) == all(a.accepts(trace) for a in automata)


@pytest.mark.parametrize(
    'left,right,universe,expected',
    [
        ('F A', 'F A', ('A',), True),
        ('F A', '!G !A', ('A',), True),
        ('G A', '!F !A', ('A',), True),
        ('A U B', 'B | A & X(A U B)', ('A', 'B'), True),
        ('F(A & F B)', 'F(B & F A)', ('A', 'B'), False),
        ('X !A', '!X A', ('A',), False),
        ('F A', 'F C', ('A', 'C'), False),
    ]
)
def test_are_equivalent(left, right, universe, expected):
    assert are_equivalent(parse_formula(left), parse_formula(right), universe) is expected


@pytest.mark.parametrize(
    'left,right,universe,witness',
    [
        ('F(A & F B)', 'F(B & F A)', ('A', 'B'), [['A'], ['B']]),
        ('F A', 'G A', ('A',), []),
        ('F A', 'F C', ('A', 'C'), [['A']]),
        ('F A', 'F(A & X true)', ('A',), [['A']]),
    ]
)
def test_distinguishing_trace(left, right, universe, witness):
    f, g = parse_formula(left), parse_formula(right)
    found = EquivalenceChecker(universe).distinguishing_trace(f, g)

    assert found == [frozenset(label) for label in witness]
    assert evaluate(f, found) != evaluate(g, found)


def test_checker_memoises_verdicts():
    checker = EquivalenceChecker(('A',))
    f, g = parse_formula('F A'), parse_formula('G A')

    checker.equivalent(f, g)
    checker.equivalent(g, f)
    checker.equivalent(f, parse_formula('!G !A'))

    assert checker.comparisons == 2
    assert checker.automaton(f) is checker.automaton(parse_formula('F A'))


@pytest.mark.parametrize(
    'text',
    ['F A U F B', 'G C U G B', 'F B U X G C', 'G(F A U (B | X G C))', '(A U B) U (X C U G A)']
)
def test_nested_temporal_operators_stay_finite(text):
    universe = ('A', 'B', 'C')
    f = parse_formula(text)
    automaton = compile_automaton(f, universe, state_cap=100)

    for trace in all_traces(universe, 3):
        assert automaton.accepts(trace) == evaluate(f, trace), trace


@pytest.mark.parametrize(
    'text,label',
    [
        ('F A U F B', []),
        ('G C U G B', ['B', 'C']),
        ('F B U X G C', ['C']),
    ]
)
def test_repeated_progression_reaches_a_fixed_point(text, label):
    f = parse_formula(text)
    seen = set()
    for dummy in range(20):
        f = progress(f, label)
        seen.add(f)

    assert progress(f, label) in seen
    assert len(seen) <= 4


def test_deep_nesting_is_reported_as_a_state_cap_failure():
    f = atom('A')
    for dummy in range(5000):
        f = Formula('next', (f,))

    with pytest.raises(StateCapExceeded):
        compile_automaton(f, ('A',))


def test_automaton_agrees_with_semantics_at_scale():
    rng = np.random.default_rng(2024)
    universe = ('A', 'B', 'C', 'D')
    pairs = 0
    for dummy in range(250):
        f = random_formula(rng, universe[:int(rng.integers(1, 5))], int(rng.integers(1, 9)))
        automaton = compile_automaton(f, universe)
        for dummy in range(40):
            trace = random_trace(rng, universe, 6)
            assert automaton.accepts(trace) == evaluate(f, trace), (f, trace)
            pairs += 1

    assert pairs >= 10000


def test_progression_is_sound():
    rng = np.random.default_rng(5)
    universe = ('A', 'B', 'C')
    for dummy in range(300):
        f = random_formula(rng, universe, int(rng.integers(1, 8)))
        label = random_trace(rng, universe, 1) or [frozenset()]
        residual = progress(f, label[0])
        assert residual == dnf(residual)
        for dummy in range(10):
            rest = random_trace(rng, universe, 5)
            assert evaluate(residual, rest) == evaluate(f, label + rest), (f, label, rest)


def accepting_suffix(automaton, q):
    parents = {q: None}
    queue = [q]
    while queue:
        s = queue.pop(0)
        if automaton.accepting[s]:
            labels = []
            while parents[s] is not None:
                s, idx = parents[s]
                labels.append(automaton.labels[idx])
            return labels[::-1]
        for idx, dst in enumerate(automaton.delta[s]):
            if dst not in parents:
                parents[dst] = (s, idx)
                queue.append(dst)
    return None


def test_dead_states_accept_nothing():
    rng = np.random.default_rng(8)
    universe = ('A', 'B')
    extensions = list(all_traces(universe, 3))
    for dummy in range(150):
        f = random_formula(rng, universe, int(rng.integers(1, 8)))
        automaton = compile_automaton(f, universe)
        for q in automaton.dead:
            assert not any(evaluate(automaton.states[q], t) for t in extensions), (f, q)
        for q in set(range(automaton.num_states)) - automaton.dead:
            suffix = accepting_suffix(automaton, q)
            assert suffix is not None
            assert evaluate(automaton.states[q], suffix), (f, q, suffix)


def test_compilation_is_deterministic():
    rng = np.random.default_rng(13)
    universe = ('A', 'B', 'C')
    for dummy in range(100):
        f = random_formula(rng, universe, int(rng.integers(1, 9)))
        assert compile_automaton(f, universe).dump_text() == compile_automaton(f, universe).dump_text()


def test_equivalence_agrees_with_exhaustive_comparison():
    rng = np.random.default_rng(17)
    universe = ('A', 'B')
    traces = list(all_traces(universe, 4))
    checker = EquivalenceChecker(universe)
    verdicts = set()
    for dummy in range(1000):
        f = random_formula(rng, universe, int(rng.integers(1, 6)))
        g = random_formula(rng, universe, int(rng.integers(1, 6))) if rng.random() < 0.7 else dnf(canonical(f))
        witness = checker.distinguishing_trace(f, g)
        if witness is None:
            assert all(evaluate(f, t) == evaluate(g, t) for t in traces), (f, g)
        else:
            assert evaluate(f, witness) != evaluate(g, witness), (f, g, witness)
        verdicts.add(witness is None)

    assert verdicts == set([True, False])
