from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import itertools

import numpy as np
import pytest

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    GroundingError,
    LtlSyntaxError,
    MalformedTraceError,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import (
    FALSE_F,
    TRUE_F,
    Formula,
    Trace,
    atom,
    atoms,
    canonical,
    conjunction,
    depth,
    disjunction,
    eventually,
    evaluate,
    globally,
    ground,
    implication,
    lift,
    negation,
    next_step,
    parse_formula,
    parse_infix,
    parse_prefix,
    render,
    render_infix,
    render_prefix,
    until,
    width,
)

A = atom('A')
B = atom('B')
C = atom('C')


@pytest.mark.parametrize(
    'text,expected',
    [
        ('F(A & F(B))', eventually(conjunction(A, eventually(B)))),
        ('A', A),
        ('G(A -> X(B))', globally(implication(A, next_step(B)))),
        ('A U B U C', until(A, until(B, C))),
        ('A -> B -> C', implication(A, implication(B, C))),
        ('A & B & C', conjunction(conjunction(A, B), C)),
        ('!A U B', until(negation(A), B)),
        ('F A & G !B', conjunction(eventually(A), globally(negation(B)))),
        ('true | false', parse_prefix('| true false')),
    ]
)
def test_parse_infix(text, expected):
    assert parse_infix(text) == expected


@pytest.mark.parametrize(
    'text,expected',
    [
        ('F & A F B', 'F(A & F(B))'),
        ('A', 'A'),
        ('U ! C B', '!C U B'),
        ('-> A X B', 'A -> X B'),
    ]
)
def test_parse_prefix(text, expected):
    assert parse_prefix(text) == parse_infix(expected)


def test_parse_formula_detects_the_syntax():
    assert parse_formula('U ! C B') == until(negation(C), B)
    assert parse_formula('! G ! A') == negation(globally(negation(A)))
    assert parse_formula('F A', fmt='prefix') == eventually(A)


@pytest.mark.parametrize(
    'text,position',
    [
        ('', 0),
        ('F A &', 5),
        ('(A & B', 6),
        ('A $ B', 2),
        ('A B', 2),
        (')', 0),
    ]
)
def test_parse_errors_carry_a_position(text, position):
    with pytest.raises(LtlSyntaxError) as e:
        parse_formula(text)

    assert e.value.position == position
    assert e.value.rc == 2


@pytest.mark.parametrize(
    'text,position',
    [
        ('&  A  $x', 6),
        ('& A', 3),
        ('F A  B', 5),
        ('  U A', 5),
    ]
)
def test_prefix_errors_carry_a_character_offset(text, position):
    with pytest.raises(LtlSyntaxError) as e:
        parse_prefix(text)

    assert e.value.position == position


def test_keywords_are_not_atoms():
    with pytest.raises(LtlSyntaxError):
        atom('G')
    with pytest.raises(LtlSyntaxError):
        parse_prefix('F')


@pytest.mark.parametrize(
    'text,infix,prefix',
    [
        ('F(A & F(B))', 'F (A & F B)', 'F & A F B'),
        ('A & (B & C)', 'A & (B & C)', '& A & B C'),
        ('(A & B) & C', 'A & B & C', '& & A B C'),
        ('(A | B) & C', '(A | B) & C', '& | A B C'),
        ('!(A & B)', '!(A & B)', '! & A B'),
        ('(A U B) U C', '(A U B) U C', 'U U A B C'),
        ('G(A -> X B)', 'G (A -> X B)', 'G -> A X B'),
        ('!B U A', '!B U A', 'U ! B A'),
        ('X X true', 'X X true', 'X X true'),
    ]
)
def test_render(text, infix, prefix):
    f = parse_infix(text)

    assert render_infix(f) == infix
    assert render_prefix(f) == prefix
    assert parse_infix(infix) == f
    assert parse_prefix(prefix) == f


@pytest.mark.parametrize(
    'text,labels,position,expected',
    [
        ('F(A & F B)', [['A'], ['C'], ['B']], 0, True),
        ('F(A & F B)', [['B'], ['A']], 0, False),
        ('G A', [], 0, True),
        ('G false', [], 0, True),
        ('F true', [], 0, False),
        ('G(A -> X B)', [['A'], ['C']], 0, False),
        ('G(A -> X B)', [['A'], ['B']], 0, True),
        ('G(A -> X B)', [['A']], 0, False),
        ('X A', [['A']], 0, False),
        ('X A', [[], ['A']], 0, True),
        ('!X A', [['A']], 0, True),
        ('A U B', [['A'], ['A'], ['B']], 0, True),
        ('A U B', [['A'], [], ['B']], 0, False),
        ('A U B', [['A'], ['A']], 0, False),
        ('!B U A', [['C'], ['A'], ['B']], 0, True),
        ('!B U A', [['B'], ['A']], 0, False),
        ('F A', [['A'], []], 1, False),
        ('G A', [['B']], 1, True),
    ]
)
def test_evaluate(text, labels, position, expected):
    assert evaluate(parse_formula(text), labels, position) is expected


def test_evaluate_rejects_bad_positions():
    with pytest.raises(MalformedTraceError):
        evaluate(A, [['A'], []], 3)
    with pytest.raises(MalformedTraceError):
        evaluate(A, [['A']], -1)


def test_declared_universe():
    trace = Trace([['A'], []], universe=['A', 'B'])

    assert evaluate(parse_formula('F A & G !B'), trace)
    with pytest.raises(MalformedTraceError):
        evaluate(parse_formula('F C'), trace)
    with pytest.raises(MalformedTraceError):
        Trace([['C']], universe=['A'])


@pytest.mark.parametrize(
    'text,expected_depth,expected_width',
    [
        ('A', 1, 1),
        ('F(A & F B)', 4, 2),
        ('G(A -> X B)', 4, 2),
        ('A & B & C', 3, 2),
        ('F A & (F B & F C)', 4, 3),
    ]
)
def test_depth_and_width(text, expected_depth, expected_width):
    f = parse_formula(text)

    assert depth(f) == expected_depth
    assert width(f) == expected_width


def test_ground_and_lift():
    grounding = {'A': 'Walmart', 'B': 'CVS'}
    lifted = parse_formula('F(A & F B)')
    grounded = ground(lifted, grounding)

    assert grounded == parse_formula('F(Walmart & F CVS)')
    assert atoms(grounded) == frozenset(['Walmart', 'CVS'])
    assert lift(grounded, grounding) == lifted
    assert ground(lifted, {'A': 'A', 'B': 'B'}) == lifted


@pytest.mark.parametrize(
    'mapping',
    [
        {'A': 'x', 'B': 'x'},
        {'A': 'x'},
        {'A': 'G', 'B': 'y'},
        {'A': 'red room', 'B': 'y'},
    ]
)
def test_ground_errors(mapping):
    with pytest.raises(GroundingError):
        ground(parse_formula('F(A & F B)'), mapping)


@pytest.mark.parametrize(
    'left,right',
    [
        ('!!A', 'A'),
        ('A & true', 'A'),
        ('A | false', 'A'),
        ('A & B', 'B & A'),
        ('(A & B) & C', 'A & (C & B)'),
        ('A | A & B', 'A'),
        ('A & (A | B)', 'A'),
        ('F A & F true', 'F A'),
        ('A -> B', '!A | B'),
    ]
)
def test_canonical(left, right):
    assert canonical(parse_formula(left)) == canonical(parse_formula(right))


def test_canonical_constants():
    assert canonical(parse_formula('A & !A')) == FALSE_F
    assert canonical(parse_formula('A | !A')) == TRUE_F
    assert canonical(parse_formula('G true')) == TRUE_F


UNARY = ('not', 'next', 'globally', 'finally')
BINARY = ('and', 'or', 'implies', 'until')


def random_formula(rng, names, size):
    if size <= 1:
        pick = int(rng.integers(0, len(names) + 2))
        if pick == len(names):
            return TRUE_F
        if pick == len(names) + 1:
            return FALSE_F
        return atom(names[pick])
    op = (UNARY + BINARY)[int(rng.integers(0, 8))]
    if op in BINARY:
        left = int(rng.integers(1, size))
        return Formula(op, (random_formula(rng, names, left), random_formula(rng, names, size - left)))
    return Formula(op, (random_formula(rng, names, size - 1),))


def short_traces(names, max_len):
    labels = [frozenset(c) for n in range(len(names) + 1) for c in itertools.combinations(names, n)]
    for n in range(max_len + 1):
        for trace in itertools.product(labels, repeat=n):
            yield list(trace)


def test_random_formulas_survive_rendering():
    rng = np.random.default_rng(3)
    for dummy in range(2000):
        f = random_formula(rng, ('A', 'B', 'red_room'), int(rng.integers(1, 12)))

        assert parse_infix(render_infix(f)) == f
        assert parse_prefix(render_prefix(f)) == f
        assert parse_formula(render(f, 'infix')) == f
        assert parse_formula(render(f, 'prefix')) == f


def test_dualities_hold_on_every_short_trace():
    rng = np.random.default_rng(9)
    traces = list(short_traces(('A', 'B'), 4))
    for dummy in range(60):
        phi = random_formula(rng, ('A', 'B'), int(rng.integers(1, 6)))
        psi = random_formula(rng, ('A', 'B'), int(rng.integers(1, 6)))
        for trace in traces:
            assert evaluate(negation(eventually(phi)), trace) == evaluate(globally(negation(phi)), trace)
            assert evaluate(negation(globally(phi)), trace) == evaluate(eventually(negation(phi)), trace)
            assert evaluate(implication(phi, psi), trace) == evaluate(disjunction(negation(phi), psi), trace)
            assert evaluate(canonical(phi), trace) == evaluate(phi, trace)
