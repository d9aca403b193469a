# -*- coding: utf-8 -*-

# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

"""Deterministic finite-trace automata built by formula progression.

Every state is a canonical residual formula: the obligation left on the
rest of the trace. A state accepts iff its residual holds on the empty
trace; it is dead iff no accepting state can be reached from it.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

from collections import deque

try:
    import networkx as nx
except ImportError:
    # Checked by the modules through check_required_libs()
    pass

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    DEFAULT_STATE_CAP,
    LtlPlanError,
    MalformedTraceError,
    StateCapExceeded,
    UniverseError,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import (
    AND,
    ATOM,
    FALSE,
    FINALLY,
    FALSE_F,
    GLOBALLY,
    IMPLIES,
    NEXT,
    NONEMPTY,
    NOT,
    OR,
    TRUE,
    TRUE_F,
    UNTIL,
    atoms,
    canonical,
    conjunction,
    dnf,
    mk_and,
    mk_not,
    mk_or,
    render,
)

FULL = 'full'
ONE_HOT = 'one-hot'
ALPHABET_MODES = (FULL, ONE_HOT)


def alphabet(universe, mode):
    """Lists the labelings of an alphabet mode in a fixed order.

    full: all subsets, ordered by their bitmask over the universe order.
    one-hot: the singletons, in universe order.
    """
    universe = tuple(universe)
    if mode == ONE_HOT:
        return tuple(frozenset([a]) for a in universe)
    if mode != FULL:
        raise LtlPlanError("unknown alphabet mode %r" % (mode,))
    labels = []
    for mask in range(2 ** len(universe)):
        labels.append(frozenset(a for i, a in enumerate(universe) if mask >> i & 1))
    return tuple(labels)


def _progress(f, label):
    op = f.op
    if op in (TRUE, FALSE):
        return f
    if op == ATOM:
        return TRUE_F if f.name in label else FALSE_F
    if op == NOT:
        return mk_not(_progress(f.children[0], label))
    if op == AND:
        return mk_and([_progress(c, label) for c in f.children])
    if op == OR:
        return mk_or([_progress(c, label) for c in f.children])
    if op == IMPLIES:
        return mk_or([mk_not(_progress(f.children[0], label)),
                      _progress(f.children[1], label)])
    if op == NEXT:
        # Strong next: the remainder must be non-empty
        return mk_and([f.children[0], NONEMPTY])
    if op == FINALLY:
        return mk_or([_progress(f.children[0], label), f])
    if op == GLOBALLY:
        return mk_and([_progress(f.children[0], label), f])
    if op == UNTIL:
        return mk_or([_progress(f.children[1], label),
                      mk_and([_progress(f.children[0], label), f])])
    raise ValueError("unknown operator %r" % op)


def _check_universe(f, universe):
    extra = atoms(f) - frozenset(universe)
    if extra:
        raise UniverseError("atoms outside the universe: %s" % ', '.join(sorted(extra)))


def progress(f, label, universe=None):
    """Rewrites f against one labeling.

    The result accepts w iff f accepts label.w. It is a disjunction of
    conjunctions of literals taken from f, so repeated progression only
    reaches finitely many formulas.
    """
    label = frozenset(label)
    if universe is not None:
        _check_universe(f, universe)
        extra = label - frozenset(universe)
        if extra:
            raise UniverseError("label atoms outside the universe: %s" % ', '.join(sorted(extra)))
    return dnf(_progress(canonical(f), label))


def end_accepting(f):
    """Decides whether f holds on the empty trace."""
    op = f.op
    if op == TRUE:
        return True
    if op in (FALSE, ATOM, NEXT, FINALLY, UNTIL):
        return False
    if op == GLOBALLY:
        return True
    if op == NOT:
        return not end_accepting(f.children[0])
    if op == AND:
        return end_accepting(f.children[0]) and end_accepting(f.children[1])
    if op == OR:
        return end_accepting(f.children[0]) or end_accepting(f.children[1])
    if op == IMPLIES:
        return not end_accepting(f.children[0]) or end_accepting(f.children[1])
    raise ValueError("unknown operator %r" % op)


def conjoin(formulas):
    """Right-nested conjunction of formulas, in input order."""
    formulas = list(formulas)
    if not formulas:
        raise LtlPlanError("cannot conjoin an empty list of formulas")
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = conjunction(f, result)
    return result


class TraceAutomaton():
    """Compiled automaton; immutable once compile_automaton() returns it.

    delta[q][i] is the successor of state q on labels[i].
    """

    def __init__(self, universe, mode, labels, states, delta, accepting):
        self.universe = tuple(universe)
        self._universe_set = frozenset(universe)
        self.mode = mode
        self.labels = labels
        self.label_index = dict((label, i) for i, label in enumerate(labels))
        self.states = tuple(states)
        self.delta = tuple(tuple(row) for row in delta)
        self.accepting = tuple(accepting)
        self.initial = 0
        self.dead = dead_states(self)

    @property
    def num_states(self):
        return len(self.states)

    @property
    def num_transitions(self):
        return len(self.states) * len(self.labels)

    @property
    def num_edges(self):
        """Number of distinct (source, target) state pairs."""
        return sum(len(set(row)) for row in self.delta)

    def is_accepting(self, q):
        return self.accepting[q]

    def is_dead(self, q):
        return q in self.dead

    def step(self, q, label):
        idx = self.label_index.get(frozenset(label))
        if idx is None:
            raise MalformedTraceError("labeling %s is not in the %s alphabet"
                                      % (sorted(label), self.mode))
        return self.delta[q][idx]

    def advance(self, q, label):
        """Like step(), first dropping label atoms outside the universe.

        Lets an automaton over a subset of an environment's propositions
        follow that environment's labelings.
        """
        projected = frozenset(label) & self._universe_set
        idx = self.label_index.get(projected)
        if idx is None:
            raise UniverseError("labeling %s is outside the %s alphabet"
                                % (sorted(label), self.mode))
        return self.delta[q][idx]

    def run(self, trace, start=None):
        """Returns the state reached after reading trace."""
        q = self.initial if start is None else start
        for label in trace:
            q = self.step(q, label)
        return q

    def accepts(self, trace):
        return self.accepting[self.run(trace)]

    def graph(self):
        """Returns the transition structure as a networkx DiGraph."""
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.states)))
        for q, row in enumerate(self.delta):
            for dst in set(row):
                g.add_edge(q, dst)
        return g

    def render_label(self, label):
        return '{%s}' % ','.join(a for a in self.universe if a in label)

    def dump_text(self, fmt='infix'):
        lines = []
        lines.append('universe: %s' % ' '.join(self.universe))
        lines.append('mode: %s' % self.mode)
        lines.append('initial: %d' % self.initial)
        lines.append('states: %d' % len(self.states))
        for q, f in enumerate(self.states):
            lines.append('state %d accepting=%s dead=%s : %s'
                         % (q, str(self.accepting[q]).lower(),
                            str(q in self.dead).lower(), render(f, fmt)))
        lines.append('edges: %d' % self.num_transitions)
        for q, row in enumerate(self.delta):
            for i, dst in enumerate(row):
                lines.append('edge %d %s %d' % (q, self.render_label(self.labels[i]), dst))
        return '\n'.join(lines) + '\n'

    def to_dot(self, fmt='infix'):
        lines = ['digraph automaton {', '  rankdir=LR;',
                 '  __start [shape=point];', '  __start -> %d;' % self.initial]
        for q, f in enumerate(self.states):
            shape = 'doublecircle' if self.accepting[q] else 'circle'
            extra = ', style=filled, fillcolor=gray' if q in self.dead else ''
            lines.append('  %d [label="%s", shape=%s%s];'
                         % (q, render(f, fmt).replace('"', '\\"'), shape, extra))
        for q, row in enumerate(self.delta):
            grouped = {}
            for i, dst in enumerate(row):
                grouped.setdefault(dst, []).append(self.render_label(self.labels[i]))
            for dst in sorted(grouped):
                lines.append('  %d -> %d [label="%s"];' % (q, dst, ', '.join(grouped[dst])))
        lines.append('}')
        return '\n'.join(lines) + '\n'


def dead_states(automaton):
    """Returns the frozenset of states from which no accepting state is reachable."""
    g = automaton.graph()
    sink = -1
    g.add_node(sink)
    for q, acc in enumerate(automaton.accepting):
        if acc:
            g.add_edge(q, sink)
    live = nx.ancestors(g, sink)
    return frozenset(q for q in range(len(automaton.states)) if q not in live)


def compile_automaton(f, universe, mode=FULL, state_cap=DEFAULT_STATE_CAP):
    """Compiles f by breadth-first progression over the mode's labels.

    Raises StateCapExceeded rather than returning a truncated automaton.
    """
    universe = tuple(universe)
    if len(set(universe)) != len(universe):
        raise UniverseError("duplicate atoms in universe")
    if state_cap < 1:
        raise LtlPlanError("state_cap must be at least 1")
    _check_universe(f, universe)

    labels = alphabet(universe, mode)
    try:
        states, delta = _explore(canonical(f), labels, state_cap)
        accepting = [end_accepting(s) for s in states]
    except RecursionError:
        # formula nesting beyond the interpreter stack
        raise StateCapExceeded(state_cap, 0)
    return TraceAutomaton(universe, mode, labels, states, delta, accepting)


def _explore(start, labels, state_cap):
    states = [start]
    ids = {start: 0}
    delta = []
    queue = deque([0])
    while queue:
        q = queue.popleft()
        residual = states[q]
        relevant = atoms(residual)
        by_projection = {}
        row = []
        for label in labels:
            projected = label & relevant
            dst = by_projection.get(projected)
            if dst is None:
                succ = dnf(_progress(residual, projected))
                dst = ids.get(succ)
                if dst is None:
                    if len(states) >= state_cap:
                        raise StateCapExceeded(state_cap, len(states))
                    dst = len(states)
                    ids[succ] = dst
                    states.append(succ)
                    queue.append(dst)
                by_projection[projected] = dst
            row.append(dst)
        delta.append(row)
    return states, delta


class EquivalenceChecker():
    """Language equivalence over one universe and alphabet mode.

    Compiled automata and verdicts are memoised per canonical formula.
    """

    def __init__(self, universe, mode=FULL, state_cap=DEFAULT_STATE_CAP):
        self.universe = tuple(universe)
        self.mode = mode
        self.state_cap = state_cap
        self._automata = {}
        self._witnesses = {}
        self.comparisons = 0

    def automaton(self, f):
        try:
            key = canonical(f)
        except RecursionError:
            raise StateCapExceeded(self.state_cap, 0)
        if key not in self._automata:
            self._automata[key] = compile_automaton(key, self.universe, self.mode, self.state_cap)
        return self._automata[key]

    def distinguishing_trace(self, f, g):
        """Returns the shortest, lexicographically least trace accepted by
        exactly one of f and g, or None when they are equivalent.
        """
        cf, cg = canonical(f), canonical(g)
        if cf == cg:
            return None
        key = (cf, cg) if cf.sort_key <= cg.sort_key else (cg, cf)
        if key not in self._witnesses:
            self.comparisons += 1
            self._witnesses[key] = self._search(self.automaton(cf), self.automaton(cg))
        return self._witnesses[key]

    def equivalent(self, f, g):
        return self.distinguishing_trace(f, g) is None

    def _search(self, a, b):
        start = (a.initial, b.initial)
        parents = {start: None}
        queue = deque([start])
        while queue:
            pair = queue.popleft()
            qa, qb = pair
            if a.accepting[qa] != b.accepting[qb]:
                witness = []
                while parents[pair] is not None:
                    pair, idx = parents[pair]
                    witness.append(a.labels[idx])
                witness.reverse()
                return witness
            for idx in range(len(a.labels)):
                nxt = (a.delta[qa][idx], b.delta[qb][idx])
                if nxt not in parents:
                    parents[nxt] = (pair, idx)
                    queue.append(nxt)
        return None


def are_equivalent(f, g, universe, mode=FULL, state_cap=DEFAULT_STATE_CAP, checker=None):
    """True iff f and g accept the same finite traces over the mode's labels."""
    if checker is None:
        checker = EquivalenceChecker(universe, mode, state_cap)
    return checker.equivalent(f, g)
