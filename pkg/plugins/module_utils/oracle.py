# -*- coding: utf-8 -*-

# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

"""Reference planning over the environment x automaton product.

Both searches only ever extend a plan into live automaton states, so every
plan they return is safe by construction.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import heapq
import time
from collections import namedtuple

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    ONE_HOT,
    compile_automaton,
)
from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    DEFAULT_STATE_CAP,
    LtlPlanError,
    PlanningTimeout,
    SpecUnsatisfiableError,
)
from ansible_collections.community.ltlplan.plugins.module_utils.environment import (
    MANIPULATION,
    Plan,
    apply_action,
    distance,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import atoms, render_prefix

DEFAULT_PLAN_CAP = 100000

# Largest number of blocks the cost-optimal search moves
ORACLE_BLOCK_LIMIT = 8

# Number of expansions between two deadline checks
DEADLINE_CHECK_EVERY = 256

EnumerationResult = namedtuple('EnumerationResult', 'plans truncated max_len plan_cap')
OraclePlan = namedtuple('OraclePlan', 'plan cost expanded')


def default_max_len(env):
    return 2 * len(env.entities)


def named_blocks(env, automaton):
    """Names of the blocks whose placement the automaton's formula mentions."""
    mentioned = atoms(automaton.states[automaton.initial])
    names = []
    for block in env.blocks:
        if any('%s_in_%s' % (block.name, box.name) in mentioned for box in env.boxes):
            names.append(block.name)
    return names


def focus(env, automaton, block_limit=ORACLE_BLOCK_LIMIT):
    """Restricts a manipulation table to the blocks worth searching.

    Keeps every block the formula names, then the blocks nearest to the
    arm until block_limit blocks are kept. Navigation environments are
    returned unchanged.
    """
    if env.kind != MANIPULATION or len(env.blocks) <= block_limit:
        return env
    keep = named_blocks(env, automaton)
    others = sorted((b for b in env.blocks if b.name not in keep),
                    key=lambda b: distance(env.initial_position, b.position))
    keep.extend(b.name for b in others[:max(0, block_limit - len(keep))])
    return env.restrict(keep)


class ProductViability():
    """Decides whether a product node can still reach an accepting state.

    Navigation actions are always applicable, so a live automaton state is
    enough there. Manipulation uses each block once: the check walks the
    moves of the named blocks and counts every other unmoved block as one
    spare step, since their labels all progress the formula alike.
    """

    def __init__(self, env, automaton):
        self.env = env
        self.automaton = automaton
        self.named = tuple(named_blocks(env, automaton)) if env.kind == MANIPULATION else ()
        self._named_set = frozenset(self.named)
        self._spare_label = None
        for block in env.blocks:
            if block.name not in self._named_set:
                self._spare_label = frozenset(['%s_in_%s' % (block.name, env.boxes[0].name)])
                break
        self._memo = {}

    def viable(self, state, q):
        if q in self.automaton.dead:
            return False
        if self.env.kind != MANIPULATION:
            return True
        moved = frozenset(b for b in self.named if b in state.moved)
        spare = sum(1 for b in self.env.blocks
                    if b.name not in self._named_set and b.name not in state.moved)
        return self._reaches(moved, spare, q)

    def _reaches(self, moved, spare, q):
        key = (moved, spare, q)
        if key in self._memo:
            return self._memo[key]
        automaton = self.automaton
        found = automaton.accepting[q]
        if not found:
            for block in self.named:
                if block in moved:
                    continue
                for box in self.env.boxes:
                    q2 = automaton.advance(q, ['%s_in_%s' % (block, box.name)])
                    if q2 not in automaton.dead and self._reaches(moved | frozenset([block]), spare, q2):
                        found = True
                        break
                if found:
                    break
        if not found and spare:
            q2 = automaton.advance(q, self._spare_label)
            found = q2 not in automaton.dead and self._reaches(moved, spare - 1, q2)
        self._memo[key] = found
        return found


def enumerate_accepting_plans(env, automaton, max_len=None, plan_cap=DEFAULT_PLAN_CAP,
                              prune=True):
    """Lists every plan of at most max_len actions ending in an accepting state.

    Depth-first in action vocabulary order; at each node the plan that stops
    there comes before its extensions. With prune=False, dead branches are
    walked too (for cross-checking the pruning).
    """
    if max_len is None:
        max_len = default_max_len(env)
    if max_len < 1:
        raise LtlPlanError("max_len must be at least 1")

    plans = []
    truncated = [False]

    def visit(state, q, prefix):
        if len(plans) >= plan_cap:
            truncated[0] = True
            return
        if automaton.accepting[q]:
            plans.append(Plan(prefix))
        if len(prefix) >= max_len:
            return
        for action in env.applicable_actions(state):
            if truncated[0]:
                return
            nxt, label, _ = apply_action(env, state, action)
            q2 = automaton.advance(q, label)
            if prune and q2 in automaton.dead:
                continue
            visit(nxt, q2, prefix + [action])

    if not (prune and automaton.initial in automaton.dead):
        visit(env.initial_state(), automaton.initial, [])
    return EnumerationResult(plans, truncated[0], max_len, plan_cap)


def optimal_plan(env, automaton, deadline=None, max_expansions=None,
                 block_limit=ORACLE_BLOCK_LIMIT):
    """Uniform-cost search for the cheapest accepting plan.

    Ties are broken by fewer actions, then by lexicographic action order.
    max_expansions bounds the search deterministically; hitting it raises
    PlanningTimeout like the wall-clock deadline does. On manipulation
    tables with more than block_limit blocks the search only moves the
    blocks kept by focus().
    """
    if automaton.initial in automaton.dead:
        raise SpecUnsatisfiableError("the specification has no accepting trace")
    env = focus(env, automaton, block_limit)

    start = env.initial_state()
    # (cost, length, actions, terminal, state, automaton state); the first
    # four fields always differ between two entries
    heap = [(0.0, 0, (), False, start, automaton.initial)]
    closed = set()
    expanded = 0
    while heap:
        cost, length, actions, terminal, state, q = heapq.heappop(heap)
        if terminal:
            return OraclePlan(Plan(actions), cost, expanded)
        node = (env.state_key(state), q)
        if node in closed:
            continue
        closed.add(node)
        expanded += 1
        if deadline is not None and expanded % DEADLINE_CHECK_EVERY == 0 \
                and time.monotonic() > deadline:
            raise PlanningTimeout("time limit exceeded after expanding %d product nodes" % expanded)
        if max_expansions is not None and expanded > max_expansions:
            raise PlanningTimeout("expansion limit of %d product nodes reached" % max_expansions)

        if automaton.accepting[q]:
            heapq.heappush(heap, (cost, length, actions, True, None, q))
        for action in env.applicable_actions(state):
            nxt, label, step_cost = apply_action(env, state, action)
            q2 = automaton.advance(q, label)
            if q2 in automaton.dead or (env.state_key(nxt), q2) in closed:
                continue
            heapq.heappush(heap, (cost + step_cost, length + 1, actions + (action,),
                                  False, nxt, q2))

    raise SpecUnsatisfiableError("no accepting plan is reachable in this environment")


def export_training_pairs(tasks, state_cap=DEFAULT_STATE_CAP, deadline_per_task=None):
    """Builds (task, optimal plan) dataset records.

    tasks is an iterable of (environment, task record) pairs. Unsatisfiable
    or timed-out tasks are skipped and reported.

    Returns (records, skipped).
    """
    records = []
    skipped = []
    for idx, (env, task) in enumerate(tasks):
        spec = task.grounded_spec()
        try:
            automaton = compile_automaton(spec, env.propositions(), ONE_HOT, state_cap)
            deadline = None
            if deadline_per_task is not None:
                deadline = time.monotonic() + deadline_per_task
            found = optimal_plan(env, automaton, deadline=deadline)
        except LtlPlanError as e:
            skipped.append({'index': idx, 'environment_id': task.environment_id,
                            'reason': str(e), 'rc': e.rc})
            continue
        records.append({
            'environment_id': task.environment_id,
            'environment_file': task.environment_file,
            'nl': task.nl,
            'ltl_prefix': render_prefix(spec),
            'plan': found.plan.tokens(),
            'cost': found.cost,
        })
    return records, skipped
