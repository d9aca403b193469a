# -*- coding: utf-8 -*-

# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

"""Constrained plan decoding.

A policy proposes a distribution over the applicable actions plus DONE.
The engine samples from it; an action after which no accepting plan can
follow in the environment (or DONE outside an accepting state) gets
probability zero, the rest is renormalised, and sampling repeats until a
valid action is drawn.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import math
import shlex
import subprocess
import threading
import time
from collections import namedtuple

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    ONE_HOT,
    compile_automaton,
)
from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    DEFAULT_STATE_CAP,
    DeadEndError,
    LtlPlanError,
    PlanningTimeout,
    SpecUnsatisfiableError,
    dump_line,
    load_line,
    make_rng,
)
from ansible_collections.community.ltlplan.plugins.module_utils.environment import (
    DONE,
    Plan,
    apply_action,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import Trace
from ansible_collections.community.ltlplan.plugins.module_utils.oracle import ProductViability

PROB_TOLERANCE = 1e-9


class ActionDistribution():
    """Ordered (action, probability) pairs summing to one."""

    def __init__(self, items):
        items = [(str(a), float(p)) for a, p in items]
        if not items:
            raise LtlPlanError("an action distribution cannot be empty")
        actions = [a for a, _ in items]
        if len(set(actions)) != len(actions):
            raise LtlPlanError("duplicate actions in distribution")
        for a, p in items:
            if p < 0.0 or p > 1.0 or math.isnan(p):
                raise LtlPlanError("probability of %r outside [0, 1]: %r" % (a, p))
        total = sum(p for _, p in items)
        if abs(total - 1.0) > PROB_TOLERANCE:
            raise LtlPlanError("probabilities sum to %r, not 1" % total)
        self.items = tuple(items)

    @classmethod
    def from_weights(cls, pairs):
        """Normalises non-negative weights into a distribution."""
        pairs = [(a, float(w)) for a, w in pairs]
        if any(w < 0 or math.isnan(w) for _, w in pairs):
            raise LtlPlanError("weights must be non-negative")
        total = sum(w for _, w in pairs)
        if not pairs or total <= 0:
            raise LtlPlanError("weights must have a positive sum")
        return cls([(a, w / total) for a, w in pairs])

    @property
    def actions(self):
        return [a for a, _ in self.items]

    @property
    def probabilities(self):
        return [p for _, p in self.items]

    def probability(self, action):
        for a, p in self.items:
            if a == action:
                return p
        return 0.0

    def as_dict(self):
        return dict(self.items)

    def __len__(self):
        return len(self.items)

    def __repr__(self):
        return 'ActionDistribution(%r)' % (list(self.items),)


def mask_and_renormalize(dist, invalid):
    """Zeroes the invalid actions and rescales the rest, order preserved.

    Raises DeadEndError when no probability mass is left.
    """
    invalid = frozenset(invalid)
    if not invalid:
        return dist
    remaining = [(a, p) for a, p in dist.items if a not in invalid]
    total = sum(p for _, p in remaining)
    if not remaining or total <= 0:
        raise DeadEndError("every candidate action is masked")
    return ActionDistribution([(a, p / total) for a, p in remaining])


# What a policy gets to see at one step
PolicyView = namedtuple('PolicyView', 'env_description task history candidates environment state')


class Policy():
    """Source of action distributions.

    distribution() must return an ActionDistribution whose support is a
    subset of view.candidates. It is queried once per plan step.
    """

    name = 'policy'

    def distribution(self, view):
        raise NotImplementedError

    def close(self):
        pass


class UniformPolicy(Policy):
    name = 'uniform'

    def distribution(self, view):
        n = len(view.candidates)
        return ActionDistribution([(a, 1.0 / n) for a in view.candidates])


class GreedyNearestPolicy(Policy):
    """Prefers cheap moves towards entities not reached yet.

    Weight of an action is exp(-cost / mean cost), divided by
    revisit_penalty when the action repeats an earlier one. DONE, when it
    is a candidate, gets probability done_probability.
    """
    name = 'greedy'

    def __init__(self, revisit_penalty=20.0, done_probability=0.25):
        if not 0.0 < done_probability < 1.0:
            raise LtlPlanError("done_probability must be strictly between 0 and 1")
        self.revisit_penalty = revisit_penalty
        self.done_probability = done_probability

    def distribution(self, view):
        env = view.environment
        costs = {}
        for action in view.candidates:
            if action != DONE:
                costs[action] = apply_action(env, view.state, action)[2]
        if not costs:
            return ActionDistribution([(DONE, 1.0)])
        scale = sum(costs.values()) / len(costs) or 1.0
        done_before = set(view.history)
        weights = {}
        for action, cost in costs.items():
            w = math.exp(-cost / scale)
            if action in done_before:
                w /= self.revisit_penalty
            weights[action] = w
        odds = self.done_probability / (1.0 - self.done_probability)
        total = sum(weights.values())
        pairs = []
        for action in view.candidates:
            if action == DONE:
                pairs.append((DONE, odds * total))
            else:
                pairs.append((action, weights[action]))
        return ActionDistribution.from_weights(pairs)


class ScriptedPolicy(Policy):
    """Replays a table of per-step weights.

    table[i] maps actions to weights at step i; actions that are not
    candidates are ignored. Steps without usable entries fall back to the
    uniform distribution.
    """
    name = 'scripted'

    def __init__(self, table):
        self.table = [dict(row or {}) for row in (table or [])]

    def distribution(self, view):
        step = len(view.history)
        if step < len(self.table):
            row = self.table[step]
            pairs = [(a, row[a]) for a in view.candidates if row.get(a, 0) > 0]
            if pairs:
                return ActionDistribution.from_weights(pairs)
        return UniformPolicy().distribution(view)


class SubprocessPolicy(Policy):
    """Policy served by an external command over stdin/stdout.

    Each request is one flow-style line:
    ``{candidates: [...], environment: ..., history: [...], task: ...}``.
    The reply is one line ``{distribution: [{action: ..., weight: ...}, ...]}``;
    JSON is accepted as well. Requests are serialised by a lock.
    """
    name = 'subprocess'

    def __init__(self, command, timeout=60.0):
        if isinstance(command, str):
            command = shlex.split(command)
        self.command = list(command)
        self.timeout = timeout
        self._lock = threading.Lock()
        self._proc = None

    def _ensure_started(self):
        if self._proc is None or self._proc.poll() is not None:
            try:
                self._proc = subprocess.Popen(self.command, stdin=subprocess.PIPE,
                                              stdout=subprocess.PIPE,
                                              universal_newlines=True, bufsize=1)
            except (IOError, OSError) as e:
                raise LtlPlanError("could not start policy command %s: %s"
                                   % (' '.join(self.command), e))

    def request(self, view):
        return {
            'environment': view.env_description,
            'task': view.task,
            'history': list(view.history),
            'candidates': list(view.candidates),
        }

    def distribution(self, view):
        with self._lock:
            self._ensure_started()
            try:
                self._proc.stdin.write(dump_line(self.request(view)) + '\n')
                self._proc.stdin.flush()
                reply = self._proc.stdout.readline()
            except (IOError, OSError) as e:
                raise LtlPlanError("policy command failed: %s" % e)
        if not reply:
            raise LtlPlanError("policy command closed its output")
        return parse_policy_reply(load_line(reply))

    def close(self):
        if self._proc is not None:
            try:
                self._proc.stdin.close()
                self._proc.wait(timeout=self.timeout)
            except Exception:
                self._proc.kill()
            self._proc = None


def parse_policy_reply(reply):
    """Turns a decoded reply into an ActionDistribution."""
    if isinstance(reply, dict):
        reply = reply.get('distribution')
    if not isinstance(reply, list):
        raise LtlPlanError("policy reply must carry a distribution list")
    pairs = []
    for item in reply:
        if isinstance(item, dict):
            pairs.append((item.get('action'), item.get('weight', 0)))
        elif isinstance(item, (list, tuple)) and len(item) == 2:
            pairs.append((item[0], item[1]))
        else:
            raise LtlPlanError("malformed policy reply entry %r" % (item,))
    return ActionDistribution.from_weights(pairs)


def make_policy(name, table=None, command=None):
    """Instantiates a built-in policy by name."""
    if name == 'uniform':
        return UniformPolicy()
    if name == 'greedy':
        return GreedyNearestPolicy()
    if name == 'scripted':
        return ScriptedPolicy(table)
    if name == 'subprocess':
        if not command:
            raise LtlPlanError("the subprocess policy needs a command")
        return SubprocessPolicy(command)
    raise LtlPlanError("unknown policy %r" % (name,))


class DecodingSession():
    """Mutable state of one plan being generated.

    With automaton=None the session runs unconstrained: every sampled
    action is committed.
    """

    def __init__(self, env, task, automaton=None, seed=0, max_steps=None):
        self.env = env
        self.task = task
        self.automaton = automaton
        self.rng = make_rng(seed)
        self.max_steps = default_max_steps(env) if max_steps is None else max_steps
        self.state = env.initial_state()
        self.q = automaton.initial if automaton is not None else None
        self.viability = ProductViability(env, automaton) if automaton is not None else None
        self.history = []
        self.labels = []
        self.cost = 0.0
        self.masked = []
        self.finished = False
        self._description = env.describe()

    def candidates(self):
        return self.env.applicable_actions(self.state) + [DONE]

    def view(self):
        return PolicyView(self._description, self.task, tuple(self.history),
                          tuple(self.candidates()), self.env, self.state)

    def evaluate_action(self, action):
        """Tentatively executes action.

        Returns None when the action is invalid, else the outcome tuple
        (next env state, labeling, cost, next automaton state).
        """
        if action == DONE:
            if self.automaton is not None and not self.automaton.accepting[self.q]:
                return None
            return (self.state, None, 0.0, self.q)
        nxt, label, cost = apply_action(self.env, self.state, action)
        q = None
        if self.automaton is not None:
            q = self.automaton.advance(self.q, label)
            if not self.viability.viable(nxt, q):
                return None
        return (nxt, label, cost, q)

    def commit(self, action, outcome):
        nxt, label, cost, q = outcome
        self.history.append(action)
        if action == DONE:
            self.finished = True
            return
        self.state = nxt
        self.labels.append(label)
        self.cost += cost
        self.q = q

    def plan(self):
        return Plan([a for a in self.history if a != DONE])

    def trace(self):
        return Trace(self.labels, self.env.propositions())


def default_max_steps(env):
    return 4 * len(env.entities)


def decode_step(session, policy):
    """Chooses and commits one action.

    The policy is queried once; invalid samples are masked locally and
    logged with their pre-mask probability.
    """
    if session.finished:
        raise LtlPlanError("the plan is already finished")
    if len([a for a in session.history if a != DONE]) >= session.max_steps:
        raise PlanningTimeout("step limit of %d reached without acceptance" % session.max_steps)

    view = session.view()
    dist = policy.distribution(view)
    unknown = set(dist.actions) - set(view.candidates)
    if unknown:
        raise LtlPlanError("policy proposed non-candidate actions: %s" % ', '.join(sorted(unknown)))

    original = dist.as_dict()
    step_idx = len(session.history)
    current = dist
    while True:
        idx = int(session.rng.choice(len(current), p=current.probabilities))
        action = current.actions[idx]
        outcome = session.evaluate_action(action)
        if outcome is not None:
            session.commit(action, outcome)
            return action
        session.masked.append({'step': step_idx, 'action': action,
                               'probability': original[action]})
        current = mask_and_renormalize(current, [action])


class DecodingResult(namedtuple('DecodingResult', 'plan trace cost masked steps')):
    __slots__ = ()


def run_decoding(env, task, spec, policy, seed=0, max_steps=None, automaton=None,
                 constrained=True, state_cap=DEFAULT_STATE_CAP, deadline=None):
    """Generates a complete plan.

    Constrained runs only return plans whose trace satisfies spec. Raises
    SpecUnsatisfiableError when the initial automaton state is dead,
    PlanningTimeout on step limit or deadline, DeadEndError when every
    candidate is masked.
    """
    if constrained:
        if automaton is None:
            automaton = compile_automaton(spec, env.propositions(), ONE_HOT, state_cap)
        if automaton.initial in automaton.dead:
            raise SpecUnsatisfiableError("the specification has no accepting trace")
    else:
        automaton = None

    session = DecodingSession(env, task, automaton, seed=seed, max_steps=max_steps)
    if constrained and not session.viability.viable(session.state, session.q):
        raise SpecUnsatisfiableError("no accepting plan is reachable in this environment")
    while not session.finished:
        if deadline is not None and time.monotonic() > deadline:
            raise PlanningTimeout("time limit exceeded after %d steps" % len(session.history))
        decode_step(session, policy)
    return DecodingResult(session.plan(), session.trace(), session.cost,
                          session.masked, len(session.history))
