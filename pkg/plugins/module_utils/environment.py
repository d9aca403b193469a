# -*- coding: utf-8 -*-

# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

"""Navigation and manipulation environments with a kinematic cost model.

Each executed action emits exactly one proposition (an action event):
``Goto <room>`` emits ``<room>``, ``Move <block> <box>`` emits
``<block>_in_<box>``.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import math
from collections import namedtuple

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    InapplicableActionError,
    LtlPlanError,
    dump_yaml_file,
    load_yaml_file,
    make_rng,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import IDENT_RE, KEYWORDS, Trace

NAVIGATION = 'navigation'
MANIPULATION = 'manipulation'
KINDS = (NAVIGATION, MANIPULATION)

DONE = 'DONE'

ROOM = 'room'
BLOCK = 'block'
BOX = 'box'

ROOM_COLORS = ('red', 'green', 'blue', 'yellow', 'purple', 'orange',
               'pink', 'brown', 'white', 'black', 'gray', 'cyan')
BLOCK_COLORS = ROOM_COLORS + ('magenta', 'olive', 'navy', 'teal')
BOX_NAMES = ('box_a', 'box_b', 'box_c')

NUM_ROOMS = 12
NUM_BLOCKS = 16
NUM_RACKS = 4

FLOOR_HEIGHT = 3.0
BUILDING_SIDE = 20.0
TABLE_SIDE = 1.0

NAV_SPEED = 0.1
ARM_SPEED = 0.01
PICK_OVERHEAD = 10.0
PLACE_OVERHEAD = 10.0


class Entity(namedtuple('Entity', 'name role x y z')):
    __slots__ = ()

    @property
    def position(self):
        return (self.x, self.y, self.z)


# position: agent/arm coordinates; location: name of the entity last
# reached (None before the first action); moved: blocks already moved
EnvState = namedtuple('EnvState', 'position location moved')


def distance(a, b):
    return math.sqrt(sum((p - q) ** 2 for p, q in zip(a, b)))


class Environment():
    """Immutable labeled transition system plus its cost parameters."""

    def __init__(self, kind, entities, initial_position, travel_speed=1.0,
                 action_overhead=0.0, pick_overhead=0.0, place_overhead=0.0,
                 env_id=None, seed=None, bounds=None):
        if kind not in KINDS:
            raise LtlPlanError("unknown environment kind %r" % (kind,))
        if travel_speed <= 0:
            raise LtlPlanError("travel speed must be positive")

        self.kind = kind
        self.entities = tuple(entities)
        self.initial_position = tuple(float(c) for c in initial_position)
        self.travel_speed = float(travel_speed)
        self.action_overhead = float(action_overhead)
        self.pick_overhead = float(pick_overhead)
        self.place_overhead = float(place_overhead)
        self.env_id = env_id
        self.seed = seed
        self.bounds = bounds

        self.by_name = {}
        for e in self.entities:
            if e.name in self.by_name:
                raise LtlPlanError("duplicate entity name %r" % e.name)
            if not IDENT_RE.match(e.name) or e.name in KEYWORDS:
                raise LtlPlanError("invalid entity name %r" % e.name)
            if not all(math.isfinite(c) for c in e.position):
                raise LtlPlanError("entity %s has non-finite coordinates" % e.name)
            self.by_name[e.name] = e
        if not all(math.isfinite(c) for c in self.initial_position):
            raise LtlPlanError("initial position has non-finite coordinates")

        if kind == NAVIGATION:
            if not self.rooms or len(self.rooms) != len(self.entities):
                raise LtlPlanError("a navigation environment holds rooms only")
        elif not self.blocks or not self.boxes:
            raise LtlPlanError("a manipulation environment needs blocks and boxes")

        self._props = self._build_propositions()

    @property
    def rooms(self):
        return [e for e in self.entities if e.role == ROOM]

    @property
    def blocks(self):
        return [e for e in self.entities if e.role == BLOCK]

    @property
    def boxes(self):
        return [e for e in self.entities if e.role == BOX]

    def _build_propositions(self):
        props = []
        for action in self.all_actions():
            props.append(self.proposition(action))
        return tuple(props)

    def all_actions(self):
        """Returns the action vocabulary, DONE excluded, in a fixed order."""
        if self.kind == NAVIGATION:
            return ['Goto %s' % r.name for r in self.rooms]
        return ['Move %s %s' % (b.name, x.name) for b in self.blocks for x in self.boxes]

    def propositions(self):
        """The atom universe of this environment, in action vocabulary order."""
        return self._props

    def parse_action(self, action):
        """Splits an action string into its verb and entity arguments.

        Raises InapplicableActionError on malformed or unknown actions.
        """
        words = (action or '').split()
        if self.kind == NAVIGATION:
            if len(words) != 2 or words[0] != 'Goto':
                raise InapplicableActionError("malformed navigation action %r" % action)
            target = self.by_name.get(words[1])
            if target is None or target.role != ROOM:
                raise InapplicableActionError("unknown landmark %r" % words[1])
            return words[0], (target,)
        if len(words) != 3 or words[0] != 'Move':
            raise InapplicableActionError("malformed manipulation action %r" % action)
        block = self.by_name.get(words[1])
        box = self.by_name.get(words[2])
        if block is None or block.role != BLOCK:
            raise InapplicableActionError("unknown block %r" % words[1])
        if box is None or box.role != BOX:
            raise InapplicableActionError("unknown box %r" % words[2])
        return words[0], (block, box)

    def proposition(self, action):
        verb, args = self.parse_action(action)
        if verb == 'Goto':
            return args[0].name
        return '%s_in_%s' % (args[0].name, args[1].name)

    def initial_state(self):
        return EnvState(self.initial_position, None, frozenset())

    def applicable_actions(self, state):
        if self.kind == NAVIGATION:
            return self.all_actions()
        return ['Move %s %s' % (b.name, x.name)
                for b in self.blocks if b.name not in state.moved
                for x in self.boxes]

    def state_key(self, state):
        """Hashable summary of everything that affects future actions and costs."""
        if self.kind == NAVIGATION:
            return state.location
        return (state.location, state.moved)

    def restrict(self, block_names):
        """Returns the same table holding only the named blocks.

        Costs, labels and the initial arm position are unchanged, so a plan
        of the restricted environment is a plan of this one too.
        """
        if self.kind != MANIPULATION:
            raise LtlPlanError("only manipulation environments can be restricted")
        keep = frozenset(block_names)
        unknown = keep - frozenset(b.name for b in self.blocks)
        if unknown:
            raise LtlPlanError("unknown blocks: %s" % ', '.join(sorted(unknown)))
        entities = [e for e in self.entities if e.role != BLOCK or e.name in keep]
        return Environment(self.kind, entities, self.initial_position,
                           travel_speed=self.travel_speed, action_overhead=self.action_overhead,
                           pick_overhead=self.pick_overhead, place_overhead=self.place_overhead,
                           env_id=self.env_id, seed=self.seed, bounds=self.bounds)

    def describe(self):
        """Plain-text environment description handed to policies."""
        lines = []
        x, y, z = self.initial_position
        if self.kind == NAVIGATION:
            floors = sorted(set(int(r.z // FLOOR_HEIGHT) for r in self.rooms))
            lines.append("Building with %d rooms on %d floors." % (len(self.rooms), len(floors)))
            lines.append("The drone starts at (%.2f, %.2f, %.2f)." % (x, y, z))
            for r in self.rooms:
                lines.append("%s is at (%.2f, %.2f, %.2f)." % (r.name, r.x, r.y, r.z))
            lines.append("Actions: Goto <room>, DONE.")
        else:
            lines.append("Table with %d blocks and %d boxes." % (len(self.blocks), len(self.boxes)))
            lines.append("The arm starts at (%.2f, %.2f, %.2f)." % (x, y, z))
            for e in self.entities:
                lines.append("%s %s is at (%.2f, %.2f, %.2f)." % (e.role, e.name, e.x, e.y, e.z))
            lines.append("Actions: Move <block> <box>, DONE.")
        return '\n'.join(lines)

    def to_dict(self):
        return {
            'id': self.env_id,
            'kind': self.kind,
            'seed': self.seed,
            'bounds': self.bounds,
            'initial_position': list(self.initial_position),
            'speeds': {
                'travel': self.travel_speed,
                'action_overhead': self.action_overhead,
                'pick_overhead': self.pick_overhead,
                'place_overhead': self.place_overhead,
            },
            'entities': [
                {'name': e.name, 'role': e.role, 'x': e.x, 'y': e.y, 'z': e.z}
                for e in self.entities
            ],
        }


def environment_from_dict(content):
    """Builds an Environment from its file document."""
    if not isinstance(content, dict):
        raise LtlPlanError("environment document must be a mapping")
    try:
        speeds = content.get('speeds') or {}
        entities = [Entity(str(e['name']), str(e['role']), float(e['x']), float(e['y']), float(e['z']))
                    for e in content['entities']]
        return Environment(
            kind=content['kind'],
            entities=entities,
            initial_position=content['initial_position'],
            travel_speed=speeds.get('travel', 1.0),
            action_overhead=speeds.get('action_overhead', 0.0),
            pick_overhead=speeds.get('pick_overhead', 0.0),
            place_overhead=speeds.get('place_overhead', 0.0),
            env_id=content.get('id'),
            seed=content.get('seed'),
            bounds=content.get('bounds'),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise LtlPlanError("malformed environment document: %s" % e)


def load_environment(path):
    return environment_from_dict(load_yaml_file(path))


def dump_environment(path, env):
    dump_yaml_file(path, env.to_dict())


def apply_action(env, state, action):
    """Executes one action.

    Returns (next state, labeling, cost in time-steps).
    """
    verb, args = env.parse_action(action)
    if verb == 'Goto':
        room = args[0]
        cost = distance(state.position, room.position) / env.travel_speed + env.action_overhead
        nxt = EnvState(room.position, room.name, state.moved)
    else:
        block, box = args
        if block.name in state.moved:
            raise InapplicableActionError("block %s was already moved" % block.name)
        travel = distance(state.position, block.position) + distance(block.position, box.position)
        cost = (travel / env.travel_speed + env.action_overhead
                + env.pick_overhead + env.place_overhead)
        nxt = EnvState(box.position, box.name, state.moved | frozenset([block.name]))
    return nxt, frozenset([env.proposition(action)]), cost


def simulate(env, plan):
    """Folds apply_action over a plan.

    Returns (trace, total cost); the trace universe is the environment's
    proposition vocabulary.
    """
    if not isinstance(plan, Plan):
        plan = Plan.from_tokens(plan)
    state = env.initial_state()
    labels = []
    total = 0.0
    for idx, action in enumerate(plan.actions):
        try:
            state, label, cost = apply_action(env, state, action)
        except InapplicableActionError as e:
            raise InapplicableActionError(str(e), step=idx)
        labels.append(label)
        total += cost
    return Trace(labels, env.propositions()), total


class Plan():
    """Ordered actions; rendered with a single terminating DONE."""

    def __init__(self, actions):
        self.actions = tuple(actions)
        if DONE in self.actions:
            raise LtlPlanError("DONE may only terminate a plan")

    @classmethod
    def from_tokens(cls, tokens):
        tokens = [t.strip() for t in tokens if t and t.strip()]
        if not tokens or tokens[-1] != DONE:
            raise LtlPlanError("a plan must end with DONE")
        if tokens.count(DONE) != 1:
            raise LtlPlanError("DONE must appear exactly once")
        return cls(tokens[:-1])

    def tokens(self):
        return list(self.actions) + [DONE]

    def __len__(self):
        return len(self.actions)

    def __eq__(self, other):
        return isinstance(other, Plan) and self.actions == other.actions

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self.actions)

    def __repr__(self):
        return 'Plan(%r)' % (self.tokens(),)


def _round(v):
    return round(float(v), 3)


def random_environment(kind, seed, env_id=None):
    """Generates a layout deterministically from seed.

    env_id defaults to "<kind>-<seed>".

    navigation: 12 rooms spread over 3 or 4 floors of a 20 m building.
    manipulation: 16 blocks on 4 racks plus 2 or 3 boxes on a 1 m table.
    """
    rng = make_rng(seed)
    if env_id is None:
        env_id = '%s-%d' % (kind, seed)
    if kind == NAVIGATION:
        floors = int(rng.integers(3, 5))
        assignment = [i % floors for i in range(NUM_ROOMS)]
        rng.shuffle(assignment)
        rooms = []
        for name, floor in zip(ROOM_COLORS, assignment):
            rooms.append(Entity('%s_room' % name, ROOM,
                                _round(rng.uniform(0, BUILDING_SIDE)),
                                _round(rng.uniform(0, BUILDING_SIDE)),
                                _round(floor * FLOOR_HEIGHT + FLOOR_HEIGHT / 2)))
        start = (_round(rng.uniform(0, BUILDING_SIDE)),
                 _round(rng.uniform(0, BUILDING_SIDE)),
                 _round(int(rng.integers(0, floors)) * FLOOR_HEIGHT + FLOOR_HEIGHT / 2))
        bounds = {'min': [0.0, 0.0, 0.0],
                  'max': [BUILDING_SIDE, BUILDING_SIDE, floors * FLOOR_HEIGHT]}
        return Environment(NAVIGATION, rooms, start, travel_speed=NAV_SPEED,
                           env_id=env_id, seed=seed, bounds=bounds)

    if kind != MANIPULATION:
        raise LtlPlanError("unknown environment kind %r" % (kind,))

    slots = list(range(NUM_BLOCKS))
    rng.shuffle(slots)
    entities = []
    for name, slot in zip(BLOCK_COLORS, slots):
        rack, place = divmod(slot, NUM_BLOCKS // NUM_RACKS)
        entities.append(Entity('%s_block' % name, BLOCK,
                               _round(0.1 + 0.25 * rack + rng.uniform(-0.02, 0.02)),
                               _round(0.1 + 0.05 * place + rng.uniform(-0.01, 0.01)),
                               0.05))
    n_boxes = int(rng.integers(2, 4))
    for i in range(n_boxes):
        entities.append(Entity(BOX_NAMES[i], BOX,
                               _round(0.2 + 0.3 * i + rng.uniform(-0.05, 0.05)),
                               _round(rng.uniform(0.7, 0.9)),
                               0.0))
    start = (_round(rng.uniform(0, TABLE_SIDE)), _round(rng.uniform(0, TABLE_SIDE)), 0.3)
    bounds = {'min': [0.0, 0.0, 0.0], 'max': [TABLE_SIDE, TABLE_SIDE, 0.5]}
    return Environment(MANIPULATION, entities, start, travel_speed=ARM_SPEED,
                       pick_overhead=PICK_OVERHEAD, place_overhead=PLACE_OVERHEAD,
                       env_id=env_id, seed=seed, bounds=bounds)
