# -*- coding: utf-8 -*-

# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

"""Task corpus generation.

Specifications are drawn from a small grammar of template classes over
placeholder atoms, rendered to structured English, checked for
satisfiability, then grounded to the entities of an environment.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import os
import shlex
import subprocess

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    ONE_HOT,
    compile_automaton,
    conjoin,
)
from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    DEFAULT_STATE_CAP,
    GenerationError,
    LtlPlanError,
    make_rng,
    spawn_seeds,
    read_lines_file,
    write_lines_file,
)
from ansible_collections.community.ltlplan.plugins.module_utils.environment import (
    MANIPULATION,
    NAVIGATION,
    dump_environment,
    load_environment,
    random_environment,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import (
    AND,
    ATOM,
    FALSE,
    FINALLY,
    GLOBALLY,
    IMPLIES,
    NEXT,
    NOT,
    OR,
    TRUE,
    UNTIL,
    atom,
    atoms,
    check_grounding_map,
    depth,
    eventually,
    globally,
    ground,
    implication,
    negation,
    next_step,
    parse_prefix,
    render_prefix,
    until,
    width,
)
from ansible_collections.community.ltlplan.plugins.module_utils.oracle import optimal_plan

VISIT_ALL = 'visit-all'
ORDERING = 'ordering'
IMMEDIATE_SUCCESSOR = 'immediate-successor'
AVOIDANCE_UNTIL = 'avoidance-until'
GLOBAL_AVOID = 'global-avoid'

CONSTRAINT_TEMPLATES = (ORDERING, IMMEDIATE_SUCCESSOR, AVOIDANCE_UNTIL, GLOBAL_AVOID)
TEMPLATES = (VISIT_ALL,) + CONSTRAINT_TEMPLATES

TEMPLATE_ARITY = {
    ORDERING: 2,
    IMMEDIATE_SUCCESSOR: 2,
    AVOIDANCE_UNTIL: 3,
    GLOBAL_AVOID: 1,
}

# Operator letters F, G, U and X are left out: they are keywords
PLACEHOLDERS = ('A', 'B', 'C', 'D', 'E', 'H', 'I', 'J', 'K', 'L', 'M', 'N')

MIN_GOAL_SIZE = 2
MAX_GOAL_SIZE = 4
# Placeholders available to constraints beyond those of the goal
EXTRA_PLACEHOLDERS = 2

MIN_CONSTRAINTS = 1
MAX_CONSTRAINTS = 5
RESAMPLE_BUDGET = 50
# Bounds the realizability check of a drawn task
ORACLE_EXPANSIONS = 50000

CORPUS_FILE = 'corpus.yml'
ENVIRONMENTS_DIR = 'environments'

# (present, past participle) of the verb used per domain
VERBS = {
    NAVIGATION: ('visit', 'visited'),
    MANIPULATION: ('achieve', 'achieved'),
}


def instantiate(template, names):
    """Builds a template instance over the given atom names."""
    names = list(names)
    if template == VISIT_ALL:
        if not names:
            raise GenerationError("visit-all needs at least one atom")
        return conjoin([eventually(atom(n)) for n in names])
    arity = TEMPLATE_ARITY.get(template)
    if arity is None:
        raise GenerationError("unknown template class %r" % (template,))
    if len(names) != arity:
        raise GenerationError("template %s takes %d atoms, got %d" % (template, arity, len(names)))
    a = [atom(n) for n in names]
    if template == ORDERING:
        return until(negation(a[1]), a[0])
    if template == IMMEDIATE_SUCCESSOR:
        return globally(implication(a[0], next_step(a[1])))
    if template == AVOIDANCE_UNTIL:
        return globally(implication(a[0], until(negation(a[1]), a[2])))
    return globally(negation(a[0]))


def generate_formula(template, rng, placeholders=PLACEHOLDERS, size=None):
    """Instantiates a template over atoms drawn without replacement."""
    placeholders = list(placeholders)
    if template == VISIT_ALL:
        count = size if size is not None else int(rng.integers(MIN_GOAL_SIZE, MAX_GOAL_SIZE + 1))
    elif template in TEMPLATE_ARITY:
        count = TEMPLATE_ARITY[template]
    else:
        raise GenerationError("unknown template class %r" % (template,))
    if count > len(placeholders):
        raise GenerationError("template %s needs %d atoms, only %d available"
                              % (template, count, len(placeholders)))
    picks = rng.choice(len(placeholders), size=count, replace=False)
    return instantiate(template, [placeholders[int(i)] for i in picks])


#
# Structured English
#

def _is_atom(f):
    return f.op == ATOM


def _template_phrase(f, verb, past):
    """Phrase of a template instance, or None."""
    if f.op == FINALLY and _is_atom(f.children[0]):
        return "eventually %s %s" % (verb, f.children[0].name)
    if f.op == UNTIL:
        left, right = f.children
        if left.op == NOT and _is_atom(left.children[0]) and _is_atom(right):
            return "do not %s %s until you have %s %s" % (verb, left.children[0].name,
                                                         past, right.name)
    if f.op == GLOBALLY:
        body = f.children[0]
        if body.op == NOT and _is_atom(body.children[0]):
            return "never %s %s" % (verb, body.children[0].name)
        if body.op == IMPLIES and _is_atom(body.children[0]):
            trigger, effect = body.children
            if effect.op == NEXT and _is_atom(effect.children[0]):
                return "whenever you %s %s, %s %s immediately next" % (
                    verb, trigger.name, verb, effect.children[0].name)
            inner = _template_phrase(effect, verb, past) if effect.op == UNTIL else None
            if inner is not None:
                return "whenever you %s %s, %s" % (verb, trigger.name, inner)
    return None


_FALLBACK = {
    NOT: "not (%s)",
    NEXT: "at the next step (%s)",
    GLOBALLY: "always (%s)",
    FINALLY: "eventually (%s)",
    AND: "(%s) and (%s)",
    OR: "(%s) or (%s)",
    IMPLIES: "if (%s) then (%s)",
    UNTIL: "(%s) until (%s)",
}


def _phrase(f, verb, past):
    phrase = _template_phrase(f, verb, past)
    if phrase is not None:
        return phrase
    if f.op == ATOM:
        return f.name
    if f.op in (TRUE, FALSE):
        return f.op
    return _FALLBACK[f.op] % tuple(_phrase(c, verb, past) for c in f.children)


def _top_conjuncts(f):
    parts = []
    stack = [f]
    while stack:
        node = stack.pop()
        if node.op == AND:
            stack.extend(reversed(node.children))
        else:
            parts.append(node)
    return parts


def structured_english(f, verb='visit', past='visited'):
    """Renders f as structured English.

    Top-level conjuncts become clauses joined by "; ". Template instances
    use the phrase table, anything else is phrased operator by operator
    with parentheses.
    """
    return '; '.join(_phrase(part, verb, past) for part in _top_conjuncts(f))


#
# Task records
#

def split_conjuncts(f):
    """Splits a right-nested conjunction into its conjoined parts."""
    parts = []
    while f.op == AND:
        parts.append(f.children[0])
        f = f.children[1]
    parts.append(f)
    return parts


class TaskRecord():
    """One task: a lifted specification, its grounding and NL rendering."""

    def __init__(self, nl, ltl_prefix, placeholders, grounding, environment_id,
                 environment_file=None, n_constraints=None, goal_prefix=None,
                 templates=None, seed=None):
        self.nl = nl
        self.ltl_prefix = ltl_prefix
        self.placeholders = list(placeholders)
        self.grounding = dict(grounding)
        self.environment_id = environment_id
        self.environment_file = environment_file
        self.templates = list(templates) if templates else []
        self.seed = seed

        check_grounding_map(self.grounding)
        self._lifted = parse_prefix(ltl_prefix)
        missing = atoms(self._lifted) - frozenset(self.grounding)
        if missing:
            raise LtlPlanError("task placeholders without grounding: %s" % ', '.join(sorted(missing)))

        parts = split_conjuncts(self._lifted)
        if n_constraints is None:
            n_constraints = len(parts) - 1
        elif n_constraints != len(parts) - 1:
            raise LtlPlanError("task declares %d constraints but conjoins %d"
                               % (n_constraints, len(parts) - 1))
        self.n_constraints = n_constraints
        if goal_prefix is None:
            goal_prefix = render_prefix(parts[0])
        self.goal_prefix = goal_prefix
        self._goal = parse_prefix(goal_prefix)

    def lifted_spec(self):
        return self._lifted

    def lifted_goal(self):
        return self._goal

    def grounded_spec(self):
        return ground(self._lifted, self.grounding)

    def grounded_goal(self):
        return ground(self._goal, self.grounding)

    def to_dict(self):
        return {
            'nl': self.nl,
            'ltl_prefix': self.ltl_prefix,
            'goal_prefix': self.goal_prefix,
            'placeholders': list(self.placeholders),
            'grounding': dict(self.grounding),
            'environment_id': self.environment_id,
            'environment_file': self.environment_file,
            'n_constraints': self.n_constraints,
            'templates': list(self.templates),
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, content):
        if not isinstance(content, dict):
            raise LtlPlanError("task record must be a mapping")
        try:
            return cls(
                nl=content.get('nl', ''),
                ltl_prefix=content['ltl_prefix'],
                placeholders=content.get('placeholders') or sorted(content['grounding']),
                grounding=content['grounding'],
                environment_id=content.get('environment_id'),
                environment_file=content.get('environment_file'),
                n_constraints=content.get('n_constraints'),
                goal_prefix=content.get('goal_prefix'),
                templates=content.get('templates'),
                seed=content.get('seed'),
            )
        except (KeyError, TypeError, AttributeError) as e:
            raise LtlPlanError("malformed task record: %s" % e)


def _entity_propositions(env, count, rng):
    if env.kind == NAVIGATION:
        names = [r.name for r in env.rooms]
        if count > len(names):
            raise GenerationError("environment has %d rooms, %d needed" % (len(names), count))
        return [names[int(i)] for i in rng.choice(len(names), size=count, replace=False)]
    blocks = env.blocks
    boxes = env.boxes
    if count > len(blocks):
        raise GenerationError("environment has %d blocks, %d needed" % (len(blocks), count))
    props = []
    for i in rng.choice(len(blocks), size=count, replace=False):
        box = boxes[int(rng.integers(len(boxes)))]
        props.append('%s_in_%s' % (blocks[int(i)].name, box.name))
    return props


def _pick_templates(rng, n, weights):
    if weights is None:
        return [CONSTRAINT_TEMPLATES[int(i)] for i in rng.integers(len(CONSTRAINT_TEMPLATES), size=n)]
    raw = [float(weights.get(t, 0.0)) for t in CONSTRAINT_TEMPLATES]
    total = sum(raw)
    if total <= 0 or min(raw) < 0:
        raise GenerationError("template weights must be non-negative with a positive sum")
    p = [w / total for w in raw]
    return [CONSTRAINT_TEMPLATES[int(i)] for i in rng.choice(len(CONSTRAINT_TEMPLATES), size=n, p=p)]


def make_task(env, n_constraints, rng, seed=None, weights=None, budget=RESAMPLE_BUDGET,
              state_cap=DEFAULT_STATE_CAP, environment_file=None):
    """Draws a satisfiable task of n_constraints constraints for env.

    Draws are rejected until the grounded conjunction has a live initial
    state and a reachable accepting plan in env.
    """
    if not MIN_CONSTRAINTS <= n_constraints <= MAX_CONSTRAINTS:
        raise LtlPlanError("n_constraints must be between %d and %d"
                           % (MIN_CONSTRAINTS, MAX_CONSTRAINTS))
    verb, past = VERBS[env.kind]
    last = None
    for _ in range(budget):
        goal_size = int(rng.integers(MIN_GOAL_SIZE, MAX_GOAL_SIZE + 1))
        pool = PLACEHOLDERS[:goal_size + EXTRA_PLACEHOLDERS]
        goal = instantiate(VISIT_ALL, pool[:goal_size])
        templates = _pick_templates(rng, n_constraints, weights)
        constraints = [generate_formula(t, rng, pool) for t in templates]
        lifted = conjoin([goal] + constraints)

        used = [p for p in PLACEHOLDERS if p in atoms(lifted)]
        grounding = dict(zip(used, _entity_propositions(env, len(used), rng)))
        grounded = ground(lifted, grounding)
        last = render_prefix(lifted)

        automaton = compile_automaton(grounded, env.propositions(), ONE_HOT, state_cap)
        if automaton.initial in automaton.dead:
            continue
        try:
            optimal_plan(env, automaton, max_expansions=ORACLE_EXPANSIONS)
        except LtlPlanError:
            continue

        return TaskRecord(
            nl=structured_english(grounded, verb, past),
            ltl_prefix=render_prefix(lifted),
            goal_prefix=render_prefix(goal),
            placeholders=used,
            grounding=grounding,
            environment_id=env.env_id,
            environment_file=environment_file,
            n_constraints=n_constraints,
            templates=templates,
            seed=seed,
        )
    raise GenerationError("no satisfiable task after %d draws; last draw: %s" % (budget, last))


def environment_file_name(env):
    return '%s/%s.yml' % (ENVIRONMENTS_DIR, env.env_id)


def generate_corpus(kinds=(NAVIGATION,), n_environments=100, tasks_per_environment=5, seed=0,
                    constraint_counts=(1, 2, 3, 4, 5), weights=None, state_cap=DEFAULT_STATE_CAP):
    """Generates environments and their tasks, deterministically from seed.

    Environment i is of kind kinds[i % len(kinds)]; its task j has
    constraint_counts[j % len(constraint_counts)] constraints. Environment
    seeds are spawned from seed, task seeds from their environment seed;
    environment ids are "<kind>-<i>".

    Returns (environments, records).
    """
    if n_environments < 1 or tasks_per_environment < 1:
        raise LtlPlanError("a corpus needs at least one environment and one task per environment")
    envs = []
    records = []
    for i, env_seed in enumerate(spawn_seeds(seed, n_environments)):
        kind = kinds[i % len(kinds)]
        env = random_environment(kind, env_seed, env_id='%s-%d' % (kind, i))
        envs.append(env)
        for j, task_seed in enumerate(spawn_seeds(env_seed, tasks_per_environment)):
            n = constraint_counts[j % len(constraint_counts)]
            records.append(make_task(env, n, make_rng(task_seed), seed=task_seed,
                                     weights=weights, state_cap=state_cap,
                                     environment_file=environment_file_name(env)))
    return envs, records


def write_corpus(out_dir, envs, records, name=CORPUS_FILE):
    """Writes environment files and the corpus line file; returns the corpus path."""
    env_dir = os.path.join(out_dir, ENVIRONMENTS_DIR)
    try:
        if not os.path.isdir(env_dir):
            os.makedirs(env_dir)
    except (IOError, OSError) as e:
        raise LtlPlanError("Could not create directory %s: %s" % (env_dir, e))
    for env in envs:
        dump_environment(os.path.join(out_dir, environment_file_name(env)), env)
    path = os.path.join(out_dir, name)
    write_lines_file(path, [r.to_dict() for r in records])
    return path


def load_corpus(path):
    """Loads a corpus line file with its environments.

    Environment files are resolved relative to the corpus file.

    Returns a list of (environment, TaskRecord) pairs.
    """
    base = os.path.dirname(os.path.abspath(path))
    cache = {}
    tasks = []
    for content in read_lines_file(path):
        record = TaskRecord.from_dict(content)
        if not record.environment_file:
            raise LtlPlanError("task record for %s names no environment file" % record.environment_id)
        env_path = os.path.join(base, record.environment_file)
        if env_path not in cache:
            cache[env_path] = load_environment(env_path)
        tasks.append((cache[env_path], record))
    return tasks


def paraphrase(records, command, timeout=60.0):
    """Rewrites the nl field of every record through an external command.

    The command receives the NL text on stdin and prints the new text.
    """
    args = shlex.split(command) if isinstance(command, str) else list(command)
    for record in records:
        try:
            proc = subprocess.run(args, input=record.nl, stdout=subprocess.PIPE,
                                  universal_newlines=True, timeout=timeout, check=True)
        except (IOError, OSError, subprocess.SubprocessError) as e:
            raise LtlPlanError("paraphrase command failed: %s" % e)
        text = proc.stdout.strip()
        if text:
            record.nl = text
    return records


#
# Statistics
#

def _summary(values):
    histogram = {}
    for v in values:
        histogram[v] = histogram.get(v, 0) + 1
    return {
        'mean': sum(values) / len(values),
        'min': min(values),
        'max': max(values),
        'histogram': histogram,
    }


def nl_collisions(records):
    """Counts NL strings shared by distinct specifications."""
    specs_by_nl = {}
    for record in records:
        specs_by_nl.setdefault(record.nl, set()).add(render_prefix(record.grounded_spec()))
    return sum(len(specs) - 1 for specs in specs_by_nl.values())


def complexity_stats(records, state_cap=DEFAULT_STATE_CAP):
    """Reports syntax-tree and automaton sizes over a corpus.

    Automata are compiled from the lifted specifications, one-hot over
    each record's own placeholders.
    """
    records = list(records)
    if not records:
        raise LtlPlanError("cannot report on an empty corpus")
    per_record = []
    for record in records:
        f = record.lifted_spec()
        automaton = compile_automaton(f, record.placeholders, ONE_HOT, state_cap)
        per_record.append({
            'depth': depth(f),
            'width': width(f),
            'states': automaton.num_states,
            'edges': automaton.num_edges,
            'n_constraints': record.n_constraints,
        })

    by_constraints = {}
    for item in per_record:
        by_constraints.setdefault(item['n_constraints'], []).append(item)
    return {
        'records': len(records),
        'depth': _summary([item['depth'] for item in per_record]),
        'width': _summary([item['width'] for item in per_record]),
        'states': _summary([item['states'] for item in per_record]),
        'edges': _summary([item['edges'] for item in per_record]),
        'nl_collisions': nl_collisions(records),
        'by_constraints': dict(
            (n, {'records': len(items),
                 'mean_depth': sum(i['depth'] for i in items) / len(items),
                 'mean_states': sum(i['states'] for i in items) / len(items)})
            for n, items in sorted(by_constraints.items())),
    }
