# -*- coding: utf-8 -*-

# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

"""Batch evaluation of planners over a task corpus.

Safety and completion are judged with ltl.evaluate on the simulated
trace, never with the automaton that guided the planner.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import multiprocessing
import time

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    ONE_HOT,
    compile_automaton,
)
from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    DEFAULT_STATE_CAP,
    DEFAULT_TIME_LIMIT,
    DeadEndError,
    LtlPlanError,
    PlanningTimeout,
    SpecUnsatisfiableError,
)
from ansible_collections.community.ltlplan.plugins.module_utils.decoding import (
    make_policy,
    run_decoding,
)
from ansible_collections.community.ltlplan.plugins.module_utils.environment import simulate
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import evaluate, ground
from ansible_collections.community.ltlplan.plugins.module_utils.oracle import optimal_plan
from ansible_collections.community.ltlplan.plugins.module_utils.voting import (
    NoisyOracleTranslator,
    translate_and_vote,
)

CONSTRAINED = 'constrained'
UNCONSTRAINED = 'unconstrained'
ORACLE = 'oracle'
PLANNERS = (CONSTRAINED, UNCONSTRAINED, ORACLE)

OK = 'ok'
TIMEOUT = 'timeout'
DEAD_END = 'dead_end'
UNSATISFIABLE = 'unsatisfiable'
ERROR = 'error'
FAILURES = (TIMEOUT, DEAD_END, UNSATISFIABLE, ERROR)


def percent(count, total):
    if not total:
        return 0.0
    return 100.0 * count / total


def plan_task(env, record, planner, policy='uniform', seed=0, time_limit=DEFAULT_TIME_LIMIT,
              state_cap=DEFAULT_STATE_CAP, table=None, command=None, translator_accuracy=None,
              index=None):
    """Runs one planner on one task and judges the outcome.

    With translator_accuracy set, the specification planned against is
    the vote over noisy translations of the lifted specification, and the
    voting time is part of the planning time.
    """
    spec = record.grounded_spec()
    goal = record.grounded_goal()
    outcome = {
        'index': index,
        'environment_id': record.environment_id,
        'n_constraints': record.n_constraints,
        'status': OK,
        'reason': None,
        'plan': None,
        'cost': None,
        'safe': False,
        'complete': False,
    }

    start = time.monotonic()
    deadline = start + time_limit
    plan = None
    try:
        target = spec
        if translator_accuracy is not None:
            translator = NoisyOracleTranslator(record.lifted_spec(), translator_accuracy,
                                               universe=record.placeholders, seed=seed)
            voted = translate_and_vote(translator, record.nl, universe=record.placeholders,
                                       state_cap=state_cap)
            target = ground(voted.representative, record.grounding)

        if planner == ORACLE:
            automaton = compile_automaton(target, env.propositions(), ONE_HOT, state_cap)
            plan = optimal_plan(env, automaton, deadline=deadline).plan
        elif planner in (CONSTRAINED, UNCONSTRAINED):
            source = make_policy(policy, table, command)
            try:
                decoded = run_decoding(env, record.nl, target, source, seed=seed,
                                       constrained=(planner == CONSTRAINED),
                                       state_cap=state_cap, deadline=deadline)
            finally:
                source.close()
            plan = decoded.plan
        else:
            raise LtlPlanError("unknown planner %r" % (planner,))
    except PlanningTimeout as e:
        outcome.update(status=TIMEOUT, reason=str(e))
    except DeadEndError as e:
        outcome.update(status=DEAD_END, reason=str(e))
    except SpecUnsatisfiableError as e:
        outcome.update(status=UNSATISFIABLE, reason=str(e))
    except LtlPlanError as e:
        outcome.update(status=ERROR, reason=str(e))
    elapsed = time.monotonic() - start
    outcome['planning_time'] = elapsed

    if plan is not None and elapsed > time_limit:
        outcome.update(status=TIMEOUT, reason="time limit of %s s exceeded" % time_limit)
        plan = None

    if plan is not None:
        trace, cost = simulate(env, plan)
        outcome['plan'] = plan.tokens()
        outcome['cost'] = cost
        outcome['safe'] = evaluate(spec, trace)
        outcome['complete'] = evaluate(goal, trace)
    return outcome


def _plan_task_star(args):
    env, record, options = args
    return plan_task(env, record, **options)


def _summarize(outcomes):
    total = len(outcomes)
    safe = [o for o in outcomes if o['safe']]
    complete = [o for o in outcomes if o['complete']]
    return {
        'tasks': total,
        'SF': percent(len(safe), total),
        'CP': percent(len(complete), total),
        'ET': sum(o['cost'] for o in safe) / len(safe) if safe else None,
        'PT': sum(o['planning_time'] for o in outcomes) / total if total else None,
    }


def build_report(outcomes, planner, policy):
    """Reduces per-task outcomes, in task order, into a report."""
    report = _summarize(outcomes)
    report['planner'] = planner
    report['policy'] = None if planner == ORACLE else policy

    by_constraints = {}
    for o in outcomes:
        by_constraints.setdefault(o['n_constraints'], []).append(o)
    report['by_constraints'] = dict((n, _summarize(items))
                                    for n, items in sorted(by_constraints.items()))

    failures = dict((kind, 0) for kind in FAILURES)
    for o in outcomes:
        if o['status'] in failures:
            failures[o['status']] += 1
    report['failures'] = failures
    report['results'] = outcomes
    return report


def evaluate_corpus(tasks, planner, policy='uniform', seed=0, time_limit=DEFAULT_TIME_LIMIT,
                    state_cap=DEFAULT_STATE_CAP, workers=1, table=None, command=None,
                    translator_accuracy=None):
    """Evaluates a planner on every (environment, record) task.

    Task i uses seed + i. Per-task failures land in the report's failure
    counts; they never stop the batch.
    """
    if planner not in PLANNERS:
        raise LtlPlanError("unknown planner %r" % (planner,))
    if time_limit <= 0:
        raise LtlPlanError("time_limit must be positive")
    if workers < 1:
        raise LtlPlanError("workers must be at least 1")

    jobs = []
    for i, (env, record) in enumerate(tasks):
        options = dict(planner=planner, policy=policy, seed=seed + i, time_limit=time_limit,
                       state_cap=state_cap, table=table, command=command,
                       translator_accuracy=translator_accuracy, index=i)
        jobs.append((env, record, options))

    if workers == 1 or len(jobs) < 2:
        outcomes = [_plan_task_star(job) for job in jobs]
    else:
        pool = multiprocessing.Pool(workers)
        try:
            outcomes = pool.map(_plan_task_star, jobs)
        finally:
            pool.close()
            pool.join()
    return build_report(outcomes, planner, policy)


def _cell(value, fmt='%.1f'):
    if value is None:
        return '-'
    return fmt % value


def format_table(report):
    """Renders a report as a plain-text table, one row per constraint count."""
    header = '%-8s %6s %6s %6s %10s %8s' % ('N', 'tasks', 'SF', 'CP', 'ET', 'PT')
    lines = [header, '-' * len(header)]
    for n, row in sorted(report['by_constraints'].items()):
        lines.append('%-8s %6d %6s %6s %10s %8s' % (n, row['tasks'], _cell(row['SF']),
                                                    _cell(row['CP']), _cell(row['ET']),
                                                    _cell(row['PT'], '%.3f')))
    lines.append('-' * len(header))
    lines.append('%-8s %6d %6s %6s %10s %8s' % ('all', report['tasks'], _cell(report['SF']),
                                                _cell(report['CP']), _cell(report['ET']),
                                                _cell(report['PT'], '%.3f')))
    failures = report['failures']
    lines.append('failures: %s' % ', '.join('%s=%d' % (k, failures[k]) for k in FAILURES))
    return '\n'.join(lines)
