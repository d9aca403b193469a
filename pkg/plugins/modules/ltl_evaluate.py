#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_evaluate

short_description: Scores a planner on a task corpus

description:
  - Runs a planner on every task of a corpus and reports the safety rate
    (I(SF), percent of plans satisfying their specification), the completion
    rate (I(CP), percent of plans reaching the goal regardless of constraints),
    the mean execution cost of safe plans (I(ET)) and the mean planning time
    (I(PT), seconds).
  - Safety and completion are judged with finite-trace semantics on the
    simulated trace, independently of the automaton guiding the planner.
  - Timeouts, dead ends and unsatisfiable specifications count as failures
    and are tallied in I(failures).
  - Changes state only when I(report_file) is passed.

attributes:
  check_mode:
    description: Supports check_mode. Nothing is written in check mode.
    support: full

version_added: '0.1.0'

author:
  - community.ltlplan contributors (@ansible-collections)

extends_documentation_fragment:
  - community.ltlplan.ltl_common_opts

options:
  corpus:
    description:
      - Path to the corpus file.
    type: path
    required: true

  planner:
    description:
      - C(constrained) decodes from I(policy) with violating actions masked.
      - C(unconstrained) decodes from I(policy) without masking.
      - C(oracle) runs the cost-optimal product search.
    type: str
    choices: [ constrained, unconstrained, oracle ]
    default: constrained

  policy:
    description:
      - Policy used by the decoding planners.
    type: str
    choices: [ uniform, greedy, scripted, subprocess ]
    default: uniform

  policy_table:
    description:
      - Per-step weights for I(policy=scripted).
    type: list
    elements: dict

  policy_command:
    description:
      - Command line of the policy server for I(policy=subprocess).
    type: str

  workers:
    description:
      - Number of worker processes. Results are reduced in task order.
    type: int
    default: 1

  translator_accuracy:
    description:
      - If passed, each task's specification is first recovered by voting over
        200 simulated translations correct with this probability, and the voting
        time is counted in I(PT).
    type: float

  report_file:
    description:
      - Path of a YAML file the full report is written to.
    type: path

  results:
    description:
      - Whether to return the per-task results.
    type: bool
    default: false
'''

EXAMPLES = r'''
- name: Evaluate constrained decoding with the uniform policy
  register: result
  community.ltlplan.ltl_evaluate:
    corpus: /tmp/corpus/corpus.yml
    planner: constrained
    workers: 4
    report_file: /tmp/corpus/report-constrained.yml

- name: Show the table
  ansible.builtin.debug:
    msg: "{{ result.table }}"

- name: The oracle is always safe
  register: result
  community.ltlplan.ltl_evaluate:
    corpus: /tmp/corpus/corpus.yml
    planner: oracle

- name: Check it
  ansible.builtin.assert:
    that:
      - result.SF == 100.0
      - result.CP == 100.0
'''

RETURN = r'''
SF:
  description: Percent of tasks whose plan satisfies the specification.
  returned: success
  type: float
  sample: 95.2
CP:
  description: Percent of tasks whose plan satisfies the goal formula.
  returned: success
  type: float
  sample: 97.0
ET:
  description: Mean execution cost of the safe plans in time-steps, C(null) without safe plans.
  returned: success
  type: float
  sample: 412.5
PT:
  description: Mean planning time in seconds.
  returned: success
  type: float
  sample: 0.02
tasks:
  description: Number of tasks.
  returned: success
  type: int
  sample: 500
by_constraints:
  description: The same measures per number of constraints.
  returned: success
  type: dict
  sample: {"1": {"tasks": 100, "SF": 100.0, "CP": 100.0, "ET": 301.2, "PT": 0.01}}
failures:
  description: Number of tasks per failure kind.
  returned: success
  type: dict
  sample: {"timeout": 3, "dead_end": 0, "unsatisfiable": 0, "error": 0}
table:
  description: Plain-text table of the report.
  returned: success
  type: str
results:
  description: Per-task outcomes.
  returned: when I(results=true)
  type: list
'''

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    check_required_libs,
    dump_yaml_file,
    fail_on_error,
    ltl_common_argument_spec,
)
from ansible_collections.community.ltlplan.plugins.module_utils.datagen import load_corpus
from ansible_collections.community.ltlplan.plugins.module_utils.evaluation import (
    PLANNERS,
    evaluate_corpus,
    format_table,
)


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        corpus=dict(type='path', required=True),
        planner=dict(type='str', choices=list(PLANNERS), default='constrained'),
        policy=dict(type='str', choices=['uniform', 'greedy', 'scripted', 'subprocess'],
                    default='uniform'),
        policy_table=dict(type='list', elements='dict'),
        policy_command=dict(type='str'),
        workers=dict(type='int', default=1),
        translator_accuracy=dict(type='float'),
        report_file=dict(type='path'),
        results=dict(type='bool', default=False),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        required_if=[('policy', 'subprocess', ('policy_command',)),
                     ('policy', 'scripted', ('policy_table',))],
        supports_check_mode=True,
    )

    accuracy = module.params['translator_accuracy']
    if accuracy is not None and not 0.0 <= accuracy <= 1.0:
        module.fail_json(msg="translator_accuracy must be between 0 and 1")

    check_required_libs(module)

    try:
        tasks = load_corpus(module.params['corpus'])
        report = evaluate_corpus(
            tasks,
            planner=module.params['planner'],
            policy=module.params['policy'],
            seed=module.params['seed'],
            time_limit=module.params['time_limit'],
            state_cap=module.params['state_cap'],
            workers=module.params['workers'],
            table=module.params['policy_table'],
            command=module.params['policy_command'],
            translator_accuracy=accuracy,
        )
    except LtlPlanError as e:
        fail_on_error(module, "evaluate corpus", e)

    changed = False
    if module.params['report_file']:
        changed = True
        if not module.check_mode:
            try:
                dump_yaml_file(module.params['report_file'], report)
            except LtlPlanError as e:
                fail_on_error(module, "write report", e)

    result = dict(
        changed=changed,
        SF=report['SF'],
        CP=report['CP'],
        ET=report['ET'],
        PT=report['PT'],
        tasks=report['tasks'],
        by_constraints=report['by_constraints'],
        failures=report['failures'],
        table=format_table(report),
    )
    if module.params['results']:
        result['results'] = report['results']

    module.exit_json(**result)


if __name__ == '__main__':
    main()
