#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_oracle_plan

short_description: Computes reference plans over the environment and automaton product

description:
  - With I(mode=optimal), runs a uniform-cost search over the product of the
    environment and the specification automaton and returns the cheapest
    accepting plan. Ties go to fewer actions, then to the lexicographically
    least action sequence.
  - With I(mode=enumerate), lists every accepting plan of at most I(max_len)
    actions, in depth-first vocabulary order.
  - Does not change any state.

attributes:
  check_mode:
    description: Supports check_mode.
    support: full

version_added: '0.1.0'

author:
  - community.ltlplan contributors (@ansible-collections)

extends_documentation_fragment:
  - community.ltlplan.ltl_common_opts

options:
  environment:
    description:
      - Path to the environment file.
    type: path
    required: true

  spec:
    description:
      - Grounded specification, in infix or prefix notation.
      - One of I(spec) or I(spec_file) is required.
    type: str

  spec_file:
    description:
      - Path to a file holding the specification. Lines starting with C(#) are ignored.
    type: path

  mode:
    description:
      - C(optimal) returns the cheapest plan, C(enumerate) lists plans.
    type: str
    choices: [ optimal, enumerate ]
    default: optimal

  max_len:
    description:
      - Longest plan listed by I(mode=enumerate), C(DONE) excluded.
      - If not passed, twice the number of environment entities.
    type: int

  plan_cap:
    description:
      - Most plans listed by I(mode=enumerate). Hitting it sets I(truncated).
    type: int
    default: 100000
'''

EXAMPLES = r'''
- name: Get the cheapest plan
  register: result
  community.ltlplan.ltl_oracle_plan:
    environment: /tmp/corpus/environments/navigation-7.yml
    spec: F red_room & F blue_room

- name: List all plans of up to three actions
  register: result
  community.ltlplan.ltl_oracle_plan:
    environment: /tmp/corpus/environments/navigation-7.yml
    spec: F red_room & F blue_room
    mode: enumerate
    max_len: 3
'''

RETURN = r'''
plan:
  description: Cheapest plan, terminated by C(DONE).
  returned: when I(mode=optimal)
  type: list
  sample: ['Goto blue_room', 'Goto red_room', 'DONE']
cost:
  description: Execution cost of I(plan) in time-steps.
  returned: when I(mode=optimal)
  type: float
  sample: 187.2
expanded:
  description: Number of product nodes expanded by the search.
  returned: when I(mode=optimal)
  type: int
  sample: 31
plans:
  description: Accepting plans with their costs.
  returned: when I(mode=enumerate)
  type: list
  sample: [{"plan": ["Goto blue_room", "Goto red_room", "DONE"], "cost": 187.2}]
truncated:
  description: Whether I(plan_cap) stopped the enumeration.
  returned: when I(mode=enumerate)
  type: bool
  sample: false
'''

import time

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    ONE_HOT,
    compile_automaton,
)
from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    check_required_libs,
    fail_on_error,
    ltl_common_argument_spec,
    resolve_alphabet,
    spec_text,
)
from ansible_collections.community.ltlplan.plugins.module_utils.environment import (
    load_environment,
    simulate,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import parse_formula
from ansible_collections.community.ltlplan.plugins.module_utils.oracle import (
    DEFAULT_PLAN_CAP,
    enumerate_accepting_plans,
    optimal_plan,
)


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        environment=dict(type='path', required=True),
        spec=dict(type='str'),
        spec_file=dict(type='path'),
        mode=dict(type='str', choices=['optimal', 'enumerate'], default='optimal'),
        max_len=dict(type='int'),
        plan_cap=dict(type='int', default=DEFAULT_PLAN_CAP),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        mutually_exclusive=[('spec', 'spec_file')],
        required_one_of=[('spec', 'spec_file')],
        supports_check_mode=True,
    )

    if resolve_alphabet(module, ONE_HOT) != ONE_HOT:
        module.fail_json(msg="planning uses the one-hot alphabet of the environment")

    check_required_libs(module, numpy_needed=False)

    try:
        spec = parse_formula(spec_text(module))
    except LtlPlanError as e:
        fail_on_error(module, "parse specification", e)

    try:
        env = load_environment(module.params['environment'])
        automaton = compile_automaton(spec, env.propositions(), ONE_HOT,
                                      module.params['state_cap'])
    except LtlPlanError as e:
        fail_on_error(module, "compile specification", e)

    result = dict(changed=False)
    try:
        if module.params['mode'] == 'optimal':
            deadline = time.monotonic() + module.params['time_limit']
            found = optimal_plan(env, automaton, deadline=deadline)
            result.update(plan=found.plan.tokens(), cost=found.cost, expanded=found.expanded)
        else:
            listed = enumerate_accepting_plans(env, automaton, max_len=module.params['max_len'],
                                               plan_cap=module.params['plan_cap'])
            result['plans'] = [dict(plan=p.tokens(), cost=simulate(env, p)[1])
                               for p in listed.plans]
            result['truncated'] = listed.truncated
            if listed.truncated:
                module.warn("Enumeration stopped at the plan cap of %d" % listed.plan_cap)
    except LtlPlanError as e:
        fail_on_error(module, "compute plan", e)

    module.exit_json(**result)


if __name__ == '__main__':
    main()
