#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_plan

short_description: Generates a plan with a policy under constrained decoding

description:
  - Samples a plan action by action from a policy.
  - With I(constrained=true), an action after which no plan of the environment
    can satisfy the specification, or C(DONE) outside an accepting state, gets
    probability zero and the remaining distribution is renormalised before
    sampling again. Every returned plan then satisfies the specification.
  - With I(constrained=false), sampled actions are committed as they come.
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

  task:
    description:
      - Natural-language task handed to the policy.
      - If not passed, the infix rendering of the specification is used.
    type: str

  policy:
    description:
      - Policy proposing the action distributions.
      - C(uniform) weighs every candidate equally.
      - C(greedy) prefers cheap moves to entities not reached yet.
      - C(scripted) replays I(policy_table).
      - C(subprocess) queries I(policy_command) over stdin and stdout.
    type: str
    choices: [ uniform, greedy, scripted, subprocess ]
    default: uniform

  policy_table:
    description:
      - Per-step mappings of action to weight for I(policy=scripted).
    type: list
    elements: dict

  policy_command:
    description:
      - Command line of the policy server for I(policy=subprocess).
    type: str

  constrained:
    description:
      - Whether to mask actions that would violate the specification.
    type: bool
    default: true

  max_steps:
    description:
      - Maximum number of actions before the run counts as a timeout.
      - If not passed, four times the number of environment entities.
    type: int
'''

EXAMPLES = r'''
- name: Plan with the greedy policy
  register: result
  community.ltlplan.ltl_plan:
    environment: /tmp/corpus/environments/navigation-7.yml
    spec: F red_room & ((!blue_room) U red_room)
    policy: greedy
    seed: 7

- name: Check the plan satisfies the specification
  ansible.builtin.assert:
    that:
      - result.satisfied
      - result.plan[-1] == 'DONE'

- name: Plan from an external policy server
  community.ltlplan.ltl_plan:
    environment: /tmp/corpus/environments/manipulation-3.yml
    spec_file: /tmp/spec.ltl
    policy: subprocess
    policy_command: python3 /opt/policy/serve.py
'''

RETURN = r'''
plan:
  description: Plan actions, terminated by C(DONE).
  returned: success
  type: list
  sample: ['Goto red_room', 'DONE']
cost:
  description: Simulated execution cost of the plan in time-steps.
  returned: success
  type: float
  sample: 103.9
trace:
  description: Propositions emitted by each action.
  returned: success
  type: list
  sample: [[red_room]]
satisfied:
  description: Whether the trace satisfies the specification, judged by finite-trace semantics.
  returned: success
  type: bool
  sample: true
steps:
  description: Number of decoding steps, C(DONE) included.
  returned: success
  type: int
  sample: 2
masked:
  description:
    - Actions sampled and masked as violating, with their probability
      before masking.
    - Always empty when I(constrained=false).
  returned: success
  type: list
  sample: [{"step": 0, "action": "Goto blue_room", "probability": 0.33}]
'''

import time

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    check_required_libs,
    fail_on_error,
    ltl_common_argument_spec,
    resolve_alphabet,
    spec_text,
)
from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    ONE_HOT,
    compile_automaton,
)
from ansible_collections.community.ltlplan.plugins.module_utils.decoding import (
    make_policy,
    run_decoding,
)
from ansible_collections.community.ltlplan.plugins.module_utils.environment import load_environment
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import (
    evaluate,
    parse_formula,
    render_infix,
)


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        environment=dict(type='path', required=True),
        spec=dict(type='str'),
        spec_file=dict(type='path'),
        task=dict(type='str'),
        policy=dict(type='str', choices=['uniform', 'greedy', 'scripted', 'subprocess'],
                    default='uniform'),
        policy_table=dict(type='list', elements='dict'),
        policy_command=dict(type='str'),
        constrained=dict(type='bool', default=True),
        max_steps=dict(type='int'),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        mutually_exclusive=[('spec', 'spec_file')],
        required_one_of=[('spec', 'spec_file')],
        required_if=[('policy', 'subprocess', ('policy_command',)),
                     ('policy', 'scripted', ('policy_table',))],
        supports_check_mode=True,
    )

    if resolve_alphabet(module, ONE_HOT) != ONE_HOT:
        module.fail_json(msg="planning uses the one-hot alphabet of the environment")

    check_required_libs(module)

    try:
        spec = parse_formula(spec_text(module))
    except LtlPlanError as e:
        fail_on_error(module, "parse specification", e)

    try:
        env = load_environment(module.params['environment'])
    except LtlPlanError as e:
        fail_on_error(module, "load environment", e)

    task = module.params['task'] or render_infix(spec)
    deadline = time.monotonic() + module.params['time_limit']

    try:
        automaton = None
        if module.params['constrained']:
            automaton = compile_automaton(spec, env.propositions(), ONE_HOT,
                                          module.params['state_cap'])
        policy = make_policy(module.params['policy'], module.params['policy_table'],
                             module.params['policy_command'])
        try:
            result = run_decoding(env, task, spec, policy, seed=module.params['seed'],
                                  max_steps=module.params['max_steps'], automaton=automaton,
                                  constrained=module.params['constrained'], deadline=deadline)
        finally:
            policy.close()
        satisfied = evaluate(spec, result.trace)
    except LtlPlanError as e:
        fail_on_error(module, "generate plan", e)

    module.exit_json(
        changed=False,
        plan=result.plan.tokens(),
        cost=result.cost,
        trace=[sorted(label) for label in result.trace],
        satisfied=satisfied,
        steps=result.steps,
        masked=result.masked,
    )


if __name__ == '__main__':
    main()
