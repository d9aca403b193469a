#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_compile

short_description: Compiles an LTLf formula into a deterministic finite-trace automaton

description:
  - Compiles a formula by progression into a deterministic automaton whose states
    are the residual formulas still to be satisfied.
  - Returns the state and transition counts, the accepting and dead states,
    a line-oriented text dump and, optionally, a Graphviz DOT graph.
  - Changes state only when I(dest) is passed.

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
  formula:
    description:
      - Formula to compile, in infix or prefix notation.
    type: str
    required: true

  universe:
    description:
      - Ordered atoms the alphabet is built over.
      - Must contain every atom of I(formula).
      - If not passed, the sorted atoms of I(formula) are used.
    type: list
    elements: str

  dot:
    description:
      - Also return the automaton as a Graphviz DOT graph.
    type: bool
    default: false

  dest:
    description:
      - File to write the automaton to, DOT if I(dot=true), the text dump otherwise.
    type: path
'''

EXAMPLES = r'''
- name: Compile a formula over the full alphabet
  register: result
  community.ltlplan.ltl_compile:
    formula: F & A F B
    alphabet: full
    dot: true

- name: Compile a constraint over a one-hot room vocabulary
  register: result
  community.ltlplan.ltl_compile:
    formula: (!yellow_room) U green_room
    universe: [green_room, red_room, yellow_room]
    alphabet: one-hot

- name: Check the initial state is not dead
  ansible.builtin.assert:
    that:
      - 0 not in result.dead
'''

RETURN = r'''
states:
  description: Residual formula of each state, indexed by state number; state 0 is initial.
  returned: success
  type: list
  sample: ['F (A & F B)', 'F B | F (A & F B)', 'true']
num_states:
  description: Number of states.
  returned: success
  type: int
  sample: 3
num_transitions:
  description: Number of (state, labeling) transitions.
  returned: success
  type: int
  sample: 12
num_edges:
  description: Number of distinct (source, target) state pairs.
  returned: success
  type: int
  sample: 5
accepting:
  description: Accepting state numbers.
  returned: success
  type: list
  sample: [2]
dead:
  description: Dead state numbers, from which no accepting state is reachable.
  returned: success
  type: list
  sample: []
universe:
  description: The ordered universe used.
  returned: success
  type: list
  sample: [A, B]
text:
  description: Line-oriented dump of the automaton.
  returned: success
  type: str
dot:
  description: Graphviz DOT rendering.
  returned: when I(dot=true)
  type: str
'''

import os

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    FULL,
    compile_automaton,
)
from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    check_required_libs,
    fail_on_error,
    ltl_common_argument_spec,
    resolve_alphabet,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import (
    atoms,
    parse_formula,
    render,
)


def write_file(module, path, content):
    try:
        with open(path, 'w') as fh:
            fh.write(content)
    except (IOError, OSError) as e:
        module.fail_json(msg="Could not write to file %s: %s" % (path, e))


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        formula=dict(type='str', required=True),
        universe=dict(type='list', elements='str'),
        dot=dict(type='bool', default=False),
        dest=dict(type='path'),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        supports_check_mode=True,
    )

    fmt = module.params['format']
    mode = resolve_alphabet(module, FULL)
    dest = module.params['dest']

    check_required_libs(module, numpy_needed=False)

    try:
        f = parse_formula(module.params['formula'])
    except LtlPlanError as e:
        fail_on_error(module, "parse formula", e)

    universe = module.params['universe'] or sorted(atoms(f))

    try:
        automaton = compile_automaton(f, universe, mode, module.params['state_cap'])
    except LtlPlanError as e:
        fail_on_error(module, "compile automaton", e)

    result = dict(
        changed=False,
        states=[render(s, fmt) for s in automaton.states],
        num_states=automaton.num_states,
        num_transitions=automaton.num_transitions,
        num_edges=automaton.num_edges,
        accepting=[q for q in range(automaton.num_states) if automaton.accepting[q]],
        dead=sorted(automaton.dead),
        universe=list(automaton.universe),
        text=automaton.dump_text(fmt),
    )
    if module.params['dot']:
        result['dot'] = automaton.to_dot(fmt)

    if dest:
        content = result['dot'] if module.params['dot'] else result['text']
        previous = None
        if os.path.isfile(dest):
            with open(dest, 'r') as fh:
                previous = fh.read()
        if previous != content:
            result['changed'] = True
            if not module.check_mode:
                write_file(module, dest, content)

    module.exit_json(**result)


if __name__ == '__main__':
    main()
