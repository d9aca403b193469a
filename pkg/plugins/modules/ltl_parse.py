#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_parse

short_description: Parses an LTLf formula and optionally evaluates it on a finite trace

description:
  - Parses a formula given in infix or prefix notation and returns both renderings,
    its atoms and syntax-tree measures.
  - If I(trace) is passed, also decides whether the formula holds on it
    under finite-trace semantics.
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
  formula:
    description:
      - Formula to parse, in infix or prefix notation.
    type: str
    required: true

  trace:
    description:
      - Finite trace to evaluate the formula on.
      - Each element is the list of atoms holding at that step.
    type: list
    elements: list

  universe:
    description:
      - Atoms the trace is declared over.
      - If passed, every trace and formula atom must belong to it.
    type: list
    elements: str

  position:
    description:
      - Trace position the formula is evaluated at.
    type: int
    default: 0
'''

EXAMPLES = r'''
- name: Parse a prefix formula and render it as infix
  register: result
  community.ltlplan.ltl_parse:
    formula: F & A F B

- name: Check it
  ansible.builtin.assert:
    that:
      - result.formula == 'F (A & F B)'
      - result.depth == 4

- name: Evaluate a formula on a trace
  register: result
  community.ltlplan.ltl_parse:
    formula: (!B) U A
    trace:
      - [A]
      - [B]
'''

RETURN = r'''
formula:
  description: The formula rendered in the requested I(format).
  returned: success
  type: str
  sample: F (A & F B)
infix:
  description: Infix rendering.
  returned: success
  type: str
  sample: F (A & F B)
prefix:
  description: Prefix rendering.
  returned: success
  type: str
  sample: F & A F B
canonical:
  description: Canonical form the automaton construction starts from, in the requested I(format).
  returned: success
  type: str
  sample: F (A & F B)
atoms:
  description: Sorted atom names.
  returned: success
  type: list
  sample: [A, B]
depth:
  description: Syntax-tree depth, an atom counting as 1.
  returned: success
  type: int
  sample: 4
width:
  description: Largest number of syntax-tree nodes at one depth.
  returned: success
  type: int
  sample: 2
holds:
  description: Whether the formula holds on I(trace) at I(position).
  returned: when I(trace) is passed
  type: bool
  sample: true
'''

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    check_required_libs,
    fail_on_error,
    ltl_common_argument_spec,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import (
    Trace,
    atoms,
    canonical,
    depth,
    evaluate,
    parse_formula,
    render,
    render_infix,
    render_prefix,
    width,
)


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        formula=dict(type='str', required=True),
        trace=dict(type='list', elements='list'),
        universe=dict(type='list', elements='str'),
        position=dict(type='int', default=0),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        supports_check_mode=True,
    )

    fmt = module.params['format']
    check_required_libs(module, numpy_needed=False, networkx_needed=False)

    try:
        f = parse_formula(module.params['formula'])
    except LtlPlanError as e:
        fail_on_error(module, "parse formula", e)

    result = dict(
        changed=False,
        formula=render(f, fmt),
        infix=render_infix(f),
        prefix=render_prefix(f),
        canonical=render(canonical(f), fmt),
        atoms=sorted(atoms(f)),
        depth=depth(f),
        width=width(f),
    )

    if module.params['trace'] is not None:
        try:
            trace = Trace(module.params['trace'], module.params['universe'])
            result['holds'] = evaluate(f, trace, module.params['position'])
        except LtlPlanError as e:
            fail_on_error(module, "evaluate formula", e)

    module.exit_json(**result)


if __name__ == '__main__':
    main()
