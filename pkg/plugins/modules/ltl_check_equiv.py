#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_check_equiv

short_description: Decides whether two LTLf formulas accept the same finite traces

description:
  - Compiles both formulas over a shared universe and searches their product
    for a trace accepted by exactly one of them.
  - When the formulas differ, returns the shortest such trace, the
    lexicographically least one among equally short traces.
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
  formula_a:
    description:
      - First formula, in infix or prefix notation.
    type: str
    required: true

  formula_b:
    description:
      - Second formula, in infix or prefix notation.
    type: str
    required: true

  universe:
    description:
      - Ordered atoms to compare over.
      - If not passed, the sorted union of the atoms of both formulas is used.
    type: list
    elements: str
'''

EXAMPLES = r'''
- name: Check eventually against its dual
  register: result
  community.ltlplan.ltl_check_equiv:
    formula_a: F A
    formula_b: '! G ! A'

- name: Check the verdict
  ansible.builtin.assert:
    that:
      - result.verdict == 'equivalent'

- name: Get a distinguishing trace
  register: result
  community.ltlplan.ltl_check_equiv:
    formula_a: F A
    formula_b: G A
'''

RETURN = r'''
equivalent:
  description: Whether the formulas accept the same traces.
  returned: success
  type: bool
  sample: false
verdict:
  description: C(equivalent) or C(not equivalent).
  returned: success
  type: str
  sample: not equivalent
witness:
  description:
    - Distinguishing trace, one list of holding atoms per step.
    - C(null) when the formulas are equivalent.
  returned: success
  type: list
  sample: []
accepted_by:
  description: Which formula accepts I(witness), C(a) or C(b).
  returned: when the formulas are not equivalent
  type: str
  sample: b
universe:
  description: The ordered universe used.
  returned: success
  type: list
  sample: [A]
'''

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    FULL,
    EquivalenceChecker,
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
)


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        formula_a=dict(type='str', required=True),
        formula_b=dict(type='str', required=True),
        universe=dict(type='list', elements='str'),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        supports_check_mode=True,
    )

    mode = resolve_alphabet(module, FULL)
    check_required_libs(module, numpy_needed=False)

    try:
        fa = parse_formula(module.params['formula_a'])
        fb = parse_formula(module.params['formula_b'])
    except LtlPlanError as e:
        fail_on_error(module, "parse formula", e)

    universe = module.params['universe'] or sorted(atoms(fa) | atoms(fb))

    try:
        checker = EquivalenceChecker(universe, mode, module.params['state_cap'])
        witness = checker.distinguishing_trace(fa, fb)
    except LtlPlanError as e:
        fail_on_error(module, "check equivalence", e)

    result = dict(
        changed=False,
        equivalent=witness is None,
        verdict='equivalent' if witness is None else 'not equivalent',
        witness=None,
        universe=list(universe),
    )
    if witness is not None:
        result['witness'] = [[a for a in universe if a in label] for label in witness]
        result['accepted_by'] = 'a' if checker.automaton(fa).accepts(witness) else 'b'

    module.exit_json(**result)


if __name__ == '__main__':
    main()
