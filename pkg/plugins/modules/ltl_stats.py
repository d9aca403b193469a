#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_stats

short_description: Reports complexity statistics of a task corpus

description:
  - Reports the syntax-tree depth and width of the lifted specifications of a
    corpus and the state and edge counts of their automata, with means and
    histograms.
  - Width is the largest number of syntax-tree nodes at one depth.
  - Automata are compiled one-hot over each task's own placeholders.
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
  corpus:
    description:
      - Path to the corpus file.
    type: path
    required: true

  limit:
    description:
      - Limits a set of return values you want to get.
      - See the Return section for acceptable values.
      - If not specified, returns all supported return values.
    type: list
    elements: str
'''

EXAMPLES = r'''
- name: Get corpus statistics
  register: result
  community.ltlplan.ltl_stats:
    corpus: /tmp/corpus/corpus.yml

- name: Check the natural-language rendering is unambiguous
  ansible.builtin.assert:
    that:
      - result.nl_collisions == 0

- name: Only get depth and width
  register: result
  community.ltlplan.ltl_stats:
    corpus: /tmp/corpus/corpus.yml
    limit:
      - depth
      - width
'''

# When adding new ret values,
# please add it to the stats dictionary keys in complexity_stats()!
RETURN = r'''
records:
  description: Number of tasks.
  returned: success
  type: int
  sample: 500
depth:
  description: Mean, minimum, maximum and histogram of the syntax-tree depth.
  returned: success
  type: dict
  sample: {"mean": 7.2, "min": 4, "max": 10, "histogram": {"7": 120}}
width:
  description: Mean, minimum, maximum and histogram of the syntax-tree width.
  returned: success
  type: dict
states:
  description: Mean, minimum, maximum and histogram of the automaton state counts.
  returned: success
  type: dict
edges:
  description: Mean, minimum, maximum and histogram of the automaton edge counts.
  returned: success
  type: dict
nl_collisions:
  description: Number of natural-language texts shared by distinct specifications.
  returned: success
  type: int
  sample: 0
by_constraints:
  description: Mean depth and state count per number of constraints.
  returned: success
  type: dict
'''

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    check_required_libs,
    fail_on_error,
    ltl_common_argument_spec,
)
from ansible_collections.community.ltlplan.plugins.module_utils.datagen import (
    complexity_stats,
    load_corpus,
)

SUPPORTED_RET_VALS = ('records', 'depth', 'width', 'states', 'edges', 'nl_collisions',
                      'by_constraints')


def handle_limit_values(module, supported_ret_vals, limit):
    """Checks if passed limit values match module return values.

    Prints a warning if do not match. Returns a list of stripped vals.
    """
    stripped_vals = []
    for wanted_val in limit:
        wanted_val = wanted_val.strip()

        if wanted_val not in supported_ret_vals:
            msg = ("The passed %s value does not exist in module return values: "
                   "please check the spelling and supported values, and try again" % wanted_val)
            module.warn(msg)
            continue

        stripped_vals.append(wanted_val)

    return stripped_vals


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        corpus=dict(type='path', required=True),
        limit=dict(type='list', elements='str'),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        supports_check_mode=True,
    )

    limit = module.params['limit']
    if limit:
        limit = handle_limit_values(module, SUPPORTED_RET_VALS, limit)
    else:
        limit = SUPPORTED_RET_VALS

    check_required_libs(module, numpy_needed=False)

    try:
        records = [record for _, record in load_corpus(module.params['corpus'])]
        stats = complexity_stats(records, state_cap=module.params['state_cap'])
    except LtlPlanError as e:
        fail_on_error(module, "compute statistics", e)

    module.exit_json(changed=False, **dict((key, stats[key]) for key in limit))


if __name__ == '__main__':
    main()
