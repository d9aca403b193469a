#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_export_pairs

short_description: Exports task and optimal-plan pairs for training a planner policy

description:
  - Solves every task of a corpus with the uniform-cost search and writes one
    record per line with the task text, its grounded specification, the
    optimal plan and its cost.
  - Tasks without a plan, or not solved within I(time_limit), are skipped and
    reported with a warning.

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

  dest:
    description:
      - Path of the dataset file to write.
    type: path
    required: true
'''

EXAMPLES = r'''
- name: Export training pairs
  register: result
  community.ltlplan.ltl_export_pairs:
    corpus: /tmp/corpus/corpus.yml
    dest: /tmp/corpus/pairs.yml
    time_limit: 60

- name: Check nothing was skipped
  ansible.builtin.assert:
    that:
      - result.skipped | length == 0
'''

RETURN = r'''
exported:
  description: Number of records written.
  returned: success
  type: int
  sample: 500
skipped:
  description: Tasks without an exported plan, with the reason and error code.
  returned: success
  type: list
  sample: [{"index": 4, "environment_id": "navigation-4", "reason": "...", "rc": 4}]
dest:
  description: Path of the dataset file.
  returned: success
  type: str
  sample: /tmp/corpus/pairs.yml
'''

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    check_required_libs,
    fail_on_error,
    ltl_common_argument_spec,
    write_lines_file,
)
from ansible_collections.community.ltlplan.plugins.module_utils.datagen import load_corpus
from ansible_collections.community.ltlplan.plugins.module_utils.oracle import export_training_pairs


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        corpus=dict(type='path', required=True),
        dest=dict(type='path', required=True),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        supports_check_mode=True,
    )

    check_required_libs(module, numpy_needed=False)

    try:
        tasks = load_corpus(module.params['corpus'])
    except LtlPlanError as e:
        fail_on_error(module, "load corpus", e)

    records, skipped = export_training_pairs(tasks, state_cap=module.params['state_cap'],
                                             deadline_per_task=module.params['time_limit'])
    for item in skipped:
        module.warn("Task %d (%s) skipped: %s" % (item['index'], item['environment_id'],
                                                  item['reason']))

    if not module.check_mode:
        try:
            write_lines_file(module.params['dest'], records)
        except LtlPlanError as e:
            fail_on_error(module, "write dataset", e)

    module.exit_json(
        changed=True,
        exported=len(records),
        skipped=skipped,
        dest=module.params['dest'],
    )


if __name__ == '__main__':
    main()
