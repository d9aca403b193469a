#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_gen_corpus

short_description: Generates environments and a task corpus with satisfiable specifications

description:
  - Generates I(environments) random layouts and I(tasks_per_environment)
    tasks for each.
  - A task conjoins a visit-all goal with 1 to 5 constraints drawn from the
    ordering, immediate-successor, avoidance-until and global-avoid template
    classes. Draws without an accepting plan in their environment are resampled,
    at most 50 times per task.
  - Writes one YAML file per environment under C(environments/) and the corpus
    as one record per line in I(dest)/C(corpus.yml).
  - Generation is a deterministic function of I(seed) and the options.

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
  dest:
    description:
      - Directory the corpus is written to. Created if missing.
    type: path
    required: true

  kinds:
    description:
      - Environment kinds, assigned to environments in turn.
    type: list
    elements: str
    choices: [ navigation, manipulation ]
    default: [ navigation ]

  environments:
    description:
      - Number of environments.
    type: int
    default: 100

  tasks_per_environment:
    description:
      - Number of tasks per environment.
    type: int
    default: 5

  constraint_counts:
    description:
      - Constraint counts assigned to the tasks of an environment in turn.
      - Each value must be between 1 and 5.
    type: list
    elements: int
    default: [ 1, 2, 3, 4, 5 ]

  template_weights:
    description:
      - Relative weights of the constraint template classes C(ordering),
        C(immediate-successor), C(avoidance-until) and C(global-avoid).
      - If not passed, all classes are equally likely.
    type: dict

  paraphrase_command:
    description:
      - Command that rewrites the natural-language text of each task.
      - It receives the text on stdin and prints the new text.
    type: str

  force:
    description:
      - Overwrite an existing corpus in I(dest).
    type: bool
    default: false
'''

EXAMPLES = r'''
- name: Generate the 500-task navigation corpus
  register: result
  community.ltlplan.ltl_gen_corpus:
    dest: /tmp/corpus
    environments: 100
    tasks_per_environment: 5
    seed: 1

- name: Generate a mixed corpus favouring ordering constraints
  community.ltlplan.ltl_gen_corpus:
    dest: /tmp/mixed
    kinds: [navigation, manipulation]
    environments: 10
    template_weights:
      ordering: 3
      immediate-successor: 1
      avoidance-until: 1
      global-avoid: 1
'''

RETURN = r'''
corpus:
  description: Path of the corpus file.
  returned: success
  type: str
  sample: /tmp/corpus/corpus.yml
records:
  description: Number of tasks generated.
  returned: success
  type: int
  sample: 500
environment_files:
  description: Paths of the environment files, relative to I(dest).
  returned: success
  type: list
  sample: [environments/navigation-0.yml, environments/navigation-1.yml]
'''

import os

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    LtlPlanError,
    check_required_libs,
    fail_on_error,
    ltl_common_argument_spec,
)
from ansible_collections.community.ltlplan.plugins.module_utils.datagen import (
    CONSTRAINT_TEMPLATES,
    CORPUS_FILE,
    MAX_CONSTRAINTS,
    MIN_CONSTRAINTS,
    environment_file_name,
    generate_corpus,
    paraphrase,
    write_corpus,
)


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        dest=dict(type='path', required=True),
        kinds=dict(type='list', elements='str', choices=['navigation', 'manipulation'],
                   default=['navigation']),
        environments=dict(type='int', default=100),
        tasks_per_environment=dict(type='int', default=5),
        constraint_counts=dict(type='list', elements='int', default=[1, 2, 3, 4, 5]),
        template_weights=dict(type='dict'),
        paraphrase_command=dict(type='str'),
        force=dict(type='bool', default=False),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        supports_check_mode=True,
    )

    dest = module.params['dest']
    weights = module.params['template_weights']
    counts = module.params['constraint_counts']

    for n in counts:
        if not MIN_CONSTRAINTS <= n <= MAX_CONSTRAINTS:
            module.fail_json(msg="constraint counts must be between %d and %d, got %d"
                             % (MIN_CONSTRAINTS, MAX_CONSTRAINTS, n))
    if weights:
        unknown = set(weights) - set(CONSTRAINT_TEMPLATES)
        if unknown:
            module.fail_json(msg="unknown template classes in template_weights: %s"
                             % ', '.join(sorted(unknown)))
    if module.params['seed'] < 0:
        module.fail_json(msg="seed must not be negative")

    corpus_path = os.path.join(dest, CORPUS_FILE)
    if os.path.exists(corpus_path) and not module.params['force']:
        module.exit_json(changed=False, corpus=corpus_path, records=None, environment_files=[],
                         msg="corpus exists, pass force=true to regenerate it")

    check_required_libs(module)

    try:
        envs, records = generate_corpus(
            kinds=module.params['kinds'],
            n_environments=module.params['environments'],
            tasks_per_environment=module.params['tasks_per_environment'],
            seed=module.params['seed'],
            constraint_counts=counts,
            weights=weights,
            state_cap=module.params['state_cap'],
        )
        if module.params['paraphrase_command']:
            paraphrase(records, module.params['paraphrase_command'])
        if not module.check_mode:
            write_corpus(dest, envs, records)
    except LtlPlanError as e:
        fail_on_error(module, "generate corpus", e)

    module.exit_json(
        changed=True,
        corpus=corpus_path,
        records=len(records),
        environment_files=[environment_file_name(env) for env in envs],
    )


if __name__ == '__main__':
    main()
