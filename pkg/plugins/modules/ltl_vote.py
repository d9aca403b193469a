#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2024, community.ltlplan contributors
# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import (absolute_import, division, print_function)
__metaclass__ = type

DOCUMENTATION = r'''
---
module: ltl_vote

short_description: Selects a formula by equivalence voting over candidate translations

description:
  - Groups candidate formulas by language equivalence and returns a
    representative of the largest group.
  - Candidates are either passed in I(candidates) or sampled from a simulated
    noisy translator around I(truth).
  - Unparseable candidates are dropped and counted. Candidates whose automaton
    exceeds I(state_cap) are kept in singleton groups and reported with a warning.
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
  candidates:
    description:
      - Candidate formulas, in infix or prefix notation.
      - Mutually exclusive with I(truth).
    type: list
    elements: str

  truth:
    description:
      - Formula a simulated translator returns with probability I(accuracy);
        otherwise it returns an inequivalent mutation of it.
      - Mutually exclusive with I(candidates).
    type: str

  accuracy:
    description:
      - Probability that one simulated translation is correct.
    type: float
    default: 0.6

  failure_rate:
    description:
      - Probability that one simulated translation is unparseable.
    type: float
    default: 0.0

  paraphrases:
    description:
      - Number of paraphrases requested from the simulated translator.
    type: int
    default: 20

  samples_per_paraphrase:
    description:
      - Number of formulas sampled per paraphrase.
    type: int
    default: 10

  nl:
    description:
      - Natural-language task passed to the translator.
    type: str
    default: ''

  universe:
    description:
      - Ordered atoms equivalence is decided over.
      - If not passed, the sorted atoms of all candidates (or of I(truth)) are used.
    type: list
    elements: str
'''

EXAMPLES = r'''
- name: Vote over explicit candidates
  register: result
  community.ltlplan.ltl_vote:
    candidates:
      - F A
      - '! G ! A'
      - G A
      - F & A F B
      - F (A & F B)

- name: Check the winner
  ansible.builtin.assert:
    that:
      - result.winner == 0
      - result.group_sizes == [2, 1, 2]
      - result.tie

- name: Vote over 200 simulated translations at 60% accuracy
  register: result
  community.ltlplan.ltl_vote:
    truth: F (A & F B)
    universe: [A, B, C]
    accuracy: 0.6
    seed: 42
'''

RETURN = r'''
representative:
  description: Selected formula in the requested I(format).
  returned: success
  type: str
  sample: '!G !A'
winner:
  description: Index of the winning group.
  returned: success
  type: int
  sample: 0
group_sizes:
  description: Size of each equivalence group, in order of first appearance.
  returned: success
  type: list
  sample: [2, 1, 2]
groups:
  description: Candidate indexes of each group.
  returned: success
  type: list
  sample: [[0, 1], [2], [3, 4]]
tie:
  description: Whether several groups had the largest size.
  returned: success
  type: bool
  sample: true
dropped:
  description: Number of unparseable candidates.
  returned: success
  type: int
  sample: 0
quarantined:
  description: Indexes of candidates whose automaton exceeded the state cap.
  returned: success
  type: list
  sample: []
comparisons:
  description: Number of pairwise equivalence checks performed.
  returned: success
  type: int
  sample: 3
candidates:
  description: Parsed candidates in the requested I(format).
  returned: success
  type: list
'''

from ansible.module_utils.basic import AnsibleModule

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import FULL
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
from ansible_collections.community.ltlplan.plugins.module_utils.voting import (
    NoisyOracleTranslator,
    parse_candidates,
    translate_and_vote,
    vote,
)


def main():
    argument_spec = ltl_common_argument_spec()
    argument_spec.update(
        candidates=dict(type='list', elements='str'),
        truth=dict(type='str'),
        accuracy=dict(type='float', default=0.6),
        failure_rate=dict(type='float', default=0.0),
        paraphrases=dict(type='int', default=20),
        samples_per_paraphrase=dict(type='int', default=10),
        nl=dict(type='str', default=''),
        universe=dict(type='list', elements='str'),
    )

    module = AnsibleModule(
        argument_spec=argument_spec,
        mutually_exclusive=[('candidates', 'truth')],
        required_one_of=[('candidates', 'truth')],
        supports_check_mode=True,
    )

    fmt = module.params['format']
    mode = resolve_alphabet(module, FULL)
    universe = module.params['universe']
    state_cap = module.params['state_cap']

    for option in ('accuracy', 'failure_rate'):
        if not 0.0 <= module.params[option] <= 1.0:
            module.fail_json(msg="%s must be between 0 and 1" % option)

    check_required_libs(module)

    try:
        if module.params['truth'] is not None:
            truth = parse_formula(module.params['truth'])
            universe = universe or sorted(atoms(truth))
            translator = NoisyOracleTranslator(truth, module.params['accuracy'], universe,
                                               seed=module.params['seed'],
                                               failure_rate=module.params['failure_rate'])
            result = translate_and_vote(translator, module.params['nl'],
                                        paraphrases=module.params['paraphrases'],
                                        samples_per_paraphrase=module.params['samples_per_paraphrase'],
                                        universe=universe, mode=mode, state_cap=state_cap)
        else:
            formulas, dropped = parse_candidates(module.params['candidates'])
            result = vote(formulas, universe=universe, mode=mode, state_cap=state_cap,
                          dropped=dropped)
    except LtlPlanError as e:
        fail_on_error(module, "vote", e)

    for idx in result.quarantined:
        module.warn("Candidate %d exceeded the state cap of %d and was kept apart"
                    % (idx, state_cap))

    module.exit_json(
        changed=False,
        representative=render(result.representative, fmt),
        winner=result.winner,
        group_sizes=result.group_sizes,
        groups=result.groups(),
        tie=result.tie,
        dropped=result.dropped,
        quarantined=result.quarantined,
        comparisons=result.comparisons,
        candidates=[render(f, fmt) for f in result.candidates],
    )


if __name__ == '__main__':
    main()
