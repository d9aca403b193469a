# -*- coding: utf-8 -*-

# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

from __future__ import absolute_import, division, print_function

__metaclass__ = type


class ModuleDocFragment(object):
    DOCUMENTATION = r'''
options:
  seed:
    description:
      - Seed of every random choice the module makes.
      - Runs with the same seed and inputs return identical results.
    type: int
    default: 0

  format:
    description:
      - Rendering of returned formulas.
      - Input formulas are accepted in both forms regardless of this option.
      - C(infix) uses C(!), C(&), C(|), C(->), C(X), C(F), C(G), C(U) with parentheses,
        for example C(F (A & F B)).
      - C(prefix) is the space-separated Polish notation, for example C(F & A F B).
    type: str
    choices: [ infix, prefix ]
    default: infix

  alphabet:
    description:
      - Labelings automata are built over.
      - C(full) allows any subset of the atoms to hold at a step.
      - C(one-hot) allows exactly one atom per step, the action-event model
        of the planning environments.
      - If not passed, planning modules use C(one-hot) and formula modules use C(full).
    type: str
    choices: [ full, one-hot ]

  state_cap:
    description:
      - Maximum number of automaton states a compilation may create.
      - Exceeding it fails the module with I(rc=6) rather than returning a partial automaton.
    type: int
    default: 200000

  time_limit:
    description:
      - Wall-clock limit in seconds for one planning task.
      - A task exceeding it counts as a timeout (I(rc=4) for single-task modules).
    type: float
    default: 300

requirements: [ 'pyyaml', 'numpy', 'networkx' ]

notes:
  - Failed runs set I(rc) to a distinct code, C(2) parse error, C(3) unsatisfiable
    specification, C(4) timeout, C(5) dead end, C(6) state cap exceeded,
    C(7) inapplicable action, C(1) anything else.
  - See C(docs/formats.md) in the collection for the file formats.
'''
