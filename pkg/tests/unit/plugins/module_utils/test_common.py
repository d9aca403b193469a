from __future__ import (absolute_import, division, print_function)

__metaclass__ = type

import pytest

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    DeadEndError,
    InapplicableActionError,
    LtlPlanError,
    LtlSyntaxError,
    PlanningTimeout,
    SpecUnsatisfiableError,
    StateCapExceeded,
    check_required_libs,
    dump_line,
    fail_on_error,
    load_line,
    ltl_common_argument_spec,
    make_rng,
    read_lines_file,
    read_text_file,
    resolve_alphabet,
    write_lines_file,
)


class FakeAnsibleModule:
    def __init__(self):
        self.params = {
            "seed": 0,
            "format": "infix",
            "alphabet": None,
            "state_cap": 200000,
            "time_limit": 300.0,
        }
        self.failed = None

    def fail_json(self, msg, **kwargs):
        self.failed = dict(msg=msg, **kwargs)


def test_ltl_common_argument_spec():
    EXPECTED = {
        'seed': {'type': 'int', 'default': 0},
        'format': {'type': 'str', 'choices': ['infix', 'prefix'], 'default': 'infix'},
        'alphabet': {'type': 'str', 'choices': ['full', 'one-hot'], 'default': None},
        'state_cap': {'type': 'int', 'default': 200000},
        'time_limit': {'type': 'float', 'default': 300.0},
    }

    assert ltl_common_argument_spec() == EXPECTED


@pytest.mark.parametrize(
    'error,rc',
    [
        (LtlPlanError("generic"), 1),
        (LtlSyntaxError("bad token", 3), 2),
        (SpecUnsatisfiableError("unsat"), 3),
        (PlanningTimeout("late"), 4),
        (DeadEndError("stuck"), 5),
        (StateCapExceeded(10, 11), 6),
        (InapplicableActionError("nope", step=2), 7),
        (ValueError("foreign"), 1),
    ]
)
def test_fail_on_error(error, rc):
    fake_module = FakeAnsibleModule()
    fail_on_error(fake_module, "do things", error)

    assert fake_module.failed['rc'] == rc
    assert fake_module.failed['msg'].startswith("Failed to do things: ")


def test_error_messages():
    assert str(LtlSyntaxError("unknown token '$'", 4)) == "unknown token '$' (at position 4)"
    assert str(InapplicableActionError("unknown landmark", step=3)) == "step 3: unknown landmark"
    assert StateCapExceeded(5, 5).cap == 5


@pytest.mark.parametrize(
    'alphabet,default,expected',
    [
        (None, 'full', 'full'),
        (None, 'one-hot', 'one-hot'),
        ('one-hot', 'full', 'one-hot'),
    ]
)
def test_resolve_alphabet(alphabet, default, expected):
    fake_module = FakeAnsibleModule()
    fake_module.params['alphabet'] = alphabet

    assert resolve_alphabet(fake_module, default) == expected


def test_check_required_libs():
    fake_module = FakeAnsibleModule()
    check_required_libs(fake_module)

    assert fake_module.failed is None


def test_dump_line_is_sorted_and_single_line():
    line = dump_line({'nl': 'eventually visit A; never visit B', 'grounding': {'B': 'x', 'A': 'y'},
                      'n_constraints': 1})

    assert '\n' not in line
    assert line.index('grounding') < line.index('n_constraints') < line.index('nl')
    assert load_line(line) == {'nl': 'eventually visit A; never visit B',
                               'grounding': {'A': 'y', 'B': 'x'}, 'n_constraints': 1}


def test_dump_line_keeps_multi_line_text_on_one_line():
    record = {'environment': 'Building with 12 rooms.\nActions: Goto <room>, DONE.', 'history': []}
    line = dump_line(record)

    assert '\n' not in line
    assert load_line(line) == record


def test_load_line_accepts_json():
    assert load_line('{"distribution": [{"action": "DONE", "weight": 1}]}') == {
        'distribution': [{'action': 'DONE', 'weight': 1}]}


def test_lines_file(tmp_path):
    path = str(tmp_path / 'records.yml')
    write_lines_file(path, [{'a': 1}, {'b': [1, 2]}])
    with open(path, 'a') as f:
        f.write('\n# comment\n')

    assert read_lines_file(path) == [{'a': 1}, {'b': [1, 2]}]


def test_read_text_file(tmp_path):
    path = tmp_path / 'spec.ltl'
    path.write_text('# visit the red room first\nF red_room\n')

    assert read_text_file(str(path)) == 'F red_room'


def test_missing_file():
    with pytest.raises(LtlPlanError, match='Could not open/load from file'):
        read_lines_file('/non/existing/file.yml')


def test_make_rng_is_reproducible():
    assert list(make_rng(7).integers(0, 100, size=5)) == list(make_rng(7).integers(0, 100, size=5))
