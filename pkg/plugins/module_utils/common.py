# This code is part of Ansible, but is an independent component.
# This particular file snippet, and this file snippet only, is BSD licensed.
# Modules you write using this snippet, which is embedded dynamically by Ansible
# still belong to the author of the module, and may assign their own license
# to the complete work.
#
# Simplified BSD License (see simplified_bsd.txt or https://opensource.org/licenses/BSD-2-Clause)

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import json

from ansible.module_utils.basic import missing_required_lib
from ansible.module_utils._text import to_native

try:
    import yaml
    HAS_PYYAML = True
except ImportError:
    HAS_PYYAML = False

try:
    import numpy
    HAS_NUMPY = True
except ImportError:
    HAS_NUMPY = False

try:
    import networkx
    HAS_NETWORKX = True
except ImportError:
    HAS_NETWORKX = False

GENERIC_ERR_CODE = 1
PARSE_ERR_CODE = 2
UNSAT_ERR_CODE = 3
TIMEOUT_ERR_CODE = 4
DEAD_END_ERR_CODE = 5
STATE_CAP_ERR_CODE = 6
INAPPLICABLE_ERR_CODE = 7

DEFAULT_STATE_CAP = 200000
DEFAULT_TIME_LIMIT = 300.0


class LtlPlanError(Exception):
    """Base of every error raised by the collection libraries.

    The rc attribute is the exit code reported by modules.
    """
    rc = GENERIC_ERR_CODE


class LtlSyntaxError(LtlPlanError):
    rc = PARSE_ERR_CODE

    def __init__(self, msg, position=None):
        if position is not None:
            msg = "%s (at position %d)" % (msg, position)
        super(LtlSyntaxError, self).__init__(msg)
        self.position = position


class MalformedTraceError(LtlPlanError):
    pass


class GroundingError(LtlPlanError):
    pass


class UniverseError(LtlPlanError):
    pass


class StateCapExceeded(LtlPlanError):
    rc = STATE_CAP_ERR_CODE

    def __init__(self, cap, explored):
        super(StateCapExceeded, self).__init__(
            "state cap of %d exceeded after expanding %d states" % (cap, explored))
        self.cap = cap
        self.explored = explored


class SpecUnsatisfiableError(LtlPlanError):
    rc = UNSAT_ERR_CODE


class PlanningTimeout(LtlPlanError):
    rc = TIMEOUT_ERR_CODE


class DeadEndError(LtlPlanError):
    rc = DEAD_END_ERR_CODE


class InapplicableActionError(LtlPlanError):
    rc = INAPPLICABLE_ERR_CODE

    def __init__(self, msg, step=None):
        if step is not None:
            msg = "step %d: %s" % (step, msg)
        super(InapplicableActionError, self).__init__(msg)
        self.step = step


class GenerationError(LtlPlanError):
    pass


def ltl_common_argument_spec():
    """
    Return a dictionary with the global options.

    The options are commonly used by many modules.
    """
    return dict(
        seed=dict(type='int', default=0),
        format=dict(type='str', choices=['infix', 'prefix'], default='infix'),
        alphabet=dict(type='str', choices=['full', 'one-hot'], default=None),
        state_cap=dict(type='int', default=DEFAULT_STATE_CAP),
        time_limit=dict(type='float', default=DEFAULT_TIME_LIMIT),
    )


def check_required_libs(module, numpy_needed=True, networkx_needed=True):
    """Checks if the third-party libraries are present.

    Informs user if a library is missing and fails.
    """
    if not HAS_PYYAML:
        module.fail_json(msg=missing_required_lib('pyyaml'))
    if numpy_needed and not HAS_NUMPY:
        module.fail_json(msg=missing_required_lib('numpy'))
    if networkx_needed and not HAS_NETWORKX:
        module.fail_json(msg=missing_required_lib('networkx'))


def fail_on_error(module, action, e):
    """Fails the module with a message and the error's exit code."""
    rc = getattr(e, 'rc', GENERIC_ERR_CODE)
    module.fail_json(msg="Failed to %s: %s" % (action, to_native(e)), rc=rc)


def load_yaml_file(path):
    """Loads a YAML document from path.

    Raises LtlPlanError if the file cannot be opened or parsed.
    """
    try:
        with open(path, 'r') as f:
            return yaml.safe_load(f)
    except (IOError, OSError, yaml.YAMLError) as e:
        raise LtlPlanError("Could not open/load from file %s: %s" % (path, e))


def dump_yaml_file(path, content):
    try:
        with open(path, 'w') as f:
            yaml.safe_dump(content, f, default_flow_style=False, sort_keys=True)
    except (IOError, OSError) as e:
        raise LtlPlanError("Could not write to file %s: %s" % (path, e))


def dump_line(record):
    """Renders a mapping as one YAML flow line, keys sorted.

    Records holding multi-line strings are written as JSON, the only flow
    form that keeps them on one line.
    """
    line = yaml.safe_dump(record, default_flow_style=True, sort_keys=True,
                          width=float('inf')).strip()
    if '\n' in line:
        line = json.dumps(record, sort_keys=True)
    return line


def load_line(line):
    """Parses one flow line back. JSON is accepted too, being valid YAML."""
    try:
        return yaml.safe_load(line)
    except yaml.YAMLError as e:
        raise LtlPlanError("Malformed record line: %s" % e)


def read_lines_file(path):
    """Loads a file of one-record-per-line mappings, skipping blanks and comments."""
    records = []
    try:
        with open(path, 'r') as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                records.append(load_line(line))
    except (IOError, OSError) as e:
        raise LtlPlanError("Could not open/load from file %s: %s" % (path, e))
    return records


def write_lines_file(path, records):
    try:
        with open(path, 'w') as f:
            for record in records:
                f.write(dump_line(record) + '\n')
    except (IOError, OSError) as e:
        raise LtlPlanError("Could not write to file %s: %s" % (path, e))


def make_rng(seed):
    """Returns a seeded numpy Generator."""
    return numpy.random.default_rng(seed)


def spawn_seeds(seed, count):
    """Derives count independent integer seeds from seed.

    The seeds are the spawned children of numpy.random.SeedSequence(seed).
    """
    return [int(child.generate_state(1)[0]) for child in numpy.random.SeedSequence(seed).spawn(count)]


def resolve_alphabet(module, default):
    """Returns the alphabet option, or the module's default when unset."""
    return module.params['alphabet'] or default


def read_text_file(path):
    """Returns the content of a text file, comment lines starting with # dropped."""
    try:
        with open(path, 'r') as f:
            lines = [line for line in f if not line.lstrip().startswith('#')]
    except (IOError, OSError) as e:
        raise LtlPlanError("Could not open/load from file %s: %s" % (path, e))
    return ''.join(lines).strip()


def spec_text(module, option='spec', file_option='spec_file'):
    """Returns the formula text passed inline or through a file option."""
    if module.params.get(option):
        return module.params[option]
    path = module.params.get(file_option)
    if not path:
        module.fail_json(msg="one of %s or %s is required" % (option, file_option))
    try:
        return read_text_file(path)
    except LtlPlanError as e:
        fail_on_error(module, "read %s" % file_option, e)
