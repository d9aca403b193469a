# -*- coding: utf-8 -*-

# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

"""Equivalence voting over candidate translations."""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

from collections import namedtuple

from ansible_collections.community.ltlplan.plugins.module_utils.automaton import (
    FULL,
    EquivalenceChecker,
)
from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    DEFAULT_STATE_CAP,
    GenerationError,
    LtlPlanError,
    LtlSyntaxError,
    StateCapExceeded,
    make_rng,
)
from ansible_collections.community.ltlplan.plugins.module_utils.ltl import (
    ATOM,
    FINALLY,
    GLOBALLY,
    Formula,
    atoms,
    canonical,
    parse_formula,
    render_prefix,
)

# Default request pattern: paraphrases x formulas sampled per paraphrase
DEFAULT_PARAPHRASES = 20
DEFAULT_SAMPLES_PER_PARAPHRASE = 10
MUTATION_ATTEMPTS = 20


class VoteResult(namedtuple('VoteResult', [
        'candidates', 'assignment', 'group_sizes', 'winner', 'representative',
        'tie', 'dropped', 'quarantined', 'comparisons'])):
    """Outcome of a vote.

    assignment[i] is the group of candidates[i]; quarantined lists the
    candidate indexes that could not be compiled and sit in singleton groups.
    """
    __slots__ = ()

    def groups(self):
        members = [[] for _ in self.group_sizes]
        for idx, group in enumerate(self.assignment):
            members[group].append(idx)
        return members


def default_universe(candidates):
    return tuple(sorted(frozenset().union(*[atoms(f) for f in candidates])))


def group_by_equivalence(candidates, universe=None, mode=FULL, state_cap=DEFAULT_STATE_CAP,
                         checker=None):
    """Partitions candidates into language-equivalence classes.

    Each new candidate is compared against one representative per group.

    Returns (assignment, representatives, quarantined, checker).
    """
    candidates = list(candidates)
    if not candidates:
        raise LtlPlanError("nothing to group")
    if universe is None:
        universe = default_universe(candidates)
    if checker is None:
        checker = EquivalenceChecker(universe, mode, state_cap)

    assignment = []
    representatives = []
    quarantined = []
    open_groups = []
    for idx, f in enumerate(candidates):
        try:
            checker.automaton(f)
        except StateCapExceeded:
            quarantined.append(idx)
            assignment.append(len(representatives))
            representatives.append(f)
            continue
        for group in open_groups:
            if checker.equivalent(representatives[group], f):
                assignment.append(group)
                break
        else:
            assignment.append(len(representatives))
            open_groups.append(len(representatives))
            representatives.append(f)
    return assignment, representatives, quarantined, checker


def _rendering(f):
    return render_prefix(canonical(f))


def vote(candidates, universe=None, mode=FULL, state_cap=DEFAULT_STATE_CAP, dropped=0,
         checker=None):
    """Selects a representative of the largest equivalence group.

    Ties on group size go to the group whose representative compiles to
    fewer states, then to the least canonical prefix rendering. The
    representative of a group is its member with the least canonical
    rendering, so the winning class never depends on candidate order.
    """
    candidates = list(candidates)
    if not candidates:
        raise LtlPlanError("no parseable candidate formulas (%d dropped)" % dropped)

    assignment, _, quarantined, checker = group_by_equivalence(
        candidates, universe, mode, state_cap, checker)

    n_groups = max(assignment) + 1
    sizes = [0] * n_groups
    best_member = [None] * n_groups
    for idx, group in enumerate(assignment):
        sizes[group] += 1
        current = best_member[group]
        if current is None or _rendering(candidates[idx]) < _rendering(candidates[current]):
            best_member[group] = idx

    top = max(sizes)
    leaders = [g for g in range(n_groups) if sizes[g] == top]
    tie = len(leaders) > 1
    quarantined_groups = set(assignment[i] for i in quarantined)

    def rank(group):
        rep = candidates[best_member[group]]
        if group in quarantined_groups:
            states = float('inf')
        else:
            states = checker.automaton(rep).num_states
        return (states, _rendering(rep))

    winner = min(leaders, key=rank)
    return VoteResult(
        candidates=candidates,
        assignment=assignment,
        group_sizes=sizes,
        winner=winner,
        representative=candidates[best_member[winner]],
        tie=tie,
        dropped=dropped,
        quarantined=quarantined,
        comparisons=checker.comparisons,
    )


def parse_candidates(texts):
    """Parses candidate strings, dropping the unparseable ones.

    Returns (formulas, dropped count).
    """
    formulas = []
    dropped = 0
    for text in texts:
        if text is None:
            dropped += 1
            continue
        try:
            formulas.append(parse_formula(text))
        except LtlSyntaxError:
            dropped += 1
    return formulas, dropped


#
# Mutation
#

def _sites(f, path=()):
    yield path, f
    for i, child in enumerate(f.children):
        for site in _sites(child, path + (i,)):
            yield site


def _replace(f, path, new):
    if not path:
        return new
    children = list(f.children)
    children[path[0]] = _replace(children[path[0]], path[1:], new)
    return Formula(f.op, children, f.name)


def _edits(f, universe):
    edits = []
    for path, node in _sites(f):
        if len(node.children) == 2:
            left, right = node.children
            if left != right:
                edits.append((path, Formula(node.op, (right, left))))
        if node.op == FINALLY:
            edits.append((path, Formula(GLOBALLY, node.children)))
        elif node.op == GLOBALLY:
            edits.append((path, Formula(FINALLY, node.children)))
        elif node.op == ATOM:
            for other in universe:
                if other != node.name:
                    edits.append((path, Formula(ATOM, name=other)))
    return edits


def mutate_formula(f, rng, universe=None, checker=None, attempts=MUTATION_ATTEMPTS):
    """Applies one random edit that changes the language of f.

    Edits swap the operands of a binary operator, exchange F and G, or
    rename an atom to another atom of the universe.
    """
    if universe is None:
        universe = tuple(sorted(atoms(f)))
    universe = tuple(universe)
    edits = _edits(f, universe)
    if not edits:
        raise GenerationError("formula %s admits no mutation" % render_prefix(f))
    if checker is None:
        checker = EquivalenceChecker(tuple(sorted(set(universe) | atoms(f))), FULL)
    for _ in range(attempts):
        path, node = edits[int(rng.integers(len(edits)))]
        mutant = _replace(f, path, node)
        if not checker.equivalent(f, mutant):
            return mutant
    raise GenerationError("no inequivalent mutant of %s after %d attempts"
                          % (render_prefix(f), attempts))


class Translator():
    """Turns natural language into candidate formula strings.

    translate() returns a formula text, or None for an unusable output.
    """

    def translate(self, nl, sample_index):
        raise NotImplementedError


class NoisyOracleTranslator(Translator):
    """Returns the true formula with probability accuracy, else a mutant.

    failure_rate of the samples come back unparseable.
    """

    def __init__(self, truth, accuracy, universe=None, seed=0, failure_rate=0.0, checker=None):
        self.truth = truth
        self.accuracy = accuracy
        self.failure_rate = failure_rate
        self.universe = tuple(universe) if universe is not None else tuple(sorted(atoms(truth)))
        self.rng = make_rng(seed)
        self.checker = checker or EquivalenceChecker(
            tuple(sorted(set(self.universe) | atoms(truth))), FULL)

    def translate(self, nl, sample_index):
        draw = self.rng.random()
        if draw < self.failure_rate:
            return '( %s' % render_prefix(self.truth)
        if self.rng.random() < self.accuracy:
            return render_prefix(self.truth)
        return render_prefix(mutate_formula(self.truth, self.rng, self.universe, self.checker))


def translate_and_vote(translator, nl, paraphrases=DEFAULT_PARAPHRASES,
                       samples_per_paraphrase=DEFAULT_SAMPLES_PER_PARAPHRASE,
                       universe=None, mode=FULL, state_cap=DEFAULT_STATE_CAP, checker=None):
    """Samples paraphrases x samples_per_paraphrase candidates and votes."""
    texts = [translator.translate(nl, i) for i in range(paraphrases * samples_per_paraphrase)]
    formulas, dropped = parse_candidates(texts)
    return vote(formulas, universe=universe, mode=mode, state_cap=state_cap,
                dropped=dropped, checker=checker)
