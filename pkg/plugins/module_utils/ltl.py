# -*- coding: utf-8 -*-

# GNU General Public License v3.0+ (see COPYING or https://www.gnu.org/licenses/gpl-3.0.txt)

"""LTL formulas over finite traces.

Formulas are immutable trees of Formula nodes. Two concrete syntaxes are
supported, infix and prefix (Polish), sharing one token set:
``true false ! & | -> X G F U ( )`` plus identifiers.
"""

from __future__ import absolute_import, division, print_function

__metaclass__ = type

import re

from ansible_collections.community.ltlplan.plugins.module_utils.common import (
    GroundingError,
    LtlSyntaxError,
    MalformedTraceError,
)

TRUE = 'true'
FALSE = 'false'
ATOM = 'atom'
NOT = 'not'
AND = 'and'
OR = 'or'
IMPLIES = 'implies'
NEXT = 'next'
GLOBALLY = 'globally'
FINALLY = 'finally'
UNTIL = 'until'

# Operator tag order used by the canonical ordering
OP_RANK = {
    FALSE: 0,
    TRUE: 1,
    ATOM: 2,
    NOT: 3,
    NEXT: 4,
    FINALLY: 5,
    GLOBALLY: 6,
    UNTIL: 7,
    AND: 8,
    OR: 9,
    IMPLIES: 10,
}

UNARY_SYMBOLS = {'!': NOT, 'X': NEXT, 'G': GLOBALLY, 'F': FINALLY}
BINARY_SYMBOLS = {'&': AND, '|': OR, '->': IMPLIES, 'U': UNTIL}
SYMBOL_OF = dict((op, sym) for sym, op in list(UNARY_SYMBOLS.items()) + list(BINARY_SYMBOLS.items()))
KEYWORDS = frozenset(['true', 'false', 'X', 'G', 'F', 'U'])

IDENT_RE = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')
TOKEN_RE = re.compile(r'\s*(?:(->)|([!&|()])|([A-Za-z_][A-Za-z0-9_]*)|(\S))')
WORD_RE = re.compile(r'\S+')

# Operators false on an exhausted trace
STEP_OPS = frozenset([ATOM, NEXT, FINALLY, UNTIL])


class Formula(object):
    """One node of an LTL syntax tree.

    Structural equality and hashing are cached; ``sort_key`` gives the total
    canonical ordering (operator tag first, then atom name, then children).
    """
    __slots__ = ('op', 'children', 'name', '_hash', '_key')

    def __init__(self, op, children=(), name=None):
        self.op = op
        self.children = tuple(children)
        self.name = name
        self._hash = hash((op, name, self.children))
        self._key = None

    @property
    def sort_key(self):
        if self._key is None:
            self._key = (OP_RANK[self.op], self.name or '',
                         tuple(c.sort_key for c in self.children))
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Formula) or self._hash != other._hash:
            return False
        return (self.op == other.op and self.name == other.name
                and self.children == other.children)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        # string hashes differ between interpreters; rebuild instead of copying _hash
        return (Formula, (self.op, self.children, self.name))

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __repr__(self):
        return 'Formula(%r)' % render_infix(self)

    def __str__(self):
        return render_infix(self)


TRUE_F = Formula(TRUE)
FALSE_F = Formula(FALSE)


def atom(name):
    if not IDENT_RE.match(name or '') or name in KEYWORDS:
        raise LtlSyntaxError("invalid atom name %r" % (name,))
    return Formula(ATOM, name=name)


def negation(f):
    return Formula(NOT, (f,))


def conjunction(left, right):
    return Formula(AND, (left, right))


def disjunction(left, right):
    return Formula(OR, (left, right))


def implication(left, right):
    return Formula(IMPLIES, (left, right))


def next_step(f):
    return Formula(NEXT, (f,))


def globally(f):
    return Formula(GLOBALLY, (f,))


def eventually(f):
    return Formula(FINALLY, (f,))


def until(left, right):
    return Formula(UNTIL, (left, right))


# Formula that holds iff at least one more step remains
NONEMPTY = eventually(TRUE_F)


def atoms(f):
    """Returns the frozenset of atom names used in f."""
    found = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if node.op == ATOM:
            found.add(node.name)
        stack.extend(node.children)
    return frozenset(found)


def depth(f):
    """Number of nodes on the longest root-to-leaf path; an atom has depth 1."""
    if not f.children:
        return 1
    return 1 + max(depth(c) for c in f.children)


def width(f):
    """Maximum number of nodes found at any one level of the tree."""
    level = [f]
    best = 0
    while level:
        best = max(best, len(level))
        level = [c for node in level for c in node.children]
    return best


#
# Parsing
#

def tokenize(text):
    """Splits text into (token, position) pairs.

    Raises LtlSyntaxError on characters outside the token set.
    """
    tokens = []
    pos = 0
    text = text or ''
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if m is None:
            # Only trailing whitespace is left
            break
        if m.group(4):
            raise LtlSyntaxError("unknown token %r" % m.group(4), m.start(4))
        tok = m.group(1) or m.group(2) or m.group(3)
        start = m.start(1) if m.group(1) else (m.start(2) if m.group(2) else m.start(3))
        tokens.append((tok, start))
        pos = m.end()
    return tokens


class _InfixParser():
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.idx = 0

    def peek(self):
        if self.idx < len(self.tokens):
            return self.tokens[self.idx][0]
        return None

    def position(self):
        if self.idx < len(self.tokens):
            return self.tokens[self.idx][1]
        return len(self.text)

    def take(self):
        tok = self.tokens[self.idx][0]
        self.idx += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise LtlSyntaxError("empty formula", 0)
        f = self.parse_implies()
        if self.peek() is not None:
            raise LtlSyntaxError("unexpected token %r" % self.peek(), self.position())
        return f

    def parse_implies(self):
        left = self.parse_or()
        if self.peek() == '->':
            self.take()
            return implication(left, self.parse_implies())
        return left

    def parse_or(self):
        left = self.parse_and()
        while self.peek() == '|':
            self.take()
            left = disjunction(left, self.parse_and())
        return left

    def parse_and(self):
        left = self.parse_until()
        while self.peek() == '&':
            self.take()
            left = conjunction(left, self.parse_until())
        return left

    def parse_until(self):
        left = self.parse_unary()
        if self.peek() == 'U':
            self.take()
            return until(left, self.parse_until())
        return left

    def parse_unary(self):
        tok = self.peek()
        pos = self.position()
        if tok is None:
            raise LtlSyntaxError("dangling operator, operand expected", pos)
        if tok in UNARY_SYMBOLS:
            self.take()
            return Formula(UNARY_SYMBOLS[tok], (self.parse_unary(),))
        if tok == '(':
            self.take()
            inner = self.parse_implies()
            if self.peek() != ')':
                raise LtlSyntaxError("unbalanced parentheses, ')' expected", self.position())
            self.take()
            return inner
        if tok == 'true':
            self.take()
            return TRUE_F
        if tok == 'false':
            self.take()
            return FALSE_F
        if tok in BINARY_SYMBOLS or tok == ')':
            raise LtlSyntaxError("unexpected token %r, operand expected" % tok, pos)
        self.take()
        return atom(tok)


def parse_infix(text):
    """Parses the infix syntax.

    Precedence, tightest first: ``! X G F`` > ``U`` (right) > ``&`` (left)
    > ``|`` (left) > ``->`` (right).
    """
    try:
        return _InfixParser(text).parse()
    except RecursionError:
        raise LtlSyntaxError("formula nested too deeply", 0)


def parse_prefix(text):
    """Parses a whitespace-separated Polish notation token stream.

    Error positions are character offsets into text.
    """
    text = text or ''
    found = [(m.group(0), m.start()) for m in WORD_RE.finditer(text)]
    words = [w for w, dummy in found]
    offsets = [pos for dummy, pos in found] + [len(text)]
    if not words:
        raise LtlSyntaxError("empty formula", 0)

    idx = [0]

    def parse_one():
        if idx[0] >= len(words):
            raise LtlSyntaxError("too few operands", len(text))
        tok = words[idx[0]]
        here = offsets[idx[0]]
        idx[0] += 1
        if tok in UNARY_SYMBOLS:
            return Formula(UNARY_SYMBOLS[tok], (parse_one(),))
        if tok in BINARY_SYMBOLS:
            left = parse_one()
            right = parse_one()
            return Formula(BINARY_SYMBOLS[tok], (left, right))
        if tok == 'true':
            return TRUE_F
        if tok == 'false':
            return FALSE_F
        if not IDENT_RE.match(tok):
            raise LtlSyntaxError("unknown operator token %r" % tok, here)
        return atom(tok)

    try:
        f = parse_one()
    except RecursionError:
        raise LtlSyntaxError("formula nested too deeply", 0)
    if idx[0] != len(words):
        raise LtlSyntaxError("extra operands after complete formula", offsets[idx[0]])
    return f


def parse_formula(text, fmt='auto'):
    """Parses text as infix, prefix or, with fmt='auto', whichever fits.

    No string is valid in both syntaxes with different meanings, since a
    prefix binary operator can never start an infix formula.
    """
    if fmt == 'infix':
        return parse_infix(text)
    if fmt == 'prefix':
        return parse_prefix(text)
    try:
        return parse_infix(text)
    except LtlSyntaxError as infix_error:
        try:
            return parse_prefix(text)
        except LtlSyntaxError:
            raise infix_error


#
# Rendering
#

_PREC = {IMPLIES: 1, OR: 2, AND: 3, UNTIL: 4}
_UNARY_PREC = 5
_ATOM_PREC = 6


def _prec(f):
    if f.op in _PREC:
        return _PREC[f.op]
    if f.children:
        return _UNARY_PREC
    return _ATOM_PREC


def render_infix(f):
    """Renders f with the minimum parentheses needed to parse back the same tree."""
    if f.op == TRUE:
        return 'true'
    if f.op == FALSE:
        return 'false'
    if f.op == ATOM:
        return f.name
    sym = SYMBOL_OF[f.op]
    if len(f.children) == 1:
        child = f.children[0]
        inner = render_infix(child)
        if _prec(child) < _UNARY_PREC:
            inner = '(%s)' % inner
        if sym == '!':
            return '!%s' % inner
        return '%s %s' % (sym, inner)

    p = _PREC[f.op]
    left, right = f.children
    left_s = render_infix(left)
    right_s = render_infix(right)
    if f.op in (AND, OR):
        left_wrap = _prec(left) < p
        right_wrap = _prec(right) <= p
    else:
        left_wrap = _prec(left) <= p
        right_wrap = _prec(right) < p
    if left_wrap:
        left_s = '(%s)' % left_s
    if right_wrap:
        right_s = '(%s)' % right_s
    return '%s %s %s' % (left_s, sym, right_s)


def render_prefix(f):
    if f.op == TRUE:
        return 'true'
    if f.op == FALSE:
        return 'false'
    if f.op == ATOM:
        return f.name
    return ' '.join([SYMBOL_OF[f.op]] + [render_prefix(c) for c in f.children])


def render(f, fmt='infix'):
    if fmt == 'prefix':
        return render_prefix(f)
    return render_infix(f)


#
# Finite-trace semantics
#

class Trace(object):
    """A finite sequence of labelings, each a frozenset of atom names.

    When a universe is declared, every labeling must be a subset of it and
    formulas evaluated on the trace may only use atoms of the universe.
    """
    __slots__ = ('labels', 'universe', 'declared')

    def __init__(self, labels, universe=None):
        self.labels = tuple(frozenset(label) for label in labels)
        self.declared = universe is not None
        if universe is None:
            self.universe = frozenset().union(*self.labels) if self.labels else frozenset()
        else:
            self.universe = frozenset(universe)
            for idx, label in enumerate(self.labels):
                extra = label - self.universe
                if extra:
                    raise MalformedTraceError(
                        "labeling %d uses atoms outside the universe: %s"
                        % (idx, ', '.join(sorted(extra))))

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Trace(self.labels[item], self.universe if self.declared else None)
        return self.labels[item]

    def __iter__(self):
        return iter(self.labels)

    def __eq__(self, other):
        return isinstance(other, Trace) and self.labels == other.labels

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return 'Trace(%r)' % ([sorted(label) for label in self.labels],)


def _holds(f, labels, i, memo):
    key = (f, i)
    if key in memo:
        return memo[key]

    n = len(labels)
    op = f.op
    if op == TRUE:
        result = True
    elif op == FALSE:
        result = False
    elif op == ATOM:
        result = i < n and f.name in labels[i]
    elif op == NOT:
        result = not _holds(f.children[0], labels, i, memo)
    elif op == AND:
        result = (_holds(f.children[0], labels, i, memo)
                  and _holds(f.children[1], labels, i, memo))
    elif op == OR:
        result = (_holds(f.children[0], labels, i, memo)
                  or _holds(f.children[1], labels, i, memo))
    elif op == IMPLIES:
        result = (not _holds(f.children[0], labels, i, memo)
                  or _holds(f.children[1], labels, i, memo))
    elif op == NEXT:
        # Strong next: a following position must exist
        result = i + 1 < n and _holds(f.children[0], labels, i + 1, memo)
    elif op == GLOBALLY:
        result = all(_holds(f.children[0], labels, j, memo) for j in range(i, n))
    elif op == FINALLY:
        result = any(_holds(f.children[0], labels, j, memo) for j in range(i, n))
    elif op == UNTIL:
        left, right = f.children
        result = False
        for j in range(i, n):
            if _holds(right, labels, j, memo):
                result = True
                break
            if not _holds(left, labels, j, memo):
                break
    else:
        raise ValueError("unknown operator %r" % op)

    memo[key] = result
    return result


def evaluate(f, trace, position=0):
    """Decides whether trace, read from position, satisfies f.

    An exhausted suffix (position == len(trace)) satisfies G and fails
    atoms, X, F and U.
    """
    if not isinstance(trace, Trace):
        trace = Trace(trace)
    if position < 0 or position > len(trace):
        raise MalformedTraceError("position %d outside trace of length %d"
                                  % (position, len(trace)))
    if trace.declared:
        extra = atoms(f) - trace.universe
        if extra:
            raise MalformedTraceError("formula uses atoms outside the universe: %s"
                                      % ', '.join(sorted(extra)))
    return _holds(f, trace.labels, position, {})


#
# Lifting and grounding
#

def check_grounding_map(mapping):
    """Verifies the placeholder -> name map is injective."""
    values = list(mapping.values())
    if len(set(values)) != len(values):
        raise GroundingError("grounding map is not injective: %r" % (mapping,))
    for name in list(mapping.keys()) + values:
        if not IDENT_RE.match(name) or name in KEYWORDS:
            raise GroundingError("invalid name %r in grounding map" % (name,))


def rename_atoms(f, mapping):
    """Returns f with every atom renamed through mapping; unmapped atoms stay."""
    if f.op == ATOM:
        new = mapping.get(f.name, f.name)
        return f if new == f.name else Formula(ATOM, name=new)
    if not f.children:
        return f
    return Formula(f.op, tuple(rename_atoms(c, mapping) for c in f.children))


def ground(f, mapping):
    """Replaces placeholders by the names they map to."""
    check_grounding_map(mapping)
    missing = atoms(f) - frozenset(mapping)
    if missing:
        raise GroundingError("no grounding for placeholders: %s" % ', '.join(sorted(missing)))
    return rename_atoms(f, mapping)


def lift(f, mapping):
    """Replaces grounded names by their placeholders, the inverse of ground()."""
    check_grounding_map(mapping)
    inverse = dict((v, k) for k, v in mapping.items())
    missing = atoms(f) - frozenset(inverse)
    if missing:
        raise GroundingError("names missing from the grounding map: %s" % ', '.join(sorted(missing)))
    return rename_atoms(f, inverse)


#
# Boolean canonicalisation
#

def _flatten(op, items):
    flat = []
    stack = list(reversed(items))
    while stack:
        f = stack.pop()
        if f.op == op:
            stack.extend(reversed(f.children))
        else:
            flat.append(f)
    return flat


def _nest(op, items):
    result = items[-1]
    for f in reversed(items[:-1]):
        result = Formula(op, (f, result))
    return result


def mk_not(f):
    if f.op == TRUE:
        return FALSE_F
    if f.op == FALSE:
        return TRUE_F
    if f.op == NOT:
        return f.children[0]
    return negation(f)


def mk_and(items):
    """Conjunction with constant folding, deduplication, complement and
    absorption checks; operands come out sorted and right-nested.
    """
    members = set()
    for f in _flatten(AND, items):
        if f.op == FALSE:
            return FALSE_F
        if f.op != TRUE:
            members.add(f)
    for f in members:
        if mk_not(f) in members:
            return FALSE_F
    kept = [f for f in members
            if not (f.op == OR and any(d in members for d in _flatten(OR, [f])))]
    if NONEMPTY in kept and any(f.op in STEP_OPS for f in kept if f != NONEMPTY):
        kept.remove(NONEMPTY)
    if not kept:
        return TRUE_F
    return _nest(AND, sorted(kept))


def mk_or(items):
    members = set()
    for f in _flatten(OR, items):
        if f.op == TRUE:
            return TRUE_F
        if f.op != FALSE:
            members.add(f)
    for f in members:
        if mk_not(f) in members:
            return TRUE_F
    kept = [f for f in members
            if not (f.op == AND and any(c in members for c in _flatten(AND, [f])))]
    if not kept:
        return FALSE_F
    return _nest(OR, sorted(kept))


def _complement(literal):
    return literal.children[0] if literal.op == NOT else negation(literal)


def _consistent(clause):
    for lit in clause:
        if _complement(lit) in clause:
            return False
    if negation(NONEMPTY) in clause:
        return not any(lit.op in STEP_OPS for lit in clause)
    return True


def _minimal(clauses):
    clauses = set(c for c in clauses if _consistent(c))
    return set(c for c in clauses if not any(d < c for d in clauses))


def _product(left, right):
    return _minimal(a | b for a in left for b in right)


def _clauses(f, positive=True):
    """Clauses of f (or of its negation) as frozensets of literals."""
    op = f.op
    if op == NOT:
        return _clauses(f.children[0], not positive)
    if op == IMPLIES:
        f = Formula(OR, (negation(f.children[0]), f.children[1]))
        op = OR
    if op in (TRUE, FALSE):
        return set([frozenset()]) if (op == TRUE) == positive else set()
    if op in (AND, OR):
        if (op == AND) == positive:
            result = set([frozenset()])
            for child in f.children:
                result = _product(result, _clauses(child, positive))
            return result
        result = set()
        for child in f.children:
            result |= _clauses(child, positive)
        return _minimal(result)
    return set([frozenset([f if positive else negation(f)])])


def dnf(f):
    """Disjunction of conjunctions of temporal literals, equal to f.

    Literals are atoms and X, G, F, U formulas or their negations, kept as
    they appear in f. Contradictory and subsumed clauses are dropped.
    """
    return mk_or([mk_and(list(c)) for c in _clauses(f)])


def canonical(f):
    """Boolean-simplified normal form, semantically equal to f.

    Implications are desugared to disjunctions; temporal operators are kept
    and only folded where the result is constant on every finite trace.
    """
    op = f.op
    if op in (TRUE, FALSE, ATOM):
        return f
    if op == NOT:
        return mk_not(canonical(f.children[0]))
    if op == AND:
        return mk_and([canonical(c) for c in f.children])
    if op == OR:
        return mk_or([canonical(c) for c in f.children])
    if op == IMPLIES:
        return mk_or([mk_not(canonical(f.children[0])), canonical(f.children[1])])
    if op == NEXT:
        child = canonical(f.children[0])
        return FALSE_F if child.op == FALSE else next_step(child)
    if op == GLOBALLY:
        child = canonical(f.children[0])
        return TRUE_F if child.op == TRUE else globally(child)
    if op == FINALLY:
        child = canonical(f.children[0])
        return FALSE_F if child.op == FALSE else eventually(child)
    if op == UNTIL:
        left = canonical(f.children[0])
        right = canonical(f.children[1])
        if right.op == FALSE:
            return FALSE_F
        return until(left, right)
    raise ValueError("unknown operator %r" % op)
