"""Frame membership, exhaustive parsing and bounded enumeration of SPF(G)."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

from . import syntax
from .frames import erase, most_general_labelling, word_categories
from .proofnet import (
    I,
    O,
    Link,
    ProofStructure,
    Tip,
    ValidationError,
    node_formula,
    node_polarity,
    validate,
)
from .syntax import INPUT, OUTPUT, Grammar, Lit, Tensor, formula_atoms, to_linear
from .unification import match

DEFAULT_MAX_CANDIDATES = 10**6


class UnknownWord(KeyError):
    def __init__(self, word):
        super().__init__(word)
        self.word = word

    def __str__(self):
        return f"unknown word {self.word!r}"


class ArityMismatch(ValueError):
    pass


class TooManyCandidates(RuntimeError):
    pass


def _check_words(g: Grammar, sentence):
    for w in sentence:
        if not g.lex(w):
            raise UnknownWord(w)


# ---------------------------------------------------------------------------
# Membership of a given frame
# ---------------------------------------------------------------------------


def match_frame(g: Grammar, sentence, f: ProofStructure) -> dict | None:
    """Witness substitution showing that ``g`` generates ``f`` for ``sentence``.

    Returns ``None`` when no choice of lexical categories fits.
    """
    sentence = list(sentence)
    _check_words(g, sentence)
    if len(f.conclusions) - 1 != len(sentence):
        raise ArityMismatch(
            f"frame has {len(f.conclusions) - 1} word conclusions, sentence has {len(sentence)} words"
        )
    labelled = most_general_labelling(f)
    cats = word_categories(sentence, labelled)
    options = [sorted(g.lex(w), key=str) for w in sentence]

    def go(i, binding):
        if i == len(cats):
            return binding
        for c in options[i]:
            b = match(cats[i], c, binding)
            if b is not None:
                found = go(i + 1, b)
                if found is not None:
                    return found
        return None

    return go(0, {})


def generates(g: Grammar, sentence, f: ProofStructure) -> bool:
    try:
        return match_frame(g, sentence, f) is not None
    except (UnknownWord, ArityMismatch):
        return False


# ---------------------------------------------------------------------------
# Exhaustive parsing
# ---------------------------------------------------------------------------


def _key(lit: Lit) -> tuple:
    return (lit.atom, lit.neg)


def _reduce(seq) -> tuple:
    """Free-group reduction: a literal cancels against an adjacent dual."""
    out: list = []
    for a, n in seq:
        if out and out[-1] == (a, not n):
            out.pop()
        else:
            out.append((a, n))
    return tuple(out)


def _matchings(leaves: list, budget: list) -> Iterator[dict]:
    """Non-crossing perfect matchings of dual literals, as ``{i: j}`` maps."""
    n = len(leaves)
    keys = [_key(l) for l in leaves]

    @lru_cache(maxsize=None)
    def closable(i, j):
        return not _reduce(keys[i:j])

    def go(i, j):
        if i == j:
            yield {}
            return
        a, neg = keys[i]
        for k in range(i + 1, j, 2):
            if keys[k] != (a, not neg) or not closable(i + 1, k) or not closable(k + 1, j):
                continue
            for inner in go(i + 1, k):
                for outer in go(k + 1, j):
                    m = {i: k}
                    m.update(inner)
                    m.update(outer)
                    yield m

    if n % 2 or not closable(0, n):
        return
    for m in go(0, n):
        budget[0] -= 1
        if budget[0] < 0:
            raise TooManyCandidates("candidate matching cap exceeded")
        yield m


def _tree(f, leaf_iter) -> object:
    if isinstance(f, Lit):
        return next(leaf_iter)
    kind = "*" if isinstance(f, Tensor) else "|"
    return Link(kind, _tree(f.left, leaf_iter), _tree(f.right, leaf_iter))


def _structure(formulas, matching: dict) -> ProofStructure:
    leaves = [l for f in formulas for l in formula_atoms(f)]
    ids = {}
    for i, j in matching.items():
        ids[i] = ids[j] = len(ids) // 2 + 1
    tips = iter(
        Tip(ids[i], I if l.neg else O, l) for i, l in enumerate(leaves)
    )
    return ProofStructure(tuple(_tree(f, tips) for f in formulas))


def _links(n):
    if isinstance(n, Link):
        yield n
        yield from _links(n.left)
        yield from _links(n.right)


def _replace(n, mapping):
    if n in mapping:
        return mapping[n]
    if isinstance(n, Tip):
        return n
    return Link(n.kind, _replace(n.left, mapping), _replace(n.right, mapping))


def contractions(net: ProofStructure) -> Iterator[ProofStructure]:
    """Structures obtained by undoing one eta expansion of ``net``.

    An output link whose two premises are tips contracts with the link whose
    premises are the partner tips in swapped order.
    """
    shallow = {}
    for c in net.conclusions:
        for l in _links(c):
            if isinstance(l.left, Tip) and isinstance(l.right, Tip):
                shallow[(l.left.axiom, l.right.axiom)] = l
    fresh = max(net.axiom_ids()) + 1
    for (a, b), n1 in shallow.items():
        if node_polarity(n1) != OUTPUT:
            continue
        n2 = shallow.get((b, a))
        if n2 is None or n2.kind == n1.kind:
            continue
        f = node_formula(n1)
        mapping = {
            n1: Tip(fresh, O, f),
            n2: Tip(fresh, I, None if f is None else syntax.dual(f)),
        }
        yield ProofStructure(tuple(_replace(c, mapping) for c in net.conclusions))


def _close(nets: list) -> list:
    seen = {n.canonical(): n for n in nets}
    todo = list(nets)
    while todo:
        net = todo.pop()
        for c in contractions(net):
            key = c.canonical()
            if key in seen:
                continue
            try:
                v = validate(c)
            except ValidationError:
                continue
            seen[key] = v
            todo.append(v)
    return [seen[k] for k in sorted(seen)]


def parse_nets(g: Grammar, sentence, max_candidates: int = DEFAULT_MAX_CANDIDATES) -> list:
    """Every labelled proof net that ``g`` assigns to ``sentence``.

    Nets with complex axioms are included.  The result is sorted by
    canonical serialization.
    """
    sentence = list(sentence)
    _check_words(g, sentence)
    budget = [max_candidates]
    found = []
    options = [sorted(g.lex(w), key=str) for w in sentence]
    for choice in itertools.product(*options):
        formulas = [to_linear(c, INPUT) for c in reversed(choice)]
        formulas.append(Lit(syntax.S))
        leaves = [l for f in formulas for l in formula_atoms(f)]
        for m in _matchings(leaves, budget):
            try:
                found.append(validate(_structure(formulas, m)))
            except ValidationError:
                pass
    return _close(found)


def parse(g: Grammar, sentence, max_candidates: int = DEFAULT_MAX_CANDIDATES) -> list:
    """The S proof frames of ``sentence`` under ``g``, one per isomorphism class."""
    frames = {}
    for net in parse_nets(g, sentence, max_candidates):
        f = erase(net)
        frames.setdefault(f.canonical(), f)
    return [frames[k] for k in sorted(frames)]


# ---------------------------------------------------------------------------
# Enumeration of SPF(G)
# ---------------------------------------------------------------------------
#
# Frames depend only on the categories, so words with the same lexical entry
# are grouped and each class sequence is parsed once.


def word_classes(g: Grammar) -> list[tuple]:
    """Words grouped by lexical entry; each class is a sorted tuple of words."""
    by_entry: dict = {}
    for w in g.words:
        if g.lex(w):
            by_entry.setdefault(g.lex(w), []).append(w)
    return sorted(tuple(sorted(ws)) for ws in by_entry.values())


def _balance(seq) -> tuple:
    count: dict = {}
    for a, n in seq:
        count[a] = count.get(a, 0) + (-1 if n else 1)
    return tuple(sorted((a, k) for a, k in count.items() if k))


def _add(b1: tuple, b2: tuple) -> tuple:
    count = dict(b1)
    for a, k in b2:
        count[a] = count.get(a, 0) + k
    return tuple(sorted((a, k) for a, k in count.items() if k))


def _inverse(seq) -> tuple:
    return tuple((a, not n) for a, n in reversed(seq))


class _Search:
    """Pruned search for class sequences whose literals can cancel out.

    Cancellation in the free group is necessary for a planar matching.  With
    ``m`` words still to prepend, a state is kept only if its inverse is a
    reduced product of ``m`` lexical literal strings (looked up in a table
    for small ``m``) and otherwise if its atom balance can be compensated.
    """

    def __init__(self, g: Grammar, classes: list, max_len: int, table_limit: int = 200_000):
        self.lits = [
            sorted(
                {tuple(_key(l) for l in formula_atoms(to_linear(c, INPUT))) for c in g.lex(ws[0])}
            )
            for ws in classes
        ]
        strings = sorted({s for opts in self.lits for s in opts})
        self.products = [{()}]
        while len(self.products) <= max_len:
            nxt = {_reduce(s + r) for r in self.products[-1] for s in strings}
            if len(nxt) > table_limit:
                break
            self.products.append(nxt)
        self.balances = [{()}]
        for _ in range(max_len):
            self.balances.append(
                {_add(b, _balance(s)) for b in self.balances[-1] for s in strings}
            )

    def feasible(self, state, m) -> bool:
        if m < len(self.products):
            return _inverse(state) in self.products[m]
        return _balance(_inverse(state)) in self.balances[m]

    def sequences(self, n: int) -> Iterator[tuple]:
        def go(prefix, states, m):
            if m == 0:
                yield tuple(prefix)
                return
            for ci, opts in enumerate(self.lits):
                nxt = {_reduce(s + r) for r in states for s in opts}
                nxt = frozenset(r for r in nxt if self.feasible(r, m - 1))
                if nxt:
                    prefix.append(ci)
                    yield from go(prefix, nxt, m - 1)
                    prefix.pop()

        yield from go([], frozenset({((syntax.S, False),)}), n)


def enumerate_spf(g: Grammar, max_len: int, max_candidates: int = DEFAULT_MAX_CANDIDATES):
    """Yield ``(sentence, frame)`` for every frame of ``g`` up to ``max_len`` words.

    Sentences come by length, then lexicographically; the frames of one
    sentence in canonical order.
    """
    classes = word_classes(g)
    search = _Search(g, classes, max_len)
    for n in range(1, max_len + 1):
        found = []
        for seq in search.sequences(n):
            frames = parse(g, [classes[ci][0] for ci in seq], max_candidates)
            if frames:
                found.append((seq, frames))
        out = []
        for seq, frames in found:
            for sent in itertools.product(*(classes[ci] for ci in seq)):
                out.append((sent, frames))
        out.sort(key=lambda p: p[0])
        for sent, frames in out:
            for f in frames:
                yield sent, f


def spf_sentences(g: Grammar, max_len: int) -> list[tuple]:
    """Distinct sentences of ``enumerate_spf(g, max_len)``, in order."""
    seen = []
    for sent, _ in enumerate_spf(g, max_len):
        if not seen or seen[-1] != sent:
            seen.append(sent)
    return seen
