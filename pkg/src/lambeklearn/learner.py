"""Learning rigid grammars from S proof frames, with property and convergence checks."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field

from .frames import Example, most_general_labelling, word_categories
from .parser import enumerate_spf, generates
from .syntax import (
    Grammar,
    canonicalize,
    grammar_key,
    variabilize,
)
from .unification import subsumes, unify_grammar

log = logging.getLogger(__name__)


class EmptyLanguageBelowBound(ValueError):
    pass


def _max_var(g: Grammar) -> int:
    return max((int(v[1:]) for v in g.variables()), default=0)


def gf(examples, fresh=None) -> Grammar:
    """Assign to each word occurrence the category read off its frame.

    Every frame is labelled with its own fresh variables, so distinct
    examples share none.
    """
    if fresh is None:
        fresh = itertools.count(1)
    pairs = []
    for e in examples:
        net = most_general_labelling(e.frame, fresh)
        pairs.extend(zip(e.words, word_categories(e.words, net)))
    return Grammar.from_assignments(pairs)


def dedup(examples) -> list:
    """Distinct examples up to frame isomorphism, sorted by key."""
    by_key = {}
    for e in examples:
        by_key.setdefault(e.key, e)
    return [by_key[k] for k in sorted(by_key)]


def rg(examples) -> Grammar:
    """Most general rigid grammar for ``examples``.

    Words whose categories do not unify get an empty entry.
    """
    g, _, dropped = unify_grammar(gf(dedup(examples)), drop=True)
    if dropped:
        log.warning("no category for %s: unification failed", ", ".join(dropped))
    return canonicalize(g)


def _union(g: Grammar, h: Grammar) -> Grammar:
    lex = dict(g.lexicon)
    for w, cs in h.lexicon.items():
        if w in lex and not lex[w]:
            continue  # dropped words stay dropped
        lex[w] = lex.get(w, frozenset()) | cs
    return Grammar(lex)


def step(state: Grammar, e: Example) -> Grammar:
    """One incremental update of the learner."""
    if all(state.lex(w) for w in e.words) and generates(state, e.words, e.frame):
        return state
    h = gf([e], itertools.count(_max_var(state) + 1))
    g, _, dropped = unify_grammar(_union(state, h), drop=True)
    if dropped:
        log.warning("no category for %s: unification failed", ", ".join(dropped))
    return canonicalize(g)


def phi(examples) -> Grammar:
    g = Grammar({})
    for e in examples:
        g = step(g, e)
    return g


def trace(examples) -> list[Grammar]:
    """Hypotheses after each prefix, starting with the empty grammar."""
    out = [Grammar({})]
    for e in examples:
        out.append(step(out[-1], e))
    return out


def below(h: Grammar, g: Grammar) -> bool:
    """``h`` is below ``g``: some substitution sends ``h`` into ``g``."""
    return subsumes(h, g)


# ---------------------------------------------------------------------------
# Learner properties
# ---------------------------------------------------------------------------


@dataclass
class PropertyReport:
    conservative: bool = True
    consistent: bool = True
    set_driven: bool = True
    incremental: bool = True
    chain: bool = True
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(
            (self.conservative, self.consistent, self.set_driven, self.incremental, self.chain)
        )

    def _fail(self, prop: str, detail: str):
        setattr(self, prop, False)
        self.failures.append(f"{prop}: {detail}")


def check_learner_properties(examples, max_permutations: int = 24, seed: int = 0) -> PropertyReport:
    """Replay the learner on ``examples`` and check its defining properties.

    Orders are exhaustive for up to four examples and sampled beyond.
    """
    examples = list(examples)
    rep = PropertyReport()
    hyps = trace(examples)
    keys = [grammar_key(h) for h in hyps]
    for k, e in enumerate(examples, 1):
        prev, cur = hyps[k - 1], hyps[k]
        if all(prev.lex(w) for w in e.words) and generates(prev, e.words, e.frame):
            if keys[k] != keys[k - 1]:
                rep._fail("conservative", f"changed on generated example {k}")
        for j, seen in enumerate(examples[:k], 1):
            if not generates(cur, seen.words, seen.frame):
                rep._fail("consistent", f"hypothesis {k} misses example {j}")
        if keys[k] != grammar_key(rg(examples[:k])):
            rep._fail("incremental", f"prefix {k} differs from the batch result")
        if not below(prev, cur):
            rep._fail("chain", f"hypothesis {k - 1} is not below hypothesis {k}")

    if len(examples) <= 4:
        orders = list(itertools.permutations(examples))
    else:
        rnd = random.Random(seed)
        orders = []
        for _ in range(max_permutations):
            o = list(examples)
            rnd.shuffle(o)
            orders.append(o)
    orders.append(examples + examples[::-1])
    for o in orders:
        if grammar_key(phi(o)) != keys[-1]:
            rep._fail("set_driven", "order or repetition changed the result")
            break
    return rep


# ---------------------------------------------------------------------------
# Convergence
# ---------------------------------------------------------------------------


@dataclass
class LearnerReport:
    target: Grammar
    max_len: int
    order: str
    n_examples: int
    grammars: list
    stabilization_index: int
    stabilized: bool
    grammar_equal: bool
    attested_equal: bool
    language_match: bool
    chain: bool

    @property
    def final(self) -> Grammar:
        return self.grammars[-1]

    def kv(self) -> str:
        lines = [
            f"order={self.order}",
            f"max_len={self.max_len}",
            f"examples={self.n_examples}",
            f"stabilization_index={self.stabilization_index if self.stabilized else 'none'}",
            f"stabilized={str(self.stabilized).lower()}",
            f"grammar_equal={str(self.grammar_equal).lower()}",
            f"attested_equal={str(self.attested_equal).lower()}",
            f"language_match={str(self.language_match).lower()}",
            f"chain={str(self.chain).lower()}",
        ]
        return "\n".join(lines)


def _frame_set(g: Grammar, max_len: int) -> set:
    return {(s, f.canonical()) for s, f in enumerate_spf(g, max_len)}


def converge(g: Grammar, max_len: int, order: str = "canonical", seed: int | None = None) -> LearnerReport:
    """Feed the frames of ``g`` up to ``max_len`` words to the learner.

    ``order`` is ``"canonical"`` (length, then words, then frame) or
    ``"shuffle"`` (seeded).  The stabilization index is the number of
    examples read when the hypothesis last changed; the run counts as
    stabilized when the final hypothesis generates every enumerated frame.
    ``attested_equal`` compares with ``g`` restricted to the words that occur
    below the bound, since no learner can guess the others.
    """
    data = [Example(s, f) for s, f in enumerate_spf(g, max_len)]
    if not data:
        raise EmptyLanguageBelowBound(f"no sentence of at most {max_len} words")
    if order == "shuffle":
        random.Random(seed).shuffle(data)
    elif order != "canonical":
        raise ValueError(f"unknown order {order!r}")
    hyps = trace(data)
    keys = [grammar_key(h) for h in hyps]
    last = max(i for i in range(1, len(keys)) if i == 1 or keys[i] != keys[i - 1])
    final = hyps[-1]
    stabilized = all(generates(final, e.words, e.frame) for e in data)
    chain = all(below(hyps[i], hyps[i + 1]) for i in range(len(hyps) - 1))
    chain = chain and all(below(h, g) for h in hyps)
    target = variabilize(g)
    seen = {w for e in data for w in e.words}
    attested = Grammar({w: cs for w, cs in target.lexicon.items() if w in seen})
    return LearnerReport(
        target=g,
        max_len=max_len,
        order=order if order == "canonical" else f"shuffle:{seed}",
        n_examples=len(data),
        grammars=hyps,
        stabilization_index=last,
        stabilized=stabilized,
        grammar_equal=grammar_key(final) == grammar_key(target),
        attested_equal=grammar_key(final) == grammar_key(attested),
        language_match=_frame_set(final, max_len) == _frame_set(g, max_len),
        chain=chain,
    )
