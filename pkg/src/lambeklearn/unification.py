"""First-order unification and one-sided matching over Lambek categories."""

from __future__ import annotations

from typing import Iterable, Mapping

from .syntax import (
    Atom,
    Category,
    Grammar,
    apply_subst,
    children,
    compose_subst,
    subst_category,
    variables,
)


class UnificationError(ValueError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class Clash(UnificationError):
    kind = "Clash"


class OccursCheck(UnificationError):
    kind = "OccursCheck"


class UnunifiableWord(UnificationError):
    kind = "UnunifiableWord"

    def __init__(self, word, cause: UnificationError):
        super().__init__(f"categories of {word!r} do not unify: {cause}", cause.pair)
        self.word = word
        self.cause = cause


def _is_var(c) -> bool:
    return isinstance(c, Atom) and c.is_variable


def _nodes(c) -> int:
    return 1 + sum(_nodes(k) for k in children(c))


def measure(eqs) -> tuple[int, int, int]:
    """(unsolved variables, total size, equations with a non-variable left side)."""
    count: dict[str, int] = {}
    for l, r in eqs:
        for v in variables(l) | variables(r):
            count[v] = count.get(v, 0) + 1
    solved = {
        l.name
        for l, r in eqs
        if _is_var(l) and l.name not in variables(r) and count[l.name] == 1
    }
    return (
        len(count) - len(solved),
        sum(_nodes(l) + _nodes(r) for l, r in eqs),
        sum(1 for l, _ in eqs if not _is_var(l)),
    )


def _step(eqs: list, i: int) -> list | None:
    """Rewrite equation ``i`` by the first applicable rule, or ``None``."""
    l, r = eqs[i]
    rest = eqs[:i] + eqs[i + 1:]
    if l == r:
        return rest
    if not isinstance(l, Atom) and type(l) is type(r):
        return eqs[:i] + list(zip(children(l), children(r))) + eqs[i + 1:]
    if _is_var(r) and not _is_var(l):
        return eqs[:i] + [(r, l)] + eqs[i + 1:]
    if _is_var(l):
        if l.name in variables(r):
            raise OccursCheck(f"{l} occurs in {r}", (l, r))
        if any(l.name in variables(a) | variables(b) for a, b in rest):
            s = {l.name: r}
            return [
                (subst_category(s, a), subst_category(s, b)) if j != i else (l, r)
                for j, (a, b) in enumerate(eqs)
            ]
        return None
    raise Clash(f"{l} and {r} do not unify", (l, r))


def solve(equations: Iterable[tuple[Category, Category]], trace: list | None = None) -> dict:
    """Most general unifier of a system of equations.

    Rules are tried in a fixed order on the first equation that admits one.
    When ``trace`` is a list, the termination measure is appended after each
    rewrite.
    """
    eqs = list(equations)
    if trace is not None:
        trace.append(measure(eqs))
    while True:
        for i in range(len(eqs)):
            new = _step(eqs, i)
            if new is not None:
                eqs = new
                break
        else:
            return {l.name: r for l, r in eqs}
        if trace is not None:
            trace.append(measure(eqs))


def unify(c1: Category, c2: Category, trace: list | None = None) -> dict:
    return solve([(c1, c2)], trace)


def unify_set(cats: Iterable[Category]) -> dict:
    cats = list(cats)
    if not cats:
        raise ValueError("unify_set needs at least one category")
    return solve([(cats[0], c) for c in cats[1:]])


def unify_grammar(g: Grammar, drop: bool = False):
    """One substitution making every word rigid.

    Returns ``(rigid grammar, substitution, dropped words)``.  A word whose
    categories cannot be unified raises :class:`UnunifiableWord`, or with
    ``drop`` is given no category at all.
    """
    sigma: dict = {}
    dropped = []
    for w, cs in g.lexicon.items():
        if len(cs) < 2:
            continue
        try:
            tau = unify_set(sorted((subst_category(sigma, c) for c in cs), key=str))
        except UnificationError as e:
            if not drop:
                raise UnunifiableWord(w, e) from None
            dropped.append(w)
            continue
        sigma = compose_subst(tau, sigma)
    out = apply_subst(sigma, g)
    if dropped:
        out = Grammar({w: (frozenset() if w in dropped else cs) for w, cs in out.lexicon.items()})
    return out, sigma, dropped


# ---------------------------------------------------------------------------
# Matching: target variables are frozen
# ---------------------------------------------------------------------------


def match(pattern: Category, target: Category, binding: Mapping | None = None) -> dict | None:
    """Extend ``binding`` so that it maps ``pattern`` onto ``target``.

    Variables of ``target`` are treated as constants, even when their names
    coincide with pattern variables.
    """
    b = dict(binding or {})
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if _is_var(p):
            bound = b.get(p.name)
            if bound is None:
                b[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, Atom):
            if p != t:
                return None
        elif type(p) is type(t):
            stack.extend(zip(children(p), children(t)))
        else:
            return None
    return b


def subsumption(h: Grammar, g: Grammar, injective: bool = False) -> dict | None:
    """A substitution ``sigma`` with ``sigma(h)`` included in ``g``, or ``None``.

    With ``injective``, distinct categories of one word of ``h`` must also go
    to distinct categories of that word in ``g``.  The two notions agree
    when ``h`` is rigid.
    """
    items = []
    for w, cs in h.lexicon.items():
        if not cs:
            continue
        if w not in g.lexicon:
            return None
        tgt = sorted(g.lexicon[w], key=str)
        for c in sorted(cs, key=str):
            items.append((w, c, tgt))

    def go(i, binding, used):
        if i == len(items):
            return binding
        w, c, tgt = items[i]
        for t in tgt:
            if injective and (w, t) in used:
                continue
            b = match(c, t, binding)
            if b is not None:
                found = go(i + 1, b, used | {(w, t)})
                if found is not None:
                    return found
        return None

    return go(0, {}, frozenset())


def subsumes(h: Grammar, g: Grammar, injective: bool = False) -> bool:
    """``h`` is below ``g`` in the substitution preorder."""
    return subsumption(h, g, injective) is not None
