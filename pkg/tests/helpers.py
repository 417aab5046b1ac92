"""Shared test utilities: random nets, a brute-force criterion oracle, data paths."""

from __future__ import annotations

import functools
import itertools
import random
from pathlib import Path

from lambeklearn import syntax
from lambeklearn.proofnet import (
    I,
    O,
    PAR,
    ProofStructure,
    Tip,
    attach_par,
    build_axiom,
    join_tensor,
    node_polarity,
    node_tips,
)
from lambeklearn.syntax import OUTPUT

DATA = Path(__file__).resolve().parent.parent / "data"

NET_COMPLEX = "s~#1*(s#2|np~#3), np#3*(s~*np)#7, (np~|s)#7*s~#2, s#1"
NET_ATOMIC = "s~#1*(s#2|np~#3), np#3*(s~#4*np#5), (np~#5|s#4)*s~#2, s#1"
FRAME_COMPLEX = "s~#1*(O#2|I#3), O#3*I#7, O#7*I#2, s#1"
FRAME_ATOMIC = "s~#1*(O#2|I#3), O#3*(I#4*O#5), (I#5|O#4)*I#2, s#1"


def random_output_formula(rng: random.Random, atoms=("s", "np", "a"), depth=1):
    """A random formula of output polarity."""
    cat = syntax.Atom(rng.choice(atoms))
    if depth > 0 and rng.random() < 0.3:
        a = syntax.Atom(rng.choice(atoms))
        cat = rng.choice([syntax.Under(a, cat), syntax.Over(cat, a), syntax.Prod(a, cat)])
    return syntax.to_linear(cat, OUTPUT)


def random_net(rng: random.Random, max_axioms: int = 5, complex_axioms: bool = False):
    """A net assembled from axioms by random tensor joins and par attachments."""
    fresh = itertools.count(1)
    depth = 1 if complex_axioms else 0
    pool = [build_axiom(random_output_formula(rng, depth=depth), fresh) for _ in range(rng.randint(1, max_axioms))]
    while len(pool) > 1 or (rng.random() < 0.5 and len(pool[0].conclusions) >= 3):
        if len(pool) > 1 and (rng.random() < 0.7 or not any(len(p.conclusions) >= 3 for p in pool)):
            p1, p2 = rng.sample(pool, 2)
            pool.remove(p1)
            pool.remove(p2)
            o1, o2 = p1.output_indices()[0], p2.output_indices()[0]
            if rng.random() < 0.5:
                c1, c2 = o1, rng.randrange(len(p2.conclusions))
            else:
                c1, c2 = rng.randrange(len(p1.conclusions)), o2
            pool.append(join_tensor(p1, c1, p2, c2))
        else:
            cands = [p for p in pool if len(p.conclusions) >= 3]
            p = rng.choice(cands)
            pool.remove(p)
            n = len(p.conclusions)
            i = rng.randrange(n)
            pool.append(attach_par(p, i, (i + 1) % n))
    return pool[0]


def swap_tips(ps: ProofStructure, rng: random.Random) -> ProofStructure:
    """Exchange the axiom ids of two same-side tips of different axioms."""
    side = rng.choice([O, I])
    tips = [t for t in ps.tips() if t.side == side]
    if len(tips) < 2:
        return ps
    a, b = rng.sample(tips, 2)

    def swap(t):
        if t == a:
            return Tip(b.axiom, t.side, t.label)
        if t == b:
            return Tip(a.axiom, t.side, t.label)
        return t

    return ps.map_tips(swap)


# ---------------------------------------------------------------------------
# Brute force oracle
# ---------------------------------------------------------------------------


def _closed(nodes) -> bool:
    count: dict[int, int] = {}
    for n in nodes:
        for t in node_tips(n):
            count[t.axiom] = count.get(t.axiom, 0) + 1
    return all(v == 2 for v in count.values())


def brute_force_is_net(conclusions) -> bool:
    """Exhaustively try to undo the inductive constructors, in every order.

    No memoization and no shortcuts: every terminal link and every cyclic
    split is tried.
    """
    concl = list(conclusions)
    pols = [node_polarity(c) for c in concl]
    if None in pols or pols.count(OUTPUT) != 1:
        return False
    n = len(concl)
    if n == 2 and all(isinstance(c, Tip) for c in concl) and concl[0].axiom == concl[1].axiom:
        return True
    for i, c in enumerate(concl):
        if isinstance(c, Tip):
            continue
        if c.kind == PAR:
            if n >= 2 and brute_force_is_net(concl[:i] + [c.left, c.right] + concl[i + 1:]):
                return True
            continue
        rest = concl[i + 1:] + concl[:i]
        for j in range(len(rest) + 1):
            right = [c.right] + rest[:j]
            left = [c.left] + rest[j:]
            if _closed(right) and _closed(left):
                if brute_force_is_net(right) and brute_force_is_net(left):
                    return True
    return False


def switchings_ok(ps: ProofStructure) -> bool:
    """Every switching graph (one premise edge kept per par) is a tree."""
    nodes, fixed, pars = [], [], []
    tip_node: dict[tuple, int] = {}

    def walk(n):
        k = len(nodes)
        nodes.append(n)
        if isinstance(n, Tip):
            tip_node[(n.axiom, n.side)] = k
        else:
            left, right = walk(n.left), walk(n.right)
            if n.kind == PAR:
                pars.append((k, left, right))
            else:
                fixed.extend([(k, left), (k, right)])
        return k

    for c in ps.conclusions:
        walk(c)
    for ax in ps.axiom_ids():
        fixed.append((tip_node[(ax, O)], tip_node[(ax, I)]))
    for choice in itertools.product((0, 1), repeat=len(pars)):
        edges = fixed + [(p, l if bit == 0 else r) for (p, l, r), bit in zip(pars, choice)]
        if len(edges) != len(nodes) - 1:
            return False
        parent = list(range(len(nodes)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
    return True


# ---------------------------------------------------------------------------
# Small category spaces for exhaustive unification checks
# ---------------------------------------------------------------------------


def small_categories(atoms, depth: int) -> list:
    """Every category over ``atoms`` of tree height at most ``depth`` (atom = 1)."""
    level = [syntax.Atom(a) for a in atoms]
    out = list(level)
    for _ in range(depth - 1):
        nxt = []
        for a in out:
            for b in out:
                for ctor in (syntax.Under, syntax.Over, syntax.Prod):
                    nxt.append(ctor(a, b))
        out = list(dict.fromkeys(out + nxt))
    return out


def unifier_candidates() -> list:
    """Images for x1: all categories over {s, a, x1} of depth <= 2 and ground ones of depth <= 3."""
    return list(dict.fromkeys(small_categories(("s", "a", "x1"), 2) + small_categories(("s", "a"), 3)))


def factors_through(tau: dict, sigma: dict) -> bool:
    """Some rho has rho . sigma = tau on x1 (the only variable in play)."""
    from lambeklearn.unification import match

    x1 = syntax.Atom("x1")
    image = sigma.get("x1", x1)
    return match(image, tau.get("x1", x1), {}) is not None


def check_unification_space():
    """(pairs, unified pairs, failures) over the exhaustive small space."""
    from lambeklearn.unification import UnificationError, unify

    cats = small_categories(("s", "a", "x1"), 2)
    taus = [{"x1": c} for c in unifier_candidates()]
    pairs = unified = 0
    failures = []
    for c1 in cats:
        for c2 in cats:
            pairs += 1
            try:
                sigma = unify(c1, c2)
            except UnificationError:
                sigma = None
            if sigma is not None:
                unified += 1
                if syntax.subst_category(sigma, c1) != syntax.subst_category(sigma, c2):
                    failures.append(("unsound", c1, c2))
            for tau in taus:
                if syntax.subst_category(tau, c1) != syntax.subst_category(tau, c2):
                    continue
                if sigma is None:
                    failures.append(("missed unifier", c1, c2, tau))
                elif not factors_through(tau, sigma):
                    failures.append(("not most general", c1, c2, tau))
    return pairs, unified, failures


# ---------------------------------------------------------------------------
# Sequent calculus oracle
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _prove(gamma: tuple, c) -> bool:
    Atom, Under, Over, Prod = syntax.Atom, syntax.Under, syntax.Over, syntax.Prod
    if not gamma:
        return False
    if len(gamma) == 1 and gamma[0] == c and isinstance(c, Atom):
        return True
    if isinstance(c, Under) and _prove((c.arg,) + gamma, c.res):
        return True
    if isinstance(c, Over) and _prove(gamma + (c.arg,), c.res):
        return True
    if isinstance(c, Prod):
        for k in range(1, len(gamma)):
            if _prove(gamma[:k], c.left) and _prove(gamma[k:], c.right):
                return True
    for i, a in enumerate(gamma):
        left, right = gamma[:i], gamma[i + 1:]
        if isinstance(a, Prod) and _prove(left + (a.left, a.right) + right, c):
            return True
        if isinstance(a, Under):
            for k in range(len(left)):
                if _prove(left[k:], a.arg) and _prove(left[:k] + (a.res,) + right, c):
                    return True
        if isinstance(a, Over):
            for k in range(1, len(right) + 1):
                if _prove(right[:k], a.arg) and _prove(left + (a.res,) + right[k:], c):
                    return True
    return False


def derivable(antecedent, goal) -> bool:
    """Cut-free Gentzen search for the Lambek calculus with product."""
    return _prove(tuple(antecedent), goal)


def sequent_sentences(g, max_len: int) -> set:
    """Word classes of ``g`` whose category sequence derives s, expanded to sentences."""
    from lambeklearn.parser import word_classes

    classes = word_classes(g)
    found = set()
    for n in range(1, max_len + 1):
        for seq in itertools.product(range(len(classes)), repeat=n):
            reps = [classes[i][0] for i in seq]
            for choice in itertools.product(*(sorted(g.lex(w), key=str) for w in reps)):
                if derivable(choice, syntax.Atom(syntax.S)):
                    found.update(itertools.product(*(classes[i] for i in seq)))
                    break
    return found


# ---------------------------------------------------------------------------
# Grammars below a grammar
# ---------------------------------------------------------------------------


def _generalize(c):
    """Shapes of ``c`` with some subtrees cut to holes (``None``)."""
    yield None
    if isinstance(c, syntax.Atom):
        yield c
        return
    a, b = syntax.children(c)
    for x in _generalize(a):
        for y in _generalize(b):
            yield type(c)(*(x, y))


def _holes(c):
    if c is None:
        return 1
    if isinstance(c, syntax.Atom):
        return 0
    return sum(_holes(k) for k in syntax.children(c))


def _fill(c, names):
    if c is None:
        return syntax.var(next(names))
    if isinstance(c, syntax.Atom):
        return c
    a, b = syntax.children(c)
    left = _fill(a, names)
    return type(c)(left, _fill(b, names))


def _partitions(n):
    """Restricted growth strings of length ``n``."""
    def go(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in range(1, top + 2):
            yield from go(prefix + [k], max(top, k))

    yield from go([], 0)


def grammars_below_structural(g) -> set:
    """Canonical keys of rigid H with H below g, built from generalizations of g."""
    from lambeklearn.unification import subsumes

    words = g.words
    shapes = [list(_generalize(g.category(w))) for w in words]
    found = set()
    for combo in itertools.product(*shapes):
        n = sum(_holes(c) for c in combo)
        for rgs in _partitions(n):
            names = iter(rgs)
            h = syntax.Grammar({w: {_fill(c, names)} for w, c in zip(words, combo)})
            if subsumes(h, g):
                found.add(syntax.grammar_key(h))
    return found


def grammars_below_brute(g, n_vars: int) -> set:
    """The same set by brute force over all small categories."""
    from lambeklearn.unification import subsumes

    atoms = sorted({a.name for _, c in g.assignments() for a in syntax.atoms(c)})
    atoms += [f"x{i}" for i in range(1, n_vars + 1)]
    words = g.words
    pools = []
    for w in words:
        k = syntax.size(g.category(w))
        pools.append([c for c in small_categories(atoms, 2 if k > 1 else 1) if syntax.size(c) <= k])
    found = set()
    for combo in itertools.product(*pools):
        h = syntax.Grammar({w: {c} for w, c in zip(words, combo)})
        if subsumes(h, g):
            found.add(syntax.grammar_key(h))
    return found


# Acceptance verdicts, printed by the terminal summary hook in conftest.
RESULTS: dict = {}
