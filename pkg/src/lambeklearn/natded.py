"""Product-free natural deduction and its correspondence with cut-free proof nets.

A deduction is a tree of :class:`Hyp`, :class:`IntroL`, :class:`IntroR`,
:class:`ElimL` and :class:`ElimR` nodes.  Discharge marks are not stored:
``IntroL`` always discharges the leftmost free hypothesis of its premise and
``IntroR`` the rightmost.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Union

from . import syntax
from .proofnet import (
    I,
    PAR,
    Link,
    ProofNet,
    ProofStructure,
    Tip,
    attach_par,
    build_axiom,
    join_tensor,
    node_formula,
    node_polarity,
    validate,
)
from .syntax import INPUT, OUTPUT, Atom, Category, Over, ParseError, Under, parse_category


class IllFormed(ValueError):
    pass


class NotNormal(ValueError):
    pass


class NotProductFree(ValueError):
    pass


@dataclass(frozen=True)
class Hyp:
    cat: Category


@dataclass(frozen=True)
class IntroL:
    body: "NatDed"


@dataclass(frozen=True)
class IntroR:
    body: "NatDed"


@dataclass(frozen=True)
class ElimL:
    minor: "NatDed"
    major: "NatDed"


@dataclass(frozen=True)
class ElimR:
    major: "NatDed"
    minor: "NatDed"


NatDed = Union[Hyp, IntroL, IntroR, ElimL, ElimR]


def analyse(d: NatDed) -> tuple[Category, list]:
    """Conclusion and free hypotheses (left to right) of ``d``.

    Raises :class:`IllFormed` when a rule is misapplied.
    """
    if isinstance(d, Hyp):
        if not syntax.is_product_free(d.cat):
            raise IllFormed(f"hypothesis {d.cat} contains a product")
        return d.cat, [d.cat]
    if isinstance(d, (IntroL, IntroR)):
        b, hyps = analyse(d.body)
        if len(hyps) < 2:
            raise IllFormed("an introduction needs at least two free hypotheses")
        if isinstance(d, IntroL):
            return Under(hyps[0], b), hyps[1:]
        return Over(b, hyps[-1]), hyps[:-1]
    if isinstance(d, ElimL):
        a, h1 = analyse(d.minor)
        f, h2 = analyse(d.major)
        if not (isinstance(f, Under) and f.arg == a):
            raise IllFormed(f"cannot eliminate {f} with {a} on the left")
        return f.res, h1 + h2
    if isinstance(d, ElimR):
        f, h1 = analyse(d.major)
        a, h2 = analyse(d.minor)
        if not (isinstance(f, Over) and f.arg == a):
            raise IllFormed(f"cannot eliminate {f} with {a} on the right")
        return f.res, h1 + h2
    raise TypeError(f"not a deduction: {d!r}")


def conclusion(d: NatDed) -> Category:
    return analyse(d)[0]


def hypotheses(d: NatDed) -> list:
    return analyse(d)[1]


def height(d: NatDed) -> int:
    if isinstance(d, Hyp):
        return 0
    if isinstance(d, (IntroL, IntroR)):
        return 1 + height(d.body)
    return 1 + max(height(d.major), height(d.minor))


def is_normal(d: NatDed) -> bool:
    """No elimination whose major premise ends with the matching introduction."""
    if isinstance(d, Hyp):
        return True
    if isinstance(d, (IntroL, IntroR)):
        return is_normal(d.body)
    if isinstance(d, ElimL) and isinstance(d.major, IntroL):
        return False
    if isinstance(d, ElimR) and isinstance(d.major, IntroR):
        return False
    return is_normal(d.major) and is_normal(d.minor)


# ---------------------------------------------------------------------------
# Deduction to net
# ---------------------------------------------------------------------------


def _index_of_tip(p: ProofStructure, axiom: int, side: str) -> int:
    for i, c in enumerate(p.conclusions):
        if any(t.axiom == axiom and t.side == side for t in _tips(c)):
            return i
    raise KeyError(axiom)


def _tips(n):
    if isinstance(n, Tip):
        yield n
    else:
        yield from _tips(n.left)
        yield from _tips(n.right)


def _net(d: NatDed, fresh) -> ProofNet:
    if isinstance(d, Hyp):
        return build_axiom(syntax.to_linear(d.cat, OUTPUT), fresh)
    if isinstance(d, IntroL):
        p = _net(d.body, fresh)
        n = len(p.conclusions)
        return attach_par(p, n - 2, n - 1)
    if isinstance(d, IntroR):
        p = _net(d.body, fresh)
        return attach_par(p, len(p.conclusions) - 1, 0)
    # Walk the principal branch up to the head hypothesis.
    branch = []
    node = d
    while isinstance(node, (ElimL, ElimR)):
        branch.append(node)
        node = node.major
    net = build_axiom(syntax.to_linear(conclusion(d), OUTPUT), fresh)
    head = net.conclusions[0].axiom  # its I tip stays inside the principal node
    for rule in branch:
        minor = _net(rule.minor, fresh)
        out = len(minor.conclusions) - 1
        idx = _index_of_tip(net, head, I)
        if isinstance(rule, ElimL):
            net = join_tensor(net, idx, minor, out)
        else:
            net = join_tensor(minor, out, net, idx)
    return net


def nd_to_pn(d: NatDed) -> ProofNet:
    """Cut-free proof net with conclusions ``-Hn, ..., -H1, +C``."""
    analyse(d)
    if not is_normal(d):
        raise NotNormal("deduction contains a detour")
    return validate(_net(d, itertools.count(1)))


# ---------------------------------------------------------------------------
# Net to deduction
# ---------------------------------------------------------------------------


class _Nav:
    """Paths into a net's conclusion trees, with parent access."""

    def __init__(self, p: ProofStructure):
        self.p = p
        self.tip_path = {}
        for i, c in enumerate(p.conclusions):
            self._walk(c, (i,))

    def _walk(self, n, path):
        if isinstance(n, Tip):
            self.tip_path[(n.axiom, n.side)] = path
        else:
            self._walk(n.left, path + ("l",))
            self._walk(n.right, path + ("r",))

    def node(self, path):
        n = self.p.conclusions[path[0]]
        for step in path[1:]:
            n = n.left if step == "l" else n.right
        return n


def _category(n, want: str) -> Category:
    f = node_formula(n)
    cat, pol = syntax.from_linear(f)
    if pol != want:
        raise NotProductFree(f"{f} does not have {want} polarity")
    if not syntax.is_product_free(cat):
        raise NotProductFree(f"{cat} contains a product")
    return cat


def _up(nav: _Nav, path) -> NatDed:
    n = nav.node(path)
    if isinstance(n, Link):
        if n.kind != PAR or node_polarity(n) != OUTPUT:
            raise NotProductFree(f"output node {n} is not an implication")
        if node_polarity(n.right) == OUTPUT:
            return IntroL(_up(nav, path + ("r",)))
        return IntroR(_up(nav, path + ("l",)))
    cur = nav.tip_path[(n.axiom, I)]
    args = []
    while len(cur) > 1:
        parent = nav.node(cur[:-1])
        if parent.kind == PAR:
            if node_polarity(parent) != OUTPUT:
                raise NotProductFree(f"input node {parent} is a product")
            break
        if node_polarity(parent) != INPUT:
            raise NotProductFree(f"output node {parent} is a product")
        other = "r" if cur[-1] == "l" else "l"
        args.append((cur[-1], cur[:-1] + (other,)))
        cur = cur[:-1]
    d: NatDed = Hyp(_category(nav.node(cur), INPUT))
    for eps, minor in reversed(args):
        if eps == "l":
            d = ElimL(_up(nav, minor), d)
        else:
            d = ElimR(d, _up(nav, minor))
    return d


def pn_to_nd(p: ProofStructure) -> NatDed:
    """Normal deduction read off a cut-free product-free proof net."""
    net = validate(p)
    if not net.is_labelled:
        raise ValueError("the net must be fully labelled")
    for c in net.conclusions:
        _category(c, node_polarity(c))
    nav = _Nav(net)
    (i,) = net.output_indices()
    d = _up(nav, (i,))
    analyse(d)
    return d


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def format_nd(d: NatDed) -> str:
    if isinstance(d, Hyp):
        return f"(hyp {d.cat})"
    if isinstance(d, IntroL):
        return f"(introL {format_nd(d.body)})"
    if isinstance(d, IntroR):
        return f"(introR {format_nd(d.body)})"
    if isinstance(d, ElimL):
        return f"(elimL {format_nd(d.minor)} {format_nd(d.major)})"
    return f"(elimR {format_nd(d.major)} {format_nd(d.minor)})"


_ARITY = {"introL": 1, "introR": 1, "elimL": 2, "elimR": 2}


def parse_nd(text: str) -> NatDed:
    """Read ``(hyp C)``, ``(introL D)``, ``(introR D)``, ``(elimL D1 D2)`` or
    ``(elimR D1 D2)``; elimL lists the minor premise first, elimR the major."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expr():
        nonlocal pos
        skip()
        if pos >= len(text) or text[pos] != "(":
            raise ParseError(f"expected '(' at offset {pos}")
        pos += 1
        skip()
        start = pos
        while pos < len(text) and text[pos].isalpha():
            pos += 1
        head = text[start:pos]
        if head == "hyp":
            depth, start = 0, pos
            while pos < len(text) and not (text[pos] == ")" and depth == 0):
                depth += {"(": 1, ")": -1}.get(text[pos], 0)
                pos += 1
            if pos >= len(text):
                raise ParseError("unterminated (hyp ...)")
            d = Hyp(parse_category(text[start:pos]))
        elif head in _ARITY:
            subs = [expr() for _ in range(_ARITY[head])]
            d = {
                "introL": lambda: IntroL(subs[0]),
                "introR": lambda: IntroR(subs[0]),
                "elimL": lambda: ElimL(subs[0], subs[1]),
                "elimR": lambda: ElimR(subs[0], subs[1]),
            }[head]()
            skip()
        else:
            raise ParseError(f"unknown rule {head!r}")
        if pos >= len(text) or text[pos] != ")":
            raise ParseError(f"expected ')' at offset {pos}")
        pos += 1
        return d

    d = expr()
    skip()
    if pos != len(text):
        raise ParseError(f"trailing text at offset {pos}")
    try:
        analyse(d)
    except IllFormed as e:
        raise ParseError(str(e)) from None
    return d


# ---------------------------------------------------------------------------
# Random normal deductions
# ---------------------------------------------------------------------------


def random_category(rng: random.Random, atoms=("s", "np", "cn"), depth: int = 1) -> Category:
    if depth <= 0 or rng.random() < 0.5:
        return Atom(rng.choice(atoms))
    a = random_category(rng, atoms, depth - 1)
    b = random_category(rng, atoms, depth - 1)
    return Under(a, b) if rng.random() < 0.5 else Over(b, a)


def random_normal(rng: random.Random, depth: int = 6, atoms=("s", "np", "cn")) -> NatDed:
    """A random normal deduction of height at most ``depth``."""

    def any_(k):
        r = rng.random()
        if k == 0 or r < 0.1:
            return Hyp(random_category(rng, atoms))
        if r < 0.4:
            body = any_(k - 1)
            if len(hypotheses(body)) >= 2:
                return IntroL(body) if rng.random() < 0.5 else IntroR(body)
            return body
        return neutral(Atom(rng.choice(atoms)) if rng.random() < 0.7 else random_category(rng, atoms), k)

    def neutral(c, k):
        if k == 0 or rng.random() < 0.3:
            return Hyp(c)
        minor = any_(k - 1)
        g = conclusion(minor)
        if rng.random() < 0.5:
            return ElimL(minor, neutral(Under(g, c), k - 1))
        return ElimR(neutral(Over(c, g), k - 1), minor)

    return any_(depth)
