"""Proof structures and proof nets for the Lambek calculus with product.

A structure is a cyclically ordered list of conclusion trees built from
tensor/par links whose leaves are axiom tips.  A tip carries its axiom id,
its side (``O`` for the output end, ``I`` for the input end) and, optionally,
the linear formula it stands for.  Tips may sit on compound formulae
(complex axioms).

Text form mirrors indexed terms::

    s~#1*(s#2|np~#3), np#3*(s~#4*np#5), (np~#5|s#4)*s~#2, s#1

Unlabelled tips are written ``O#k`` / ``I#k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from . import syntax
from .syntax import INPUT, OUTPUT, Formula, Lit, Par, ParseError, Tensor

O, I = "O", "I"
TENSOR, PAR = "*", "|"


@dataclass(frozen=True)
class Tip:
    axiom: int
    side: str
    label: Formula | None = None

    def __str__(self):
        if self.label is None:
            return f"{self.side}#{self.axiom}"
        return f"{syntax._wrap(self.label)}#{self.axiom}"


@dataclass(frozen=True)
class Link:
    kind: str
    left: "Node"
    right: "Node"

    def __str__(self):
        return f"{_wrap(self.left)}{self.kind}{_wrap(self.right)}"


Node = Union[Tip, Link]


def _wrap(n: Node) -> str:
    return str(n) if isinstance(n, Tip) else f"({n})"


def node_polarity(n: Node) -> str | None:
    if isinstance(n, Tip):
        return OUTPUT if n.side == O else INPUT
    kind = Tensor if n.kind == TENSOR else Par
    return syntax.combine(kind, node_polarity(n.left), node_polarity(n.right))


def node_formula(n: Node) -> Formula | None:
    """Formula at ``n``, or ``None`` if some tip below is unlabelled."""
    if isinstance(n, Tip):
        return n.label
    left, right = node_formula(n.left), node_formula(n.right)
    if left is None or right is None:
        return None
    return (Tensor if n.kind == TENSOR else Par)(left, right)


def node_tips(n: Node) -> Iterator[Tip]:
    if isinstance(n, Tip):
        yield n
    else:
        yield from node_tips(n.left)
        yield from node_tips(n.right)


def map_tips(n: Node, fn) -> Node:
    """Rebuild ``n`` with every tip replaced by ``fn(tip)`` (a node)."""
    if isinstance(n, Tip):
        return fn(n)
    return Link(n.kind, map_tips(n.left, fn), map_tips(n.right, fn))


class MalformedStructure(ParseError):
    """Tips do not form a perfect matching of opposite sides."""


class ValidationError(ValueError):
    kind = "Invalid"


class NotIntuitionistic(ValidationError):
    kind = "NotIntuitionistic"


class AxiomsCross(ValidationError):
    kind = "AxiomsCross"


class Cyclic(ValidationError):
    kind = "Cyclic"


class EmptyAntecedent(ValidationError):
    kind = "EmptyAntecedent"


class IllPolarized(ValidationError, syntax.IllPolarized):
    kind = "IllPolarized"


class ConstructionError(ValueError):
    pass


class BothInputs(ConstructionError):
    pass


class NotAdjacent(ConstructionError):
    pass


class WouldEmptyAntecedent(ConstructionError):
    pass


class AtomicAxiom(ConstructionError):
    pass


class Unlabelled(ValueError):
    """An operation needs formula labels that the structure does not carry."""


@dataclass(frozen=True)
class ProofStructure:
    conclusions: tuple

    def __post_init__(self):
        object.__setattr__(self, "conclusions", tuple(self.conclusions))
        sides: dict[int, list[str]] = {}
        for t in self.tips():
            sides.setdefault(t.axiom, []).append(t.side)
        for k, ss in sides.items():
            if sorted(ss) != [I, O]:
                raise MalformedStructure(f"axiom {k} has tips {ss}; need one O and one I")

    def __str__(self):
        return ", ".join(str(c) for c in self.conclusions)

    def tips(self) -> list[Tip]:
        return [t for c in self.conclusions for t in node_tips(c)]

    def axiom_ids(self) -> list[int]:
        seen = []
        for t in self.tips():
            if t.axiom not in seen:
                seen.append(t.axiom)
        return seen

    def tip(self, axiom: int, side: str) -> Tip:
        for t in self.tips():
            if t.axiom == axiom and t.side == side:
                return t
        raise KeyError(axiom)

    def axiom_label(self, axiom: int) -> Formula | None:
        """Formula on the output end of ``axiom``."""
        return self.tip(axiom, O).label

    @property
    def is_labelled(self) -> bool:
        return all(t.label is not None for t in self.tips())

    def output_indices(self) -> list[int]:
        return [i for i, c in enumerate(self.conclusions) if node_polarity(c) == OUTPUT]

    def output(self) -> Node:
        (i,) = self.output_indices()
        return self.conclusions[i]

    def rotated(self) -> tuple:
        """Conclusions rotated so that the unique output comes last."""
        outs = self.output_indices()
        if len(outs) != 1:
            return self.conclusions
        k = outs[0] + 1
        return self.conclusions[k:] + self.conclusions[:k]

    def map_tips(self, fn) -> "ProofStructure":
        return ProofStructure(tuple(map_tips(c, fn) for c in self.conclusions))

    def apply_subst(self, sigma) -> "ProofStructure":
        def relabel(t):
            if t.label is None:
                return t
            return Tip(t.axiom, t.side, syntax.subst_formula(sigma, t.label))

        return self.map_tips(relabel)

    def strip_labels(self) -> "ProofStructure":
        return self.map_tips(lambda t: Tip(t.axiom, t.side))

    def renumbered(self, start: int = 1) -> "ProofStructure":
        """Axiom ids renumbered by first occurrence, reading left to right."""
        ids = {k: i for i, k in enumerate(self.axiom_ids(), start)}
        return self.map_tips(lambda t: Tip(ids[t.axiom], t.side, t.label))

    def canonical(self) -> str:
        rot = ProofStructure(self.rotated())
        return str(rot.renumbered())


@dataclass(frozen=True)
class ProofNet(ProofStructure):
    """A structure that passed :func:`validate`, with its build tree.

    The witness is a nested tuple: ``("axiom", k)``, ``("par", link, sub)`` or
    ``("tensor", link, left_part, right_part)``.
    """

    witness: tuple = field(default=(), compare=False, repr=False)

    def apply_subst(self, sigma) -> "ProofNet":
        return validate(ProofStructure.apply_subst(self, sigma))


def conclusions_of(p: ProofStructure) -> list[Formula]:
    """Conclusion formulae, anchored so the unique output comes last."""
    out = []
    for c in p.rotated():
        f = node_formula(c)
        if f is None:
            raise Unlabelled("structure is not labelled; compute a labelling first")
        out.append(f)
    return out


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def planar(tips: Iterable[Tip]) -> bool:
    """True iff the axiom links, read around the cycle, are well nested."""
    stack: list[int] = []
    for t in tips:
        if stack and stack[-1] == t.axiom:
            stack.pop()
        else:
            stack.append(t.axiom)
    return not stack


class _Index:
    """Integer view of a structure's nodes for the sequentialization search."""

    def __init__(self, conclusions):
        self.nodes: list[Node] = []
        self.kind: list[str] = []
        self.kids: list[tuple[int, int]] = []
        self.pol: list[str | None] = []
        self.odd: list[frozenset] = []
        self.roots = tuple(self._add(c) for c in conclusions)

    def _add(self, n: Node) -> int:
        if isinstance(n, Tip):
            kids, kind, odd = (-1, -1), "tip", frozenset([n.axiom])
            pol = OUTPUT if n.side == O else INPUT
        else:
            left, right = self._add(n.left), self._add(n.right)
            kids, kind, odd = (left, right), n.kind, self.odd[left] ^ self.odd[right]
            pol = syntax.combine(
                Tensor if n.kind == TENSOR else Par, self.pol[left], self.pol[right]
            )
        self.nodes.append(n)
        self.kind.append(kind)
        self.kids.append(kids)
        self.pol.append(pol)
        self.odd.append(odd)
        return len(self.nodes) - 1


def _norm(state: tuple) -> tuple:
    k = state.index(min(state))
    return state[k:] + state[:k]


def sequentialize(conclusions, allow_empty: bool = False):
    """Search for a build tree by undoing the inductive constructors.

    Returns the witness tuple or ``None``.  Terminal par links are always
    undone first (doing so never loses a solution); terminal tensors and the
    split point of the remaining conclusions are tried exhaustively, with
    memoization on the cyclic list of conclusion nodes.  ``allow_empty``
    lifts the rule that a par may not produce a single-conclusion net.
    """
    ix = _Index(conclusions)
    memo: dict[tuple, tuple | None] = {}

    def search(state: tuple):
        key = _norm(state)
        if key in memo:
            return memo[key]
        memo[key] = None
        memo[key] = result = attempt(state)
        return result

    def attempt(state):
        n = len(state)
        pols = [ix.pol[x] for x in state]
        if None in pols or pols.count(OUTPUT) != 1:
            return None
        for i, x in enumerate(state):
            if ix.kind[x] == PAR:
                if n < 2 and not allow_empty:
                    return None
                sub = search(state[:i] + ix.kids[x] + state[i + 1:])
                return None if sub is None else ("par", ix.nodes[x], sub)
        if n == 2 and all(ix.kind[x] == "tip" for x in state):
            a, b = (ix.nodes[x] for x in state)
            return ("axiom", a.axiom) if a.axiom == b.axiom else None
        for i, x in enumerate(state):
            if ix.kind[x] != TENSOR:
                continue
            left, right = ix.kids[x]
            rest = state[i + 1:] + state[:i]
            acc = ix.odd[right]
            for j in range(len(rest) + 1):
                if j:
                    acc = acc ^ ix.odd[rest[j - 1]]
                if acc:
                    continue
                right_part = (right,) + rest[:j]
                left_part = (left,) + rest[j:]
                wr = search(right_part)
                if wr is None:
                    continue
                wl = search(left_part)
                if wl is not None:
                    return ("tensor", ix.nodes[x], wl, wr)
        return None

    return search(ix.roots)


def _check_labels(ps: ProofStructure):
    tips: dict[int, dict[str, Tip]] = {}
    for t in ps.tips():
        tips.setdefault(t.axiom, {})[t.side] = t
    for k, d in tips.items():
        out, inp = d[O].label, d[I].label
        if out is None and inp is None:
            continue
        if out is None or inp is None:
            raise IllPolarized(f"axiom {k} is labelled on one end only")
        if syntax.polarity(out) != OUTPUT:
            raise IllPolarized(f"axiom {k}: output end {out} is not an output formula")
        if syntax.dual(out) != inp:
            raise IllPolarized(f"axiom {k}: {inp} is not the dual of {out}")


def validate(ps: ProofStructure) -> ProofNet:
    """Decide the correctness criterion; return the net with a build witness."""
    _check_labels(ps)
    if not planar(ps.tips()):
        raise AxiomsCross("axiom links cross")
    outs = ps.output_indices()
    if len(outs) != 1:
        raise NotIntuitionistic(f"{len(outs)} output conclusions; exactly one required")
    witness = sequentialize(ps.conclusions)
    if witness is None:
        if sequentialize(ps.conclusions, allow_empty=True) is not None:
            raise EmptyAntecedent("some sub-net would have a single conclusion")
        raise Cyclic("no sequentialization exists (switching cycle)")
    return ProofNet(ps.rotated(), witness)


def is_net(ps: ProofStructure) -> bool:
    try:
        validate(ps)
    except ValidationError:
        return False
    return True


# ---------------------------------------------------------------------------
# Inductive constructors
# ---------------------------------------------------------------------------


def _fresh(fresh):
    return itertools.count(1) if fresh is None else fresh


def build_axiom(f: Formula, fresh=None) -> ProofNet:
    if syntax.polarity(f) != OUTPUT:
        raise IllPolarized(f"{f} is not an output formula")
    k = next(_fresh(fresh))
    return ProofNet((Tip(k, I, syntax.dual(f)), Tip(k, O, f)), ("axiom", k))


def _disjoint(p1: ProofStructure, p2: ProofNet) -> ProofNet:
    taken = set(p1.axiom_ids())
    if not taken & set(p2.axiom_ids()):
        return p2
    shift = max(taken)
    ps = p2.map_tips(lambda t: Tip(t.axiom + shift, t.side, t.label))
    return validate(ps)


def join_tensor(p1: ProofNet, c1: int, p2: ProofNet, c2: int) -> ProofNet:
    """Tensor conclusion ``c1`` of ``p1`` (left) with ``c2`` of ``p2`` (right)."""
    p2 = _disjoint(p1, p2)
    left, right = p1.conclusions[c1], p2.conclusions[c2]
    if node_polarity(left) != OUTPUT and node_polarity(right) != OUTPUT:
        raise BothInputs("at least one premise of a tensor must be an output")
    link = Link(TENSOR, left, right)
    after2 = p2.conclusions[c2 + 1:] + p2.conclusions[:c2]
    after1 = p1.conclusions[c1 + 1:] + p1.conclusions[:c1]
    concl = ProofStructure((link,) + after2 + after1)
    return ProofNet(concl.rotated(), ("tensor", link, p1.witness, p2.witness))


def attach_par(p: ProofNet, left: int, right: int) -> ProofNet:
    """Par two cyclically consecutive conclusions ``left``, ``right``."""
    n = len(p.conclusions)
    if n < 3:
        raise WouldEmptyAntecedent("a par on a two-conclusion net leaves one conclusion")
    if right != (left + 1) % n:
        raise NotAdjacent(f"conclusions {left} and {right} are not consecutive")
    cs = p.conclusions
    link = Link(PAR, cs[left], cs[right])
    if right == 0:
        new = (link,) + cs[1:left]
    else:
        new = cs[:left] + (link,) + cs[right + 1:]
    return ProofNet(ProofStructure(new).rotated(), ("par", link, p.witness))


# ---------------------------------------------------------------------------
# Eta expansion
# ---------------------------------------------------------------------------


def _side(f: Formula) -> str:
    return O if syntax.polarity(f) == OUTPUT else I


def eta_expand(p: ProofStructure, axiom: int, fresh=None) -> ProofNet:
    """Replace a complex axiom by axioms on its immediate subformulae."""
    out = p.axiom_label(axiom)
    if out is None:
        raise Unlabelled(f"axiom {axiom} carries no formula")
    if isinstance(out, Lit):
        raise AtomicAxiom(f"axiom {axiom} is already atomic")
    if fresh is None:
        fresh = itertools.count(max(p.axiom_ids()) + 1)
    a, b = next(fresh), next(fresh)
    f, g = out.left, out.right
    fd, gd = syntax.dual(f), syntax.dual(g)
    out_node = Link(
        TENSOR if isinstance(out, Tensor) else PAR, Tip(a, _side(f), f), Tip(b, _side(g), g)
    )
    in_node = Link(
        PAR if isinstance(out, Tensor) else TENSOR, Tip(b, _side(gd), gd), Tip(a, _side(fd), fd)
    )

    def swap(t):
        if t.axiom != axiom:
            return t
        return out_node if t.side == O else in_node

    return validate(p.map_tips(swap))


def eta_expand_all(p: ProofStructure, fresh=None) -> ProofNet:
    net = validate(p)
    if fresh is None:
        fresh = itertools.count(max(net.axiom_ids()) + 1)
    while True:
        todo = [k for k in net.axiom_ids() if not isinstance(net.axiom_label(k), Lit)]
        if not todo:
            return net
        net = eta_expand(net, todo[0], fresh)


# ---------------------------------------------------------------------------
# Text syntax
# ---------------------------------------------------------------------------


def parse_structure(text: str) -> ProofStructure:
    ts = syntax._Tokens(text)
    concl = [_conclusion(ts)]
    while ts.peek() == ",":
        ts.next()
        concl.append(_conclusion(ts))
    ts.done()
    return ProofStructure(tuple(concl))


def _conclusion(ts):
    n = _expr(ts)
    if not isinstance(n, (Tip, Link)):
        raise ParseError(f"conclusion {n} has no axiom tips in {ts.text!r}")
    return n


def _expr(ts):
    left = _prim(ts)
    if ts.peek() in (TENSOR, PAR):
        op = ts.next()
        right = _prim(ts)
        if ts.peek() in (TENSOR, PAR):
            raise ParseError(f"parenthesize nested links in {ts.text!r}")
        nodes = [isinstance(x, (Tip, Link)) for x in (left, right)]
        if all(nodes):
            return Link(op, left, right)
        if any(nodes):
            raise ParseError(f"link mixes a formula and tips in {ts.text!r}")
        return (Tensor if op == TENSOR else Par)(left, right)
    return left


def _axiom_id(ts) -> int:
    t = ts.next()
    if not t.isdigit() or int(t) < 1:
        raise ParseError(f"bad axiom id {t!r} in {ts.text!r}")
    return int(t)


def _prim(ts):
    t = ts.next()
    if t == "(":
        inner = _expr(ts)
        ts.expect(")")
    elif t in (O, I):
        ts.expect("#")
        return Tip(_axiom_id(ts), t)
    else:
        syntax.Atom(t)
        neg = ts.peek() == "~"
        if neg:
            ts.next()
        inner = Lit(t, neg)
    if ts.peek() == "#":
        ts.next()
        if isinstance(inner, (Tip, Link)):
            raise ParseError(f"tips inside an axiom label in {ts.text!r}")
        if syntax.polarity(inner) is None:
            raise ParseError(f"axiom label {inner} is ill-polarized")
        return Tip(_axiom_id(ts), _side(inner), inner)
    return inner
