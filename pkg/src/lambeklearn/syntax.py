"""Lambek categories, polarized linear formulae, substitutions and grammars.

Concrete syntax
---------------
Categories: ``A\\B`` (argument ``A`` on the left), ``B/A`` (argument on the
right) and ``A*B`` (product).  Atoms are lowercase identifiers; variables are
``x`` followed by digits; ``s`` is the distinguished constant.  Nesting always
needs parentheses, there is no precedence: ``(np\\s)/np``.

Linear formulae: ``*`` is tensor, ``|`` is par, and ``~`` marks a negated
atom (``np~``).  Negation of compound formulae is computed with :func:`dual`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

S = "s"
OUTPUT = "output"
INPUT = "input"

_VAR_RE = re.compile(r"x\d+\Z")
_ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    """Raised on malformed category, formula or grammar text."""


class IllPolarized(ValueError):
    """A linear formula fits neither the output nor the input grammar."""


def is_variable_name(name: str) -> bool:
    return bool(_VAR_RE.match(name))


# ---------------------------------------------------------------------------
# Categories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not _ATOM_RE.match(self.name):
            raise ParseError(f"bad atom name {self.name!r}")

    @property
    def is_variable(self) -> bool:
        return is_variable_name(self.name)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Under:
    """``arg\\res``: consumes ``arg`` on its left."""

    arg: "Category"
    res: "Category"

    def __str__(self):
        return f"{_wrap(self.arg)}\\{_wrap(self.res)}"


@dataclass(frozen=True)
class Over:
    """``res/arg``: consumes ``arg`` on its right."""

    res: "Category"
    arg: "Category"

    def __str__(self):
        return f"{_wrap(self.res)}/{_wrap(self.arg)}"


@dataclass(frozen=True)
class Prod:
    left: "Category"
    right: "Category"

    def __str__(self):
        return f"{_wrap(self.left)}*{_wrap(self.right)}"


Category = Union[Atom, Under, Over, Prod]


def _wrap(c) -> str:
    return str(c) if isinstance(c, (Atom, Lit)) else f"({c})"


def var(n: int) -> Atom:
    return Atom(f"x{n}")


def children(c: Category) -> tuple:
    if isinstance(c, Atom):
        return ()
    if isinstance(c, Under):
        return (c.arg, c.res)
    if isinstance(c, Over):
        return (c.res, c.arg)
    return (c.left, c.right)


def size(c: Category) -> int:
    """Number of atom occurrences."""
    if isinstance(c, Atom):
        return 1
    return sum(size(k) for k in children(c))


def atoms(c: Category) -> Iterator[Atom]:
    """Atom occurrences, left to right."""
    if isinstance(c, Atom):
        yield c
    else:
        for k in children(c):
            yield from atoms(k)


def variables(c: Category) -> set[str]:
    return {a.name for a in atoms(c) if a.is_variable}


def is_product_free(c: Category) -> bool:
    if isinstance(c, Prod):
        return False
    return all(is_product_free(k) for k in children(c))


# ---------------------------------------------------------------------------
# Linear formulae
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    atom: str
    neg: bool = False

    def __str__(self):
        return self.atom + ("~" if self.neg else "")


@dataclass(frozen=True)
class Tensor:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left)}*{_wrap(self.right)}"


@dataclass(frozen=True)
class Par:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left)}|{_wrap(self.right)}"


Formula = Union[Lit, Tensor, Par]


def polarity(f: Formula) -> str | None:
    """``OUTPUT``, ``INPUT`` or ``None`` when ``f`` is ill-polarized."""
    if isinstance(f, Lit):
        return INPUT if f.neg else OUTPUT
    return combine(type(f), polarity(f.left), polarity(f.right))


def combine(kind, left: str | None, right: str | None) -> str | None:
    """Polarity of a binary link from the polarities of its premises."""
    if left is None or right is None:
        return None
    if kind is Tensor:
        if left == right == OUTPUT:
            return OUTPUT
        return INPUT if left != right else None
    if left == right == INPUT:
        return INPUT
    return OUTPUT if left != right else None


def dual(f: Formula) -> Formula:
    if isinstance(f, Lit):
        return Lit(f.atom, not f.neg)
    if isinstance(f, Tensor):
        return Par(dual(f.right), dual(f.left))
    return Tensor(dual(f.right), dual(f.left))


def is_heterogeneous(f: Formula) -> bool:
    """True for the product-free fragment: every link joins opposite polarities."""
    if isinstance(f, Lit):
        return True
    pl, pr = polarity(f.left), polarity(f.right)
    return (
        pl is not None
        and pr is not None
        and pl != pr
        and is_heterogeneous(f.left)
        and is_heterogeneous(f.right)
    )


def to_linear(c: Category, pol: str = OUTPUT) -> Formula:
    """``+c`` for ``OUTPUT``, ``-c`` for ``INPUT``."""
    if pol not in (OUTPUT, INPUT):
        raise ValueError(f"unknown polarity {pol!r}")
    out = pol == OUTPUT
    if isinstance(c, Atom):
        return Lit(c.name, not out)
    if isinstance(c, Prod):
        if out:
            return Tensor(to_linear(c.left, OUTPUT), to_linear(c.right, OUTPUT))
        return Par(to_linear(c.right, INPUT), to_linear(c.left, INPUT))
    if isinstance(c, Under):
        if out:
            return Par(to_linear(c.arg, INPUT), to_linear(c.res, OUTPUT))
        return Tensor(to_linear(c.res, INPUT), to_linear(c.arg, OUTPUT))
    if out:
        return Par(to_linear(c.res, OUTPUT), to_linear(c.arg, INPUT))
    return Tensor(to_linear(c.arg, OUTPUT), to_linear(c.res, INPUT))


def from_linear(f: Formula) -> tuple[Category, str]:
    pol = polarity(f)
    if pol is None:
        raise IllPolarized(f"{f} is neither an output nor an input formula")
    return _from_linear(f), pol


def _from_linear(f: Formula) -> Category:
    if isinstance(f, Lit):
        return Atom(f.atom)
    g, h = f.left, f.right
    pg, ph = polarity(g), polarity(h)
    if isinstance(f, Tensor):
        if pg == ph == OUTPUT:
            return Prod(_from_linear(g), _from_linear(h))
        if pg == OUTPUT:  # +M * -N  is  -(N/M)
            return Over(_from_linear(h), _from_linear(g))
        return Under(_from_linear(h), _from_linear(g))  # -N * +M  is  -(M\N)
    if pg == ph == INPUT:  # -N | -M  is  -(M*N)
        return Prod(_from_linear(h), _from_linear(g))
    if pg == INPUT:
        return Under(_from_linear(g), _from_linear(h))
    return Over(_from_linear(g), _from_linear(h))


def formula_atoms(f: Formula) -> Iterator[Lit]:
    if isinstance(f, Lit):
        yield f
    else:
        yield from formula_atoms(f.left)
        yield from formula_atoms(f.right)


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------

Substitution = Mapping[str, Category]
"""Maps variable names to categories; unmapped variables and ``s`` are fixed."""


def subst_category(sigma: Substitution, c: Category) -> Category:
    if not sigma:
        return c
    if isinstance(c, Atom):
        return sigma.get(c.name, c) if c.is_variable else c
    if isinstance(c, Under):
        return Under(subst_category(sigma, c.arg), subst_category(sigma, c.res))
    if isinstance(c, Over):
        return Over(subst_category(sigma, c.res), subst_category(sigma, c.arg))
    return Prod(subst_category(sigma, c.left), subst_category(sigma, c.right))


def subst_formula(sigma: Substitution, f: Formula) -> Formula:
    """Polarity-preserving: ``x`` becomes ``+T`` and ``x~`` becomes ``-T``."""
    if not sigma:
        return f
    if isinstance(f, Lit):
        if is_variable_name(f.atom) and f.atom in sigma:
            return to_linear(sigma[f.atom], INPUT if f.neg else OUTPUT)
        return f
    return type(f)(subst_formula(sigma, f.left), subst_formula(sigma, f.right))


def apply_subst(sigma: Substitution, target):
    """Apply ``sigma`` to a category, a linear formula or a grammar."""
    if isinstance(target, (Atom, Under, Over, Prod)):
        return subst_category(sigma, target)
    if isinstance(target, (Lit, Tensor, Par)):
        return subst_formula(sigma, target)
    if isinstance(target, Grammar):
        return Grammar(
            {
                w: frozenset(subst_category(sigma, c) for c in cs)
                for w, cs in target.lexicon.items()
            }
        )
    raise TypeError(f"cannot substitute into {type(target).__name__}")


def compose_subst(tau: Substitution, sigma: Substitution) -> dict[str, Category]:
    """The substitution ``tau . sigma`` (apply ``sigma`` first)."""
    out = {x: subst_category(tau, c) for x, c in sigma.items()}
    for x, c in tau.items():
        out.setdefault(x, c)
    return {x: c for x, c in out.items() if c != Atom(x)}


def is_renaming(sigma: Substitution) -> bool:
    images = list(sigma.values())
    return all(isinstance(c, Atom) and c.is_variable for c in images) and len(
        {c.name for c in images}
    ) == len(images)


def format_subst(sigma: Substitution) -> str:
    keys = sorted(sigma, key=lambda x: (len(x), x))
    return "\n".join(f"{x} := {sigma[x]}" for x in keys)


# ---------------------------------------------------------------------------
# Grammars
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grammar:
    """Lexicon from words to finite sets of categories.

    An empty set marks a word whose categories failed to unify during learning.
    """

    lexicon: Mapping[str, frozenset]

    def __post_init__(self):
        object.__setattr__(
            self,
            "lexicon",
            {w: frozenset(cs) for w, cs in sorted(self.lexicon.items())},
        )

    def __hash__(self):
        return hash(tuple(self.lexicon.items()))

    @classmethod
    def from_assignments(cls, pairs: Iterable[tuple[str, Category]]) -> "Grammar":
        lex: dict[str, set] = {}
        for w, c in pairs:
            lex.setdefault(w, set()).add(c)
        return cls(lex)

    def lex(self, word: str) -> frozenset:
        return self.lexicon.get(word, frozenset())

    @property
    def words(self) -> list[str]:
        return list(self.lexicon)

    def valency(self) -> int:
        return max((len(cs) for cs in self.lexicon.values()), default=0)

    def is_rigid(self) -> bool:
        return self.valency() <= 1

    def is_k_valued(self, k: int) -> bool:
        return self.valency() <= k

    @property
    def size(self) -> int:
        return sum(size(c) for cs in self.lexicon.values() for c in cs)

    def variables(self) -> set[str]:
        return {v for cs in self.lexicon.values() for c in cs for v in variables(c)}

    def dropped(self) -> list[str]:
        return [w for w, cs in self.lexicon.items() if not cs]

    def category(self, word: str) -> Category:
        """The sole category of ``word`` in a rigid grammar."""
        (c,) = self.lexicon[word]
        return c

    def assignments(self) -> Iterator[tuple[str, Category]]:
        for w, cs in self.lexicon.items():
            for c in sorted(cs, key=str):
                yield w, c

    def __str__(self):
        return format_grammar(self)


def variabilize(g: Grammar) -> Grammar:
    """Replace every constant other than ``s`` by a variable, consistently.

    Only ``s`` is a genuine constant for learning; mnemonic names such as
    ``np`` stand for anonymous base categories.
    """
    used = {int(v[1:]) for v in g.variables()}
    nxt = max(used, default=0) + 1
    mapping: dict[str, Atom] = {}
    for c in (c for _, c in g.assignments()):
        for a in atoms(c):
            if a.name != S and not a.is_variable and a.name not in mapping:
                mapping[a.name] = var(nxt)
                nxt += 1
    return Grammar(
        {w: frozenset(_rename_constants(mapping, c) for c in cs) for w, cs in g.lexicon.items()}
    )


def _rename_constants(mapping, c):
    if isinstance(c, Atom):
        return mapping.get(c.name, c)
    return type(c)(*(_rename_constants(mapping, k) for k in children(c)))


# Canonical renaming -------------------------------------------------------


def _shape(c: Category, numbering: Mapping[str, int] | None = None) -> str:
    if isinstance(c, Atom):
        if not c.is_variable:
            return c.name
        if numbering is not None and c.name in numbering:
            return f"x{numbering[c.name]}"
        return "?"
    inner = [_shape(k, numbering) for k in children(c)]
    op = {Under: "\\", Over: "/", Prod: "*"}[type(c)]
    return f"({inner[0]}{op}{inner[1]})"


def _signatures(g: Grammar) -> dict[str, tuple]:
    """Renaming-invariant description of where each variable occurs."""
    occ: dict[str, list] = {}
    for w, cs in g.lexicon.items():
        for c in cs:
            shape = _shape(c)
            for pos, a in enumerate(atoms(c)):
                if a.is_variable:
                    occ.setdefault(a.name, []).append((w, shape, pos))
    return {v: tuple(sorted(o)) for v, o in occ.items()}


_TIE_BUDGET = 2000


def canonicalize(g: Grammar) -> Grammar:
    """Canonical representative of the renaming class of ``g``.

    Variables are renumbered ``x1, x2, ...`` by first occurrence, reading words
    in sorted order and each word's categories in a renaming-invariant order.
    Remaining ties are explored exhaustively (up to a budget) and the smallest
    rendering wins.
    """
    sigs = _signatures(g)
    words = list(g.lexicon)
    best: list = [None, None]
    budget = [_TIE_BUDGET]

    def key(c, numbering):
        fresh = [sigs[a.name] for a in atoms(c) if a.is_variable and a.name not in numbering]
        return (_shape(c, numbering), tuple(fresh))

    def number(c, numbering):
        numbering = dict(numbering)
        for a in atoms(c):
            if a.is_variable and a.name not in numbering:
                numbering[a.name] = len(numbering) + 1
        return numbering

    def search(wi, remaining, numbering, rendered):
        if best[0] is not None and budget[0] <= 0:
            return
        if remaining is None:
            if wi == len(words):
                budget[0] -= 1
                if best[0] is None or rendered < best[0]:
                    best[0], best[1] = rendered, numbering
                return
            remaining = tuple(g.lexicon[words[wi]])
            rendered = rendered + ((words[wi], ()),)
            if not remaining:
                search(wi + 1, None, numbering, rendered)
                return
        keys = {c: key(c, numbering) for c in remaining}
        low = min(keys.values())
        for c in sorted((c for c in remaining if keys[c] == low), key=str):
            nb = number(c, numbering)
            w, done = rendered[-1]
            step = rendered[:-1] + ((w, done + (_shape(c, nb),)),)
            rest = tuple(d for d in remaining if d != c)
            if rest:
                search(wi, rest, nb, step)
            else:
                search(wi + 1, None, nb, step)

    search(0, None, {}, ())
    numbering = best[1] or {}
    sigma = {v: var(n) for v, n in numbering.items()}
    return apply_subst(sigma, g)


def grammar_key(g: Grammar) -> str:
    return format_grammar(canonicalize(g))


def equal_up_to_renaming(g1: Grammar, g2: Grammar) -> bool:
    return grammar_key(g1) == grammar_key(g2)


# ---------------------------------------------------------------------------
# Text syntax
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:([A-Za-z0-9_]+)|(.))")


def tokenize(text: str) -> list[str]:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        toks.append(m.group(1) or m.group(2))
        pos = m.end()
    return [t for t in toks if t.strip()]


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        self.i += 1
        return t

    def expect(self, tok):
        t = self.next()
        if t != tok:
            raise ParseError(f"expected {tok!r}, found {t!r} in {self.text!r}")

    def done(self):
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r} in {self.text!r}")


_CAT_OPS = {"\\": lambda a, b: Under(a, b), "/": lambda a, b: Over(a, b), "*": Prod}


def parse_category(text: str) -> Category:
    ts = _Tokens(text)
    c = _cat_expr(ts)
    ts.done()
    return c


def _cat_expr(ts):
    left = _cat_prim(ts)
    if ts.peek() in _CAT_OPS:
        op = ts.next()
        right = _cat_prim(ts)
        if ts.peek() in _CAT_OPS:
            raise ParseError(f"parenthesize nested connectives in {ts.text!r}")
        return _CAT_OPS[op](left, right)
    return left


def _cat_prim(ts):
    t = ts.next()
    if t == "(":
        c = _cat_expr(ts)
        ts.expect(")")
        return c
    return Atom(t)


def parse_formula(text: str) -> Formula:
    ts = _Tokens(text)
    f = _formula_expr(ts)
    ts.done()
    return f


def _formula_expr(ts):
    left = _formula_prim(ts)
    if ts.peek() in ("*", "|"):
        kind = Tensor if ts.next() == "*" else Par
        right = _formula_prim(ts)
        if ts.peek() in ("*", "|"):
            raise ParseError(f"parenthesize nested connectives in {ts.text!r}")
        return kind(left, right)
    return left


def _formula_prim(ts):
    t = ts.next()
    if t == "(":
        f = _formula_expr(ts)
        ts.expect(")")
        return f
    Atom(t)  # validates the name
    neg = False
    if ts.peek() == "~":
        ts.next()
        neg = True
    return Lit(t, neg)


def parse_grammar(text: str) -> Grammar:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, sep, cat = line.partition(":")
        word = word.strip()
        if not sep or not word or " " in word:
            raise ParseError(f"line {lineno}: expected 'word : category'")
        try:
            pairs.append((word, parse_category(cat)))
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}") from None
    return Grammar.from_assignments(pairs)


def format_grammar(g: Grammar) -> str:
    lines = []
    for w, cs in g.lexicon.items():
        if not cs:
            lines.append(f"# {w} : (no category; unification failed)")
        for c in sorted(cs, key=str):
            lines.append(f"{w} : {c}")
    return "\n".join(lines) + ("\n" if lines else "")
