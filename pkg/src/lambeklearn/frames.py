"""S proof frames: proof nets whose axiom labels are erased except the main ``s``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import syntax
from .proofnet import (
    O,
    ProofNet,
    ProofStructure,
    Tip,
    ValidationError,
    node_formula,
    parse_structure,
    validate,
)
from .syntax import Lit, ParseError


class OutputNotS(ValueError):
    pass


class NotAFrame(ParseError):
    pass


@dataclass(frozen=True)
class ProofFrame(ProofNet):
    @property
    def main_axiom(self) -> int:
        return main_axiom(self)


def main_axiom(p: ProofStructure) -> int:
    out = p.rotated()[-1]
    if not (isinstance(out, Tip) and out.label == Lit(syntax.S)):
        raise OutputNotS(f"output conclusion {out} is not the s end of an axiom")
    return out.axiom


def _as_frame(ps: ProofStructure) -> ProofFrame:
    net = validate(ps)
    return ProofFrame(net.conclusions, net.witness)


def erase(p: ProofStructure) -> ProofFrame:
    """Erase every axiom label to O/I except the main s axiom."""
    keep = main_axiom(p)
    return _as_frame(p.map_tips(lambda t: t if t.axiom == keep else Tip(t.axiom, t.side)))


def to_frame(ps: ProofStructure) -> ProofFrame:
    """Check that ``ps`` is a frame (validating it) and wrap it."""
    keep = main_axiom(ps)
    for t in ps.tips():
        if t.axiom != keep and t.label is not None:
            raise NotAFrame(f"axiom {t.axiom} is labelled in a frame")
    try:
        return _as_frame(ps)
    except ValidationError as e:
        raise NotAFrame(f"not a proof frame: {e.kind}: {e}") from None


def most_general_labelling(f: ProofStructure, fresh=None, by_axiom: bool = False) -> ProofNet:
    """Label each non-s axiom with its own fresh variable.

    With ``by_axiom`` the variable for axiom ``k`` is ``xk`` instead of being
    drawn from ``fresh``.
    """
    if fresh is None:
        fresh = itertools.count(1)
    keep = main_axiom(f)
    names: dict[int, str] = {}
    for k in f.axiom_ids():
        if k != keep:
            names[k] = f"x{k}" if by_axiom else f"x{next(fresh)}"

    def label(t):
        if t.axiom == keep:
            return t
        return Tip(t.axiom, t.side, Lit(names[t.axiom], t.side != O))

    net = validate(f.map_tips(label))
    return net


def frame_key(f: ProofStructure) -> str:
    return f.canonical()


def frame_iso(f1: ProofStructure, f2: ProofStructure) -> bool:
    return frame_key(f1) == frame_key(f2)


# ---------------------------------------------------------------------------
# Examples: sentences with their frames
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Example:
    words: tuple
    frame: ProofFrame

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        n = len(self.frame.conclusions) - 1
        if n != len(self.words):
            raise NotAFrame(
                f"frame has {n} word conclusions but the sentence has {len(self.words)} words"
            )

    @property
    def key(self) -> tuple:
        return (self.words, frame_key(self.frame))

    def word_conclusions(self) -> list:
        """Conclusion node of each word, in sentence order."""
        return list(reversed(self.frame.rotated()[:-1]))

    def __str__(self):
        return f"words: {' '.join(self.words)}\nframe: {self.frame}"


def word_categories(sentence, net: ProofStructure) -> list:
    """Lambek category of each word read off a labelled net (sentence order)."""
    concl = net.rotated()
    out = []
    for node in reversed(concl[:-1]):
        f = node_formula(node)
        cat, pol = syntax.from_linear(f)
        if pol != syntax.INPUT:
            raise ValueError(f"word conclusion {f} is not an input formula")
        out.append(cat)
    return out


def parse_examples(text: str) -> list[Example]:
    """Parse blocks of ``words:`` / ``frame:`` lines separated by blank lines."""
    examples = []
    words = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tag, sep, rest = line.partition(":")
        tag = tag.strip()
        if tag == "words" and sep:
            if words is not None:
                raise ParseError(f"line {lineno}: 'words' without a 'frame'")
            words = rest.split()
        elif tag == "frame" and sep:
            if words is None:
                raise ParseError(f"line {lineno}: 'frame' without 'words'")
            try:
                examples.append(Example(tuple(words), to_frame(parse_structure(rest))))
            except (ParseError, OutputNotS) as e:
                raise ParseError(f"line {lineno}: {e}") from None
            words = None
        else:
            raise ParseError(f"line {lineno}: expected 'words:' or 'frame:'")
    if words is not None:
        raise ParseError("dangling 'words' line at end of input")
    return examples


def format_examples(examples) -> str:
    return "\n\n".join(str(e) for e in examples) + ("\n" if examples else "")
