"""Command-line interface: ``lambeklearn <command> ...``.

Exit status is 0 on success, 1 when the answer is negative (invalid net,
non-membership, unification failure, no convergence) and 2 on unreadable
input or bad usage.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import learner, natded, parser, proofnet
from .frames import Example, format_examples, most_general_labelling, parse_examples, word_categories
from .syntax import ParseError, format_grammar, format_subst, parse_category, parse_grammar
from .unification import UnificationError, unify


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _emit_kv(out, pairs):
    for k, v in pairs:
        out.write(f"{k}={v}\n")


def _grammar(path):
    return parse_grammar(_read(path))


def _examples(path):
    return parse_examples(_read(path))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_learn(args, out, err) -> int:
    g = learner.rg(_examples(args.examples))
    text = format_grammar(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "kv":
        _emit_kv(out, [("word." + w, c) for w, c in g.assignments()])
        _emit_kv(out, [("dropped", ",".join(g.dropped()))])
    elif not args.out:
        out.write(text)
    if g.dropped():
        err.write(f"no category for: {', '.join(g.dropped())} (unification failed)\n")
        return 1
    return 0


def cmd_check(args, out, err) -> int:
    g = _grammar(args.grammar)
    status = 0
    for i, e in enumerate(_examples(args.examples), 1):
        try:
            ok = parser.match_frame(g, e.words, e.frame) is not None
        except (parser.UnknownWord, parser.ArityMismatch) as exc:
            err.write(f"example {i}: {exc}\n")
            ok = False
        if args.format == "kv":
            out.write(f"example.{i}={'generated' if ok else 'not_generated'}\n")
        else:
            out.write(f"{i}: {'generated' if ok else 'NOT generated'}: {' '.join(e.words)}\n")
        status = status or (0 if ok else 1)
    return status


def cmd_parse(args, out, err) -> int:
    g = _grammar(args.grammar)
    sentence = args.sentence.split()
    try:
        frames = parser.parse(g, sentence, args.max_candidates)
    except parser.UnknownWord as e:
        err.write(f"{e}\n")
        return 1
    except parser.TooManyCandidates as e:
        err.write(f"{e}\n")
        return 1
    if args.format == "kv":
        _emit_kv(out, [("frames", len(frames))])
        _emit_kv(out, [(f"frame.{i}", f) for i, f in enumerate(frames, 1)])
    else:
        out.write(format_examples([Example(tuple(sentence), f) for f in frames]))
    if not frames:
        err.write("no frame: the sentence is not generated\n")
        return 1
    return 0


def cmd_validate(args, out, err) -> int:
    status = 0
    for lineno, line in _lines(_read(args.file)):
        try:
            ps = proofnet.parse_structure(line)
        except ParseError as e:
            raise InputError(f"line {lineno}: {e}") from None
        try:
            proofnet.validate(ps)
            verdict = "valid"
        except proofnet.ValidationError as e:
            verdict = e.kind
            status = 1
        if args.format == "kv":
            out.write(f"line.{lineno}={verdict}\n")
        else:
            out.write(f"{verdict}: {line}\n")
    return status


def cmd_label(args, out, err) -> int:
    for i, e in enumerate(_examples(args.examples), 1):
        net = most_general_labelling(e.frame, by_axiom=args.by_axiom)
        cats = word_categories(e.words, net)
        if args.format == "kv":
            out.write(f"net.{i}={net}\n")
            for w, c in zip(e.words, cats):
                out.write(f"word.{i}.{w}={c}\n")
        else:
            out.write(f"words: {' '.join(e.words)}\nnet: {net}\n")
            for w, c in zip(e.words, cats):
                out.write(f"  {w} : {c}\n")
            out.write("\n")
    return 0


def cmd_unify(args, out, err) -> int:
    c1, c2 = parse_category(args.cat1), parse_category(args.cat2)
    try:
        sigma = unify(c1, c2)
    except UnificationError as e:
        if args.format == "kv":
            out.write(f"result={e.kind}\n")
        else:
            out.write(f"{e.kind}: {e}\n")
        return 1
    if args.format == "kv":
        _emit_kv(out, [("result", "unified")] + [(v, sigma[v]) for v in sorted(sigma)])
    else:
        text = format_subst(sigma)
        out.write(text + "\n" if text else "(identity)\n")
    return 0


def cmd_nd2pn(args, out, err) -> int:
    status = 0
    for lineno, line in _lines(_read(args.file)):
        try:
            d = natded.parse_nd(line)
        except ParseError as e:
            raise InputError(f"line {lineno}: {e}") from None
        try:
            out.write(f"{natded.nd_to_pn(d).canonical()}\n")
        except natded.NotNormal as e:
            err.write(f"line {lineno}: {e}\n")
            status = 1
    return status


def cmd_pn2nd(args, out, err) -> int:
    status = 0
    for lineno, line in _lines(_read(args.file)):
        try:
            ps = proofnet.parse_structure(line)
        except ParseError as e:
            raise InputError(f"line {lineno}: {e}") from None
        try:
            out.write(natded.format_nd(natded.pn_to_nd(ps)) + "\n")
        except (proofnet.ValidationError, natded.NotProductFree, ValueError) as e:
            err.write(f"line {lineno}: {type(e).__name__}: {e}\n")
            status = 1
    return status


def cmd_simulate(args, out, err) -> int:
    g = _grammar(args.grammar)
    order = "shuffle" if args.seed is not None else args.order
    seed = 0 if args.seed is None else args.seed
    try:
        rep = learner.converge(g, args.max_len, order, seed)
    except learner.EmptyLanguageBelowBound as e:
        err.write(f"{e}\n")
        return 1
    if args.format != "kv":
        out.write(f"examples read: {rep.n_examples}\n")
        if rep.stabilized:
            out.write(f"stabilized after example {rep.stabilization_index}\n")
        else:
            out.write("not stabilized within the bound\n")
        out.write("final grammar:\n")
        out.write(format_grammar(rep.final))
    out.write(rep.kv() + "\n")
    return 0 if rep.stabilized else 1


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lambeklearn", description="Learn rigid Lambek grammars from proof frames."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "kv"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", parents=[common], help="learn a rigid grammar from examples")
    p.add_argument("--examples", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("check", parents=[common], help="check that a grammar generates examples")
    p.add_argument("--grammar", required=True)
    p.add_argument("--examples", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("parse", parents=[common], help="all frames of a sentence")
    p.add_argument("--grammar", required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--max-candidates", type=int, default=parser.DEFAULT_MAX_CANDIDATES)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("validate", parents=[common], help="check proof structures, one per line")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("label", parents=[common], help="most general labelling of frames")
    p.add_argument("--examples", required=True)
    p.add_argument("--by-axiom", action="store_true", help="name variables after axiom ids")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("unify", parents=[common], help="most general unifier of two categories")
    p.add_argument("cat1")
    p.add_argument("cat2")
    p.set_defaults(func=cmd_unify)

    p = sub.add_parser("nd2pn", parents=[common], help="natural deductions to proof nets")
    p.add_argument("file")
    p.set_defaults(func=cmd_nd2pn)

    p = sub.add_parser("pn2nd", parents=[common], help="proof nets to natural deductions")
    p.add_argument("file")
    p.set_defaults(func=cmd_pn2nd)

    p = sub.add_parser("simulate", parents=[common], help="convergence run on a target grammar")
    p.add_argument("--grammar", required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--order", choices=("canonical", "shuffle"), default="canonical")
    p.add_argument("--seed", type=int, help="shuffle the examples with this seed")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR, stream=err)
    try:
        return args.func(args, out, err)
    except (InputError, ParseError) as e:
        err.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
