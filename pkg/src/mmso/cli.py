"""Command-line front end: ``mmso <verb> ...``.

Results go to stdout as ``key=value`` lines; diagnostics are single lines on
stderr.  Exit status: 0 true/success, 1 false/counterexample, 2 usage or
input error, 3 resource cap.
"""

import argparse
import sys
from pathlib import Path

from . import automata as AU
from . import corpus
from . import logic as LG
from . import matroid as MT
from .branchdec import EXACT_CAP, bw_exact
from .equiv import classes, dw_exact
from .parsetree import build_auto, format_ptree, model_check

OK, FALSE, USAGE, CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class CapError(Exception):
    pass


def _emit(**kv):
    for k, v in kv.items():
        if isinstance(v, bool):
            v = str(v).lower()
        print(f"{k}={v}")


def _existing(path):
    p = Path(path)
    if not p.exists() or p.is_dir():
        raise UsageError(f"no such file: {path}")
    return p


def _load_matroid(path):
    try:
        return MT.parse_matroid(_existing(path).read_text(encoding="utf-8"))
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def _sentence_text(arg):
    """A file path if one exists, otherwise the argument itself."""
    p = Path(arg)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    if arg.endswith(".cms"):
        raise UsageError(f"no such file: {arg}")
    return arg


def _load_sentence(arg):
    text = _sentence_text(arg)
    if text.strip() == "@matroid":
        return LG.stdlib()["matroid"]
    try:
        f = LG.parse(text)
    except LG.ParseError as e:
        raise UsageError(f"sentence: {e}") from None
    if LG.free_vars(f):
        raise UsageError("sentence has free variables: "
                         + ", ".join(f"X{i}" for i in sorted(LG.free_vars(f))))
    return f


def _out_dir(path):
    p = Path(path)
    if p.exists() and not p.is_dir():
        raise UsageError(f"not a directory: {path}")
    p.mkdir(parents=True, exist_ok=True)
    return p


def _cap(M, cap, what):
    if M.n > cap:
        raise CapError(f"{what} needs |E| <= {cap} (have {M.n}); raise --exact-cap")


# ---------------------------------------------------------------- verbs

def cmd_check(a):
    M = _load_matroid(a.matroid)
    f = _load_sentence(a.sentence)
    res = model_check(M, f, method=a.method)
    _emit(result=res)
    return OK if res else FALSE


def cmd_evaluate(a):
    M = _load_matroid(a.matroid)
    f = _load_sentence(a.sentence)
    res = LG.evaluate(M, f)
    _emit(result=res)
    return OK if res else FALSE


def cmd_dw(a):
    M = _load_matroid(a.matroid)
    _cap(M, a.exact_cap, "dw")
    _emit(dw=dw_exact(M, cap=a.exact_cap))
    return OK


def cmd_bw(a):
    M = _load_matroid(a.matroid)
    _cap(M, a.exact_cap, "bw")
    _emit(bw=bw_exact(M, cap=a.exact_cap)[0])
    return OK


def cmd_classes(a):
    M = _load_matroid(a.matroid)
    names = [x for x in a.set.split(",") if x] if a.set else []
    try:
        U = M.mask(names)
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        table = classes(M, U)
    except ValueError as e:
        raise CapError(str(e)) from None
    if a.tsv:
        Path(a.tsv).write_text(table.to_tsv(M), encoding="utf-8")
    _emit(classes=table.count)
    return OK


def cmd_parsetree(a):
    M = _load_matroid(a.matroid)
    out = _out_dir(a.output)
    stem = Path(a.matroid).stem
    P, A = build_auto(M)
    aut, pt = out / f"{stem}.aut", out / f"{stem}.ptree"
    aut.write_text(AU.format_automaton(A), encoding="utf-8")
    pt.write_text(format_ptree(P), encoding="utf-8")
    _emit(states=len(A.states), leaves=M.n, automaton=aut, ptree=pt)
    return OK


def cmd_decide(a):
    from .decide import decide_theorem

    try:
        A = AU.parse_automaton(_existing(a.automaton).read_text(encoding="utf-8"))
    except ValueError as e:
        raise UsageError(f"{a.automaton}: {e}") from None
    psi = _load_sentence(a.psi)
    tau = _load_sentence(a.tau) if a.tau else None
    out = _out_dir(a.output) if a.output else None
    v = decide_theorem(A, psi, tau)
    if v.theorem:
        _emit(result="theorem")
        return OK
    _emit(result="counterexample", elements=v.system.n)
    if out:
        (out / "witness.tree").write_text(AU.format_tree(v.tree) + "\n", encoding="utf-8")
        (out / "witness.matroid").write_text(MT.format_matroid(v.system), encoding="utf-8")
        _emit(witness=out / "witness.matroid",
              witness_is_matroid=MT.verify_matroid_axioms(v.system)[0])
    return FALSE


def cmd_dual(a):
    M = _load_matroid(a.matroid)
    text = MT.format_matroid(MT.dual(M))
    if a.output:
        Path(a.output).write_text(text, encoding="utf-8")
        _emit(dual=a.output, rank=M.n - M.r)
    else:
        sys.stdout.write(text)
    return OK


def cmd_corpus(a):
    if a.action == "list":
        for name in corpus.names():
            M = corpus.get(name)
            print(f"name={name} n={M.n} rank={M.r}")
        return OK
    if not a.name:
        raise UsageError("corpus emit needs a name")
    try:
        M = corpus.get(a.name)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    text = MT.format_matroid(M)
    if a.output:
        Path(a.output).write_text(text, encoding="utf-8")
        _emit(written=a.output)
    else:
        sys.stdout.write(text)
    return OK


def cmd_selftest(a):
    from .selftest import run_all

    only = set(a.only.split(",")) if a.only else None
    outcomes = run_all(seed=a.seed, only=only)
    for o in outcomes:
        print(o.line())
    failed = sum(not o.ok for o in outcomes)
    _emit(passed=len(outcomes) - failed, failed=failed)
    return OK if failed == 0 else FALSE


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser():
    from .selftest import DEFAULT_SEED

    p = _Parser(prog="mmso", description="Counting-MSO model checking on small matroids.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    for verb, fn, doc in (("check", cmd_check, "decide a sentence via the parse-tree automaton"),
                          ("evaluate", cmd_evaluate, "decide a sentence by brute force")):
        s = sub.add_parser(verb, help=doc)
        s.add_argument("matroid")
        s.add_argument("sentence", help="sentence file (.cms) or inline text; @matroid for the axioms")
        if verb == "check":
            s.add_argument("--method", choices=("auto", "build", "2sum"), default="auto")
        s.set_defaults(fn=fn)

    for verb, fn in (("dw", cmd_dw), ("bw", cmd_bw)):
        s = sub.add_parser(verb, help=f"exact {verb}")
        s.add_argument("matroid")
        s.add_argument("--exact-cap", type=int, default=EXACT_CAP)
        s.set_defaults(fn=fn)

    s = sub.add_parser("classes", help="number of classes of ∼_U")
    s.add_argument("matroid")
    s.add_argument("--set", default="", help="comma-separated elements of U")
    s.add_argument("--tsv", help="also write the class table here")
    s.set_defaults(fn=cmd_classes)

    s = sub.add_parser("parsetree", help="build a parse tree and its automaton")
    s.add_argument("action", choices=("build",))
    s.add_argument("matroid")
    s.add_argument("-o", "--output", required=True, help="output directory")
    s.set_defaults(fn=cmd_parsetree)

    s = sub.add_parser("decide", help="theoremhood over the trees of an automaton")
    s.add_argument("psi")
    s.add_argument("--automaton", required=True)
    s.add_argument("--tau")
    s.add_argument("-o", "--output", help="directory for witness files")
    s.set_defaults(fn=cmd_decide)

    s = sub.add_parser("dual", help="dual matroid")
    s.add_argument("matroid")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_dual)

    s = sub.add_parser("corpus", help="named fixtures")
    s.add_argument("action", choices=("list", "emit"))
    s.add_argument("name", nargs="?")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_corpus)

    s = sub.add_parser("selftest", help="run the invariant suites")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None):
    try:
        args = make_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as e:
        print(f"mmso: error: {e}", file=sys.stderr)
        return USAGE
    except (CapError, AU.StateCapError) as e:
        print(f"mmso: resource cap: {e}", file=sys.stderr)
        return CAP
    except OSError as e:
        print(f"mmso: error: {e}", file=sys.stderr)
        return USAGE
    except ValueError as e:
        print(f"mmso: error: {' '.join(str(e).split())}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
