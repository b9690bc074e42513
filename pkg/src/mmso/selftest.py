"""Exhaustive checks of the library's central invariants.

Each ``check_*`` function returns an Outcome.  The acceptance tests and the
``mmso selftest`` command both run them.
"""

import random
import time
from dataclasses import dataclass

import numpy as np

from . import automata as AU
from . import corpus
from . import logic as LG
from .branchdec import (
    approx_branch_decomposition, bw_exact, connectivity_table, grouped_decomposition,
    lambda_minimize, width,
)
from .equiv import (
    all_class_counts, class_count, classes, dw_exact, dw_of_decomposition, gfq_label_bound,
    gfq_refinement,
)
from .matroid import contract, delete, dual, u2n_plus
from .parsetree import ParseAutomaton, build_auto, build_disconnected, build_via_2sum

DEFAULT_SEED = 20240611

SENTENCES = [
    "exists X1 Basis(X1)",
    "forall X1 Ind(X1)",
    "exists X1 card(X1,1,2)",
    "exists X1 (Ind(X1) & card(X1,0,2) & ~Empty(X1))",
    "forall X1 forall X2 (X1 <= X2 -> (Ind(X2) -> Ind(X1)))",
    "forall X1 X1 <= X1",
    "forall X1 forall X2 forall X3 ((X1 <= X2 & X2 <= X3) -> X1 <= X3)",
    "exists X1 (Basis(X1) & Coind(X1))",
    "forall X1 (Sing(X1) -> Ind(X1))",
    "forall X1 (Sing(X1) -> Coind(X1))",
    "forall X1 (Basis(X1) -> card(X1,1,2))",
    "exists X1 Circuit(X1)",
    "forall X1 forall X2 ((Circuit(X1) & Circuit(X2) & X1 <= X2) -> X2 <= X1)",
    "@matroid",
]


def sentence(s):
    return LG.stdlib()["matroid"] if s == "@matroid" else LG.parse(s)


@dataclass
class Outcome:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(name, fn, budget=None):
    t = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t
    if budget is not None and dt > budget:
        ok = False
        detail += f"; over the {budget}s budget"
    return Outcome(name, ok, detail, dt)


def _first(bad, cap=3):
    return "; ".join(bad[:cap]) + (" ..." if len(bad) > cap else "")


# ---------------------------------------------------------------- criteria

def _equivalence(pairs, builder):
    bad = []
    for name, M in pairs:
        P, _ = builder(M, self_check=False)
        table = np.array(P.independence_table())
        if not np.array_equal(table, M.table):
            Y = int(np.flatnonzero(table != M.table)[0])
            bad.append(f"{name} differs at {M.fmt(Y)}")
    return bad


def check_parse_tree_equivalence(max_n=9):
    def run():
        pairs = list(corpus.items(max_n))
        bad = _equivalence(pairs, build_auto)
        return not bad and len(pairs) >= 25, \
            f"{len(pairs)} matroids, {len(bad)} mismatches" + (": " + _first(bad) if bad else "")
    return _timed("parse-tree oracle equivalence", run, 60)


def check_compiler(max_n=6, sentences=SENTENCES):
    def run():
        bad, count = [], 0
        trees = {name: build_auto(M, self_check=False)[0] for name, M in corpus.items(max_n)}
        A_ind = ParseAutomaton()
        for s in sentences:
            f = sentence(s)
            for name, M in corpus.items(max_n):
                got = AU.accepts(LG.compile_formula(f, A_ind), trees[name].tree)
                want = LG.evaluate(M, f)
                count += 1
                if got != want:
                    bad.append(f"{name} / {s}: automaton {got}, evaluate {want}")
        return not bad and len(sentences) >= 10, \
            f"{len(sentences)} sentences, {count} pairs, {len(bad)} disagreements" \
            + (": " + _first(bad) if bad else "")
    return _timed("compiler agrees with evaluate", run, 120)


def _sweep(max_n, per_matroid):
    bad, total = [], 0
    for name, M in corpus.items(max_n):
        b, t = per_matroid(M)
        total += t
        bad.extend(f"{name}: {x}" for x in b)
    return bad, total


def check_class_lower_bound(max_n=7):
    def per(M):
        cc = all_class_counts(M)
        lam = connectivity_table(M)
        idx = np.flatnonzero(cc < lam + 1)
        return [f"U={M.fmt(int(u))} classes={cc[u]} λ={lam[u]}" for u in idx[:1]], len(cc)

    def run():
        bad, total = _sweep(max_n, per)
        return not bad, f"{total} sets checked, {len(bad)} violations" + (": " + _first(bad) if bad else "")
    return _timed("#classes(U) >= λ(U)+1", run)


def check_class_complement_bound(max_n=7):
    def per(M):
        cc = all_class_counts(M).astype(object)
        comp = cc[M.full ^ np.arange(1 << M.n)]
        bad = [f"U={M.fmt(u)}" for u in range(1 << M.n) if comp[u] > 2 ** cc[u]]
        return bad[:1], 1 << M.n

    def run():
        bad, total = _sweep(max_n, per)
        return not bad, f"{total} sets checked, {len(bad)} violations" + (": " + _first(bad) if bad else "")
    return _timed("#classes(E-U) <= 2^#classes(U)", run)


def check_dw_ge_bw(max_n=7):
    def run():
        bad, count = [], 0
        for name, M in corpus.items(max_n):
            dw, bw = dw_exact(M), bw_exact(M)[0]
            count += 1
            if dw < bw:
                bad.append(f"{name}: dw={dw} bw={bw}")
        return not bad, f"{count} matroids, {len(bad)} violations" + (": " + _first(bad) if bad else "")
    return _timed("dw >= bw", run)


def check_dw_minor_monotone(max_n=7):
    def run():
        bad, count = [], 0
        for name, M in corpus.items(max_n):
            d = dw_exact(M)
            for x in range(M.n):
                for op, N in (("\\", delete(M, 1 << x)), ("/", contract(M, 1 << x))):
                    count += 1
                    if N.n and dw_exact(N) > d:
                        bad.append(f"{name}{op}{M.names[x]}")
        return not bad, f"{count} single-element minors, {len(bad)} violations" \
            + (": " + _first(bad) if bad else "")
    return _timed("dw monotone under minors", run)


def random_automaton(rng, max_states=3, max_chars=3, density=0.6):
    nq = rng.randint(1, max_states)
    chars = "abc"[:rng.randint(1, max_chars)]
    states = list(range(nq))

    def image():
        if rng.random() > density:
            return set()
        return {q for q in states if rng.random() < 0.5} or {rng.choice(states)}
    d0 = {(a, ()): image() for a in chars}
    d2 = {(a, p, q): image() for a in chars for p in states for q in states}
    acc = [q for q in states if rng.random() < 0.4]
    return AU.ExplicitAutomaton(chars, states, acc, d0, d2)


def random_automata(seed=DEFAULT_SEED, count=120):
    rng = random.Random(seed)
    return [random_automaton(rng) for _ in range(count)]


def check_determinization(seed=DEFAULT_SEED, count=120, max_leaves=7):
    def run():
        bad = []
        for k, A in enumerate(random_automata(seed, count)):
            D = AU.determinize(A)
            profiles = AU.run_profiles([A, D], A.alphabet, max_leaves)
            for n, profs in profiles.items():
                if any(AU.accepts_set(A, p) != AU.accepts_set(D, d) for p, d in profs):
                    bad.append(f"automaton {k} at {n} leaves")
                    break
        return not bad, f"{count} random automata, trees up to {max_leaves} leaves, " \
            f"{len(bad)} disagreements" + (": " + _first(bad) if bad else "")
    return _timed("determinization preserves the language", run, 60)


def check_emptiness(seed=DEFAULT_SEED, count=120, max_leaves=6):
    def run():
        bad = []
        nonempty = 0
        for k, A in enumerate(random_automata(seed, count)):
            profiles = AU.run_profiles([A], A.alphabet, max_leaves)
            scan = any(AU.accepts_set(A, p[0]) for profs in profiles.values() for p in profs)
            w = AU.emptiness(A)
            nonempty += w is not None
            if (w is not None) != scan:
                bad.append(f"automaton {k}: emptiness says {w is None}, scan says {not scan}")
            elif w is not None and not AU.accepts(A, w):
                bad.append(f"automaton {k}: witness rejected")
        return not bad, f"{count} automata ({nonempty} nonempty), {len(bad)} problems" \
            + (": " + _first(bad) if bad else "")
    return _timed("emptiness matches exhaustive scan", run)


def check_coind_dual(max_n=6):
    def run():
        bad, count = [], 0
        f = LG.parse("Coind(X1)")
        for name, M in corpus.items(max_n):
            P, _ = build_auto(M, self_check=False)
            A = LG.compile_formula(f, ParseAutomaton())
            Md = dual(M)
            count += 1
            for Y in range(1 << M.n):
                if AU.accepts(A, P.encode(Y)) != bool(Md.table[Y]):
                    bad.append(f"{name} at {M.fmt(Y)}")
                    break
        return not bad, f"{count} matroids, {len(bad)} mismatches" + (": " + _first(bad) if bad else "")
    return _timed("Coind automaton accepts the dual's independent sets", run)


def brute_lambda_min(M, D1, D2):
    free = M.full & ~(D1 | D2)
    best = None
    sub = free
    while True:
        lam = M.connectivity(D1 | sub)
        best = lam if best is None else min(best, lam)
        if sub == 0:
            return best
        sub = (sub - 1) & free


def check_approximation(max_n=7):
    def run():
        bad, pairs, count = [], 0, 0
        for name, M in corpus.items(max_n):
            bw = bw_exact(M)[0]
            D = approx_branch_decomposition(M, bw)
            count += 1
            if width(M, D) > 3 * bw + 1:
                bad.append(f"{name}: width {width(M, D)} > 3*{bw}+1")
            # every disjoint pair (D1, D2): one base-3 digit per element
            for code in range(3 ** M.n):
                D1 = D2 = 0
                c = code
                for i in range(M.n):
                    c, r = divmod(c, 3)
                    if r == 1:
                        D1 |= 1 << i
                    elif r == 2:
                        D2 |= 1 << i
                Z = lambda_minimize(M, D1, D2)
                pairs += 1
                if Z & D1 != D1 or Z & D2 or M.connectivity(Z) != brute_lambda_min(M, D1, D2):
                    bad.append(f"{name}: λ-minimisation wrong for D1={M.fmt(D1)} D2={M.fmt(D2)}")
                    break
        return not bad, f"{count} matroids, {pairs} (D1,D2) pairs, {len(bad)} problems" \
            + (": " + _first(bad) if bad else "")
    return _timed("approximation width and λ-minimisation", run)


def check_gfq_refinement(max_n=8):
    def run():
        bad, sets = [], 0
        for name, M in corpus.tagged("linear"):
            if M.n > max_n:
                continue
            for U in range(1 << M.n):
                labels = gfq_refinement(M.linear, U)
                table = classes(M, U)
                seen = {}
                for X, lab in labels.items():
                    c = table.class_of(X)
                    if seen.setdefault(lab, c) != c:
                        bad.append(f"{name}: U={M.fmt(U)} label shared across classes")
                        break
                sets += 1
                bound = gfq_label_bound(M.linear.q, M.connectivity(U))
                if len(set(labels.values())) > bound:
                    bad.append(f"{name}: U={M.fmt(U)} has {len(set(labels.values()))} > {bound} labels")
        return not bad, f"{sets} sets U, {len(bad)} violations" + (": " + _first(bad) if bad else "")
    return _timed("GF(q) labels refine ∼_U within the subspace bound", run)


def check_parallel_pairs(ts=range(3, 7)):
    def run():
        bad, notes = [], []
        for t in ts:
            M = u2n_plus(t)
            groups = [[M.names[2 * i], M.names[2 * i + 1]] for i in range(t)]
            D = grouped_decomposition(M.names, groups)
            w = dw_of_decomposition(M, D)
            trans = M.mask([g[0] for g in groups])
            k = class_count(M, trans)
            notes.append(f"t={t}: max {w}, transversal {k}")
            if w > 5:
                bad.append(f"t={t}: {w} classes on a displayed set")
            if k < t:
                bad.append(f"t={t}: transversal has only {k} classes")
        return not bad, "; ".join(notes) + (" | " + _first(bad) if bad else "")
    return _timed("parallel pairs: <= 5 classes displayed, >= t on a transversal", run)


def check_two_sum_builders():
    def run():
        pairs = corpus.tagged("2sum")
        bad = _equivalence(pairs, build_via_2sum)
        disc = corpus.tagged("disconnected")
        bad += _equivalence(disc, build_disconnected)
        return not bad, f"{len(pairs)} connected, {len(disc)} disconnected, {len(bad)} mismatches" \
            + (": " + _first(bad) if bad else "")
    return _timed("2-sum and disconnected builders", run)


CHECKS = [
    ("1", check_parse_tree_equivalence),
    ("2", check_compiler),
    ("3", check_class_lower_bound),
    ("4", check_class_complement_bound),
    ("5", check_dw_ge_bw),
    ("6", check_dw_minor_monotone),
    ("7", check_determinization),
    ("8", check_emptiness),
    ("9", check_coind_dual),
    ("10", check_approximation),
    ("11", check_gfq_refinement),
    ("12", check_parallel_pairs),
    ("13", check_two_sum_builders),
]


def run_all(seed=DEFAULT_SEED, only=None):
    out = []
    for key, fn in CHECKS:
        if only and key not in only:
            continue
        if fn in (check_determinization, check_emptiness):
            o = fn(seed=seed)
        else:
            o = fn()
        o.name = f"[{key}] {o.name}"
        out.append(o)
    return out
