"""The acceptance criteria as runnable checks with a deterministic report.

Each check returns a :class:`CriterionResult`; details never contain timings
so the report is byte-identical across runs and thread counts.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .correspondence import (
    correspondence_check, fo_equivalent, hand_forms, sahlqvist_correspondent,
)
from .duality import (
    InvariantViolation, double_dual_check, is_tight, f2_completion, filter_completion,
    frame_double_dual_check, lattice_iso_report, modal_complex_algebra, modal_dual,
    modal_round_trip,
)
from .enumeration import census_lattices, enumerate_frames
from .order import (
    Filter, complex_algebra, is_filter, lattice_props, lattice_structure,
    meet_structure, validate_poset,
)
from .prover import countermodel_search, whitman_decide
from .semantics import (
    ModalLFrame, eval_frame, eval_in_lattice, frame_validity, valuation_space, box_dia,
)
from .syntax import (
    And, Bot, Box, Or, Prop, Top, letters, parse_formula, parse_pair, random_formula,
    render_formula, shallow_formulas,
)

__all__ = ["CriterionResult", "CRITERIA", "run_suite", "format_report", "pmap",
           "CURATED_PAIRS", "SOUNDNESS_PAIRS", "VecFrame", "m3_frame", "sweep_formulas"]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.title}: {self.detail}"


def pmap(fn, items, threads=1):
    """Ordered map, optionally on a thread pool."""
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def m3_frame():
    return meet_structure(validate_poset(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]))


def _lattices(max_n, up_to_iso=False):
    return [lattice_structure(sl.poset) for n in range(1, max_n + 1)
            for sl in enumerate_frames(n, "lattice", up_to_iso)]


def _modal(max_n, up_to_iso):
    return [f for n in range(1, max_n + 1) for f in enumerate_frames(n, "modal", up_to_iso)]


# ------------------------------------------------------------------ 1, 2

def c1_duality(seed=0, threads=1):
    counts = [len(enumerate_frames(n, "lattice", True)) for n in range(1, 7)]
    census = [census_lattices(n) for n in range(1, 7)]
    lats = _lattices(6)
    reps = pmap(double_dual_check, lats, threads)
    bad = [i for i, r in enumerate(reps) if not r.is_iso]
    ok = not bad and counts == census
    return CriterionResult(1, "duality round trip A = F(F_b A), lattices <= 6", ok,
                           f"{len(lats)} labeled lattices, {len(bad)} failures; "
                           f"unlabeled counts {counts}, census {census}")


def c2_frame_duality(seed=0, threads=1):
    sls = [sl for n in range(1, 6) for sl in enumerate_frames(n, "semilattice")]
    reps = pmap(frame_double_dual_check, sls, threads)
    bad = sum(not r.is_iso for r in reps)
    return CriterionResult(2, "frame round trip X = F_b(F X), semilattices <= 5", bad == 0,
                           f"{len(sls)} labeled semilattices, {bad} failures")


# ------------------------------------------------------------------ 3

DISTRIB = "p & (q | q2) <= p & q | p & q2"


def c3_m3(seed=0, threads=1):
    pair = parse_pair(DISTRIB)
    m3 = m3_frame()
    v = frame_validity(m3, pair)
    expect = {"p": m3.principal(1), "q": m3.principal(2), "q2": m3.principal(3)}
    ok_w = (not v.valid) and v.witness.valuation == expect and v.witness.state == 1
    chains = []
    for n in range(1, 7):
        labs = [str(i) for i in range(n)]
        chains.append(meet_structure(validate_poset(labs, [(labs[i], labs[i + 1]) for i in range(n - 1)])))
    chain_ok = all(frame_validity(c, pair).valid for c in chains)
    w = "none"
    if v.witness:
        w = ", ".join(f"V({k})={{{','.join(m3.labels[i] for i in Filter(m, m3).members)}}}"
                      for k, m in sorted(v.witness.valuation.items()))
        w += f" at state {m3.labels[v.witness.state]}"
    return CriterionResult(3, "M3 countermodel to distributivity, chains validate", ok_w and chain_ok,
                           f"witness {w}; chains 1..6 valid: {chain_ok}")


# ------------------------------------------------------------------ 4

MODULAR = "(p1 & p3 | p2) & p3 <= p1 & p3 | p2 & p3"


def c4_base_corr(seed=0, threads=1):
    sls = [sl for n in range(1, 5) for sl in enumerate_frames(n, "semilattice")]
    hf = hand_forms()
    parts = []
    ok = True
    for text in (DISTRIB, MODULAR):
        pair = parse_pair(text)
        rep = correspondence_check(pair, sls)
        eq = fo_equivalent(rep.correspondent, hf[text], sls)
        ok &= rep.equivalent and eq is None
        parts.append(f"{text}: validity<->fo {rep.equivalent}, hand form {'agrees' if eq is None else f'differs at frame {eq}'}")
    return CriterionResult(4, f"base correspondence on {len(sls)} labeled semilattices <= 4", ok, "; ".join(parts))


# ------------------------------------------------------------------ 5

def c5_modal_corr(seed=0, threads=1):
    hf = hand_forms()
    f4 = _modal(4, False)
    f4iso = _modal(4, True)
    f3 = _modal(3, False)
    parts = []
    ok = True
    for text, frames in (("p <= dia p", f4), ("box p <= p", f4), ("dia (p | q) <= dia p | dia q", f3)):
        pair = parse_pair(text)
        corr = sahlqvist_correspondent(pair)
        eq = fo_equivalent(corr, hf[text], frames)
        small = f4iso if frames is f4 else frames
        rep = correspondence_check(pair, small, corr)
        ok &= eq is None and rep.equivalent
        parts.append(f"{text}: {len(frames)} frames, hand form {'agrees' if eq is None else 'differs'}, "
                     f"validity<->fo on {rep.frames_checked} {'iso classes' if small is f4iso else 'frames'} {rep.equivalent}")
    return CriterionResult(5, "modal correspondence", ok, "; ".join(parts))


# ------------------------------------------------------------------ 6

SOUNDNESS_PAIRS = [
    # base axioms
    "p <= top", "bot <= p", "p <= p", "p & q <= p", "p & q <= q", "p <= p | q", "q <= p | q",
    # modal axioms and the listed validities
    "top <= box top", "top <= dia top", "dia bot <= bot",
    "box (p & q) <= box p & box q", "dia p <= dia (p | q)",
    "box p & box q <= box (p & q)", "dia p & box q <= dia (p & q)",
]


def c6_soundness(seed=0, threads=1):
    frames = _modal(4, True)
    pairs = [parse_pair(t) for t in SOUNDNESS_PAIRS]

    def check(fr):
        fails = 0
        for vclass in ("all", "principal"):
            if vclass == "principal" and not fr.report.principal_ok:
                continue
            fails += sum(not frame_validity(fr, p, vclass).valid for p in pairs)
        return fails, fr.report.principal_ok

    res = pmap(check, frames, threads)
    fails = sum(r[0] for r in res)
    principal = sum(r[1] for r in res)
    return CriterionResult(6, "soundness on modal frames <= 4 (all and principal valuations)", fails == 0,
                           f"{len(pairs)} pairs x {len(frames)} frame iso classes "
                           f"({principal} principal), {fails} failures")


# ------------------------------------------------------------------ 7, 8

class VecFrame:
    """Truth sets for every valuation of a few letters at once, via lookup tables."""

    def __init__(self, frame: ModalLFrame, names=("p", "q"), vclass="all"):
        sl = frame.sl
        n = sl.n
        N = 1 << n
        self.sl, self.frame = sl, frame
        self.up = np.array([sl.upclose(m) for m in range(N)], dtype=np.int64)
        self.ms = np.array([[sl.meetset(a, b) for b in range(N)] for a in range(N)], dtype=np.int64)
        bd = [box_dia(frame, m) for m in range(N)]
        self.box = np.array([b for b, _ in bd], dtype=np.int64)
        self.dia = np.array([d for _, d in bd], dtype=np.int64)
        self.isfil = np.array([is_filter(sl, m) for m in range(N)])
        self.principal = np.array([m == 0 or Filter(m, sl).is_principal for m in range(N)])
        self.space = valuation_space(sl, vclass)
        grids = np.meshgrid(*([np.array(self.space, dtype=np.int64)] * len(names)), indexing="ij")
        self.val = {k: g.ravel() for k, g in zip(names, grids)}
        self.size = len(self.space) ** len(names)
        self.full = sl.full

    def eval(self, f, memo):
        if f in memo:
            return memo[f]
        if isinstance(f, Prop):
            r = self.val[f.name]
        elif isinstance(f, Top):
            r = np.full(self.size, self.full, dtype=np.int64)
        elif isinstance(f, Bot):
            r = np.zeros(self.size, dtype=np.int64)
        elif isinstance(f, And):
            r = self.eval(f.l, memo) & self.eval(f.r, memo)
        elif isinstance(f, Or):
            a, b = self.eval(f.l, memo), self.eval(f.r, memo)
            r = a | b | self.up[self.ms[a, b]]
        elif isinstance(f, Box):
            r = self.box[self.eval(f.child, memo)]
        else:
            r = self.dia[self.eval(f.child, memo)]
        memo[f] = r
        return r


def sweep_formulas(seed=0, count=150, depth=3):
    rng = random.Random(seed)
    fs = list(shallow_formulas())
    seen = set(fs)
    while len(fs) < len(shallow_formulas()) + count:
        f = random_formula(rng, depth)
        if f not in seen:
            seen.add(f)
            fs.append(f)
    return fs


def _sweep(seed, threads, body):
    frames = _modal(4, True)
    forms = sweep_formulas(seed)
    res = pmap(lambda fr: body(fr, forms), frames, threads)
    return frames, forms, res


def c7_persistence(seed=0, threads=1):
    def body(fr, forms):
        bad = 0
        vf = VecFrame(fr)
        memo = {}
        for f in forms:
            bad += int((~vf.isfil[vf.eval(f, memo)]).sum())
        pbad = 0
        if fr.report.principal_ok:
            vp = VecFrame(fr, vclass="principal")
            memo = {}
            for f in forms:
                pbad += int((~vp.principal[vp.eval(f, memo)]).sum())
        return bad, pbad, vf.size * len(forms)

    frames, forms, res = _sweep(seed, threads, body)
    bad = sum(r[0] for r in res)
    pbad = sum(r[1] for r in res)
    total = sum(r[2] for r in res)
    return CriterionResult(7, "persistence: truth sets are (principal) filters", bad == 0 and pbad == 0,
                           f"{len(frames)} frame iso classes <= 4, {len(forms)} formulas of depth <= 3 "
                           f"(seed {seed}), {total} model-formula cases; {bad} non-filters, {pbad} non-principal")


def c8_complex_algebra(seed=0, threads=1):
    def body(fr, forms):
        vf = VecFrame(fr)
        ml = modal_complex_algebra(fr)
        lat = ml.lat
        ca = complex_algebra(fr.sl, vf.space)
        idx = np.full(1 << fr.n, -1, dtype=np.int64)
        for k, m in enumerate(ca.filters):
            idx[m] = k
        filt = np.array(ca.filters, dtype=np.int64)
        meet = np.array(lat.meet, dtype=np.int64)
        join = np.array(lat.join, dtype=np.int64)
        bx = np.array(ml.box, dtype=np.int64)
        dm = np.array(ml.dia, dtype=np.int64)
        sig = {k: idx[v] for k, v in vf.val.items()}

        def lev(f, memo):
            if f in memo:
                return memo[f]
            if isinstance(f, Prop):
                r = sig[f.name]
            elif isinstance(f, Top):
                r = np.full(vf.size, lat.top, dtype=np.int64)
            elif isinstance(f, Bot):
                r = np.full(vf.size, lat.bottom, dtype=np.int64)
            elif isinstance(f, And):
                r = meet[lev(f.l, memo), lev(f.r, memo)]
            elif isinstance(f, Or):
                r = join[lev(f.l, memo), lev(f.r, memo)]
            elif isinstance(f, Box):
                r = bx[lev(f.child, memo)]
            else:
                r = dm[lev(f.child, memo)]
            memo[f] = r
            return r

        m1, m2 = {}, {}
        bad = 0
        for f in forms:
            bad += int((vf.eval(f, m1) != filt[lev(f, m2)]).sum())
        return bad, vf.size * len(forms)

    frames, forms, res = _sweep(seed, threads, body)
    bad = sum(r[0] for r in res)
    total = sum(r[1] for r in res)
    return CriterionResult(8, "complex algebra: model truth = lattice value", bad == 0,
                           f"{len(frames)} frame iso classes <= 4, {len(forms)} formulas (seed {seed}), "
                           f"{total} cases, {bad} mismatches")


# ------------------------------------------------------------------ 9

def c9_modal_duality(seed=0, threads=1):
    frames = _modal(3, False)

    def check(fr):
        try:
            modal_dual(modal_complex_algebra(fr))
            eq_ok = True
        except InvariantViolation:
            eq_ok = False
        return eq_ok, modal_round_trip(fr).is_iso, is_tight(fr)

    res = pmap(check, frames, threads)
    eq_bad = sum(not r[0] for r in res)
    rt_bad = sum(not r[1] for r in res)
    coincide = all(r[1] == r[2] for r in res)
    return CriterionResult(9, "modal duality on frames <= 3", eq_bad == 0 and rt_bad == 0,
                           f"{len(frames)} labeled frames; box/dia equations fail on {eq_bad}; "
                           f"relation round trip fails on {rt_bad}; "
                           f"round trip succeeds exactly on the tight frames: {coincide}")


# ------------------------------------------------------------------ 10

def c10_baker_hales(seed=0, threads=1):
    lats = _lattices(6)

    def check(L):
        fc, f2 = filter_completion(L), f2_completion(L)
        props = lattice_props(L)
        return (lattice_iso_report(fc.embed, L, fc.lattice).is_iso
                and lattice_iso_report(f2.embed, L, f2.lattice).is_iso
                and lattice_props(fc.lattice) == props == lattice_props(f2.lattice))

    bad = sum(not r for r in pmap(check, lats, threads))
    return CriterionResult(10, "finite Baker-Hales: both completions iso with same flags", bad == 0,
                           f"{len(lats)} labeled lattices, {bad} failures")


# ------------------------------------------------------------------ 11

CURATED_PAIRS = [
    "p & q <= p", "p & q <= q", "p <= p | q", "q <= p | q", "p <= p", "p <= top", "bot <= p",
    "p & q <= q & p", "p | q <= q | p", "p & (q & r) <= p & q & r", "p | q | r <= p | (q | r)",
    "p | p <= p", "p <= p & p",
    "p & (p | q) <= p", "p <= p & (p | q)", "p | p & q <= p", "p <= p | p & q",
    "p & (q | r) <= p & q | p & r", "p & q | p & r <= p & (q | r)",
    "p | q & r <= (p | q) & (p | r)", "(p | q) & (p | r) <= p | q & r",
    "(p1 & p3 | p2) & p3 <= p1 & p3 | p2 & p3", "p1 & p3 | p2 & p3 <= (p1 & p3 | p2) & p3",
    "p & q <= r | s", "p <= q", "top <= p", "p <= bot",
]


def _lattice_valid(L, pair):
    names = letters(pair)
    for combo in itertools.product(range(L.n), repeat=len(names)):
        s = dict(zip(names, combo))
        a, b = eval_in_lattice(L, s, pair.lhs), eval_in_lattice(L, s, pair.rhs)
        if not L.leq(a, b):
            return False
    return True


def c11_whitman(seed=0, threads=1):
    lats = _lattices(6, up_to_iso=True)

    def check(text):
        pair = parse_pair(text)
        w = whitman_decide(pair)
        ex = all(_lattice_valid(L, pair) for L in lats)
        cm_ok = True
        if not w:
            cm = countermodel_search(pair, 6)
            cm_ok = cm is not None and not frame_validity(cm.frame, pair).valid
            if cm is not None:
                l = eval_frame(cm.frame, None, cm.valuation, pair.lhs)
                r = eval_frame(cm.frame, None, cm.valuation, pair.rhs)
                cm_ok &= bool(l >> cm.state & 1) and not r >> cm.state & 1
        return w == ex and cm_ok, w

    res = pmap(check, CURATED_PAIRS, threads)
    bad = [CURATED_PAIRS[i] for i, r in enumerate(res) if not r[0]]
    rejected = sum(not r[1] for r in res)
    return CriterionResult(11, "Whitman coupling on curated pairs", not bad,
                           f"{len(CURATED_PAIRS)} pairs ({rejected} rejected, each with a verified countermodel) "
                           f"against {len(lats)} lattice iso classes <= 6; disagreements: {bad or 'none'}")


# ------------------------------------------------------------------ 12

def c12_roundtrip(seed=0, threads=1):
    rng = random.Random(seed)
    names = ("p", "q", "r", "s")
    bad = 0
    total = 500
    for _ in range(total):
        f = random_formula(rng, 6, names)
        if parse_formula(render_formula(f)) != f:
            bad += 1
    # in-process determinism: two cheap criteria under different thread counts
    same = all(fn(seed, 1).detail == fn(seed, 3).detail for fn in (c3_m3, c4_base_corr))
    return CriterionResult(12, "parser round trip and thread-count determinism", bad == 0 and same,
                           f"{total} random formulas of depth <= 6 (seed {seed}), {bad} round-trip failures; "
                           f"reports identical across thread counts: {same}")


CRITERIA = [c1_duality, c2_frame_duality, c3_m3, c4_base_corr, c5_modal_corr, c6_soundness,
            c7_persistence, c8_complex_algebra, c9_modal_duality, c10_baker_hales,
            c11_whitman, c12_roundtrip]


def run_suite(seed=0, threads=1, only=None):
    out = []
    for i, fn in enumerate(CRITERIA, 1):
        if only and i not in only:
            continue
        out.append(fn(seed, threads))
    return out


def format_report(results) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
