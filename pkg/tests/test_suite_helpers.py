import itertools


from filterlogic.enumeration import enumerate_frames
from filterlogic.semantics import eval_frame
from filterlogic.suite import (
    CriterionResult, VecFrame, format_report, pmap, run_suite, sweep_formulas,
)


def test_vecframe_matches_scalar_eval():
    forms = sweep_formulas(0, count=40)
    for fr in enumerate_frames(3, "modal", up_to_iso=True):
        vf = VecFrame(fr)
        memo = {}
        combos = list(itertools.product(vf.space, vf.space))
        for f in forms:
            got = vf.eval(f, memo)
            for k, (vp, vq) in enumerate(combos):
                assert got[k] == eval_frame(fr.sl, fr.rows, {"p": vp, "q": vq}, f)


def test_sweep_formulas_deterministic():
    assert sweep_formulas(3) == sweep_formulas(3)
    assert len(sweep_formulas(0)) == 44 + 150
    assert len(set(sweep_formulas(0))) == len(sweep_formulas(0))


def test_pmap_keeps_order():
    assert pmap(lambda x: x * x, range(20), threads=4) == [x * x for x in range(20)]


def test_report_format():
    rs = [CriterionResult(1, "a", True, "ok"), CriterionResult(2, "b", False, "no")]
    assert format_report(rs) == "[PASS]  1. a: ok\n[FAIL]  2. b: no\n1/2 criteria passed\n"


def test_run_suite_only():
    rs = run_suite(0, 1, only={3})
    assert [r.number for r in rs] == [3] and rs[0].passed
