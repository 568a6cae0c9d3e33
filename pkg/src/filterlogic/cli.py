"""Command line interface.

Exit codes: 0 success or valid, 1 invalid or underivable (a witness is
printed), 2 malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .correspondence import (
    NotSahlqvist, close, second_order_translation, sahlqvist_correspondent,
    standard_translation,
)
from .duality import (
    InvariantViolation, dual_frame, f2_completion, filter_completion, modal_dual,
)
from .enumeration import BoundExceeded, enumerate_frames
from .fol import render_fo, to_smt
from .io import FrameFormatError, dumps, frame_document, load_frame
from .order import bits
from .prover import (
    Derivation, ShapeMismatch, UnknownRule, check_derivation, countermodel_search,
    whitman_decide, whitman_derivation,
)
from .semantics import (
    FrameConditionViolated, Infeasible, MissingLetter, ModalLFrame, eval_frame,
    frame_validity,
)
from .suite import format_report, run_suite
from .syntax import (
    FormulaSyntaxError, classify_antecedent, is_positive, parse_formula, parse_pair,
    render_formula, render_pair, sexpr,
)

OK, INVALID, MALFORMED = 0, 1, 2


class Malformed(Exception):
    pass


def _out(args, text_lines, payload):
    if args.format == "json":
        sys.stdout.write(dumps(payload))
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _labels(sl, mask):
    return [sl.labels[i] for i in bits(mask)]


def _load(path):
    try:
        return load_frame(path)
    except OSError as e:
        raise Malformed(f"{path}: {e.strerror}") from None


def _frame_of(lf, need_modal=False):
    if lf.frame is not None:
        return lf.frame
    if need_modal:
        raise Malformed("modal formula needs a frame with an R relation")
    return lf.sl


# ---------------------------------------------------------------- commands

def cmd_parse(args):
    text = args.text
    if "<=" in text:
        pair = parse_pair(text)
        cls = classify_antecedent(pair.lhs)
        payload = {"render": render_pair(pair), "sexpr": [sexpr(pair.lhs), sexpr(pair.rhs)],
                   "antecedent": cls.tag, "boxed_atoms": [list(a) for a in cls.boxed_atoms]}
        lines = [payload["render"], f"(pair {payload['sexpr'][0]} {payload['sexpr'][1]})",
                 f"antecedent: {cls.tag}"]
    else:
        f = parse_formula(text)
        cls = classify_antecedent(f)
        payload = {"render": render_formula(f), "sexpr": sexpr(f), "antecedent": cls.tag,
                   "boxed_atoms": [list(a) for a in cls.boxed_atoms]}
        lines = [payload["render"], payload["sexpr"], f"antecedent: {cls.tag}"]
    if cls.boxed_atoms:
        lines.append("boxed atoms: " + ", ".join(f"{p}^{n}" for p, n in cls.boxed_atoms))
    _out(args, lines, payload)
    return OK


def cmd_eval(args):
    lf = _load(args.frame)
    f = parse_formula(args.formula)
    fr = _frame_of(lf, need_modal=not is_positive(f))
    if lf.valuation is None:
        raise Malformed("frame document has no valuation")
    if isinstance(fr, ModalLFrame):
        fr.require()
        truth = eval_frame(fr.sl, fr.rows, lf.valuation, f)
    else:
        truth = eval_frame(fr, None, lf.valuation, f)
    members = _labels(lf.sl, truth)
    payload = {"formula": render_formula(f), "truth_set": members}
    lines = [f"[[{render_formula(f)}]] = {{{', '.join(members)}}}"]
    code = OK
    if args.state is not None:
        if args.state not in lf.sl.labels:
            raise Malformed(f"unknown state {args.state!r}")
        holds = args.state in members
        payload["state"] = args.state
        payload["holds"] = holds
        lines.append(f"{args.state} {'forces' if holds else 'does not force'} {render_formula(f)}")
        code = OK if holds else INVALID
    _out(args, lines, payload)
    return code


def _witness_payload(sl, rows, w, pair):
    return {"state": sl.labels[w.state], "side": w.side,
            "valuation": {k: _labels(sl, m) for k, m in sorted(w.valuation.items())},
            "model": frame_document(sl, rows, w.valuation), "pair": render_pair(pair)}


def cmd_validity(args):
    lf = _load(args.frame)
    pair = parse_pair(args.pair)
    fr = _frame_of(lf, need_modal=not is_positive(pair))
    v = frame_validity(fr, pair, args.vclass, args.budget)
    sl = lf.sl
    rows = fr.rows if isinstance(fr, ModalLFrame) else None
    if v.valid:
        _out(args, [f"valid: {render_pair(pair)} ({v.checked} valuations)"],
             {"pair": render_pair(pair), "valid": True, "valuations": v.checked})
        return OK
    wp = _witness_payload(sl, rows, v.witness, pair)
    lines = [f"invalid: {render_pair(pair)}",
             *(f"  V({k}) = {{{', '.join(m)}}}" for k, m in wp["valuation"].items()),
             f"  at state {wp['state']} the antecedent holds and the consequent fails"]
    _out(args, lines, {"pair": render_pair(pair), "valid": False, "witness": wp})
    return INVALID


def cmd_check_frame(args):
    lf = _load(args.frame)
    payload = {"elements": list(lf.sl.labels), "semilattice": True, "lattice": lf.lattice is not None}
    lines = [f"meet-semilattice on {lf.sl.n} elements; lattice: {lf.lattice is not None}"]
    code = OK
    if lf.frame is not None:
        rep = lf.frame.report
        conds = {str(k): {"ok": ok, "counterexample": None if w is None else list(w) if not isinstance(w, tuple) else _jsonable(w)}
                 for k, (ok, w) in rep.conditions.items()}
        pconds = {str(k): {"ok": ok, "counterexample": None if w is None else _jsonable(w)}
                  for k, (ok, w) in rep.principal.items()}
        payload.update({"modal_conditions": conds, "principal_conditions": pconds,
                        "modal_frame": rep.ok, "principal_modal_frame": rep.principal_ok})
        for k, (ok, w) in rep.conditions.items():
            lines.append(f"  condition ({k}): {'ok' if ok else 'fails at ' + _show(lf.sl, w)}")
        for k, (ok, w) in rep.principal.items():
            lines.append(f"  principal ({k}): {'ok' if ok else 'fails at ' + _show(lf.sl, w)}")
        lines.append(f"modal L-frame: {rep.ok}; principal: {rep.principal_ok}")
        code = OK if rep.ok else INVALID
    _out(args, lines, payload)
    return code


def _jsonable(w):
    if isinstance(w, tuple):
        return [_jsonable(x) for x in w]
    return w


def _show(sl, w):
    def one(x):
        if isinstance(x, tuple):
            return "{" + ",".join(sl.labels[i] for i in x) + "}"
        return sl.labels[x]
    return "(" + ", ".join(one(x) for x in w) + ")"


def cmd_correspond(args):
    pair = parse_pair(args.pair)
    corr = close(sahlqvist_correspondent(pair))
    if args.format == "smt":
        sys.stdout.write(to_smt(corr))
    else:
        _out(args, [render_fo(corr)], {"pair": render_pair(pair), "correspondent": render_fo(corr)})
    return OK


def cmd_translate_st(args):
    f = parse_formula(args.formula)
    st = standard_translation(f, args.var)
    if args.format == "smt":
        sys.stdout.write(to_smt(st))
    else:
        _out(args, [render_fo(st)], {"formula": render_formula(f), "st": render_fo(st)})
    return OK


def cmd_translate_so(args):
    pair = parse_pair(args.pair)
    so = second_order_translation(pair)
    if args.format == "smt":
        sys.stdout.write(to_smt(so))
    else:
        _out(args, [render_fo(so)], {"pair": render_pair(pair), "so": render_fo(so)})
    return OK


def _lattice_of(lf):
    if lf.lattice is None:
        raise Malformed("document is not a bounded lattice")
    return lf.lattice


def cmd_dualize(args):
    lf = _load(args.lattice)
    L = _lattice_of(lf)
    if lf.modal_lattice is not None:
        try:
            fr, dr = modal_dual(lf.modal_lattice)
        except InvariantViolation as e:
            raise Malformed(str(e)) from None
        doc = frame_document(dr.dual, fr.rows)
    else:
        dr = dual_frame(L)
        doc = frame_document(dr.dual)
    theta = {L.labels[x]: _labels(dr.dual, dr.theta[x]) for x in range(L.n)}
    payload = {"dual": doc, "theta": theta}
    if args.format == "json":
        sys.stdout.write(dumps(payload))
    else:
        lines = [f"dual frame: {len(doc['elements'])} points {doc['elements']}",
                 f"order covers: {doc['leq_pairs']}"]
        if "R" in doc:
            lines.append(f"R: {doc['R']}")
        lines += [f"theta({k}) = {{{', '.join(v)}}}" for k, v in theta.items()]
        sys.stdout.write("\n".join(lines) + "\n")
    return OK


def cmd_complete(args):
    lf = _load(args.lattice)
    L = _lattice_of(lf)
    c = filter_completion(L) if args.kind == "filter" else f2_completion(L)
    doc = frame_document(c.lattice.sl)
    embed = {L.labels[x]: c.lattice.labels[c.embed[x]] for x in range(L.n)}
    payload = {"kind": c.kind, "completion": doc, "embed": embed}
    lines = [f"{c.kind}: {c.lattice.n} elements", f"order covers: {doc['leq_pairs']}",
             *(f"  {k} -> {v}" for k, v in embed.items())]
    _out(args, lines, payload)
    return OK


def cmd_enumerate(args):
    frames = enumerate_frames(args.n, args.kind, up_to_iso=args.iso)
    docs = []
    for fr in frames:
        if isinstance(fr, ModalLFrame):
            docs.append(frame_document(fr.sl, fr.rows))
        else:
            docs.append(frame_document(fr))
    iso = " up to isomorphism" if args.iso else " (labeled)"
    _out(args, [f"{len(frames)} {args.kind} frames on {args.n} elements{iso}"],
         {"n": args.n, "kind": args.kind, "up_to_iso": args.iso, "count": len(frames), "frames": docs})
    return OK


def cmd_prove(args):
    if args.derivation:
        try:
            with open(args.derivation) as fh:
                d = Derivation.from_json(fh.read())
        except OSError as e:
            raise Malformed(f"{args.derivation}: {e.strerror}") from None
        except (KeyError, TypeError, json.JSONDecodeError) as e:
            raise Malformed(f"bad derivation document: {e}") from None
        try:
            check_derivation(d)
        except (UnknownRule, ShapeMismatch) as e:
            _out(args, [f"rejected: {e}"], {"accepted": False, "error": str(e)})
            return INVALID
        _out(args, [f"accepted: {render_pair(d.conclusion)} ({d.size()} nodes)"],
             {"accepted": True, "conclusion": render_pair(d.conclusion)})
        return OK
    if not args.pair:
        raise Malformed("prove needs --pair or --derivation")
    pair = parse_pair(args.pair)
    if whitman_decide(pair):
        d = whitman_derivation(pair)
        check_derivation(d)
        payload = {"pair": render_pair(pair), "derivable": True, "derivation": d.to_json()}
        _out(args, [f"derivable: {render_pair(pair)}", d.dumps()], payload)
        return OK
    cm = countermodel_search(pair, args.max_n)
    payload = {"pair": render_pair(pair), "derivable": False}
    lines = [f"not derivable: {render_pair(pair)}"]
    if cm is not None:
        wp = _witness_payload(cm.frame, None, _W(cm.valuation, cm.state), pair)
        payload["countermodel"] = wp
        lines.append(f"  countermodel on {cm.n} elements: {json.dumps(wp['model'])} at state {wp['state']}")
    _out(args, lines, payload)
    return INVALID


class _W:
    side = "lhs-holds-rhs-fails"

    def __init__(self, valuation, state):
        self.valuation, self.state = valuation, state


def cmd_countermodel(args):
    pair = parse_pair(args.pair)
    modal = args.modal or not is_positive(pair)
    cm = countermodel_search(pair, args.max_n, modal, args.vclass)
    if cm is None:
        _out(args, [f"no countermodel with at most {args.max_n} elements"],
             {"pair": render_pair(pair), "found": False})
        return OK
    fr = cm.frame
    sl = fr.sl if isinstance(fr, ModalLFrame) else fr
    rows = fr.rows if isinstance(fr, ModalLFrame) else None
    wp = _witness_payload(sl, rows, _W(cm.valuation, cm.state), pair)
    lines = [f"countermodel on {cm.n} elements:", json.dumps(wp["model"]),
             f"at state {wp['state']} the antecedent holds and the consequent fails"]
    _out(args, lines, {"pair": render_pair(pair), "found": True, "witness": wp})
    return INVALID


def cmd_suite(args):
    only = set(args.only) if args.only else None
    results = run_suite(args.seed, args.threads, only)
    if args.format == "json":
        sys.stdout.write(dumps([{"criterion": r.number, "title": r.title, "passed": r.passed,
                                 "detail": r.detail} for r in results]))
    else:
        sys.stdout.write(format_report(results))
    return OK if all(r.passed for r in results) else INVALID


# ---------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="filterlogic", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "smt"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("parse", cmd_parse, "parse a formula or pair and print its canonical form")
    sp.add_argument("text")
    sp = add("eval", cmd_eval, "truth set of a formula in a model document")
    sp.add_argument("--frame", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--state")
    sp = add("validity", cmd_validity, "frame validity of a consequence pair")
    sp.add_argument("--frame", required=True)
    sp.add_argument("--pair", required=True)
    sp.add_argument("--vclass", choices=["all", "principal"], default="all")
    sp.add_argument("--budget", type=int, default=10**7)
    sp = add("check-frame", cmd_check_frame, "check (principal) modal frame conditions")
    sp.add_argument("--frame", required=True)
    sp = add("correspond", cmd_correspond, "first-order correspondent of a pair")
    sp.add_argument("--pair", required=True)
    sp = add("translate-st", cmd_translate_st, "standard translation of a formula")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--var", default="x")
    sp = add("translate-so", cmd_translate_so, "second-order translation of a pair")
    sp.add_argument("--pair", required=True)
    sp = add("dualize", cmd_dualize, "dual frame of a (modal) lattice")
    sp.add_argument("--lattice", required=True)
    sp = add("complete", cmd_complete, "filter or double-filter completion of a lattice")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--kind", choices=["filter", "f2"], default="filter")
    sp = add("enumerate", cmd_enumerate, "list all frames of a size")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--kind", choices=["semilattice", "lattice", "modal"], default="semilattice")
    sp.add_argument("--iso", action="store_true", help="one frame per isomorphism class")
    sp = add("prove", cmd_prove, "decide a base pair or check a derivation")
    sp.add_argument("--pair")
    sp.add_argument("--derivation")
    sp.add_argument("--max-n", type=int, default=6)
    sp = add("countermodel", cmd_countermodel, "search small frames for a countermodel")
    sp.add_argument("--pair", required=True)
    sp.add_argument("--max-n", type=int, default=4)
    sp.add_argument("--modal", action="store_true")
    sp.add_argument("--vclass", choices=["all", "principal"], default="all")
    sp = add("suite", cmd_suite, "run the acceptance criteria")
    sp.add_argument("--only", type=int, nargs="*")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (Malformed, FrameFormatError, FormulaSyntaxError, MissingLetter, NotSahlqvist,
            BoundExceeded, Infeasible, FrameConditionViolated) as e:
        sys.stderr.write(f"error: {e}\n")
        return MALFORMED


if __name__ == "__main__":
    sys.exit(main())
