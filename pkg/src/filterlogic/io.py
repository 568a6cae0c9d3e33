"""JSON frame documents.

A document looks like::

    {"version": "filterlogic-frame/1",
     "elements": ["0", "a", "b", "1"],
     "leq_pairs": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]],
     "R": [["0", "a"], ...],                  # optional
     "valuation": {"p": ["a", "1"]},          # optional
     "box": {"0": "0", ...}, "dia": {...}}    # optional, modal lattices only

Instead of ``leq_pairs`` a ``meet`` table (rows of labels) may be given.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .order import (
    BoundedLattice, MeetSemilattice, NoBottom, NoJoin, NoMeet, NoTop, OrderError,
    bits, is_filter, lattice_structure, meet_structure, validate_poset,
)
from .semantics import ModalLattice, ModalLFrame, relation_rows

__all__ = ["VERSION", "FrameFormatError", "LoadedFrame", "load_frame", "loads_frame",
           "frame_document", "dumps"]

VERSION = "filterlogic-frame/1"


class FrameFormatError(ValueError):
    def __init__(self, where, msg):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass
class LoadedFrame:
    sl: MeetSemilattice
    frame: ModalLFrame | None = None
    valuation: dict | None = None
    lattice: BoundedLattice | None = None
    modal_lattice: ModalLattice | None = None


def _label_index(labels, lab, where):
    try:
        return labels.index(lab)
    except ValueError:
        raise FrameFormatError(where, f"unknown element {lab!r}") from None


def loads_frame(text: str) -> LoadedFrame:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FrameFormatError(f"line {e.lineno} column {e.colno}", e.msg) from None
    return from_document(doc)


def load_frame(path: str) -> LoadedFrame:
    with open(path) as fh:
        return loads_frame(fh.read())


def from_document(doc) -> LoadedFrame:
    if not isinstance(doc, dict):
        raise FrameFormatError("$", "document must be an object")
    if doc.get("version", VERSION) != VERSION:
        raise FrameFormatError("$.version", f"unsupported version {doc.get('version')!r}")
    labels = doc.get("elements")
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise FrameFormatError("$.elements", "expected a list of strings")
    if "leq_pairs" in doc:
        pairs = doc["leq_pairs"]
        for k, pr in enumerate(pairs):
            if not (isinstance(pr, list) and len(pr) == 2):
                raise FrameFormatError(f"$.leq_pairs[{k}]", "expected a pair of labels")
            for lab in pr:
                _label_index(labels, lab, f"$.leq_pairs[{k}]")
        try:
            poset = validate_poset(labels, [tuple(p) for p in pairs])
        except OrderError as e:
            raise FrameFormatError("$.leq_pairs", str(e)) from None
    elif "meet" in doc:
        poset = _poset_from_meet(labels, doc["meet"])
    else:
        raise FrameFormatError("$", "need either leq_pairs or meet")
    try:
        sl = meet_structure(poset)
    except NoMeet as e:
        raise FrameFormatError("$", str(e)) from None
    out = LoadedFrame(sl)
    try:
        out.lattice = lattice_structure(poset)
    except (NoMeet, NoJoin, NoTop, NoBottom):
        out.lattice = None
    if "R" in doc:
        rel = []
        for k, pr in enumerate(doc["R"]):
            if not (isinstance(pr, list) and len(pr) == 2):
                raise FrameFormatError(f"$.R[{k}]", "expected a pair of labels")
            rel.append(tuple(_label_index(labels, lab, f"$.R[{k}]") for lab in pr))
        out.frame = ModalLFrame(sl, relation_rows(sl.n, rel))
    if "valuation" in doc:
        val = {}
        for name, members in doc["valuation"].items():
            m = 0
            for lab in members:
                m |= 1 << _label_index(labels, lab, f"$.valuation.{name}")
            if not is_filter(sl, m):
                raise FrameFormatError(f"$.valuation.{name}", "not a filter")
            val[name] = m
        out.valuation = val
    if "box" in doc or "dia" in doc:
        if out.lattice is None:
            raise FrameFormatError("$", "box/dia tables need a lattice")
        tabs = []
        for key in ("box", "dia"):
            t = doc.get(key)
            if not isinstance(t, dict):
                raise FrameFormatError(f"$.{key}", "expected a map from labels to labels")
            tabs.append(tuple(_label_index(labels, t.get(lab), f"$.{key}.{lab}") for lab in labels))
        out.modal_lattice = ModalLattice(out.lattice, *tabs)
    return out


def _poset_from_meet(labels, table):
    n = len(labels)
    if not (isinstance(table, list) and len(table) == n and all(isinstance(r, list) and len(r) == n for r in table)):
        raise FrameFormatError("$.meet", f"expected a {n}x{n} table")
    mt = [[_label_index(labels, table[i][j], f"$.meet[{i}][{j}]") for j in range(n)] for i in range(n)]
    for i in range(n):
        if mt[i][i] != i:
            raise FrameFormatError(f"$.meet[{i}][{i}]", "meet is not idempotent")
        for j in range(n):
            if mt[i][j] != mt[j][i]:
                raise FrameFormatError(f"$.meet[{i}][{j}]", "meet is not commutative")
            for k in range(n):
                if mt[mt[i][j]][k] != mt[i][mt[j][k]]:
                    raise FrameFormatError(f"$.meet[{i}][{j}]", "meet is not associative")
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(n) if i != j and mt[i][j] == i]
    return validate_poset(labels, pairs)


def _covers(sl):
    up = sl.poset.up
    out = []
    for i in range(sl.n):
        for j in bits(up[i]):
            if j != i and not any(k not in (i, j) and up[k] >> j & 1 for k in bits(up[i])):
                out.append((i, j))
    return out


def frame_document(sl: MeetSemilattice, rows=None, valuation=None, lattice_tables=None) -> dict:
    """Document for a semilattice, optional relation rows, valuation masks and box/dia tables."""
    labs = list(sl.labels)
    doc = {"version": VERSION, "elements": labs,
           "leq_pairs": [[labs[i], labs[j]] for i, j in _covers(sl)]}
    if rows is not None:
        doc["R"] = [[labs[i], labs[j]] for i in range(sl.n) for j in bits(rows[i])]
    if valuation is not None:
        doc["valuation"] = {k: [labs[i] for i in bits(m)] for k, m in sorted(valuation.items())}
    if lattice_tables is not None:
        bx, dm = lattice_tables
        doc["box"] = {labs[i]: labs[bx[i]] for i in range(sl.n)}
        doc["dia"] = {labs[i]: labs[dm[i]] for i in range(sl.n)}
    return doc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
