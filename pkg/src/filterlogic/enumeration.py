"""Exhaustive enumeration of small posets, semilattices, lattices and modal frames.

Labeled structures on ``{0..n-1}`` are listed in ascending order of their
order code (bit ``i*n+j`` set iff ``i <= j``); modal frames are ordered by
(order code, relation code) where the relation code has bit ``i*n+j`` for
``i R j``.  With ``up_to_iso=True`` only one representative per isomorphism
class is produced: the labeling with the least code.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from .order import (
    MeetSemilattice, NoJoin, NoMeet, NoTop, NoBottom, Poset, lattice_structure,
    meet_structure, bits,
)
from .semantics import ModalLFrame

__all__ = [
    "BoundExceeded", "BOUNDS", "natural_posets", "enumerate_posets",
    "enumerate_frames", "modal_relations", "relation_code", "canonical_code",
    "census_lattices", "census_semilattices",
]

BOUNDS = {"poset": 6, "semilattice": 6, "lattice": 7, "modal": 4}


class BoundExceeded(ValueError):
    pass


def _check_bound(n, kind, bound=None):
    lim = BOUNDS[kind] if bound is None else bound
    if n > lim:
        raise BoundExceeded(f"n={n} exceeds the {kind} enumeration bound {lim}")


def natural_posets(n: int) -> list[tuple]:
    """Naturally labeled posets (i <= j implies i <= j as integers), as up-mask tuples.

    Element ``k`` is added as a maximal element whose strict down-set is a
    down-closed subset of ``0..k-1``.
    """
    out = []

    def grow(down):
        k = len(down)
        if k == n:
            up = [0] * n
            for j, d in enumerate(down):
                for i in bits(d):
                    up[i] |= 1 << j
            out.append(tuple(up))
            return
        for s in range(1 << k):
            if all(down[i] & s == down[i] for i in bits(s)):
                grow(down + [s | 1 << k])

    grow([])
    return out


@lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _weights(n: int) -> np.ndarray:
    return (np.int64(1) << np.arange(n * n, dtype=np.int64)).reshape(n, n)


def _matrix(up: tuple, n: int) -> np.ndarray:
    return np.array([[(up[i] >> j) & 1 for j in range(n)] for i in range(n)], dtype=np.int64)


def _permuted_codes(mat: np.ndarray) -> np.ndarray:
    """Codes of ``mat`` relabeled by every permutation ``p`` (element i becomes p[i])."""
    n = mat.shape[0]
    P = _perms(n)
    inv = np.argsort(P, axis=1)
    # new[a, b] = mat[inv[a], inv[b]]
    permd = mat[inv[:, :, None], inv[:, None, :]]
    return (permd * _weights(n)).sum(axis=(1, 2))


def canonical_code(up: tuple) -> int:
    n = len(up)
    if n == 0:
        return 0
    return int(_permuted_codes(_matrix(up, n)).min())


def _code_to_up(code: int, n: int) -> tuple:
    mask = (1 << n) - 1
    return tuple((code >> (i * n)) & mask for i in range(n))


def _structure_ok(up, kind):
    p = Poset(tuple(str(i) for i in range(len(up))), up)
    try:
        if kind == "lattice":
            lattice_structure(p)
        elif kind == "semilattice":
            meet_structure(p)
    except (NoMeet, NoJoin, NoTop, NoBottom):
        return False
    return True


@lru_cache(maxsize=None)
def _classes(n: int, kind: str) -> tuple:
    """For each iso class: (canonical code, sorted tuple of all labeled codes)."""
    seen = {}
    for up in natural_posets(n):
        if kind != "poset" and not _structure_ok(up, kind):
            continue
        codes = np.unique(_permuted_codes(_matrix(up, n))) if n else np.array([0])
        c0 = int(codes[0])
        if c0 not in seen:
            seen[c0] = tuple(int(c) for c in codes)
    return tuple(sorted(seen.items()))


def enumerate_posets(n: int, kind: str = "poset", up_to_iso: bool = False, bound=None):
    """Up-mask tuples of every structure of the kind, in ascending code order."""
    _check_bound(n, kind, bound)
    cls = _classes(n, kind)
    if up_to_iso:
        codes = [c for c, _ in cls]
    else:
        codes = sorted(c for _, cs in cls for c in cs)
    return [_code_to_up(c, n) for c in codes]


def _sl(up) -> MeetSemilattice:
    return meet_structure(Poset(tuple(str(i) for i in range(len(up))), up))


def relation_code(rows, n) -> int:
    return sum(r << (i * n) for i, r in enumerate(rows))


def modal_relations(sl: MeetSemilattice) -> np.ndarray:
    """All relations passing conditions (1)-(5), as an (m, n) array of row masks.

    Every relation on the carrier is tested at once with lookup tables; rows
    come out in ascending relation code.
    """
    n = sl.n
    N = 1 << n
    up_t = np.array([sl.upclose(m) for m in range(N)], dtype=np.int64)
    down_t = np.array([sl.poset.downclose(m) for m in range(N)], dtype=np.int64)
    ms_t = np.array([[sl.meetset(a, b) for b in range(N)] for a in range(N)], dtype=np.int64)
    codes = np.arange(1 << (n * n), dtype=np.int64)
    R = np.stack([(codes >> (i * n)) & (N - 1) for i in range(n)], axis=1)
    ok = np.all(R != 0, axis=1)                                     # (5)
    mt = sl.meet
    for x in range(n):
        for y in range(n):
            if sl.leq(x, y):
                ok &= (R[:, y] & ~up_t[R[:, x]]) == 0              # (1)
                ok &= (R[:, x] & ~down_t[R[:, y]]) == 0            # (2)
            m = ms_t[R[:, x], R[:, y]]
            target = R[:, mt[x][y]]
            ok &= (m & ~target) == 0                                # (4)
            ok &= (target & ~up_t[m]) == 0                          # (3)
    return R[ok]


def _automorphisms(up) -> list[tuple]:
    n = len(up)
    mat = _matrix(up, n)
    P = _perms(n)
    inv = np.argsort(P, axis=1)
    permd = mat[inv[:, :, None], inv[:, None, :]]
    same = np.all(permd == mat[None], axis=(1, 2))
    return [tuple(int(v) for v in p) for p in P[same]]


def _relabel_rows(rows, p, n):
    out = [0] * n
    for i, r in enumerate(rows):
        m = 0
        for j in bits(int(r)):
            m |= 1 << p[j]
        out[p[i]] = m
    return tuple(out)


def enumerate_frames(n: int, kind: str = "semilattice", up_to_iso: bool = False, bound=None):
    """Deterministic list of frames on ``n`` points.

    ``kind`` is ``"semilattice"`` or ``"lattice"`` (MeetSemilattice objects;
    lattices are returned as their meet-semilattice, use ``lattice_structure``
    on ``.poset`` for joins) or ``"modal"`` (ModalLFrame objects).
    """
    if kind not in ("semilattice", "lattice", "modal"):
        raise ValueError(f"unknown frame kind {kind!r}")
    if kind != "modal":
        return [_sl(up) for up in enumerate_posets(n, kind, up_to_iso, bound)]
    _check_bound(n, "modal", bound)
    frames = []
    for up in enumerate_posets(n, "semilattice", up_to_iso, bound=max(n, BOUNDS["semilattice"])):
        sl = _sl(up)
        rels = modal_relations(sl)
        if up_to_iso:
            auts = _automorphisms(up)
            keep = []
            for rows in rels:
                rows = tuple(int(r) for r in rows)
                c = relation_code(rows, n)
                if all(relation_code(_relabel_rows(rows, p, n), n) >= c for p in auts):
                    keep.append(rows)
            rels = keep
        for rows in rels:
            frames.append(ModalLFrame(sl, tuple(int(r) for r in rows)))
    return frames


# ---------------------------------------------------------------------------
# Independent census: plain boolean matrices, no shared code with the above.

def _is_partial_order(M):
    n = len(M)
    for i in range(n):
        if not M[i][i]:
            return False
        for j in range(n):
            if i != j and M[i][j] and M[j][i]:
                return False
            if M[i][j]:
                for k in range(n):
                    if M[j][k] and not M[i][k]:
                        return False
    return True


def _has_glbs(M):
    n = len(M)
    for a in range(n):
        for b in range(n):
            lows = [c for c in range(n) if M[c][a] and M[c][b]]
            if not any(all(M[d][c] for d in lows) for c in lows):
                return False
    return True


def _has_lubs(M):
    return _has_glbs([[M[j][i] for j in range(len(M))] for i in range(len(M))])


def _iso(A, B):
    n = len(A)
    return any(all(A[i][j] == B[p[i]][p[j]] for i in range(n) for j in range(n))
               for p in permutations(range(n)))


def _census(n, interior, extend, accept):
    reps = []
    m = interior
    for code in range(1 << (m * m)):
        core = [[bool(code >> (i * m + j) & 1) for j in range(m)] for i in range(m)]
        if not _is_partial_order(core):
            continue
        M = extend(core)
        if accept(M) and not any(_iso(M, r) for r in reps):
            reps.append(M)
    return len(reps)


def census_lattices(n: int) -> int:
    """Number of lattices on ``n`` points up to isomorphism, by brute force."""
    if n <= 2:
        return 1 if n >= 1 else 0

    def extend(core):
        m = len(core)
        M = [[False] * n for _ in range(n)]
        for i in range(n):
            M[0][i] = True          # 0 is bottom
            M[i][n - 1] = True      # n-1 is top
        for i in range(m):
            for j in range(m):
                M[i + 1][j + 1] = core[i][j]
        return M

    return _census(n, n - 2, extend, lambda M: _has_glbs(M) and _has_lubs(M))


def census_semilattices(n: int) -> int:
    """Number of meet-semilattices on ``n`` points up to isomorphism, by brute force."""
    if n <= 1:
        return n

    def extend(core):
        m = len(core)
        M = [[False] * n for _ in range(n)]
        for i in range(n):
            M[0][i] = True
        for i in range(m):
            for j in range(m):
                M[i + 1][j + 1] = core[i][j]
        return M

    return _census(n, n - 1, extend, _has_glbs)
