"""Dual frames, double duals, and where the modal round trip breaks.

Run: python3 demos/04_duality.py
"""
# %%
import numpy as np

from filterlogic.duality import double_dual_check, dual_frame, is_tight, modal_round_trip
from filterlogic.enumeration import enumerate_frames
from filterlogic.order import lattice_structure
from filterlogic.semantics import ModalLFrame

lats = [lattice_structure(sl.poset) for n in range(1, 7) for sl in enumerate_frames(n, "lattice", True)]
sizes = np.array([L.n for L in lats])
duals = np.array([dual_frame(L).dual.n for L in lats])
print("every dual has n - 1 points:", bool(np.all(duals == sizes - 1)))
print("double duals iso:", all(double_dual_check(L).is_iso for L in lats))

# %%
# modal frames: R_A adds every arrow that no filter rules out
frames = [f for n in (1, 2, 3) for f in enumerate_frames(n, "modal")]
tight = np.array([is_tight(f) for f in frames])
back = np.array([modal_round_trip(f).is_iso for f in frames])
print(len(frames), "frames,", int(tight.sum()), "tight,", int(back.sum()), "recovered")
print("recovered exactly when tight:", bool(np.all(tight == back)))

# %%
fr = ModalLFrame.make(enumerate_frames(3, "lattice")[0], [(0, 0), (0, 2), (1, 2), (2, 2)])
print("order up-sets", fr.sl.poset.up, "R", fr.pairs())
print(modal_round_trip(fr).witness)
