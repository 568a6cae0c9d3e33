"""First-order correspondents of consequence pairs, checked on every small frame.

Run: python3 demos/03_correspondence.py
"""
# %%
from filterlogic.correspondence import close, correspondence_check, sahlqvist_correspondent
from filterlogic.enumeration import enumerate_frames
from filterlogic.fol import render_fo, to_smt
from filterlogic.syntax import parse_pair

for text in ["p <= dia p", "box p <= p", "box p & dia q <= dia (p & q)", "p & (q|q2) <= (p&q)|(p&q2)"]:
    print(text)
    print("   ", render_fo(close(sahlqvist_correspondent(parse_pair(text)))))

# %%
# the correspondent holds on a frame exactly when the pair is valid there
frames = [f for n in (1, 2, 3) for f in enumerate_frames(n, "modal")]
for text in ["p <= dia p", "dia (p|q) <= dia p | dia q", "dia dia p <= dia p"]:
    print(correspondence_check(parse_pair(text), frames).summary())

# %%
print(to_smt(close(sahlqvist_correspondent(parse_pair("box p <= p")))))
