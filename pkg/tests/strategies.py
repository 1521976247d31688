"""Shared hypothesis strategies."""

import random

from hypothesis import strategies as st

from quiverhom.corpus import CORPUS_QUIVERS, random_rep
from quiverhom.linalg import GF, QQ

QUIVER_NAMES = sorted(CORPUS_QUIVERS)
FIELDS = [QQ, GF(5)]


@st.composite
def corpus_reps(draw, names=QUIVER_NAMES, fields=FIELDS, max_dim=2):
    name = draw(st.sampled_from(names))
    fld = draw(st.sampled_from(fields))
    seed = draw(st.integers(0, 10**6))
    return random_rep(CORPUS_QUIVERS[name](), random.Random(seed), fld, max_dim)


@st.composite
def rep_pairs(draw, names=QUIVER_NAMES, fields=FIELDS, max_dim=2):
    name = draw(st.sampled_from(names))
    fld = draw(st.sampled_from(fields))
    rng = random.Random(draw(st.integers(0, 10**6)))
    q = CORPUS_QUIVERS[name]()
    return random_rep(q, rng, fld, max_dim), random_rep(q, rng, fld, max_dim)
