from hypothesis import strategies as st

from khcob.diagram import from_braid


@st.composite
def braid_words(draw, max_strands=3, max_len=5):
    strands = draw(st.integers(2, max_strands))
    gens = [g for k in range(1, strands) for g in (k, -k)]
    word = draw(st.lists(st.sampled_from(gens), min_size=1, max_size=max_len))
    return word, strands


@st.composite
def braid_diagrams(draw, max_strands=3, max_len=5):
    word, strands = draw(braid_words(max_strands, max_len))
    return from_braid(word, strands)


@st.composite
def int_matrices(draw, max_rows=6, max_cols=6, bound=12):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    return draw(st.lists(st.lists(st.integers(-bound, bound), min_size=cols, max_size=cols),
                         min_size=rows, max_size=rows))
