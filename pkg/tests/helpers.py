"""Shared fixtures data and hypothesis strategies."""
from hypothesis import strategies as st

from monodual.cnf import MonotoneCnf, compact, mask_of, minimal_masks


def C(n, *clauses):
    return MonotoneCnf(n, clauses)


# worked examples
PHI2 = C(4, [2], [1, 3], [1, 4])  # x2 (x1∨x3)(x1∨x4)
PHI2_DUAL = C(4, [1, 2], [2, 3, 4])
PHI3 = C(4, [1, 2], [1, 3], [2, 3, 4], [1, 4])
PHI3_PI = [{2, 3, 4}, {1, 4}, {1, 3}, {1, 2}]
ACYCLIC = C(6, [1, 2, 3], [1, 3, 5], [1, 5, 6], [3, 4, 5])
TRIANGLE = C(3, [1, 2], [2, 3], [1, 3])
ONE_DEG_CYCLIC = C(5, [1, 2, 3], [1, 2, 4], [2, 3, 4, 5])


@st.composite
def prime_cnfs(draw, max_n=8, max_m=10, min_m=0, full=True, max_size=None):
    """Prime CNFs; with ``full`` every variable of 1..n occurs."""
    n = draw(st.integers(1, max_n))
    hi = min(n, max_size or n)
    clauses = draw(st.lists(st.sets(st.integers(1, n), min_size=1, max_size=hi),
                            min_size=min_m, max_size=max_m))
    cnf = MonotoneCnf.from_masks(n, minimal_masks(mask_of(c) for c in clauses))
    if full:
        cnf, _ = compact(cnf)
        if cnf.n == 0:
            cnf = MonotoneCnf(1, [[1]])
    return cnf


@st.composite
def cnf_pairs(draw, max_n=6, max_m=8):
    n = draw(st.integers(1, max_n))
    side = st.lists(st.sets(st.integers(1, n), min_size=1, max_size=n), max_size=max_m)
    phi = MonotoneCnf(n, draw(side))
    psi = MonotoneCnf(n, draw(side))
    return phi, psi
