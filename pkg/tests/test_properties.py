from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from genmvp import euclidean_mvp as em
from genmvp import laurent_coeffs as lc
from genmvp import series_kernel as sk
from genmvp import tree_laplace as tl
from genmvp.polynomials import MultiPoly, format_poly, parse_poly

fractions = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 12))


@st.composite
def polys(draw, max_dim=4, max_deg=6):
    d = draw(st.integers(1, max_dim))
    n = draw(st.integers(0, 6))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.lists(st.integers(0, 3), min_size=d, max_size=d)))
        if sum(exps) <= max_deg:
            terms[exps] = draw(fractions)
    return MultiPoly(d, terms)


@settings(max_examples=60, deadline=None)
@given(polys())
def test_mean_value_identity(f):
    assert em.mvp_check(f).ok


@settings(max_examples=40, deadline=None)
@given(polys(), st.integers(1, 3))
def test_commuting_identity(f, n):
    assert em.commuting_check(f, n=n).ok


@settings(max_examples=60, deadline=None)
@given(polys())
def test_parse_round_trip(f):
    assert parse_poly(format_poly(f), f.dim) == f


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_sphere_avg_linear(f, g):
    if f.dim != g.dim:
        return
    assert em.sphere_avg(f + g) == em.sphere_avg(f) + em.sphere_avg(g)


@given(st.integers(1, 8), st.integers(0, 20))
def test_alpha_inverts_beta(d, N):
    assert sk.convolution_check(d, N).ok


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7]), st.integers(-8, 8))
def test_decomposition_reconstructs(q, n):
    assert lc.reconstruction_check(n, q).ok


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(0, 9), st.integers(0, 9))
def test_closed_form_agrees(q, n, k):
    if k <= n:
        assert lc.closed_form_a(n, k, q) == lc.coeff(n, k, q)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 2 ** 31), st.integers(0, 3), st.sampled_from([0, 1, None]))
def test_cone_identity_random(q, seed, n, cone):
    f = tl.make_random(q, 2 * n + (n == 0), seed)
    assert tl.cone_identity_check(f, n, cone).ok


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3]), st.lists(fractions, min_size=9, max_size=9))
def test_radial_cone_identity(q, vals):
    assert all(tl.cone_identity_check(tl.make_radial(q, 8, vals), n).ok for n in range(5))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 2 ** 31), fractions)
def test_tree_laplacian_linear(q, seed, c):
    f = tl.make_random(q, 4, seed)
    g = tl.make_busemann(q, 4, (1,))
    lhs = tl.tree_laplacian(f + g.scale(c))
    rhs = tl.tree_laplacian(f) + tl.tree_laplacian(g).scale(c)
    assert dict(lhs.items()) == dict(rhs.items())
