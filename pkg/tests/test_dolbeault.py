import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from builders import circle, dumbbell, path, random_graph, star, theta
from tropdolbeault import (
    COMPACT,
    FULL,
    DegreeError,
    Form,
    OpenSubset,
    PLFunction,
    Subdivision,
    SubdivisionPoint,
    betti,
    cochain_complex,
    cohomology,
    d_prime,
    d_second,
    ddc,
    extract_region,
    hodge_numbers,
    integrate,
    linalg,
    wedge,
)
from tropdolbeault.dolbeault import form_vector


def random_function(sub, rng):
    return PLFunction(sub, {n: F(rng.randint(-6, 6), rng.randint(1, 3)) for n in sub.nodes})


def random_subdivision(g, rng, k=3):
    return Subdivision(g, {SubdivisionPoint(rng.choice(g.edges).id, F(rng.randint(1, 11), 12)) for _ in range(k)})


def star_region(k, t=F(1, 2), g=None):
    g = g or star(k)
    return extract_region(g, "c", [SubdivisionPoint(f"s{i}", t) for i in range(1, k + 1)])


def random_compact_10(scope, rng, degree=1):
    """A (1,0)-form with random polynomial coefficients, zero near the boundary."""
    sc = scope if isinstance(scope, OpenSubset) else scope.cells
    bsegs = {e.segment for e in sc.boundary_ends}
    vals = {s: tuple(F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(rng.randint(1, degree + 1)))
            for s in sc.ordered_segments if s not in bsegs}
    return Form((1, 0), sc, vals)


def test_constant_is_closed():
    f = PLFunction.constant(Subdivision(theta()), 3)
    assert d_second(Form.from_function(f)).is_zero()
    assert d_prime(Form.from_function(f)).is_zero()


def test_circle_constant_coefficient_is_closed():
    g = circle()
    sub = Subdivision(g, [SubdivisionPoint("e", F(1, 4))])
    alpha = Form((1, 0), OpenSubset.whole(sub), {s: 5 for s in sub.segments})
    assert d_second(alpha).is_zero()


def test_theta_balanced_form_is_closed():
    # oracle: at v1 outgoing coefficients sum 1 - 1 + 0 = 0, at v2 the incoming ones do
    g = theta()
    sub = Subdivision(g)
    coeff = {"e1": 1, "e2": -1, "e3": 0}
    alpha = Form((1, 0), OpenSubset.whole(sub), {s: coeff[s.edge] for s in sub.segments})
    assert d_second(alpha).is_zero()


def test_distance_function_has_unit_slope():
    g = path(3)
    f = PLFunction(Subdivision(g), {"v1": 0, "v2": 1, "v3": 2})
    alpha = d_prime(Form.from_function(f))
    assert all(alpha.coefficient(s) == (1,) for s in alpha.scope.ordered_segments)
    assert all(alpha.coefficient(s, reverse=True) == (-1,) for s in alpha.scope.ordered_segments)


def test_degree_overflow():
    beta = d_second(Form.from_function(PLFunction.constant(Subdivision(theta()))))
    with pytest.raises(DegreeError):
        d_second(beta)
    with pytest.raises(DegreeError):
        Form((2, 0), theta())
    a = Form((1, 0), theta())
    with pytest.raises(DegreeError):
        wedge(a, a)
    with pytest.raises(DegreeError):
        integrate(a)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_ddc_is_d_second_of_d_prime(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 4, 7)
    f = random_function(random_subdivision(g, rng), rng)
    u = Form.from_function(f)
    dd = d_second(d_prime(u))
    assert dd.values == ddc(f).atoms and not dd.density
    assert d_prime(d_second(u)) == (-1) * dd


def test_wedge_rules():
    g = circle()
    sub = Subdivision(g, [SubdivisionPoint("e", F(1, 2))])
    sc = OpenSubset.whole(sub)
    a = Form((1, 0), sc, {s: 3 for s in sub.segments})
    b = Form((0, 1), sc, {s: 2 for s in sub.segments})
    one = Form((0, 0), sc, {n: 1 for n in sub.nodes})
    assert wedge(one, a) == a
    assert wedge(a, b) == (-1) * wedge(b, a)
    assert integrate(wedge(a, b)) == 3 * 2 * 2
    unit = Form((1, 1), sc, {}, {s: 1 for s in sub.segments})
    assert integrate(unit) == 2
    assert integrate(Form((1, 1), sc)) == 0
    f = Form((0, 0), sc, {n: i for i, n in enumerate(sub.nodes)})
    with pytest.raises(ValueError, match="piecewise linear"):
        wedge(f, f)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_leibniz_rule(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 3, 5)
    sub = random_subdivision(g, rng)
    sc = OpenSubset.whole(sub)
    f = Form.from_function(random_function(sub, rng))
    alpha = random_compact_10(sc, rng)
    lhs = d_second(wedge(f, alpha))
    assert lhs == wedge(f, d_second(alpha)) + wedge(alpha, d_second(f))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_stokes_on_regions(seed, k):
    rng = random.Random(seed)
    region = star_region(k, F(rng.randint(1, 9), 10))
    sc = region.cells.refine([SubdivisionPoint(f"s{i}", F(1, 20)) for i in range(1, k + 1)])
    alpha = random_compact_10(sc, rng, degree=2)
    assert alpha.is_compactly_supported()
    assert integrate(d_second(alpha)) == 0


def test_integrate_needs_compact_support():
    region = star_region(2)
    sc = region.cells
    w = Form((1, 1), sc, {}, {s: 1 for s in sc.ordered_segments})
    with pytest.raises(ValueError, match="compactly supported"):
        integrate(w)


def test_form_refinement_preserves_integral():
    g = theta()
    sub = Subdivision(g)
    alpha = Form((1, 0), OpenSubset.whole(sub), {s: (1, F(1, 2)) for s in sub.segments})
    beta = Form((0, 1), OpenSubset.whole(sub), {s: (2,) for s in sub.segments})
    w = wedge(alpha, beta)
    pts = [SubdivisionPoint("e1", F(1, 3)), SubdivisionPoint("e3", F(2, 5))]
    assert integrate(w.refine(pts)) == integrate(w)
    assert w.refine(pts) == w


# -- cohomology ---------------------------------------------------------------


@pytest.mark.parametrize("g", [circle(), theta(), dumbbell(), path(4)], ids=["circle", "theta", "dumbbell", "path"])
def test_global_hodge_numbers(g):
    b = betti(g)
    assert hodge_numbers(g) == (1, b, b, 1)
    assert hodge_numbers(g, COMPACT) == hodge_numbers(g)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_star_region_numbers(k):
    r = star_region(k)
    assert hodge_numbers(r, FULL) == (1, 0, k - 1, 0)
    assert hodge_numbers(r, COMPACT) == (0, k - 1, 0, 1)


@pytest.mark.parametrize("support", [FULL, COMPACT])
@pytest.mark.parametrize("p", [0, 1])
def test_euler_characteristic(p, support):
    for scope in (theta(), dumbbell(), star_region(3)):
        cx = cochain_complex(scope, p, support)
        h0 = cohomology(scope, p, 0, support).dimension
        h1 = cohomology(scope, p, 1, support).dimension
        assert cx.euler_characteristic() == h0 - h1


def test_h10_is_cycle_space():
    # oracle: fundamental cycles of the spanning tree {e1} of the theta graph
    g = theta()
    basis = cohomology(g, 1, 0)
    assert basis.verify()
    cx = basis.complex
    cycles = []
    for other in ("e2", "e3"):
        cycles.append([F(1) if s.edge == "e1" else (F(-1) if s.edge == other else F(0)) for s in cx.domain])
    for c in cycles:
        assert basis.coordinates(c)
    assert linalg.rank(linalg.SparseMatrix.from_dense(basis.vectors + cycles)) == 2


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_representative_shift_invariance(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 3, 6)
    for p in (0, 1):
        basis = cohomology(g, p, 1)
        cx = basis.complex
        cocycle = [F(rng.randint(-4, 4)) for _ in cx.codomain]
        shift = cx.matrix.matvec([F(rng.randint(-4, 4)) for _ in cx.domain])
        moved = [a + b for a, b in zip(cocycle, shift)]
        assert basis.coordinates(moved) == basis.coordinates(cocycle)


def test_representatives_are_forms_in_scope():
    r = star_region(3)
    b = cohomology(r, 0, 1, COMPACT)
    assert b.dimension == 2 and b.verify()
    for rep in b.representatives:
        assert rep.bidegree == (0, 1) and rep.is_compactly_supported()
        assert form_vector(rep, b.complex, 1) in b.vectors


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_subdivision_invariance_of_all_dimensions(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    g = star(k)
    base = star_region(k, g=g)
    refined = base.cells.refine([SubdivisionPoint(rng.choice(g.edges).id, F(rng.randint(1, 19), 20)) for _ in range(3)])
    for support in (FULL, COMPACT):
        assert hodge_numbers(refined, support) == hodge_numbers(base, support)
