import pytest
from hypothesis import given, settings, strategies as st

from oracles import ReflectionRep, grid_avoidant
from racgdiv import RACG, RaySpec, cycle_graph, gamma_d
from racgdiv.cayley import (
    BudgetExceededError,
    DivergenceSample,
    avoidant_distance,
    build_ball,
    delta_estimate,
    fit_degree,
    geodesic_divergence_profile,
    pair_divergence,
    read_samples_csv,
    samples_to_csv,
)

# first-run values at cap 2 (stable at cap 4); r <= 4 also checked against the matrix BFS
GAMMA2_PAIR = {1: 2, 2: 6, 3: 12, 4: 20, 5: 30, 6: 42}
GAMMA3_PAIR = {1: 2, 2: 8, 3: 18, 4: 34}


def rep_of(g):
    return ReflectionRep(g.n, [set(a) for a in g.adjacency])


# -- balls --------------------------------------------------------------------------


def test_sphere_sizes_c5(c5):
    assert build_ball(c5, 4).sizes() == [1, 5, 15, 40, 105]


def test_sphere_sizes_gamma1(g1):
    assert build_ball(g1, 8).sizes() == [1] + [4 * r for r in range(1, 9)]


@pytest.mark.parametrize("g, r", [(cycle_graph(5), 6), (gamma_d(2), 6), (gamma_d(3), 5)], ids=["C5", "gamma2", "gamma3"])
def test_sphere_sizes_match_reflection_rep(g, r):
    assert build_ball(g, r).sizes() == rep_of(g).sphere_sizes(r)


def test_ball_membership_and_budget(c5):
    ball = build_ball(c5, 3)
    assert len(ball) == 61
    assert (0, 2) in ball and (0, 0) not in ball
    with pytest.raises(BudgetExceededError):
        build_ball(c5, 6, budget=100)


# -- avoidant distance ------------------------------------------------------------------


def test_gamma1_examples(g1):
    G = RACG(g1)
    fwd, back = G.gamma_rays(G.word("a0 b0"))
    res = avoidant_distance(G, G.ray_point(back, 2), G.ray_point(fwd, 2), 2)
    assert res.value == 8 and res.exact
    s = pair_divergence(G, RaySpec(period=G.word("a0 b0")), RaySpec(period=G.word("a1 b1")), 4)
    assert s.value == 8 and s.kind == "pair-geodesic"
    assert delta_estimate(G, 3).value == 12


@pytest.mark.parametrize("r", range(1, 9))
def test_gamma1_grid_oracle(g1, r):
    G = RACG(g1)
    fwd, back = G.gamma_rays(G.word("a0 b0"))
    res = avoidant_distance(G, G.ray_point(back, r), G.ray_point(fwd, r), r)
    assert res.value == grid_avoidant(r) == 4 * r


def test_path_is_avoidant(g2):
    G = RACG(g2)
    fwd, back = G.gamma_rays()
    x, y = G.ray_point(back, 3), G.ray_point(fwd, 3)
    res = avoidant_distance(G, x, y, 3, with_path=True)
    path = res.path
    assert path[0] == x and path[-1] == y and len(path) == res.value + 1
    assert all(len(v) >= 3 for v in path)
    for u, v in zip(path, path[1:]):
        assert any(G.multiply_letter(u, s) == v for s in range(G.n))


def test_unreachable_in_annulus(chord):
    # the separating pair 1-4 splits every large sphere
    G = RACG(chord)
    fwd, back = G.gamma_rays()
    res = avoidant_distance(G, G.ray_point(back, 5), G.ray_point(fwd, 5), 5, cap=4, check_stability=False)
    assert res.value is None


def test_endpoint_checks(g2):
    G = RACG(g2)
    with pytest.raises(ValueError, match="length >= r"):
        avoidant_distance(G, (), G.word("a0"), 1)
    with pytest.raises(ValueError, match="outside the annulus"):
        avoidant_distance(G, G.word("a2 b2 a2"), G.word("a0"), 1, cap=1)


@st.composite
def sphere_pairs(draw):
    g = draw(st.sampled_from([gamma_d(2), cycle_graph(5), gamma_d(1)]))
    G = RACG(g)
    r = draw(st.integers(0, 2))
    ball = build_ball(G, r + 2)
    pool = [v for k in range(r, r + 3) for v in ball.sphere(k)]
    x = draw(st.sampled_from(pool))
    y = draw(st.sampled_from(pool))
    return G, r, x, y


@settings(max_examples=60, deadline=None)
@given(sphere_pairs())
def test_avoidant_invariants(case):
    G, r, x, y = case
    a = avoidant_distance(G, x, y, r, cap=3)
    b = avoidant_distance(G, y, x, r, cap=3)
    assert a.value == b.value
    dist = len(G.multiply(G.inverse(x), y))
    if a.value is not None:
        assert a.value >= dist
        assert (a.value - dist) % 2 == 0
    # a wider annulus can only shorten the path
    wider = avoidant_distance(G, x, y, r, cap=5, check_stability=False)
    if a.value is not None:
        assert wider.value is not None and wider.value <= a.value
    if r == 0:
        assert a.value == dist


@pytest.mark.parametrize("r", range(1, 5))
def test_avoidant_matches_reflection_rep(g2, r):
    # same annulus on both sides; the oracle builds it from matrices
    G = RACG(g2)
    rep = rep_of(g2)
    alpha, beta = RaySpec(period=G.word("b2 a2")), RaySpec(period=G.word("b1 a1"))
    x, y = G.ray_point(alpha, r), G.ray_point(beta, r)
    res = avoidant_distance(G, x, y, r, cap=4, check_stability=False)
    assert res.value == rep.avoidant(alpha.letters(r), beta.letters(r), r, r + 4)
    fwd, back = G.gamma_rays()
    if r <= 3:
        x, y = G.ray_point(back, r), G.ray_point(fwd, r)
        res = avoidant_distance(G, x, y, r, cap=4, check_stability=False)
        assert res.value == rep.avoidant(back.letters(r), fwd.letters(r), r, r + 4)


def test_gamma3_matches_reflection_rep():
    g = gamma_d(3)
    G = RACG(g)
    rep = rep_of(g)
    alpha, beta = RaySpec(period=G.word("b3 a3")), RaySpec(period=G.word("b2 a2"))
    for r in (1, 2, 3):
        res = avoidant_distance(G, G.ray_point(alpha, r), G.ray_point(beta, r), r, cap=3, check_stability=False)
        assert res.value == rep.avoidant(alpha.letters(r), beta.letters(r), r, r + 3)


def test_pair_goldens():
    G2, G3 = RACG(gamma_d(2)), RACG(gamma_d(3))
    a2, b2 = RaySpec(period=G2.word("b2 a2")), RaySpec(period=G2.word("b1 a1"))
    a3, b3 = RaySpec(period=G3.word("b3 a3")), RaySpec(period=G3.word("b2 a2"))
    got2 = {r: pair_divergence(G2, a2, b2, r, cap=2) for r in GAMMA2_PAIR}
    got3 = {r: pair_divergence(G3, a3, b3, r, cap=2) for r in GAMMA3_PAIR}
    assert {r: s.value for r, s in got2.items()} == GAMMA2_PAIR
    assert {r: s.value for r, s in got3.items()} == GAMMA3_PAIR
    assert all(s.stable for s in (*got2.values(), *got3.values()))


def test_fixed_cap_reports_stability(g2):
    G = RACG(g2)
    fwd, back = G.gamma_rays()
    res = avoidant_distance(G, G.ray_point(back, 4), G.ray_point(fwd, 4), 4, cap=4)
    assert res.cap == 4 and res.stable is not None


# -- profiles, delta, fitting ------------------------------------------------------------


def test_profile_order_and_workers(g2):
    G = RACG(g2)
    fwd, back = G.gamma_rays()
    one = geodesic_divergence_profile(G, fwd, back, [3, 1, 2])
    two = geodesic_divergence_profile(G, fwd, back, [3, 1, 2], workers=2)
    assert [s.r for s in one] == [3, 1, 2]
    assert one == two


def test_profile_rejects_non_geodesic(g2):
    G = RACG(g2)
    ray = RaySpec(period=G.word("a0 b0"))
    with pytest.raises(ValueError, match="not a geodesic"):
        geodesic_divergence_profile(G, ray, ray, [2])


def test_delta_c5(c5):
    s = delta_estimate(c5, 2)
    assert s.value == 14 and s.exact and s.kind == "sphere-sup-sampled"


def test_delta_sampled_is_lower_bound(c5):
    full = delta_estimate(c5, 2).value
    a = delta_estimate(c5, 2, "sampled", pairs=6, seed=7)
    b = delta_estimate(c5, 2, "sampled", pairs=6, seed=7)
    assert a == b and a.value <= full and not a.exact


def test_delta_budgets(c5):
    with pytest.raises(BudgetExceededError):
        delta_estimate(c5, 3, pair_budget=10)
    with pytest.raises(ValueError):
        delta_estimate(c5, 1, "clever")


def _samples(values, kind="bi-infinite"):
    return [DivergenceSample(r, v, kind, True, 4, True) for r, v in values.items()]


def test_fit_degree_slopes():
    assert fit_degree(_samples({r: 4 * r for r in range(1, 9)})).slope == pytest.approx(1.0)
    assert fit_degree(_samples({r: r * r for r in range(3, 9)})).slope == pytest.approx(2.0)
    with pytest.raises(ValueError):
        fit_degree(_samples({1: 1, 2: 2, 3: 3}))


def test_csv_roundtrip():
    samples = _samples({3: 14, 4: 22}) + [DivergenceSample(5, None, "pair-geodesic", False, 3, None)]
    text = samples_to_csv(samples)
    assert text.splitlines()[0] == "kind,r,value,exact,cap,stable"
    assert read_samples_csv(text) == samples
    with pytest.raises(ValueError):
        read_samples_csv("r,value\n")
