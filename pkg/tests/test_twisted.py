import random

import pytest

from twk.cochains import Cochain, CochainError, Restrictor
from twk.cohomology import p1_cover, p1_line_bundle
from twk.exactalg import QQ, GradedMap, GradedModule, LaurentRing, Matrix, PrimeField, RingError, RingHom
from twk.generate import (
    BACKENDS,
    backend_ring,
    gauge_tw,
    rand_cochain,
    rand_complex,
    rand_cover,
    rand_map,
    rand_tw_morphism,
)
from twk.simplicial import RingedCover
from twk.twisted import (
    TwMorphism,
    TwPerfComplex,
    delta,
    homotopy_relation_check,
    line_bundle,
    mc_check_tw,
    mc_residual_tw,
    tw_compose,
    tw_mor_diff,
)

F7 = PrimeField(7)
LT = LaurentRing(QQ, ("t",))


def _fam(rng, cover, ring):
    return {i: rand_complex(rng, ring).module for i in range(cover.size)}


def test_delta_of_level0_is_zero(rng):
    cover = RingedCover.constant(3, QQ)
    fam = _fam(rng, cover, QQ)
    comps = {((i,), 0): rand_map(rng, QQ, fam[i], fam[i], 0, 1.0) for i in range(3)}
    assert delta(Cochain(cover.cech, fam, fam, comps)).is_zero()


def test_delta_level1_skips_outer_faces(rng):
    cover = p1_cover()
    M = GradedModule({0: 1})
    fam = {0: M, 1: M}
    r = cover.ring((0, 1))
    u = GradedMap(r, M, M, 0, {0: Matrix(r, 1, 1, [[r.monomial((2,))]])})
    c = Cochain(cover.cech, fam, fam, {((0, 1), 0): u})
    d = delta(c)
    # (δu)_{i0 i1 i2} = -u_{i0 i2}: only the inner face contributes
    assert d.component((0, 0, 1), 0) == -u
    assert d.component((0, 1, 1), 0) == -u
    assert d.component((1, 0, 1), 0).is_zero()
    assert d.component((0, 1, 0), 0).is_zero()


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("seed", range(8))
def test_delta_squared_zero(backend, seed):
    rng = random.Random(seed)
    ring = backend_ring(backend)
    cover = rand_cover(rng, ring, 3)
    fam = _fam(rng, cover, ring)
    u = rand_cochain(rng, cover.cech, fam, fam, max_p=2)
    assert u.delta().delta().is_zero()


def test_delta_squared_with_restrictions(rng):
    cover = p1_cover()
    M = GradedModule({0: 1, 1: 1})
    fam = {0: M, 1: M}
    u = rand_cochain(rng, cover.cech, fam, fam, max_p=2, density=0.8)
    assert u.delta().delta().is_zero()


def test_identity_is_two_sided_unit(rng):
    cover = rand_cover(rng, F7, 3)
    A = gauge_tw(rng, cover)
    B = gauge_tw(rng, cover)
    f = rand_tw_morphism(rng, A, B, 0)
    assert tw_compose(TwMorphism.identity(B).f, f.f) == f.f
    assert tw_compose(f.f, TwMorphism.identity(A).f) == f.f


def test_compose_sign_q1_r1(rng):
    cover = RingedCover.constant(2, QQ)
    M = GradedModule({0: 1, 1: 1})
    fam = {0: M, 1: M}
    u = rand_map(rng, QQ, M, M, 1, 1.0)
    v = rand_map(rng, QQ, M, M, 0, 1.0)
    a = Cochain(cover.cech, fam, fam, {((0,), 1): u})
    b = Cochain(cover.cech, fam, fam, {((0, 1), 0): v})
    assert tw_compose(a, b).component((0, 1), 1) == -(u @ v)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("seed", range(6))
def test_leibniz_for_delta(backend, seed):
    rng = random.Random(seed)
    ring = backend_ring(backend)
    cover = rand_cover(rng, ring)
    f0, f1, f2 = (_fam(rng, cover, ring) for _ in range(3))
    m = rng.randint(-1, 1)
    u = rand_cochain(rng, cover.cech, f1, f2, total=m)
    v = rand_cochain(rng, cover.cech, f0, f1, total=rng.randint(-1, 1))
    lhs = u.mul(v).delta()
    rhs = u.delta().mul(v) + (u.mul(v.delta()) if m % 2 == 0 else -u.mul(v.delta()))
    assert lhs == rhs


def test_line_bundle_passes_and_k2_is_cocycle():
    cover = RingedCover.constant(3, F7)
    g = {(0, 1): 2, (1, 2): 3, (0, 2): 6}
    L = line_bundle(cover, g)
    assert mc_check_tw(L).status() == "pass"
    res = Restrictor(L.space)
    for (i, j, k) in cover.nerve_level(2):
        key = (i, j, k)
        cocycle = -res(L.component((i, k)), (i, k), key) + (
            res(L.component((i, j)), (i, j), key) @ res(L.component((j, k)), (j, k), key))
        assert cocycle.is_zero()
        assert mc_residual_tw(L).component(key, 0).is_zero()


def test_cocycle_failure_rejected():
    cover = RingedCover.constant(3, F7)
    with pytest.raises(RingError):
        line_bundle(cover, {(0, 1): 2, (1, 2): 3, (0, 2): 5})


def test_zero_module_object_passes():
    cover = RingedCover.constant(2, QQ)
    Z = GradedModule({})
    t = TwPerfComplex(cover, {0: Z, 1: Z}, {})
    assert mc_check_tw(t).status() == "pass"


def test_trivial_bundle_is_identity():
    cover = RingedCover.constant(2, QQ)
    L = line_bundle(cover, {(0, 1): QQ.one()})
    one = GradedMap.identity(QQ, GradedModule({0: 1}))
    for s in cover.nerve_level(1):
        assert L.component(s) == one
    assert mc_check_tw(L).status() == "pass"


@pytest.mark.parametrize("n", range(-3, 4))
def test_p1_line_bundles_valid(n):
    assert mc_check_tw(p1_line_bundle(p1_cover(), n)).status() == "pass"


def test_non_unit_transition_rejected():
    cover = p1_cover()
    with pytest.raises(RingError):
        line_bundle(cover, {(0, 1): cover.ring((0, 1)).from_dict({(0,): QQ.one(), (1,): QQ.one()})})


def test_scaled_transition_fails():
    cover = p1_cover()
    L = p1_line_bundle(cover, 2)
    r = cover.ring((0, 1))
    M = GradedModule({0: 1})
    comps = {s: L.component(s) for s in cover.nerve_level(1)}
    bump = r.from_dict({(0,): QQ.one(), (1,): QQ.one()})
    comps[(0, 1)] = GradedMap(r, M, M, 0, {0: Matrix(r, 1, 1, [[r.mul(r.monomial((2,)), bump)]])})
    bad = TwPerfComplex(cover, L.locals, comps)
    rep = mc_check_tw(bad)
    assert rep.status() == "fail"
    names = [n for n, v in rep.nondegeneracy if v.definite_failure]
    assert names == ["a^(1,0)_(U0,U1)"]
    assert [r.simplex for r in rep.residuals][0] == "(U0,U1,U0)"


def test_local_d_squared_is_k0_instance():
    cover = RingedCover.constant(1, QQ)
    M = GradedModule({0: 1, 1: 1, 2: 1})
    d = GradedMap(QQ, M, M, 1, {0: Matrix.identity(QQ, 1), 1: Matrix.identity(QQ, 1)})
    t = TwPerfComplex(cover, {0: M}, {(0,): d, (0, 0): GradedMap.identity(QQ, M)})
    res = mc_residual_tw(t)
    assert res.component((0,), 2) == d @ d
    assert mc_check_tw(t).status() == "fail"


def test_identity_morphism_closed(rng):
    A = gauge_tw(rng, RingedCover.constant(3, QQ))
    assert tw_mor_diff(TwMorphism.identity(A)).f.is_zero()


def test_degree0_local_morphism_formula(rng):
    cover = RingedCover.constant(2, F7)
    A, B = gauge_tw(rng, cover), gauge_tw(rng, cover)
    comps = {(i,): rand_map(rng, F7, A.locals[i], B.locals[i], 0, 0.8) for i in range(2)}
    f = TwMorphism(A, B, 0, comps)
    df = tw_mor_diff(f)
    for (i, j) in cover.nerve_level(1):
        want = B.component((i, j)) @ f.f.component((j,), 0) - f.f.component((i,), 0) @ A.component((i, j))
        assert df.f.component((i, j), 0) == want


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("seed", range(4))
def test_mor_diff_squares_to_zero(backend, seed):
    rng = random.Random(seed)
    cover = rand_cover(rng, backend_ring(backend))
    A, B = gauge_tw(rng, cover), gauge_tw(rng, cover)
    f = rand_tw_morphism(rng, A, B, rng.randint(-2, 1))
    assert tw_mor_diff(tw_mor_diff(f)).f.is_zero()


def test_morphism_shape_errors(rng):
    A = gauge_tw(rng, RingedCover.constant(2, QQ))
    B = gauge_tw(rng, RingedCover.constant(2, QQ))
    with pytest.raises(CochainError):
        TwMorphism(A, B, 0, {})


def test_homotopy_relation_line_bundle():
    L = p1_line_bundle(p1_cover(), 3)
    for i, j in ((0, 1), (1, 0)):
        assert homotopy_relation_check(L, i, j)["ok"]


@pytest.mark.parametrize("seed", range(6))
def test_homotopy_relation_random_f7(seed):
    rng = random.Random(seed)
    cover = RingedCover.constant(3, F7)
    t = gauge_tw(rng, cover, GradedModule({0: 1, 1: 2}))
    for (i, j) in cover.nerve_level(1):
        if i != j:
            assert homotopy_relation_check(t, i, j)["ok"]


def test_homotopy_relation_detects_missing_h():
    # a_01 a_10 = 2 != 1 = a_00 with no a^{2,-1}_{010} to absorb the difference
    cover = RingedCover.constant(2, QQ)
    M = GradedModule({0: 1})
    one = GradedMap.identity(QQ, M)
    two = one.scale(QQ.coerce(2))
    t = TwPerfComplex(cover, {0: M, 1: M}, {(0, 0): one, (1, 1): one, (0, 1): two, (1, 0): one})
    assert not homotopy_relation_check(t, 0, 1)["ok"]
    assert mc_check_tw(t).status() == "fail"


@pytest.mark.parametrize("seed", range(5))
def test_residual_natural_under_ring_maps(seed):
    rng = random.Random(seed)
    cover = RingedCover.constant(2, LT)
    t = gauge_tw(rng, cover, GradedModule({0: 1, 1: 1}))
    # perturb so the residual is nonzero, then push everything along t -> 2 t^-1
    comps = {s: f for (s, q), f in t.a.comps.items()}
    f = t.component((0, 1))
    comps[(0, 1)] = f + rand_map(rng, LT, f.source, f.target, 0, 1.0)
    bad = TwPerfComplex(cover, t.locals, comps)
    h = RingHom(LT, LT, {"t": LT.monomial((-1,), 2)})
    mapped = TwPerfComplex(cover, t.locals, {s: g.map_ring(h) for s, g in comps.items()})
    want = mc_residual_tw(bad).map_components(lambda s, q, g: g.map_ring(h))
    assert mc_residual_tw(mapped) == want
