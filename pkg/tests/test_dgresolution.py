import random

import pytest

from twk.cochains import Cochain, CochainError, cochain_D, shuffle_mul
from twk.dgresolution import (
    ComplexObj,
    SimplexMor,
    SimplexObj,
    constant_embed,
    mc_check_simplex,
    mc_residual_simplex,
    mor_diff,
    same_object,
    sigma_pushforward,
    sigma_pushforward_mor,
)
from twk.exactalg import QQ, GradedMap, GradedModule, Matrix, PrimeField, hom_differential
from twk.generate import (
    gauge_simplex,
    perturb_simplex,
    rand_cochain,
    rand_complex,
    rand_map,
    rand_simplex_morphism,
)
from twk.simplicial import OrdinalMap, SimplicialError, StandardSimplex, compose_ordinal, monotone_maps
from twk.totalization import TotObject, mc_check_tot

F7 = PrimeField(7)


def _family(rng, ring, n):
    cx = {i: rand_complex(rng, ring) for i in range(n + 1)}
    return {i: c.module for i, c in cx.items()}, {i: c.diff for i, c in cx.items()}


def test_D_of_zero():
    space = StandardSimplex(2, F7)
    fam = {i: GradedModule({0: 1}) for i in range(3)}
    d = {i: GradedMap.zero(F7, fam[i], fam[i], 1) for i in range(3)}
    assert cochain_D(Cochain.zero(space, fam, fam), d, d).is_zero()


def test_D_on_p1_is_minus_hom_differential(rng):
    space = StandardSimplex(1, QQ)
    fam, d = _family(rng, QQ, 1)
    f = rand_map(rng, QQ, fam[1], fam[0], 0, 0.9)
    c = Cochain(space, fam, fam, {((0, 1), 0): f})
    Dc = cochain_D(c, d, d)
    assert Dc.component((0, 1), 1) == -hom_differential(f, d[1], d[0])


@pytest.mark.parametrize("seed", range(30))
def test_DD_zero_f7(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    space = StandardSimplex(n, F7)
    fam, d = _family(rng, F7, n)
    c = rand_cochain(rng, space, fam, fam, max_p=3)
    assert cochain_D(cochain_D(c, d, d), d, d).is_zero()


def test_shuffle_sign_q1_r1(rng):
    space = StandardSimplex(2, QQ)
    M = GradedModule({0: 1, 1: 1})
    fam = {i: M for i in range(3)}
    u = rand_map(rng, QQ, M, M, 1, 1.0)
    v = rand_map(rng, QQ, M, M, 0, 1.0)
    phi = Cochain(space, fam, fam, {((0,), 1): u})
    eta = Cochain(space, fam, fam, {((0, 1), 0): v})
    assert shuffle_mul(phi, eta).component((0, 1), 1) == -(u @ v)


def test_identity_family_is_unit(rng):
    space = StandardSimplex(2, QQ)
    fam, _ = _family(rng, QQ, 2)
    c = rand_cochain(rng, space, fam, fam, max_p=2)
    one = Cochain.identity(space, fam)
    assert one.mul(c) == c and c.mul(one) == c


@pytest.mark.parametrize("seed", range(20))
def test_shuffle_associative(seed):
    rng = random.Random(seed)
    space = StandardSimplex(rng.randint(1, 3), QQ)
    fams = [_family(rng, QQ, space.n)[0] for _ in range(4)]
    a = rand_cochain(rng, space, fams[2], fams[3])
    b = rand_cochain(rng, space, fams[1], fams[2])
    c = rand_cochain(rng, space, fams[0], fams[1])
    assert a.mul(b).mul(c) == a.mul(b.mul(c))


@pytest.mark.parametrize("seed", range(20))
def test_leibniz_for_D(seed):
    rng = random.Random(seed)
    space = StandardSimplex(rng.randint(1, 3), F7)
    (fa, da), (fb, db), (fc, dc) = (_family(rng, F7, space.n) for _ in range(3))
    m = rng.randint(-1, 1)
    u = rand_cochain(rng, space, fb, fc, total=m)
    v = rand_cochain(rng, space, fa, fb, total=rng.randint(-1, 1))
    lhs = cochain_D(u.mul(v), da, dc)
    Du, Dv = cochain_D(u, db, dc), cochain_D(v, da, db)
    rhs = Du.mul(v) + (u.mul(Dv) if m % 2 == 0 else -u.mul(Dv))
    assert lhs == rhs


def test_constant_object_passes(rng):
    E = rand_complex(rng, QQ)
    for n in range(4):
        assert mc_check_simplex(constant_embed(E, n)).status() == "pass"


def test_constant_with_nonzero_diff_residual_at_012(rng):
    E = ComplexObj(GradedModule({0: 1, 1: 1}),
                   GradedMap(QQ, GradedModule({0: 1, 1: 1}), GradedModule({0: 1, 1: 1}), 1,
                             {0: Matrix.from_literals(QQ, [["1"]])}))
    s = constant_embed(E, 2)
    assert mc_residual_simplex(s).component((0, 1, 2), 0).is_zero()
    assert mc_residual_simplex(s).is_zero()


def test_non_invertible_edge_fails_nondegeneracy():
    M = GradedModule({0: 1})
    E = ComplexObj.zero_diff(QQ, M)
    s = SimplexObj(1, [E, E], {(0, 1): GradedMap.zero(QQ, M, M, 0)})
    rep = mc_check_simplex(s)
    assert rep.mc_ok and not rep.nondegenerate_ok
    assert rep.status() == "fail"


def _bump_012(s, n):
    comps = {t: f for (t, q), f in s.phi.comps.items()}
    f = s.component((0, 1, 2))
    blk = f.block(1)
    eps = GradedMap(QQ, f.source, f.target, -1, {1: Matrix.unit(QQ, blk.rows, blk.cols, 0, 0)})
    comps[(0, 1, 2)] = f + eps
    return SimplexObj(n, s.objects, comps, fill_units=False, space=s.space), eps


@pytest.mark.parametrize("seed", range(15))
def test_perturbing_phi2_on_delta2(seed):
    # φ_012 is the top component of Δ_2: only its closedness is constrained
    rng = random.Random(seed)
    s = gauge_simplex(rng, 2, QQ, GradedModule({0: 1, 1: 1}))
    assert mc_check_simplex(s).status() == "pass"
    bad, eps = _bump_012(s, 2)
    rep = mc_check_simplex(bad)
    d = s.diffs[0]
    if hom_differential(eps, d, d).is_zero():
        assert rep.status() == "pass"
    else:
        assert rep.status() == "fail"
        assert [r.key for r in rep.residuals] == [(0, 1, 2)]


@pytest.mark.parametrize("seed", range(15))
def test_perturbing_phi2_on_delta3_is_detected(seed):
    rng = random.Random(seed)
    s = gauge_simplex(rng, 3, QQ, GradedModule({0: 1, 1: 1}))
    bad, _ = _bump_012(s, 3)
    rep = mc_check_simplex(bad)
    assert rep.status() == "fail"
    assert all(len(r.key) >= 3 for r in rep.residuals)
    assert any(len(r.key) == 4 for r in rep.residuals)


@pytest.mark.parametrize("seed", range(10))
def test_random_perturbations_break_or_stay_valid(seed):
    # a perturbed object either fails, or is again valid by the independent Tot engine
    rng = random.Random(seed)
    s = gauge_simplex(rng, rng.randint(1, 3), QQ)
    bad, info = perturb_simplex(rng, s)
    rep = mc_check_simplex(bad)
    phi = {}
    for (t, q), f in bad.phi.comps.items():
        phi.setdefault(len(t) - 1, {})[t] = f
    tot = TotObject(bad.space, bad.family, bad.diffs, phi)
    assert (rep.status() == "pass") == (mc_check_tot(tot).status() == "pass"), info


def test_identity_morphism_closed(rng):
    s = gauge_simplex(rng, 2, QQ)
    one = SimplexMor(s, s, 0, Cochain.identity(s.space, s.family))
    assert mor_diff(one).theta.is_zero()


@pytest.mark.parametrize("seed", range(15))
def test_mor_diff_squares_to_zero(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    A, B = gauge_simplex(rng, n, QQ), gauge_simplex(rng, n, QQ)
    th = rand_simplex_morphism(rng, A, B, rng.randint(-1, 1))
    assert mor_diff(mor_diff(th)).theta.is_zero()


def test_sigma_identity_and_vertex_extraction(rng):
    s = gauge_simplex(rng, 2, QQ)
    assert same_object(sigma_pushforward(OrdinalMap.identity(2), s), s)
    for i in range(3):
        v = sigma_pushforward(OrdinalMap(0, 2, (i,)), s)
        assert v.objects == (s.objects[i],)


def test_sigma_size_mismatch(rng):
    s = gauge_simplex(rng, 2, QQ)
    with pytest.raises(SimplicialError):
        sigma_pushforward(OrdinalMap.identity(1), s)


def test_sigma_rejects_invalid_input(rng):
    s = gauge_simplex(rng, 1, QQ)
    comps = {t: f for (t, q), f in s.phi.comps.items()}
    comps[(0, 0)] = comps[(0, 0)].scale(QQ.coerce(2))
    bad = SimplexObj(1, s.objects, comps, fill_units=False, space=s.space)
    with pytest.raises(SimplicialError):
        sigma_pushforward(OrdinalMap.identity(1), bad)


def test_constant_stays_constant(rng):
    E = rand_complex(rng, F7)
    c = constant_embed(E, 3)
    for n in range(3):
        for sigma in monotone_maps(n, 3):
            out = sigma_pushforward(sigma, c)
            assert same_object(out, constant_embed(E, n))


@pytest.mark.parametrize("seed", range(5))
def test_sigma_contravariant_functoriality(seed):
    rng = random.Random(seed)
    s = gauge_simplex(rng, 2, F7)
    for a in range(3):
        for tau in monotone_maps(a, 2):
            for b in range(a + 1):
                for sigma in monotone_maps(b, a):
                    lhs = sigma_pushforward(compose_ordinal(tau, sigma), s)
                    rhs = sigma_pushforward(sigma, sigma_pushforward(tau, s))
                    assert same_object(lhs, rhs)


@pytest.mark.parametrize("seed", range(5))
def test_sigma_commutes_with_mor_diff(seed):
    rng = random.Random(seed)
    A, B = gauge_simplex(rng, 2, QQ), gauge_simplex(rng, 2, QQ)
    th = rand_simplex_morphism(rng, A, B, 0)
    for sigma in monotone_maps(1, 2):
        left = mor_diff(sigma_pushforward_mor(sigma, th))
        right = sigma_pushforward_mor(sigma, mor_diff(th), left.source, left.target)
        assert left.theta == right.theta


def test_simplex_obj_shape_errors(rng):
    E = rand_complex(rng, QQ)
    with pytest.raises(CochainError):
        SimplexObj(2, [E, E], {})
