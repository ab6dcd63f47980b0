"""Random exact data for property tests, the self-test and the acceptance suite.

Valid Maurer-Cartan objects are produced by gauge transformation: start from
the constant object (one complex (M, D) everywhere, identity transition maps,
nothing higher) and conjugate by g = g0 + h, where g0 is an invertible degree
0 map per vertex and h is a normalized cochain of total degree 0.  Then

    a' = g a g^-1 - (δg) g^-1

is again Maurer-Cartan, stays normalized (identities on degenerate
1-simplices, zero higher components on degenerate simplices), and has
nonzero components at every level the degree window allows.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .cochains import Cochain
from .dgresolution import ComplexObj, SimplexMor, SimplexObj
from .equivariant import EquivariantComplex
from .exactalg import QQ, GradedMap, GradedModule, LaurentRing, Matrix, PrimeField, Ring
from .simplicial import ActionNerve, CechNerve, GroupAction, RingedCover, StandardSimplex
from .totalization import TotMorphism, TotObject, _pull
from .twisted import TwMorphism, TwPerfComplex

BACKENDS = ("rationals", "f101", "laurent")


def backend_ring(name: str) -> Ring:
    if name == "rationals":
        return QQ
    if name == "f101":
        return PrimeField(101)
    if name == "laurent":
        return LaurentRing(QQ, ("t",))
    if name.startswith("f") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ValueError(f"unknown backend {name!r}")


# -- scalars, modules, maps ------------------------------------------------------


def rand_base(rng: random.Random, base: Ring, nonzero: bool = False):
    while True:
        if isinstance(base, PrimeField):
            x = rng.randrange(base.p)
        else:
            x = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 1, 2)))
        if x or not nonzero:
            return base.coerce(x)


def rand_scalar(rng: random.Random, ring: Ring, nonzero: bool = False, span: int = 2):
    if not isinstance(ring, LaurentRing):
        return rand_base(rng, ring, nonzero)
    while True:
        terms = {}
        for _ in range(rng.randint(0 if not nonzero else 1, 2)):
            lo = 0 if ring.polynomial else -span
            e = tuple(rng.randint(lo, span) for _ in ring.variables)
            terms[e] = rand_base(rng, ring.base, nonzero=True)
        x = ring.from_dict(terms)
        if x or not nonzero:
            return x


def rand_unit(rng: random.Random, ring: Ring):
    if isinstance(ring, LaurentRing):
        lo = 0 if ring.polynomial else -2
        hi = 0 if ring.polynomial else 2
        e = tuple(rng.randint(lo, hi) for _ in ring.variables)
        return ring.monomial(e, rand_base(rng, ring.base, nonzero=True))
    return rand_base(rng, ring, nonzero=True)


def rand_module(rng: random.Random, spread: int = 2, lo: int | None = None, max_rank: int = 2) -> GradedModule:
    """Ranks in degrees lo..lo+spread; never the zero module."""
    if lo is None:
        lo = rng.randint(-1, 0)
    while True:
        ranks = {d: rng.randint(0, max_rank) for d in range(lo, lo + spread + 1)}
        m = GradedModule(ranks)
        if m.total_rank:
            return m


def rand_matrix(rng: random.Random, ring: Ring, rows: int, cols: int, density: float = 0.5) -> Matrix:
    z = ring.zero()
    data = [[rand_scalar(rng, ring, nonzero=True) if rng.random() < density else z for _ in range(cols)]
            for _ in range(rows)]
    return Matrix(ring, rows, cols, data)


def rand_map(rng: random.Random, ring: Ring, src: GradedModule, tgt: GradedModule, degree: int,
             density: float = 0.5) -> GradedMap:
    blocks = {}
    for d, r in src.ranks:
        rt = tgt.rank(d + degree)
        if rt:
            blocks[d] = rand_matrix(rng, ring, rt, r, density)
    return GradedMap(ring, src, tgt, degree, blocks)


def rand_invertible(rng: random.Random, ring: Ring, module: GradedModule, ops: int = 3) -> tuple[GradedMap, GradedMap]:
    """A random degree-0 automorphism and its inverse, built from elementary operations."""
    blocks, inv = {}, {}
    for d, r in module.ranks:
        g = Matrix.identity(ring, r)
        gi = Matrix.identity(ring, r)
        for _ in range(ops):
            if r > 1 and rng.random() < 0.7:
                i, j = rng.sample(range(r), 2)
                c = rand_scalar(rng, ring, nonzero=True)
                e = Matrix.identity(ring, r).with_entry(i, j, c)
                ei = Matrix.identity(ring, r).with_entry(i, j, ring.neg(c))
            else:
                i = rng.randrange(r)
                u = rand_unit(rng, ring)
                e = Matrix.identity(ring, r).with_entry(i, i, u)
                ei = Matrix.identity(ring, r).with_entry(i, i, ring.inverse(u))
            g = e @ g
            gi = gi @ ei
        blocks[d] = g
        inv[d] = gi
    return GradedMap(ring, module, module, 0, blocks), GradedMap(ring, module, module, 0, inv)


def split_differential(rng: random.Random, ring: Ring, module: GradedModule) -> GradedMap:
    """A differential in split normal form: each basis vector is a source, a target or neither."""
    hit: dict = {}
    blocks = {}
    for d, r in module.ranks:
        r1 = module.rank(d + 1)
        if not r1:
            continue
        free = [i for i in range(r) if i not in hit.get(d, set())]
        c = rng.randint(0, min(len(free), r1))
        if not c:
            continue
        srcs = rng.sample(free, c)
        tgts = rng.sample(range(r1), c)
        hit[d + 1] = set(tgts)
        m = Matrix.zeros(ring, r1, r)
        for a, b in zip(srcs, tgts):
            m = m.with_entry(b, a, rand_unit(rng, ring))
        blocks[d] = m
    return GradedMap(ring, module, module, 1, blocks)


def rand_complex(rng: random.Random, ring: Ring, module: GradedModule | None = None, spread: int = 2) -> ComplexObj:
    module = module or rand_module(rng, spread)
    d0 = split_differential(rng, ring, module)
    g, gi = rand_invertible(rng, ring, module)
    return ComplexObj(module, g @ d0 @ gi)


def rand_cover(rng: random.Random, ring: Ring, n_opens: int | None = None) -> RingedCover:
    """A constant-ring cover with a random nerve on at most four opens."""
    n = n_opens or rng.randint(1, 4)
    subsets = [frozenset(s) for r in range(2, n + 1) for s in itertools.combinations(range(n), r)]
    chosen = [s for s in subsets if rng.random() < 0.6]
    if n > 1 and not any(len(s) == 2 for s in chosen):
        chosen.append(frozenset(rng.sample(range(n), 2)))
    nerve = [frozenset([i]) for i in range(n)] + chosen
    return RingedCover.constant(n, ring, nerve)


# -- cochains ----------------------------------------------------------------------


def _levels(space, max_p: int):
    if isinstance(space, CechNerve):
        return {p: space.cover.nerve_level(p) for p in range(max_p + 1)}
    return {p: space.level(p) for p in range(max_p + 1)}


def rand_cochain(rng: random.Random, space, src, tgt, total: int | None = None, max_p: int = 2,
                 density: float = 0.3, q_range: tuple = (-2, 2)) -> Cochain:
    """Sparse random cochain; homogeneous of total degree ``total`` when given."""
    comps = {}
    for p, tuples in _levels(space, max_p).items():
        qs = [total - p] if total is not None else list(range(q_range[0], q_range[1] + 1))
        for t in tuples:
            for q in qs:
                if rng.random() >= density:
                    continue
                f = rand_map(rng, space.ring(t), src[t[-1]], tgt[t[0]], q)
                if not f.is_zero():
                    comps[(t, q)] = f
    return Cochain(space, src, tgt, comps)


def _no_repeats(t) -> bool:
    return all(a != b for a, b in zip(t, t[1:]))


def _gauge_push(rng: random.Random, space, vertices, level1, module: GradedModule, ring: Ring, spread: int,
                density: float):
    """Gauge transform of the constant object on a push-engine index space."""
    fam = {v: module for v in vertices}
    d0 = split_differential(rng, ring, module)
    ident = GradedMap.identity(ring, module)
    comps = {((v,), 1): d0 for v in vertices}
    for t in level1:
        comps[(t, 0)] = ident
    a = Cochain(space, fam, fam, comps)
    g0c, g0i = {}, {}
    for v in vertices:
        g, gi = rand_invertible(rng, ring, module)
        g0c[((v,), 0)] = g
        g0i[((v,), 0)] = gi
    hcomps = {}
    for p, tuples in _levels(space, spread).items():
        if p == 0:
            continue
        for t in tuples:
            if _no_repeats(t) and rng.random() < density:
                f = rand_map(rng, space.ring(t), module, module, -p)
                if not f.is_zero():
                    hcomps[(t, -p)] = f
    g0 = Cochain(space, fam, fam, g0c)
    g0inv = Cochain(space, fam, fam, g0i)
    h = Cochain(space, fam, fam, hcomps)
    g = g0 + h
    step = -(g0inv.mul(h))
    term = g0inv
    ginv = g0inv
    while True:
        term = step.mul(term)
        if term.is_zero():
            break
        ginv = ginv + term
    return g.mul(a).mul(ginv) - g.delta().mul(ginv), fam


def gauge_tw(rng: random.Random, cover: RingedCover, module: GradedModule | None = None, spread: int = 2,
             density: float = 0.4, name: str = "") -> TwPerfComplex:
    """A random valid twisted complex on ``cover`` (constant-ring covers)."""
    ring = cover.ring((0,))
    module = module or rand_module(rng, spread)
    spread = (module.max_degree - module.min_degree) if module.ranks else 0
    space = cover.cech
    a, fam = _gauge_push(rng, space, range(cover.size), cover.nerve_level(1), module, ring, spread, density)
    return TwPerfComplex(cover, fam, a, name=name)


def gauge_simplex(rng: random.Random, n: int, ring: Ring, module: GradedModule | None = None, spread: int = 2,
                  density: float = 0.5) -> SimplexObj:
    """A random valid object of Δₙ(B)."""
    module = module or rand_module(rng, spread)
    spread = module.max_degree - module.min_degree
    space = StandardSimplex(n, ring)
    level1 = [(i, j) for i in range(n + 1) for j in range(i, n + 1)]
    a, fam = _gauge_push(rng, space, range(n + 1), level1, module, ring, spread, density)
    objects = [ComplexObj(module, a.component((i,), 1)) for i in range(n + 1)]
    phi = {t: f for (t, q), f in a.comps.items() if len(t) >= 2}
    return SimplexObj(n, objects, phi, fill_units=False, space=space)


# pull-engine algebra for diagrams given level by level


def _pull_mul(backend, u: dict, v: dict, max_level: int) -> dict:
    out: dict = {}
    for k in range(max_level + 1):
        for s in backend.level(k):
            acc = None
            for l in range(k + 1):
                fs, bs = backend.front(s, l), backend.back(s, k - l)
                f = u.get(l, {}).get(fs)
                g = v.get(k - l, {}).get(bs)
                if f is None or g is None:
                    continue
                term = _pull(backend, f, fs, s) @ _pull(backend, g, bs, s)
                if (f.degree * (k - l)) % 2:
                    term = -term
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                out.setdefault(k, {})[s] = acc
    return out


def _pull_delta(backend, u: dict, max_level: int) -> dict:
    out: dict = {}
    for k in range(2, max_level + 1):
        for s in backend.level(k):
            acc = None
            for j in range(1, k):
                face = backend.face(s, j)
                f = u.get(k - 1, {}).get(face)
                if f is None:
                    continue
                term = _pull(backend, f, face, s)
                if j % 2:
                    term = -term
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                out.setdefault(k, {})[s] = acc
    return out


def _pull_add(u: dict, v: dict, sign: int = 1) -> dict:
    out = {k: dict(c) for k, c in u.items()}
    for k, comps in v.items():
        for s, f in comps.items():
            f = f if sign > 0 else -f
            cur = out.setdefault(k, {})
            cur[s] = cur[s] + f if s in cur else f
    return {k: {s: f for s, f in c.items() if not f.is_zero()} for k, c in out.items()}


def gauge_tot(rng: random.Random, backend, module: GradedModule, density: float = 0.4) -> tuple[dict, dict]:
    """Gauge transform of the constant object over a pull-engine backend.

    Returns (complexes per vertex, φ by level).
    """
    ring = backend.ring(backend.level(0)[0])
    spread = module.max_degree - module.min_degree
    top = spread + 1
    d0 = split_differential(rng, ring, module)
    ident = GradedMap.identity(ring, module)
    a = {0: {(v,): d0 for v in backend.vertices()}, 1: {s: ident for s in backend.level(1)}}
    g0, g0i = {}, {}
    for v in backend.vertices():
        g, gi = rand_invertible(rng, ring, module)
        g0[(v,)] = g
        g0i[(v,)] = gi
    h: dict = {}
    for k in range(1, spread + 1):
        for s in backend.level(k):
            if not backend.is_degenerate(s) and rng.random() < density:
                f = rand_map(rng, ring, module, module, -k)
                if not f.is_zero():
                    h.setdefault(k, {})[s] = f
    gin = {0: g0i}
    g = _pull_add({0: g0}, h)
    step = {k: {s: -f for s, f in c.items()} for k, c in _pull_mul(backend, gin, h, top).items()}
    term, ginv = gin, gin
    while True:
        term = _pull_mul(backend, step, term, top)
        if not any(term.values()):
            break
        ginv = _pull_add(ginv, term)
    left = _pull_mul(backend, _pull_mul(backend, g, a, top), ginv, top)
    right = _pull_mul(backend, _pull_delta(backend, g, top), ginv, top)
    new = _pull_add(left, right, -1)
    complexes = {v: ComplexObj(module, new.get(0, {}).get((v,), GradedMap.zero(ring, module, module, 1)))
                 for v in backend.vertices()}
    phi = {k: c for k, c in new.items() if k >= 1}
    return complexes, phi


def gauge_equivariant(rng: random.Random, action: GroupAction, ring: Ring, module: GradedModule | None = None,
                      spread: int = 1, density: float = 0.4, name: str = "") -> EquivariantComplex:
    module = module or rand_module(rng, spread)
    nerve = ActionNerve(action, ring)
    complexes, phi = gauge_tot(rng, nerve, module, density)
    return EquivariantComplex(action, ring, complexes, phi, name=name, nerve=nerve)


# -- morphisms -------------------------------------------------------------------------


def rand_tw_morphism(rng: random.Random, A: TwPerfComplex, B: TwPerfComplex, degree: int, max_p: int = 2,
                     density: float = 0.3) -> TwMorphism:
    c = rand_cochain(rng, A.space, A.locals, B.locals, total=degree, max_p=max_p, density=density)
    return TwMorphism(A, B, degree, c)


def rand_simplex_morphism(rng: random.Random, A: SimplexObj, B: SimplexObj, degree: int, max_p: int = 2,
                          density: float = 0.4) -> SimplexMor:
    if B.space != A.space:
        B = SimplexObj(B.n, B.objects, B.phi, fill_units=False, space=A.space)
    c = rand_cochain(rng, A.space, A.family, B.family, total=degree, max_p=max_p, density=density)
    return SimplexMor(A, B, degree, c)


def rand_tot_morphism(rng: random.Random, A: TotObject, B: TotObject, degree: int, max_p: int = 2,
                      density: float = 0.3) -> TotMorphism:
    b = A.backend
    theta: dict = {}
    for k in range(max_p + 1):
        for s in b.level(k):
            if rng.random() < density:
                f = rand_map(rng, b.ring(s), A.modules[b.vertex(s, k)], B.modules[b.vertex(s, 0)], degree - k)
                if not f.is_zero():
                    theta.setdefault(k, {})[s] = f
    return TotMorphism(A, B, degree, theta)


# -- perturbations -----------------------------------------------------------------------


def _perturb_map(rng: random.Random, f: GradedMap) -> tuple[GradedMap, dict] | None:
    cells = [(d, r, c) for d, rk in f.source.ranks for r in range(f.target.rank(d + f.degree)) for c in range(rk)]
    if not cells:
        return None
    d, r, c = rng.choice(cells)
    eps = rand_scalar(rng, f.ring, nonzero=True)
    blk = f.block(d)
    blk = blk.with_entry(r, c, f.ring.add(blk[r, c], eps))
    blocks = dict(f.blocks)
    blocks[d] = blk
    g = GradedMap(f.ring, f.source, f.target, f.degree, blocks)
    return g, {"degree": d, "row": r, "col": c, "added": f.ring.fmt(eps)}


def perturb_tw(rng: random.Random, t: TwPerfComplex, max_p: int | None = None) -> tuple[TwPerfComplex, dict]:
    """Add a nonzero scalar to one matrix entry of one component of a."""
    win = t.degree_window()
    top = max_p if max_p is not None else (1 - win[0] if win else 1)
    cover = t.cover
    while True:
        p = rng.randint(0, top)
        tuples = cover.nerve_level(p)
        s = rng.choice(tuples)
        out = _perturb_map(rng, t.component(s))
        if out is None:
            continue
        g, info = out
        comps = dict(t.a.comps)
        comps[(s, 1 - p)] = g
        info["simplex"] = t.label(s)
        return TwPerfComplex(cover, t.locals, Cochain(t.space, t.locals, t.locals, comps), name=t.name), info


def perturb_simplex(rng: random.Random, s: SimplexObj) -> tuple[SimplexObj, dict]:
    win = s.degree_window()
    top = 1 - win[0] if win else 1
    while True:
        p = rng.randint(1, top)
        tuples = s.space.level(p)
        t = rng.choice(tuples)
        out = _perturb_map(rng, s.component(t))
        if out is None:
            continue
        g, info = out
        comps = {tt: f for (tt, q), f in s.phi.comps.items()}
        comps[t] = g
        info["simplex"] = s.space.fmt(t)
        return SimplexObj(s.n, s.objects, comps, fill_units=False, space=s.space), info


def perturb_tot(rng: random.Random, e: TotObject) -> tuple[dict, dict]:
    """Perturbed φ (by level) of a Tot or equivariant object."""
    win = e.degree_window()
    top = 1 - win[0] if win else 1
    b = e.backend
    while True:
        k = rng.randint(1, top)
        s = rng.choice(b.level(k))
        out = _perturb_map(rng, e.component(s))
        if out is None:
            continue
        g, info = out
        phi = {kk: dict(c) for kk, c in e.phi.items()}
        phi.setdefault(k, {})[s] = g
        info["simplex"] = b.fmt(s)
        return phi, info
