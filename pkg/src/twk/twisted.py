"""Twisted (perfect) complexes over a ringed cover.

A twisted complex is a family of graded free modules E_i, one per open,
together with a = Σ_k a^{k,1-k}, a cochain over the Čech nerve whose (0,1)
part holds the local differentials.  It must satisfy δa + a·a = 0, and each
a^{1,0}_{ii} must be a homotopy equivalence of (E_i, a^{0,1}_i).

Morphisms are arbitrary cochains with total degree; their differential is
d f = δf + b·f - (-1)^|f| f·a.
"""

from __future__ import annotations

from typing import Mapping

from .cochains import Cochain, CochainError, Restrictor, degree_window
from .exactalg import GradedMap, GradedModule, Matrix, RingError, hom_differential
from .homotopy import homotopy_invertible
from .report import MCReport, Residual
from .simplicial import RingedCover


class TwPerfComplex:
    def __init__(self, cover: RingedCover, locals_: Mapping[int, GradedModule], a: Mapping | Cochain,
                 name: str = ""):
        self.cover = cover
        self.space = cover.cech
        self.name = name
        missing = [i for i in range(cover.size) if i not in locals_]
        if missing:
            raise CochainError(f"no local module for opens {missing}")
        self.locals = {i: locals_[i] for i in range(cover.size)}
        if isinstance(a, Cochain):
            comps = dict(a.comps)
        else:
            comps = {(tuple(t), 1 - (len(t) - 1)): f for t, f in a.items()}
        for (t, q) in comps:
            if q != 1 - (len(t) - 1):
                raise CochainError(f"a-component at {t} must have degree {2 - len(t)}")
        self.a = Cochain(self.space, self.locals, self.locals, comps)

    def local_diff(self, i: int) -> GradedMap:
        return self.a.component((i,), 1)

    def component(self, t) -> GradedMap:
        t = tuple(t)
        return self.a.component(t, 2 - len(t))

    def degree_window(self):
        return degree_window(self.locals, self.locals)

    def label(self, t) -> str:
        return self.space.fmt(tuple(t))


class TwMorphism:
    def __init__(self, source: TwPerfComplex, target: TwPerfComplex, degree: int, f: Mapping | Cochain):
        if source.cover is not target.cover:
            raise CochainError("morphism between twisted complexes on different covers")
        self.source = source
        self.target = target
        self.degree = degree
        if isinstance(f, Cochain):
            comps = dict(f.comps)
        else:
            comps = {(tuple(t), degree - (len(t) - 1)): g for t, g in f.items()}
        for (t, q) in comps:
            if len(t) - 1 + q != degree:
                raise CochainError(f"component at {t} does not have total degree {degree}")
        self.f = Cochain(source.space, source.locals, target.locals, comps)

    @classmethod
    def identity(cls, obj: TwPerfComplex) -> "TwMorphism":
        return cls(obj, obj, 0, Cochain.identity(obj.space, obj.locals))


def delta(u: Cochain) -> Cochain:
    return u.delta()


def tw_compose(u: Cochain, v: Cochain) -> Cochain:
    return u.mul(v)


def mc_residual_tw(t: TwPerfComplex) -> Cochain:
    return t.a.delta() + t.a.mul(t.a)


def mc_check_tw(t: TwPerfComplex, witnesses: Mapping | None = None, check_offdiagonal: bool = True) -> MCReport:
    rep = MCReport(kind=f"twisted complex {t.name}".strip())
    for (s, q), f in mc_residual_tw(t).sorted_items():
        rep.residuals.append(Residual(t.label(s), s, q, f))
    witnesses = witnesses or {}
    cover = t.cover
    for i in range(cover.size):
        d = t.local_diff(i)
        v = homotopy_invertible(t.component((i, i)), d, d, witnesses.get((i, i)))
        rep.nondegeneracy.append((f"a^(1,0)_{t.label((i, i))}", v))
    if check_offdiagonal:
        # a^{1,0}_{ij} is homotopy inverse to a^{1,0}_{ji} once the (i,j,i)
        # instance holds; only definite obstructions are reported here
        res = Restrictor(t.space)
        for i in range(cover.size):
            for j in range(cover.size):
                if i == j or not cover.in_nerve((i, j)):
                    continue
                di = res(t.local_diff(i), (i,), (i, j))
                dj = res(t.local_diff(j), (j,), (i, j))
                v = homotopy_invertible(t.component((i, j)), dj, di, witnesses.get((i, j)))
                if v.definite_failure:
                    rep.nondegeneracy.append((f"a^(1,0)_{t.label((i, j))}", v))
    return rep


def tw_mor_diff(f: TwMorphism) -> TwMorphism:
    """d f = δf + b·f - (-1)^|f| f·a."""
    a, b = f.source.a, f.target.a
    out = f.f.delta() + b.mul(f.f)
    right = f.f.mul(a)
    out = out + right if f.degree % 2 else out - right
    return TwMorphism(f.source, f.target, f.degree + 1, out)


def homotopy_relation_check(t: TwPerfComplex, i: int, j: int) -> dict:
    """Compare a_ii - a_ij a_ji with d_B(a^{2,-1}_{iji}) over the ring of {i, j}."""
    cover = t.cover
    if not cover.in_nerve((i, j)):
        raise CochainError(f"{cover.label((i, j))} is not in the nerve")
    res = Restrictor(t.space)
    key = (i, j, i)
    aii = res(t.component((i, i)), (i, i), key)
    aij = res(t.component((i, j)), (i, j), key)
    aji = res(t.component((j, i)), (j, i), key)
    h = t.component(key)
    d = res(t.local_diff(i), (i,), key)
    lhs = aii - aij @ aji
    rhs = hom_differential(h, d, d)
    diff = lhs - rhs
    return {"pair": (i, j), "ok": diff.is_zero(), "lhs": lhs, "rhs": rhs, "defect": diff}


def line_bundle(cover: RingedCover, units: Mapping, name: str = "") -> TwPerfComplex:
    """Rank-1 bundle in degree 0 glued by units g_ij over U_ij (a^{1,0}_{ij} = g_ij).

    ``units`` maps ordered pairs (i, j) to ring values over the ring of {i, j};
    g_ji defaults to g_ij^{-1} and g_ii to 1.  The cocycle g_ij g_jk = g_ik is
    checked on every triple of the nerve.
    """
    mod = GradedModule({0: 1})
    g = {}
    for (i, j), x in units.items():
        ring = cover.ring((i, j))
        if not ring.is_unit(x):
            raise RingError(f"g_{cover.names[i]}{cover.names[j]} = {ring.fmt(x)} is not a unit")
        g[(i, j)] = x
    for i in range(cover.size):
        g.setdefault((i, i), cover.ring((i,)).one())
    for (i, j) in list(g):
        if (j, i) not in g:
            g[(j, i)] = cover.ring((i, j)).inverse(g[(i, j)])
    for i in range(cover.size):
        for j in range(cover.size):
            if cover.in_nerve((i, j)) and (i, j) not in g:
                raise RingError(f"no transition unit for {cover.label((i, j))}")
    for i in range(cover.size):
        if g[(i, i)] != cover.ring((i,)).one():
            raise RingError(f"g_ii must be 1 on {cover.label((i,))}")
    for s in cover.nerve:
        for i in s:
            for j in s:
                for k in s:
                    r = cover.ring((i, j, k))
                    lhs = r.mul(cover.restriction((i, j), (i, j, k)).apply(g[(i, j)]),
                                cover.restriction((j, k), (i, j, k)).apply(g[(j, k)]))
                    rhs = cover.restriction((i, k), (i, j, k)).apply(g[(i, k)])
                    if lhs != rhs:
                        raise RingError(f"cocycle fails on {cover.label((i, j, k))}")
    comps = {}
    for (i, j), x in g.items():
        ring = cover.ring((i, j))
        comps[(i, j)] = GradedMap(ring, mod, mod, 0, {0: Matrix(ring, 1, 1, [[x]])})
    return TwPerfComplex(cover, {i: mod for i in range(cover.size)}, comps, name=name)
