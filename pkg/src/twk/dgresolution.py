"""The simplicial resolution Δₙ(B) of the dg-category B of bounded complexes
of finite free modules over a ring.

Data over Δₙ is indexed by nondecreasing tuples in [n]; cochains use the
shared push engine with the standard simplex as index space.  The hom
differential of B is d_B(f) = d∘f - (-1)^|f| f∘d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .cochains import Cochain, CochainError, cochain_D, degree_window
from .exactalg import GradedMap, GradedModule, Ring, RingError
from .homotopy import homotopy_invertible
from .report import MCReport, Residual
from .simplicial import OrdinalMap, StandardSimplex, SimplicialError


@dataclass(frozen=True)
class ComplexObj:
    """A bounded complex of finite free modules: (module, degree +1 differential)."""

    module: GradedModule
    diff: GradedMap

    def __post_init__(self):
        d = self.diff
        if d.degree != 1 or d.source != self.module or d.target != self.module:
            raise CochainError("differential must be a degree 1 endomorphism of the module")
        if not (d @ d).is_zero():
            raise CochainError("differential does not square to zero")

    @property
    def ring(self) -> Ring:
        return self.diff.ring

    @classmethod
    def zero_diff(cls, ring: Ring, module: GradedModule) -> "ComplexObj":
        return cls(module, GradedMap.zero(ring, module, module, 1))


class SimplexObj:
    """An object of Δₙ(B): complexes E_0..E_n and components φ_I, I nondecreasing.

    ``phi`` is a Cochain over the standard simplex whose component at a
    (k+1)-tuple has degree 1-k.  Missing φ_{ii} are filled with identities
    when ``fill_units`` is set.
    """

    def __init__(self, n: int, objects: Sequence[ComplexObj], phi: Mapping | Cochain, fill_units: bool = True,
                 space: StandardSimplex | None = None):
        if len(objects) != n + 1:
            raise CochainError(f"Δ_{n} needs {n + 1} objects, got {len(objects)}")
        rings = {o.ring for o in objects}
        if len(rings) != 1:
            raise RingError("all objects must share one ring")
        self.n = n
        self.ring = objects[0].ring
        self.objects = tuple(objects)
        self.space = space or StandardSimplex(n, self.ring)
        self.family = {i: o.module for i, o in enumerate(objects)}
        self.diffs = {i: o.diff for i, o in enumerate(objects)}
        if isinstance(phi, Cochain):
            comps = dict(phi.comps)
        else:
            comps = {}
            for t, f in phi.items():
                t = tuple(t)
                comps[(t, 1 - (len(t) - 1))] = f
        if fill_units:
            for i in range(n + 1):
                key = ((i, i), 0)
                if key not in comps:
                    comps[key] = GradedMap.identity(self.ring, self.family[i])
        for (t, q) in comps:
            if len(t) < 2 or q != 2 - len(t):
                raise CochainError(f"component {t} must have simplicial degree >= 1 and degree 1-k")
        self.phi = Cochain(self.space, self.family, self.family, comps)

    def component(self, t) -> GradedMap:
        t = tuple(t)
        return self.phi.component(t, 2 - len(t))

    def degree_window(self):
        return degree_window(self.family, self.family)


class SimplexMor:
    """A degree-m morphism between two Δₙ objects; components θ_I of degree m-k."""

    def __init__(self, source: SimplexObj, target: SimplexObj, degree: int, theta: Mapping | Cochain):
        if source.space is not target.space:
            if source.n != target.n or source.ring != target.ring:
                raise CochainError("morphism between objects of different simplices")
            target = SimplexObj(target.n, target.objects, target.phi, fill_units=False, space=source.space)
        self.source = source
        self.target = target
        self.degree = degree
        if isinstance(theta, Cochain):
            comps = dict(theta.comps)
        else:
            comps = {(tuple(t), degree - (len(t) - 1)): f for t, f in theta.items()}
        for (t, q) in comps:
            if q != degree - (len(t) - 1):
                raise CochainError(f"component {t} has the wrong degree for a degree-{degree} morphism")
        self.theta = Cochain(source.space, source.family, target.family, comps)


def constant_embed(E: ComplexObj, n: int) -> SimplexObj:
    """All objects E, φ^{1,0} = id on every pair, higher components zero."""
    ring = E.ring
    ident = GradedMap.identity(ring, E.module)
    phi = {(i, j): ident for i in range(n + 1) for j in range(i, n + 1)}
    return SimplexObj(n, [E] * (n + 1), phi)


def simplex_D(c: Cochain, source: SimplexObj, target: SimplexObj) -> Cochain:
    return cochain_D(c, source.diffs, target.diffs)


def mc_residual_simplex(s: SimplexObj) -> Cochain:
    """Dφ + φ·φ, computed exactly over every nondecreasing tuple."""
    return simplex_D(s.phi, s, s) + s.phi.mul(s.phi)


def side_conditions_simplex(s: SimplexObj) -> list[str]:
    out = []
    for i in range(s.n + 1):
        if s.component((i, i)) != GradedMap.identity(s.ring, s.family[i]):
            out.append(f"φ_({i},{i}) is not the identity")
    for (t, q), f in s.phi.sorted_items():
        if len(t) >= 3 and any(a == b for a, b in zip(t, t[1:])):
            out.append(f"φ_{t} has repeated indices but is nonzero")
    return out


def mc_check_simplex(s: SimplexObj, witnesses: Mapping | None = None) -> MCReport:
    rep = MCReport(kind=f"Δ_{s.n} object")
    res = mc_residual_simplex(s)
    for (t, q), f in res.sorted_items():
        rep.residuals.append(Residual(s.space.fmt(t), t, q, f))
    rep.side.extend(side_conditions_simplex(s))
    witnesses = witnesses or {}
    for i in range(s.n + 1):
        for j in range(i + 1, s.n + 1):
            f = s.component((i, j))
            v = homotopy_invertible(f, s.diffs[j], s.diffs[i], witnesses.get((i, j)))
            rep.nondegeneracy.append((f"φ_({i},{j})", v))
    return rep


def mor_diff(theta: SimplexMor) -> SimplexMor:
    """dθ = Dθ + ψ·θ - (-1)^m θ·φ."""
    s, t, m = theta.source, theta.target, theta.degree
    th = theta.theta
    out = simplex_D(th, s, t) + t.phi.mul(th)
    right = th.mul(s.phi)
    out = out + right if m % 2 else out - right
    return SimplexMor(s, t, m + 1, out)


def _tuples(n: int, k: int):
    return itertools.combinations_with_replacement(range(n + 1), k + 1)


def sigma_pushforward_cochain(sigma: OrdinalMap, c: Cochain, space_n: StandardSimplex, src_n, tgt_n,
                              kmax: int) -> Cochain:
    """(σ_* c)_I = c_{σ(I)} for nondecreasing I of length <= kmax + 1."""
    comps = {}
    qs = {}
    for (t, q), f in c.comps.items():
        qs.setdefault(len(t) - 1, set()).add(q)
    for k in range(kmax + 1):
        for I in _tuples(sigma.n, k):
            J = tuple(sigma.values[i] for i in I)
            for q in qs.get(k, ()):
                f = c.comps.get((J, q))
                if f is not None:
                    comps[(I, q)] = f
    return Cochain(space_n, src_n, tgt_n, comps, check=False)


def sigma_pushforward(sigma: OrdinalMap, s: SimplexObj) -> SimplexObj:
    if sigma.m != s.n:
        raise SimplicialError(f"σ lands in [{sigma.m}] but the object lives over Δ_{s.n}")
    bad = side_conditions_simplex(s)
    if bad:
        raise SimplicialError("input violates the Δₙ side conditions: " + "; ".join(bad))
    objects = [s.objects[sigma.values[i]] for i in range(sigma.n + 1)]
    space = StandardSimplex(sigma.n, s.ring)
    family = {i: o.module for i, o in enumerate(objects)}
    kmax = max((len(t) - 1 for t, _ in s.phi.comps), default=1)
    phi = sigma_pushforward_cochain(sigma, s.phi, space, family, family, kmax)
    return SimplexObj(sigma.n, objects, phi, fill_units=False, space=space)


def sigma_pushforward_mor(sigma: OrdinalMap, theta: SimplexMor, source: SimplexObj | None = None,
                          target: SimplexObj | None = None) -> SimplexMor:
    src = source or sigma_pushforward(sigma, theta.source)
    tgt = target or sigma_pushforward(sigma, theta.target)
    kmax = max((len(t) - 1 for t, _ in theta.theta.comps), default=0)
    c = sigma_pushforward_cochain(sigma, theta.theta, src.space, src.family, tgt.family, kmax)
    return SimplexMor(src, tgt, theta.degree, c)


def same_object(a: SimplexObj, b: SimplexObj) -> bool:
    return (
        a.n == b.n
        and a.objects == b.objects
        and {k: f for k, f in a.phi.comps.items()} == {k: f for k, f in b.phi.comps.items()}
    )
