"""G-equivariant complexes on a finite G-set, as Tot objects over [X/G]•.

φ^k is given per (x, g1..gk) as a degree 1-k map E_{x·g1⋯gk} -> E_x.  The
Maurer-Cartan equation is evaluated with the front/back face pullbacks ρ*,
τ* and the inner faces ∂_j of the action nerve; the unit condition
φ^1(x, e) = id and the vanishing of φ^k (k >= 2) on degenerate simplices
are enforced.
"""

from __future__ import annotations

from typing import Mapping

from .cochains import CochainError
from .dgresolution import ComplexObj
from .exactalg import GradedMap, Ring, RingError, hom_differential
from .report import MCReport
from .simplicial import ActionNerve, GroupAction, SimplicialError
from .totalization import TotMorphism, TotObject, mc_check_tot, tot_mor_diff


class EquivariantComplex(TotObject):
    def __init__(self, action: GroupAction, ring: Ring, complexes: Mapping, phi: Mapping, name: str = "",
                 nerve: ActionNerve | None = None):
        nerve = nerve or ActionNerve(action, ring)
        self.action = action
        modules = {x: c.module for x, c in complexes.items()}
        diffs = {x: c.diff for x, c in complexes.items()}
        if set(modules) != set(range(len(action.points))):
            raise CochainError("need one complex per point of the carrier")
        for c in complexes.values():
            if c.ring != ring:
                raise RingError("complexes must live over the coefficient ring")
        super().__init__(nerve, modules, diffs, phi, name=name)


class EquivariantMorphism(TotMorphism):
    pass


def rho_pullback(nerve: ActionNerve, data: Mapping, k: int, p: int) -> dict:
    """ρ*_{k,p}: level-p data read at the front p-face of each k-simplex."""
    if p > k:
        raise SimplicialError("p > k")
    return {s: data.get(nerve.front(s, p)) for s in nerve.level(k)}


def tau_pullback(nerve: ActionNerve, data: Mapping, k: int, p: int) -> dict:
    """τ*_{k,p}: level-p data read at the back p-face of each k-simplex."""
    if p > k:
        raise SimplicialError("p > k")
    return {s: data.get(nerve.back(s, p)) for s in nerve.level(k)}


def rho_tau_pullback(e: EquivariantComplex, k: int, p: int) -> tuple[dict, dict]:
    """Pull the level-p data of ``e`` back along ρ_{k,p} and τ_{k,p}.

    For p = 0 this is the family of complexes: ρ* reads E_x and τ* reads
    E_{x·g1⋯gk}.  For p >= 1 it is the family φ^p.
    """
    nerve = e.backend
    if p == 0:
        data = {(x,): ComplexObj(e.modules[x], e.diffs[x]) for x in e.modules}
    else:
        data = {s: e.component(s) for s in nerve.level(p)}
    return rho_pullback(nerve, data, k, p), tau_pullback(nerve, data, k, p)


def mc_check_equiv(e: EquivariantComplex, witnesses: Mapping | None = None) -> MCReport:
    rep = mc_check_tot(e, witnesses, kind=f"equivariant complex {e.name}".strip())
    if e.action.order == 1:
        rep.notes.append("trivial group: only d^2 = 0 on each E_x is tested")
    return rep


def mor_diff_equiv(theta: EquivariantMorphism) -> EquivariantMorphism:
    """dθ = Dθ + (target φ)·θ - (-1)^m θ·(source φ)."""
    d = tot_mor_diff(theta)
    return EquivariantMorphism(d.source, d.target, d.degree, d.theta)


def k1_formula(e: EquivariantComplex, s) -> GradedMap:
    """The level-1 equation written out: -d(φ^1)."""
    nerve = e.backend
    f = e.component(s)
    d0 = e.diffs[nerve.vertex(s, 0)]
    d1 = e.diffs[nerve.vertex(s, 1)]
    return -hom_differential(f, d1, d0)


def k2_formula(e: EquivariantComplex, s) -> GradedMap:
    """The level-2 equation written out: dφ^2 - ∂_1^*φ^1 + ρ_{2,1}^*φ^1 τ_{2,1}^*φ^1."""
    x, g1, g2 = s
    a = e.action
    f2 = e.component(s)
    d0 = e.diffs[x]
    d2 = e.diffs[a.act(a.act(x, g1), g2)]
    glued = e.component((x, a.mul(g1, g2)))
    front = e.component((x, g1))
    back = e.component((a.act(x, g1), g2))
    return hom_differential(f2, d2, d0) - glued + front @ back


def strict_from_cocycle(action: GroupAction, ring: Ring, complexes: Mapping, phi: Mapping,
                        name: str = "") -> EquivariantComplex:
    """A strict equivariant complex from φ(x, g): E_{x·g} -> E_x.

    Requires φ closed, degreewise invertible, φ(x, gh) = φ(x, g) φ(x·g, h)
    and φ(x, e) = id.
    """
    for x in range(len(action.points)):
        for g in range(action.order):
            f = phi.get((x, g))
            if f is None:
                raise CochainError(f"φ missing at ({action.points[x]}, {action.elements[g]})")
            if f.degree != 0:
                raise CochainError("φ must have degree 0")
            src, tgt = complexes[action.act(x, g)], complexes[x]
            if not hom_differential(f, src.diff, tgt.diff).is_zero():
                raise CochainError(f"φ at ({action.points[x]}, {action.elements[g]}) is not a chain map")
            for d, r in f.source.ranks:
                if f.target.rank(d) != r or not ring.is_unit(f.block(d).det()):
                    raise CochainError(f"φ at ({action.points[x]}, {action.elements[g]}) is not invertible")
        if phi[(x, action.e)] != GradedMap.identity(ring, complexes[x].module):
            raise CochainError(f"unit condition fails at {action.points[x]}")
        for g in range(action.order):
            for h in range(action.order):
                lhs = phi[(x, action.mul(g, h))]
                rhs = phi[(x, g)] @ phi[(action.act(x, g), h)]
                if lhs != rhs:
                    raise CochainError(
                        f"cocycle fails at ({action.points[x]}, {action.elements[g]}, {action.elements[h]})"
                    )
    return EquivariantComplex(action, ring, complexes, {1: {s: f for s, f in phi.items()}}, name=name)
