"""Totalization of strict cosimplicial diagrams of matrix dg-categories.

The diagram is B^k = Π_{s ∈ X_k} Cpx(R_s) for a simplicial set X with a ring
on each simplex (a Čech nerve, a standard simplex or an action nerve).  An
object of Tot is a family of complexes E over the vertices together with
standard morphisms φ^k, one graded map per k-simplex s, from E at the last
vertex of s to E at the first vertex.  Everything here is evaluated by
pulling data back along faces, front faces and back faces of each simplex,
which is independent of the push-forward engine used for twisted complexes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Mapping

from .cochains import CochainError, degree_window
from .dgresolution import ComplexObj, SimplexObj
from .exactalg import GradedMap, hom_differential
from .homotopy import homotopy_invertible
from .report import MCReport, Residual
from .simplicial import (
    CechNerve,
    SimplicialError,
    matching_surjections,
    ordinal_from_tuple,
    split_decomposition,
)
from .twisted import TwMorphism, TwPerfComplex


class TotObject:
    """(E, φ): complexes per vertex and standard morphisms per simplex of level k >= 1."""

    def __init__(self, backend, modules: Mapping, diffs: Mapping, phi: Mapping, name: str = ""):
        self.backend = backend
        self.name = name
        self.modules = dict(modules)
        self.diffs = dict(diffs)
        self.phi = {}
        for k, comps in phi.items():
            if k < 1:
                raise CochainError("standard morphisms start at level 1")
            clean = {tuple(s): f for s, f in comps.items() if not f.is_zero()}
            for s, f in clean.items():
                if len(s) != k + 1:
                    raise CochainError(f"simplex {s} does not live in level {k}")
                if f.degree != 1 - k:
                    raise CochainError(f"φ^{k} at {s} must have degree {1 - k}")
            if clean:
                self.phi[k] = clean

    def component(self, s) -> GradedMap:
        s = tuple(s)
        k = len(s) - 1
        f = self.phi.get(k, {}).get(s)
        if f is None:
            b = self.backend
            return GradedMap.zero(b.ring(s), self.modules[b.vertex(s, k)], self.modules[b.vertex(s, 0)], 1 - k)
        return f

    def degree_window(self):
        return degree_window(self.modules, self.modules)

    def max_level(self) -> int:
        win = self.degree_window()
        if win is None:
            return 0
        return 1 - win[0]


class TotMorphism:
    """Degree-m morphism: θ^k per k-simplex, of degree m-k, E at last vertex -> F at first."""

    def __init__(self, source: TotObject, target: TotObject, degree: int, theta: Mapping):
        if source.backend is not target.backend:
            raise CochainError("Tot morphism between different diagrams")
        self.source = source
        self.target = target
        self.degree = degree
        self.theta = {}
        for k, comps in theta.items():
            clean = {tuple(s): f for s, f in comps.items() if not f.is_zero()}
            for s, f in clean.items():
                if len(s) != k + 1 or f.degree != degree - k:
                    raise CochainError(f"θ^{k} at {s} has the wrong level or degree")
            if clean:
                self.theta[k] = clean

    def component(self, s) -> GradedMap:
        s = tuple(s)
        k = len(s) - 1
        f = self.theta.get(k, {}).get(s)
        if f is None:
            b = self.source.backend
            return GradedMap.zero(b.ring(s), self.source.modules[b.vertex(s, k)],
                                  self.target.modules[b.vertex(s, 0)], self.degree - k)
        return f


# -- pulled-back evaluation ------------------------------------------------------


def _pull(backend, f: GradedMap, sub, s) -> GradedMap:
    h = backend.restriction(sub, s)
    return f if h.is_identity else f.map_ring(h)


def _vertex_diff(obj: TotObject, s, j: int) -> GradedMap:
    b = obj.backend
    v = b.vertex(s, j)
    return _pull(b, obj.diffs[v], (v,), s)


def _d_B(f: GradedMap, src: TotObject, tgt: TotObject, s) -> GradedMap:
    k = len(s) - 1
    return hom_differential(f, _vertex_diff(src, s, k), _vertex_diff(tgt, s, 0))


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def tot_residual_at(t: TotObject, s) -> GradedMap:
    """Left-hand side of the level-k Maurer-Cartan equation at the k-simplex s."""
    b = t.backend
    k = len(s) - 1
    out = _d_B(t.component(s), t, t, s).signed(_sign(k))
    for j in range(1, k):
        face = b.face(s, j)
        out = out + _pull(b, t.component(face), face, s).signed(_sign(j))
    for j in range(1, k):
        fr, bk = b.front(s, j), b.back(s, k - j)
        term = _pull(b, t.component(fr), fr, s) @ _pull(b, t.component(bk), bk, s)
        out = out + term.signed(_sign((1 - j) * (k - j)))
    return out


def tot_side_conditions(t: TotObject) -> list[str]:
    b = t.backend
    out = []
    for v in b.vertices():
        d = t.diffs[v]
        if not (d @ d).is_zero():
            out.append(f"differential at vertex {v} does not square to zero")
    for s in b.level(1):
        if b.is_degenerate(s):
            if t.component(s) != GradedMap.identity(b.ring(s), t.modules[b.vertex(s, 0)]):
                out.append(f"φ^1 at degenerate {b.fmt(s)} is not the identity")
    for k, comps in sorted(t.phi.items()):
        if k >= 2:
            for s in sorted(comps):
                if b.is_degenerate(s):
                    out.append(f"φ^{k} at degenerate {b.fmt(s)} is nonzero")
    return out


def mc_check_tot(t: TotObject, witnesses: Mapping | None = None, kind: str | None = None) -> MCReport:
    b = t.backend
    rep = MCReport(kind=kind or f"Tot object {t.name}".strip())
    win = t.degree_window()
    kmax = 0 if win is None else 2 - win[0]
    for k in range(1, kmax + 1):
        for s in b.level(k):
            r = tot_residual_at(t, s)
            if not r.is_zero():
                rep.residuals.append(Residual(b.fmt(s), s, 2 - k, r))
    rep.notes.append(f"levels 1..{kmax} checked; higher levels vanish for degree reasons")
    rep.side.extend(tot_side_conditions(t))
    witnesses = witnesses or {}
    for s in b.level(1):
        if b.is_degenerate(s):
            continue
        d0, d1 = _vertex_diff(t, s, 0), _vertex_diff(t, s, 1)
        v = homotopy_invertible(t.component(s), d1, d0, witnesses.get(s))
        rep.nondegeneracy.append((f"φ^1 at {b.fmt(s)}", v))
    return rep


def tot_mor_diff(theta: TotMorphism) -> TotMorphism:
    """dθ = Dθ + ψ·θ - (-1)^m θ·φ, evaluated simplex by simplex."""
    src, tgt, m = theta.source, theta.target, theta.degree
    b = src.backend
    win = degree_window(src.modules, tgt.modules)
    out = {}
    if win is None:
        return TotMorphism(src, tgt, m + 1, {})
    kmax = m + 1 - win[0]
    for k in range(0, kmax + 1):
        comps = {}
        for s in b.level(k):
            acc = _d_B(theta.component(s), src, tgt, s).signed(_sign(k))
            for j in range(1, k):
                face = b.face(s, j)
                acc = acc + _pull(b, theta.component(face), face, s).signed(_sign(j))
            for l in range(1, k + 1):
                fr, bk = b.front(s, l), b.back(s, k - l)
                term = _pull(b, tgt.component(fr), fr, s) @ _pull(b, theta.component(bk), bk, s)
                acc = acc + term.signed(_sign((1 - l) * (k - l)))
            for l in range(0, k):
                fr, bk = b.front(s, l), b.back(s, k - l)
                term = _pull(b, theta.component(fr), fr, s) @ _pull(b, src.component(bk), bk, s)
                acc = acc + term.signed(-_sign(m) * _sign((m - l) * (k - l)))
            if not acc.is_zero():
                comps[s] = acc
        if comps:
            out[k] = comps
    return TotMorphism(src, tgt, m + 1, out)


# -- components and expansions ---------------------------------------------------


def object_component(t: TotObject, n: int, i: int) -> dict:
    """d^n_i(E): the complex at vertex i of every n-simplex, over its ring."""
    if not 0 <= i <= n:
        raise SimplicialError("need 0 <= i <= n")
    b = t.backend
    out = {}
    for s in b.level(n):
        v = b.vertex(s, i)
        d = _pull(b, t.diffs[v], (v,), s)
        out[s] = ComplexObj(t.modules[v], d)
    return out


def expand_standard(t: TotObject, I, n: int) -> dict:
    """σ_*(φ^k) on level n for σ = the ordinal map with values I."""
    sigma = ordinal_from_tuple(I, n)
    b = t.backend
    out = {}
    for s in b.level(n):
        sub = b.pull(sigma, s)
        out[s] = _pull(b, t.component(sub), sub, s)
    return out


def simplex_objects(t: TotObject, n: int) -> dict:
    """The level-n Δₙ objects (one per n-simplex) carried by a Tot object."""
    b = t.backend
    kmax = t.max_level()
    out = {}
    for s in b.level(n):
        objs = []
        for i in range(n + 1):
            v = b.vertex(s, i)
            objs.append(ComplexObj(t.modules[v], _pull(b, t.diffs[v], (v,), s)))
        phi = {}
        for k in range(1, kmax + 1):
            for I in itertools.combinations_with_replacement(range(n + 1), k + 1):
                sub = b.pull(ordinal_from_tuple(I, n), s)
                f = _pull(b, t.component(sub), sub, s)
                if not f.is_zero():
                    phi[I] = f
        out[s] = SimplexObj(n, objs, phi, fill_units=False)
    return out


# -- Tot <-> Tw for Čech backends ------------------------------------------------


def _require_cech(backend) -> None:
    if not isinstance(backend, CechNerve):
        raise CochainError("the Tot/Tw correspondence needs a Čech backend")


def tot_to_twisted(t: TotObject) -> TwPerfComplex:
    _require_cech(t.backend)
    cover = t.backend.cover
    comps = {}
    for v in range(cover.size):
        comps[(v,)] = t.diffs[v]
    for k, level in t.phi.items():
        for s, f in level.items():
            comps[s] = f
    return TwPerfComplex(cover, t.modules, comps, name=t.name)


def twisted_to_tot(w: TwPerfComplex) -> TotObject:
    cover = w.cover
    modules = dict(w.locals)
    diffs = {v: w.local_diff(v) for v in range(cover.size)}
    phi: dict = {}
    for (s, q), f in w.a.comps.items():
        k = len(s) - 1
        if k >= 1:
            phi.setdefault(k, {})[s] = f
    return TotObject(cover.cech, modules, diffs, phi, name=w.name)


def tot_mor_to_twisted(theta: TotMorphism, source: TwPerfComplex, target: TwPerfComplex) -> TwMorphism:
    comps = {}
    for k, level in theta.theta.items():
        for s, f in level.items():
            comps[s] = f
    return TwMorphism(source, target, theta.degree, comps)


def twisted_mor_to_tot(f: TwMorphism, source: TotObject, target: TotObject) -> TotMorphism:
    theta: dict = {}
    for (s, q), g in f.f.comps.items():
        theta.setdefault(len(s) - 1, {})[s] = g
    return TotMorphism(source, target, f.degree, theta)


def same_tw(a: TwPerfComplex, b: TwPerfComplex) -> tuple[bool, str]:
    if a.cover is not b.cover:
        return False, "different covers"
    for i in range(a.cover.size):
        if a.locals[i] != b.locals[i]:
            return False, f"local module differs on {a.cover.names[i]}"
    diff = a.a - b.a
    if diff.is_zero():
        return True, ""
    (s, q), _ = diff.sorted_items()[0]
    return False, f"component {a.label(s)} differs"


def same_tot(a: TotObject, b: TotObject) -> tuple[bool, str]:
    if a.modules != b.modules:
        return False, "modules differ"
    for v in a.modules:
        if a.diffs[v] != b.diffs[v]:
            return False, f"differential differs at vertex {v}"
    keys = {(k, s) for k, lv in a.phi.items() for s in lv} | {(k, s) for k, lv in b.phi.items() for s in lv}
    for k, s in sorted(keys):
        if a.component(s) != b.component(s):
            return False, f"φ^{k} differs at {a.backend.fmt(s)}"
    return True, ""


def roundtrip_report(w: TwPerfComplex) -> dict:
    back = tot_to_twisted(twisted_to_tot(w))
    ok, why = same_tw(w, back)
    return {"object": w.name, "identical": ok, "first_difference": why,
            "components": len(w.a.comps)}


# -- split / matching witness ----------------------------------------------------


@dataclass
class MatchingWitness:
    level: int
    free_cells: list
    matching: dict  # surjection values -> list of simplices of level k in that factor
    surjection_count: int
    projection_ok: bool
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.projection_ok and self.surjection_count == 2 ** self.level - 1

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "free_cells": len(self.free_cells),
            "matching_factors": self.surjection_count,
            "expected_factors": 2 ** self.level - 1,
            "factor_sizes": {",".join(map(str, k)): len(v) for k, v in self.matching.items()},
            "projection_is_surjective": self.projection_ok,
            "ok": self.ok,
        }


def matching_witness(backend, k: int, rng: random.Random | None = None) -> MatchingWitness:
    """Level k ≅ (nondegenerate part) × Π_{σ:[k]->>[n], n<k} (level-n nondegenerate part).

    The matching map is the projection onto the second factor; this is
    confirmed by lifting random data on the matching side (zero on the free
    part) and projecting it back.
    """
    rng = rng or random.Random(0)
    dec = split_decomposition(backend, k)
    free = []
    matching: dict = {}
    for sigma in matching_surjections(k):
        matching[sigma.values] = []
    for sigma, cell in dec.factors:
        img = backend.pull(sigma, cell)
        if sigma.n == sigma.m:
            free.append(img)
        else:
            matching[sigma.values].append(img)
    # hom components on level k are indexed by simplices; the matching map
    # forgets the free coordinates
    coords = {s: rng.randint(-5, 5) for vals in matching.values() for s in vals}
    lifted = {s: 0 for s in free}
    lifted.update(coords)
    projected = {s: lifted[s] for vals in matching.values() for s in vals}
    partition_ok = sorted(free + [s for v in matching.values() for s in v]) == sorted(backend.level(k))
    ok = projected == coords and partition_ok
    return MatchingWitness(k, free, matching, len(matching), ok)
