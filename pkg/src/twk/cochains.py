"""Bigraded cochains over a simplicial index space, pushed forward exactly.

A cochain from a family E = {E_v} to a family F = {F_v} has components
u^{p,q}_t for simplices t = (t0..tp): degree-q maps E_{tp} -> F_{t0} over the
ring attached to t.  The inner Čech differential δ and the shuffled product
are computed by pushing each component to every simplex it contributes to,
so results are complete: no truncation and no enumeration of empty slots.

Two index spaces are supported: Čech nerves (all tuples whose underlying set
is an intersection) and standard simplices (nondecreasing tuples).
"""

from __future__ import annotations

from typing import Mapping

from .exactalg import GradedMap, hom_differential
from .simplicial import CechNerve, StandardSimplex


class CochainError(ValueError):
    pass


def inner_insertions(space, t: tuple):
    """Yield (position, longer simplex) for each inner insertion into ``t``."""
    p = len(t) - 1
    if isinstance(space, CechNerve):
        cover = space.cover
        base = frozenset(t)
        for k in range(1, p + 1):
            for v in range(cover.size):
                if base | {v} in cover.nerve:
                    yield k, t[:k] + (v,) + t[k:]
    elif isinstance(space, StandardSimplex):
        for k in range(1, p + 1):
            for v in range(t[k - 1], t[k] + 1):
                yield k, t[:k] + (v,) + t[k:]
    else:
        raise CochainError(f"unsupported index space {space!r}")


def concat_ok(space, t1: tuple, t2: tuple) -> bool:
    if isinstance(space, CechNerve):
        return frozenset(t1) | frozenset(t2) in space.cover.nerve
    return True


def is_simplex(space, t: tuple) -> bool:
    if isinstance(space, CechNerve):
        return len(t) >= 1 and frozenset(t) in space.cover.nerve
    return len(t) >= 1 and all(0 <= x <= space.n for x in t) and all(a <= b for a, b in zip(t, t[1:]))


class Restrictor:
    """Caches restrictions of graded maps from a face to a larger simplex."""

    def __init__(self, space):
        self.space = space

    def __call__(self, f: GradedMap, sub: tuple, t: tuple) -> GradedMap:
        h = self.space.restriction(sub, t)
        if h.is_identity:
            return f
        return f.map_ring(h)


class Cochain:
    """A finitely supported bigraded cochain ``src -> tgt``.

    ``comps`` maps ``(simplex, q)`` to a GradedMap of degree q over the ring
    of the simplex; zero components are dropped.
    """

    __slots__ = ("space", "src", "tgt", "comps")

    def __init__(self, space, src: Mapping, tgt: Mapping, comps: Mapping | None = None, check: bool = True):
        self.space = space
        self.src = src
        self.tgt = tgt
        clean = {}
        for (t, q), f in (comps or {}).items():
            t = tuple(t)
            if check:
                if not is_simplex(space, t):
                    raise CochainError(f"{t} is not a simplex of the index space")
                if f.degree != q:
                    raise CochainError(f"component {t} has degree {f.degree}, expected {q}")
                if f.source != src[t[-1]] or f.target != tgt[t[0]]:
                    raise CochainError(f"component {t} has the wrong source/target modules")
                if f.ring != space.ring(t):
                    raise CochainError(f"component {t} is over {f.ring}, expected {space.ring(t)}")
            if not f.is_zero():
                key = (t, q)
                if key in clean:
                    clean[key] = clean[key] + f
                    if clean[key].is_zero():
                        del clean[key]
                else:
                    clean[key] = f
        self.comps = clean

    # -- construction helpers -------------------------------------------

    @classmethod
    def zero(cls, space, src, tgt) -> "Cochain":
        return cls(space, src, tgt, {}, check=False)

    @classmethod
    def identity(cls, space, family: Mapping) -> "Cochain":
        comps = {}
        for v in space.vertices():
            mod = family[v]
            comps[((v,), 0)] = GradedMap.identity(space.ring((v,)), mod)
        return cls(space, family, family, comps, check=False)

    def _new(self, comps, src=None, tgt=None) -> "Cochain":
        return Cochain(self.space, self.src if src is None else src, self.tgt if tgt is None else tgt, comps,
                       check=False)

    # -- basic algebra ---------------------------------------------------

    def component(self, t, q: int) -> GradedMap:
        t = tuple(t)
        f = self.comps.get((t, q))
        if f is None:
            return GradedMap.zero(self.space.ring(t), self.src[t[-1]], self.tgt[t[0]], q)
        return f

    def is_zero(self) -> bool:
        return not self.comps

    def _compatible(self, other: "Cochain") -> None:
        if self.space != other.space or self.src != other.src or self.tgt != other.tgt:
            raise CochainError("cochains live between different families")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        comps = dict(self.comps)
        for key, f in other.comps.items():
            comps[key] = comps[key] + f if key in comps else f
        return self._new(comps)

    def __neg__(self) -> "Cochain":
        return self._new({k: -f for k, f in self.comps.items()})

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.comps)))

    def bidegrees(self) -> set:
        return {(len(t) - 1, q) for t, q in self.comps}

    def total_degrees(self) -> set:
        return {len(t) - 1 + q for t, q in self.comps}

    def homogeneous_part(self, total: int) -> "Cochain":
        return self._new({(t, q): f for (t, q), f in self.comps.items() if len(t) - 1 + q == total})

    def bidegree_part(self, p: int, q: int | None = None) -> "Cochain":
        return self._new({(t, qq): f for (t, qq), f in self.comps.items()
                          if len(t) - 1 == p and (q is None or qq == q)})

    def filter(self, pred) -> "Cochain":
        return self._new({k: f for k, f in self.comps.items() if pred(k[0], k[1])})

    def sorted_items(self):
        return sorted(self.comps.items(), key=lambda kv: (len(kv[0][0]), kv[0][0], kv[0][1]))

    def __repr__(self) -> str:
        inner = ", ".join(f"{t}^{q}" for (t, q), _ in self.sorted_items())
        return f"Cochain({inner})"

    # -- differentials and products --------------------------------------

    def delta(self) -> "Cochain":
        """Inner Čech differential: Σ_{k=1}^{p} (-1)^k u_{t without t_k}, restricted."""
        space = self.space
        res = Restrictor(space)
        out: dict = {}
        for (t, q), f in self.comps.items():
            for k, big in inner_insertions(space, t):
                g = res(f, t, big)
                if k % 2:
                    g = -g
                key = (big, q)
                out[key] = out[key] + g if key in out else g
        return self._new(out)

    def mul(self, other: "Cochain") -> "Cochain":
        """Shuffled product ``self · other`` with sign (-1)^{q r}."""
        if self.space != other.space:
            raise CochainError("cochains over different index spaces")
        if other.tgt != self.src:
            raise CochainError("families do not match for composition")
        space = self.space
        res = Restrictor(space)
        by_first: dict = {}
        for (t2, s), g in other.comps.items():
            by_first.setdefault(t2[0], []).append((t2, s, g))
        out: dict = {}
        for (t1, q), f in self.comps.items():
            for t2, s, g in by_first.get(t1[-1], ()):
                if not concat_ok(space, t1, t2):
                    continue
                t = t1 + t2[1:]
                r = len(t2) - 1
                h = res(f, t1, t) @ res(g, t2, t)
                if h.is_zero():
                    continue
                if (q * r) % 2:
                    h = -h
                key = (t, q + s)
                out[key] = out[key] + h if key in out else h
        return Cochain(space, other.src, self.tgt, out, check=False)

    __mul__ = mul

    def map_components(self, fn) -> "Cochain":
        return self._new({k: fn(k[0], k[1], f) for k, f in self.comps.items()})


def local_differential_cochain(space, family: Mapping, diffs: Mapping) -> Cochain:
    """The (0,1) cochain whose components are the local differentials."""
    comps = {((v,), 1): diffs[v] for v in diffs}
    return Cochain(space, family, family, comps, check=False)


def hom_d(c: Cochain, d_src: Mapping, d_tgt: Mapping) -> Cochain:
    """Apply the hom-complex differential d_B componentwise (no simplicial sign)."""
    space = c.space
    res = Restrictor(space)
    out = {}
    for (t, q), f in c.comps.items():
        ds = res(d_src[t[-1]], (t[-1],), t)
        dt = res(d_tgt[t[0]], (t[0],), t)
        out[(t, q + 1)] = hom_differential(f, ds, dt)
    return c._new(out)


def cochain_D(c: Cochain, d_src: Mapping, d_tgt: Mapping) -> Cochain:
    """(Dc)_t = (-1)^p d_B(c_t) + (δc)_t."""
    signed = hom_d(c, d_src, d_tgt).map_components(lambda t, q, f: -f if (len(t) - 1) % 2 else f)
    return signed + c.delta()


def shuffle_mul(u: Cochain, v: Cochain) -> Cochain:
    return u.mul(v)


def degree_window(src: Mapping, tgt: Mapping):
    """Range (lo, hi) of hom degrees between any E_v and any F_w, or None."""
    lo = hi = None
    for e in src.values():
        for f in tgt.values():
            if e.is_zero() or f.is_zero():
                continue
            a, b = f.min_degree - e.max_degree, f.max_degree - e.min_degree
            lo = a if lo is None else min(lo, a)
            hi = b if hi is None else max(hi, b)
    return None if lo is None else (lo, hi)
