"""Ordinal maps, Čech nerves of ringed covers, the action nerve [X/G]•,
split decompositions and fiber products of split nerves.

All simplicial sets here share one small interface (``level``, ``face``,
``degeneracy``, ``vertex``, ``pull``, ``front``, ``back``, ``ring``,
``restriction``) so the cochain engines can treat Čech nerves, standard
simplices and action nerves uniformly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exactalg import QQ, Ring, RingError, RingHom


class SimplicialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# ordinal maps


@dataclass(frozen=True)
class OrdinalMap:
    """A weakly monotone map [n] -> [m], stored as its list of values."""

    n: int
    m: int
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.n + 1:
            raise SimplicialError(f"need {self.n + 1} values, got {len(vals)}")
        if any(v < 0 or v > self.m for v in vals):
            raise SimplicialError(f"values {vals} out of range for [{self.m}]")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise SimplicialError(f"values {vals} are not monotone")

    def __call__(self, i: int) -> int:
        return self.values[i]

    @classmethod
    def identity(cls, n: int) -> "OrdinalMap":
        return cls(n, n, tuple(range(n + 1)))

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.m + 1))

    def __repr__(self) -> str:
        return f"OrdinalMap([{self.n}]->[{self.m}]: {self.values})"


def compose_ordinal(f: OrdinalMap, g: OrdinalMap) -> OrdinalMap:
    """``f ∘ g``: first g, then f."""
    if g.m != f.n:
        raise SimplicialError(f"cannot compose [{g.n}]->[{g.m}] with [{f.n}]->[{f.m}]")
    return OrdinalMap(g.n, f.m, tuple(f.values[v] for v in g.values))


def epi_mono_factor(f: OrdinalMap) -> tuple[OrdinalMap, OrdinalMap]:
    """The unique factorization f = mono ∘ epi through [len(image) - 1]."""
    image = sorted(set(f.values))
    pos = {v: i for i, v in enumerate(image)}
    k = len(image) - 1
    epi = OrdinalMap(f.n, k, tuple(pos[v] for v in f.values))
    mono = OrdinalMap(k, f.m, tuple(image))
    return epi, mono


def monotone_maps(n: int, m: int) -> list[OrdinalMap]:
    return [OrdinalMap(n, m, c) for c in itertools.combinations_with_replacement(range(m + 1), n + 1)]


def coface(n: int, i: int) -> OrdinalMap:
    """d^i: [n-1] -> [n], the injection missing i."""
    if not 0 <= i <= n or n < 1:
        raise SimplicialError("coface index out of range")
    return OrdinalMap(n - 1, n, tuple(j if j < i else j + 1 for j in range(n)))


def codegeneracy(n: int, i: int) -> OrdinalMap:
    """s^i: [n+1] -> [n], the surjection hitting i twice."""
    if not 0 <= i <= n:
        raise SimplicialError("codegeneracy index out of range")
    return OrdinalMap(n + 1, n, tuple(j if j <= i else j - 1 for j in range(n + 2)))


def ordinal_from_tuple(t: Sequence[int], n: int) -> OrdinalMap:
    t = tuple(t)
    if not t:
        raise SimplicialError("empty tuple")
    if any(a > b for a, b in zip(t, t[1:])):
        raise SimplicialError(f"{t} is not nondecreasing")
    if any(x < 0 or x > n for x in t):
        raise SimplicialError(f"{t} has entries outside [{n}]")
    return OrdinalMap(len(t) - 1, n, t)


@lru_cache(maxsize=None)
def monotone_surjections(k: int, n: int) -> tuple[OrdinalMap, ...]:
    """Monotone surjections [k] -> [n]: choose which n of the k steps go up."""
    out = []
    for ups in itertools.combinations(range(1, k + 1), n):
        vals = []
        cur = 0
        for j in range(k + 1):
            if j in ups:
                cur += 1
            vals.append(cur)
        out.append(OrdinalMap(k, n, tuple(vals)))
    return tuple(out)


def all_surjections(k: int) -> list[OrdinalMap]:
    return [s for n in range(k + 1) for s in monotone_surjections(k, n)]


def matching_surjections(k: int) -> list[OrdinalMap]:
    """Monotone surjections [k] -> [n] with n < k; there are 2^k - 1 of them."""
    if k <= 0:
        return []
    return [s for n in range(k) for s in monotone_surjections(k, n)]


# ---------------------------------------------------------------------------
# ringed covers


def _key(s: Iterable[int]) -> frozenset:
    return frozenset(s)


class RingedCover:
    """A finite combinatorial cover with a ring on every nonempty intersection.

    Opens are identified with positions ``0..N-1``; ``names`` keeps their
    labels.  ``restrictions`` maps ``(S, T)`` with ``S ⊂ T`` to a RingHom;
    missing restrictions are composed along chains, or defaulted to the
    name-matching homomorphism when the rings allow it.
    """

    def __init__(self, names: Sequence[str], nerve: Iterable[Iterable[int]], rings: Mapping,
                 restrictions: Mapping | None = None, check: bool = True):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise SimplicialError("cover index names must be distinct")
        n = len(self.names)
        sets = {_key(s) for s in nerve}
        for s in list(sets):
            if not s:
                raise SimplicialError("the empty set cannot be a nerve member")
            if any(i < 0 or i >= n for i in s):
                raise SimplicialError(f"nerve member {sorted(s)} uses unknown indices")
        for i in range(n):
            sets.add(frozenset([i]))
        # close under nonempty subsets
        for s in list(sets):
            for r in range(1, len(s)):
                for sub in itertools.combinations(sorted(s), r):
                    if frozenset(sub) not in sets:
                        if check:
                            raise SimplicialError(
                                f"nerve is not closed under subsets: {sorted(s)} present, {list(sub)} missing"
                            )
                        sets.add(frozenset(sub))
        self.nerve = frozenset(sets)
        self.rings = {}
        for s in self.nerve:
            r = rings.get(s)
            if r is None:
                raise SimplicialError(f"no ring given for intersection {self.label(s)}")
            self.rings[s] = r
        self._given = {}
        for (a, b), h in (restrictions or {}).items():
            a, b = _key(a), _key(b)
            if not a < b or a not in self.nerve or b not in self.nerve:
                raise SimplicialError(f"bad restriction {self.label(a)} -> {self.label(b)}")
            if h.source != self.rings[a] or h.target != self.rings[b]:
                raise SimplicialError(f"restriction {self.label(a)} -> {self.label(b)} has wrong rings")
            self._given[(a, b)] = h
        self._cache: dict = {}
        if check:
            self.check_functoriality()

    @classmethod
    def constant(cls, n_opens: int, ring: Ring, nerve: Iterable[Iterable[int]] | None = None,
                 names: Sequence[str] | None = None) -> "RingedCover":
        """All intersections carry ``ring`` and restrictions are identities."""
        if nerve is None:
            nerve = [s for r in range(1, n_opens + 1) for s in itertools.combinations(range(n_opens), r)]
        nerve = [frozenset(s) for s in nerve]
        closed = set()
        for s in nerve:
            for r in range(1, len(s) + 1):
                for sub in itertools.combinations(sorted(s), r):
                    closed.add(frozenset(sub))
        names = names or [f"U{i}" for i in range(n_opens)]
        return cls(names, closed, {s: ring for s in closed}, {}, check=False)

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def cech(self) -> "CechNerve":
        """The (shared) Čech nerve of this cover."""
        nerve = self.__dict__.get("_cech")
        if nerve is None:
            nerve = self.__dict__["_cech"] = CechNerve(self)
        return nerve

    def label(self, s) -> str:
        return "{" + ",".join(self.names[i] for i in sorted(s)) + "}"

    def in_nerve(self, s: Iterable[int]) -> bool:
        return _key(s) in self.nerve

    def ring(self, s: Iterable[int]) -> Ring:
        return self.rings[_key(s)]

    def restriction(self, a: Iterable[int], b: Iterable[int]) -> RingHom:
        a, b = _key(a), _key(b)
        key = (a, b)
        h = self._cache.get(key)
        if h is not None:
            return h
        if a == b:
            h = RingHom.identity(self.rings[a])
        elif not a < b:
            raise SimplicialError(f"{self.label(a)} is not contained in {self.label(b)}")
        elif key in self._given:
            h = self._given[key]
        elif len(b - a) > 1:
            # compose through the intermediate set a ∪ {min(b - a)}
            mid = a | {min(b - a)}
            h = self.restriction(mid, b).compose(self.restriction(a, mid))
        else:
            try:
                h = RingHom(self.rings[a], self.rings[b])
            except RingError as exc:
                raise SimplicialError(
                    f"no restriction {self.label(a)} -> {self.label(b)} and no default: {exc}"
                ) from None
        self._cache[key] = h
        return h

    def check_functoriality(self) -> None:
        for c in self.nerve:
            for b in self.nerve:
                if not b < c:
                    continue
                for a in self.nerve:
                    if a < b:
                        lhs = self.restriction(b, c).compose(self.restriction(a, b))
                        if lhs != self.restriction(a, c):
                            raise SimplicialError(
                                f"restrictions are not functorial on {self.label(a)} ⊂ {self.label(b)} ⊂ {self.label(c)}"
                            )

    def nerve_level(self, k: int) -> list[tuple[int, ...]]:
        return [t for t in itertools.product(range(self.size), repeat=k + 1) if _key(t) in self.nerve]

    def nerve_sets(self) -> list[frozenset]:
        return sorted(self.nerve, key=lambda s: (len(s), sorted(s)))


def nerve_level(c: RingedCover, k: int) -> list[tuple[int, ...]]:
    return c.nerve_level(k)


# ---------------------------------------------------------------------------
# simplicial sets with ring data


class CechNerve:
    """The Čech nerve of a ringed cover: k-simplices are (k+1)-tuples."""

    kind = "cech"

    def __init__(self, cover: RingedCover):
        self.cover = cover
        self._levels: dict = {}

    def level(self, k: int) -> list:
        if k not in self._levels:
            self._levels[k] = self.cover.nerve_level(k)
        return self._levels[k]

    def dim(self, s) -> int:
        return len(s) - 1

    def vertex(self, s, j: int) -> int:
        return s[j]

    def face(self, s, i: int):
        return s[:i] + s[i + 1:]

    def degeneracy(self, s, i: int):
        return s[: i + 1] + s[i:]

    def pull(self, sigma: OrdinalMap, s):
        return tuple(s[v] for v in sigma.values)

    def front(self, s, p: int):
        return s[: p + 1]

    def back(self, s, p: int):
        return s[len(s) - 1 - p:]

    def is_degenerate(self, s) -> bool:
        return any(a == b for a, b in zip(s, s[1:]))

    def ring(self, s) -> Ring:
        return self.cover.ring(s)

    def restriction(self, sub, s) -> RingHom:
        return self.cover.restriction(sub, s)

    def vertices(self) -> list:
        return list(range(self.cover.size))

    def fmt(self, s) -> str:
        return "(" + ",".join(self.cover.names[i] for i in s) + ")"


class StandardSimplex:
    """Δ[n] with a single coefficient ring: simplices are nondecreasing tuples."""

    kind = "simplex"

    def __init__(self, n: int, ring: Ring = QQ):
        self.n = n
        self._ring = ring
        self._id = RingHom.identity(ring)

    def __eq__(self, other) -> bool:
        return isinstance(other, StandardSimplex) and (self.n, self._ring) == (other.n, other._ring)

    def __hash__(self):
        return hash(("simplex", self.n, self._ring))

    def level(self, k: int) -> list:
        return list(itertools.combinations_with_replacement(range(self.n + 1), k + 1))

    def dim(self, s) -> int:
        return len(s) - 1

    vertex = CechNerve.vertex
    face = CechNerve.face
    degeneracy = CechNerve.degeneracy
    pull = CechNerve.pull
    front = CechNerve.front
    back = CechNerve.back
    is_degenerate = CechNerve.is_degenerate

    def ring(self, s) -> Ring:
        return self._ring

    def restriction(self, sub, s) -> RingHom:
        return self._id

    def vertices(self) -> list:
        return list(range(self.n + 1))

    def fmt(self, s) -> str:
        return "(" + ",".join(map(str, s)) + ")"


# ---------------------------------------------------------------------------
# group actions and [X/G]•


class GroupAction:
    """A finite group (multiplication table) acting on a finite set from the right."""

    def __init__(self, elements: Sequence[str], table: Sequence[Sequence[int]], points: Sequence[str],
                 action: Sequence[Sequence[int]], identity: int | None = None):
        self.elements = tuple(elements)
        self.points = tuple(points)
        n = len(self.elements)
        self.table = tuple(tuple(r) for r in table)
        self.act_table = tuple(tuple(r) for r in action)
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise SimplicialError("multiplication table has the wrong shape")
        if any(v < 0 or v >= n for r in self.table for v in r):
            raise SimplicialError("multiplication table entries out of range")
        if len(self.act_table) != len(self.points) or any(len(r) != n for r in self.act_table):
            raise SimplicialError("action table has the wrong shape")
        if any(v < 0 or v >= len(self.points) for r in self.act_table for v in r):
            raise SimplicialError("action table entries out of range")
        if identity is None:
            ids = [e for e in range(n) if all(self.table[e][g] == g == self.table[g][e] for g in range(n))]
            if not ids:
                raise SimplicialError("the table has no identity element")
            identity = ids[0]
        self.e = identity
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise SimplicialError("multiplication is not associative")
            if not any(self.table[a][b] == self.e for b in range(n)):
                raise SimplicialError(f"element {self.elements[a]} has no inverse")
        for x in range(len(self.points)):
            if self.act_table[x][self.e] != x:
                raise SimplicialError("the identity does not act trivially")
            for g in range(n):
                for h in range(n):
                    if self.act_table[self.act_table[x][g]][h] != self.act_table[x][self.table[g][h]]:
                        raise SimplicialError("(x·g)·h != x·(gh) for some x, g, h")

    @classmethod
    def cyclic(cls, n: int, points: Sequence[str], shift: Sequence[int] | None = None) -> "GroupAction":
        """Z/n acting on ``points``; ``shift[x]`` is the image of x under the generator."""
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        m = len(points)
        shift = list(range(m)) if shift is None else list(shift)
        act = []
        for x in range(m):
            row = []
            for g in range(n):
                y = x
                for _ in range(g):
                    y = shift[y]
                row.append(y)
            act.append(row)
        return cls([f"g{i}" if i else "e" for i in range(n)], table, points, act, identity=0)

    @classmethod
    def symmetric3(cls, points: Sequence[str] | None = None) -> "GroupAction":
        perms = list(itertools.permutations(range(3)))
        idx = {p: i for i, p in enumerate(perms)}
        # right action x·g = g(x); (gh) means first g then h
        table = [[idx[tuple(h[g[i]] for i in range(3))] for h in perms] for g in perms]
        pts = list(points or ["0", "1", "2"])
        act = [[perms[g][x] for g in range(6)] for x in range(len(pts))]
        return cls(["".join(map(str, p)) for p in perms], table, pts, act, identity=idx[(0, 1, 2)])

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def act(self, x: int, g: int) -> int:
        return self.act_table[x][g]

    def prod(self, gs: Iterable[int]) -> int:
        out = self.e
        for g in gs:
            out = self.table[out][g]
        return out

    def inverse(self, g: int) -> int:
        return next(h for h in range(self.order) if self.table[g][h] == self.e)


class ActionNerve:
    """[X/G]•: k-simplices are tuples (x, g1, ..., gk); one coefficient ring."""

    kind = "action"

    def __init__(self, action: GroupAction, ring: Ring = QQ):
        self.action = action
        self._ring = ring
        self._id = RingHom.identity(ring)
        self._levels: dict = {}

    def level(self, k: int) -> list:
        if k not in self._levels:
            a = self.action
            self._levels[k] = [
                (x,) + gs for x in range(len(a.points)) for gs in itertools.product(range(a.order), repeat=k)
            ]
        return self._levels[k]

    def dim(self, s) -> int:
        return len(s) - 1

    def vertex(self, s, j: int) -> int:
        a = self.action
        x = s[0]
        for g in s[1: j + 1]:
            x = a.act(x, g)
        return x

    def face(self, s, i: int):
        k = len(s) - 1
        if not 0 <= i <= k or k == 0:
            raise SimplicialError("face index out of range")
        a = self.action
        if i == 0:
            return (a.act(s[0], s[1]),) + s[2:]
        if i == k:
            return s[:-1]
        return s[:i] + (a.mul(s[i], s[i + 1]),) + s[i + 2:]

    def degeneracy(self, s, i: int):
        k = len(s) - 1
        if not 0 <= i <= k:
            raise SimplicialError("degeneracy index out of range")
        return s[: i + 1] + (self.action.e,) + s[i + 1:]

    def front(self, s, p: int):
        """ρ_{k,p}(x, g1..gk) = (x, g1..gp)."""
        k = len(s) - 1
        if p > k:
            raise SimplicialError("p > k")
        return s[: p + 1]

    def back(self, s, p: int):
        """τ_{k,p}(x, g1..gk) = (x·g1⋯g_{k-p}, g_{k-p+1}..gk)."""
        k = len(s) - 1
        if p > k:
            raise SimplicialError("p > k")
        return (self.vertex(s, k - p),) + s[k - p + 1:]

    def pull(self, sigma: OrdinalMap, s):
        a = self.action
        vals = sigma.values
        out = [self.vertex(s, vals[0])]
        for u, v in zip(vals, vals[1:]):
            out.append(a.prod(s[u + 1: v + 1]))
        return tuple(out)

    def is_degenerate(self, s) -> bool:
        return any(g == self.action.e for g in s[1:])

    def ring(self, s) -> Ring:
        return self._ring

    def restriction(self, sub, s) -> RingHom:
        return self._id

    def vertices(self) -> list:
        return list(range(len(self.action.points)))

    def fmt(self, s) -> str:
        a = self.action
        return "(" + ",".join([a.points[s[0]]] + [a.elements[g] for g in s[1:]]) + ")"


def quotient_level(action: GroupAction, k: int) -> list:
    return ActionNerve(action).level(k)


def front_back_face(action: GroupAction, k: int, p: int):
    """Return (ρ_{k,p}, τ_{k,p}) as functions on k-simplices of [X/G]•."""
    if p > k or p < 0:
        raise SimplicialError("need 0 <= p <= k")
    nerve = ActionNerve(action)
    return (lambda s: nerve.front(s, p)), (lambda s: nerve.back(s, p))


# ---------------------------------------------------------------------------
# split decompositions


@dataclass(frozen=True)
class SplitDecomposition:
    """Level k as a disjoint union of σ^*(nondegenerate cell) over surjections σ."""

    level: int
    factors: tuple  # ((surjection, nondegenerate cell), ...)

    def by_surjection(self) -> dict:
        out: dict = {}
        for sigma, cell in self.factors:
            out.setdefault(sigma, []).append(cell)
        return out


def nondegenerate(backend, n: int) -> list:
    return [s for s in backend.level(n) if not backend.is_degenerate(s)]


def split_decomposition(backend, k: int) -> SplitDecomposition:
    """Decompose level k; raises if the canonical map is not a bijection."""
    factors = []
    seen = {}
    for sigma in all_surjections(k):
        for cell in nondegenerate(backend, sigma.m):
            img = backend.pull(sigma, cell)
            if img in seen:
                raise SimplicialError(
                    f"{backend.fmt(img)} arises twice ({seen[img]} and {sigma.values}): not split"
                )
            seen[img] = sigma.values
            factors.append((sigma, cell))
    level = set(backend.level(k))
    if set(seen) != level:
        missing = sorted(level - set(seen))
        raise SimplicialError(f"level {k} is not covered by the split cells; missing {missing[:3]}")
    return SplitDecomposition(k, tuple(factors))


class FiberProductNerve:
    """Levelwise fiber product of two Čech-type nerves over a common base.

    Simplices are pairs (u, w) of equal-length index tuples of the two covers;
    a pair is kept when the union of the indices it uses is a nonempty
    intersection of ``global_cover`` (whose index set is the disjoint union of
    both covers).  The base is the whole space, so its component is implicit.
    """

    kind = "fiber-product"

    def __init__(self, n_left: int, n_right: int, global_nerve: Iterable[Iterable[int]]):
        self.n_left = n_left
        self.n_right = n_right
        self.nerve = {frozenset(s) for s in global_nerve}

    def _ok(self, u, w) -> bool:
        s = frozenset(u) | frozenset(self.n_left + j for j in w)
        return s in self.nerve

    def level(self, k: int) -> list:
        return [
            (u, w)
            for u in itertools.product(range(self.n_left), repeat=k + 1)
            for w in itertools.product(range(self.n_right), repeat=k + 1)
            if self._ok(u, w)
        ]

    def pull(self, sigma: OrdinalMap, s):
        u, w = s
        return (tuple(u[v] for v in sigma.values), tuple(w[v] for v in sigma.values))

    def is_degenerate(self, s) -> bool:
        u, w = s
        return any(u[j] == u[j + 1] and w[j] == w[j + 1] for j in range(len(u) - 1))

    def fmt(self, s) -> str:
        return f"{s[0]}x{s[1]}"


def _leg_factor(t) -> OrdinalMap:
    """The surjection σ with t = σ^*(t') for t' without consecutive repeats."""
    vals = [0]
    for a, b in zip(t, t[1:]):
        vals.append(vals[-1] + (a != b))
    return OrdinalMap(len(t) - 1, vals[-1], tuple(vals))


def free_degeneracy_cells(product: FiberProductNerve, m: int, literal: bool = True) -> list:
    """K_m: level-m pairs indexed by surjection pairs not factoring through a common s^j.

    Each leg of a pair factors as σ_u^*(u'), σ_w^*(w').  With ``literal`` the
    pair is excluded when σ_u and σ_w both factor through the *same*
    codegeneracy [m] -> [m-1]; otherwise it is excluded when each merely
    factors through *some* codegeneracy.
    """
    out = []
    for u, w in product.level(m):
        su, sw = _leg_factor(u), _leg_factor(w)
        ru = {j for j in range(m) if su.values[j] == su.values[j + 1]}
        rw = {j for j in range(m) if sw.values[j] == sw.values[j + 1]}
        if literal:
            excluded = bool(ru & rw)
        else:
            excluded = bool(ru) and bool(rw)
        if not excluded:
            out.append((u, w))
    return out


def fiber_product_split(product: FiberProductNerve, m: int, literal: bool = True) -> SplitDecomposition:
    """Level m of the product as ∐_σ σ^*(K_n); raises if it is not a bijection."""
    factors = []
    seen = {}
    for sigma in all_surjections(m):
        for cell in free_degeneracy_cells(product, sigma.m, literal):
            img = product.pull(sigma, cell)
            if img in seen:
                raise SimplicialError(f"{product.fmt(img)} arises twice: not split")
            seen[img] = sigma
            factors.append((sigma, cell))
    level = set(product.level(m))
    if set(seen) != level:
        raise SimplicialError(f"level {m} is not the union of the free-degeneracy cells")
    return SplitDecomposition(m, tuple(factors))


# ---------------------------------------------------------------------------
# exhaustive identity checks


def simplicial_identity_failures(backend, kmax: int) -> list[str]:
    """Check every simplicial identity among faces and degeneracies up to level kmax.

    Also checks that ``pull`` along cofaces/codegeneracies agrees with the
    face/degeneracy maps, that pull is contravariant, and that front/back
    faces are iterated last/first faces.
    """
    out = []
    for k in range(kmax + 1):
        for s in backend.level(k):
            if k >= 2:
                for j in range(k + 1):
                    for i in range(j):
                        if backend.face(backend.face(s, j), i) != backend.face(backend.face(s, i), j - 1):
                            out.append(f"d_{i} d_{j} != d_{j - 1} d_{i} at {backend.fmt(s)}")
            for j in range(k + 1):
                sj = backend.degeneracy(s, j)
                for i in range(k + 2):
                    lhs = backend.face(sj, i)
                    if i < j:
                        rhs = backend.degeneracy(backend.face(s, i), j - 1) if k >= 1 else None
                    elif i in (j, j + 1):
                        rhs = s
                    else:
                        rhs = backend.degeneracy(backend.face(s, i - 1), j) if k >= 1 else None
                    if rhs is not None and lhs != rhs:
                        out.append(f"d_{i} s_{j} identity fails at {backend.fmt(s)}")
                for i in range(j + 1):
                    if backend.degeneracy(backend.degeneracy(s, j), i) != backend.degeneracy(
                            backend.degeneracy(s, i), j + 1):
                        out.append(f"s_{i} s_{j} != s_{j + 1} s_{i} at {backend.fmt(s)}")
                if backend.pull(codegeneracy(k, j), s) != sj:
                    out.append(f"pull along s^{j} differs from s_{j} at {backend.fmt(s)}")
            if k >= 1:
                for i in range(k + 1):
                    if backend.pull(coface(k, i), s) != backend.face(s, i):
                        out.append(f"pull along d^{i} differs from d_{i} at {backend.fmt(s)}")
            for p in range(k + 1):
                fr, bk = s, s
                for _ in range(k - p):
                    fr = backend.face(fr, backend.dim(fr))
                    bk = backend.face(bk, 0)
                if backend.front(s, p) != fr or backend.back(s, p) != bk:
                    out.append(f"front/back {p}-face mismatch at {backend.fmt(s)}")
    return out


def pull_functoriality_failures(backend, kmax: int) -> list[str]:
    """pull(f ∘ g) = pull(g) ∘ pull(f) for all monotone f: [a]->[b], g: [c]->[a], levels <= kmax."""
    out = []
    for b in range(kmax + 1):
        for s in backend.level(b):
            for a in range(kmax + 1):
                for f in monotone_maps(a, b):
                    fs = backend.pull(f, s)
                    for c in range(kmax + 1):
                        for g in monotone_maps(c, a):
                            if backend.pull(compose_ordinal(f, g), s) != backend.pull(g, fs):
                                out.append(f"pull not functorial at {backend.fmt(s)}: {f.values} after {g.values}")
    return out


def epi_mono_failures(max_size: int) -> list[str]:
    """Brute-force uniqueness of the epi-mono factorization for [n] -> [m], n, m <= max_size."""
    out = []
    for n in range(max_size + 1):
        for m in range(max_size + 1):
            for f in monotone_maps(n, m):
                found = []
                for k in range(min(n, m) + 1):
                    for e in monotone_surjections(n, k):
                        for mono in monotone_maps(k, m):
                            if mono.is_injective and compose_ordinal(mono, e) == f:
                                found.append((e, mono))
                if found != [epi_mono_factor(f)]:
                    out.append(f"factorization of {f.values} into [{m}] is not unique or differs")
    return out
