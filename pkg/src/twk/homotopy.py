"""Deciding whether a closed degree-0 map of bounded free complexes is a
homotopy equivalence.

A map f: (E, d) -> (F, d) of bounded complexes of finite free modules is a
homotopy equivalence iff its mapping cone is acyclic.  Acyclicity is decided

* over a field, by ranks;
* over K[t] or K[t^±] (Euclidean domains), by diagonalizing each cone
  differential and checking that the ranks add up and every diagonal entry
  is a unit (the image is then a direct summand equal to the kernel);
* over multivariate Laurent/polynomial rings, by a monomial grading when the
  data is homogeneous (exact), by strict invertibility, or by specializing
  at points (a failure anywhere is definitive); otherwise "inconclusive".

A user-supplied witness (g, h, h') is always checked first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .exactalg import (
    GradedMap,
    GradedModule,
    LaurentRing,
    Matrix,
    PrimeField,
    RingError,
    RingHom,
    hom_differential,
)

INVERTIBLE = "invertible"
NOT_INVERTIBLE = "not-invertible"
INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    status: str
    method: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == INVERTIBLE

    @property
    def definite_failure(self) -> bool:
        return self.status == NOT_INVERTIBLE


def cone_differentials(f: GradedMap, dE: GradedMap, dF: GradedMap) -> dict:
    """Matrices of the cone differential C^n -> C^{n+1}, C^n = E^{n+1} ⊕ F^n."""
    ring = f.ring
    E, F = f.source, f.target
    degs = set()
    for d in E.degrees:
        degs.update({d - 1, d - 2})
    for d in F.degrees:
        degs.update({d, d - 1})
    out = {}
    for n in sorted(degs):
        e1, e2 = E.rank(n + 1), E.rank(n + 2)
        f0, f1 = F.rank(n), F.rank(n + 1)
        rows, cols = e2 + f1, e1 + f0
        if rows == 0 or cols == 0:
            out[n] = Matrix(ring, rows, cols)
            continue
        a = dE.block(n + 1)
        b = f.block(n + 1)
        c = dF.block(n)
        z = ring.zero()
        data = []
        for i in range(e2):
            data.append([ring.neg(a[i, j]) for j in range(e1)] + [z] * f0)
        for i in range(f1):
            data.append([b[i, j] for j in range(e1)] + [c[i, j] for j in range(f0)])
        out[n] = Matrix(ring, rows, cols, data)
    return out


def _acyclic_field(diffs: dict) -> tuple[bool, str]:
    ranks = {n: m.rank() for n, m in diffs.items()}
    for n, m in diffs.items():
        dim = m.cols
        if dim != ranks[n] + ranks.get(n - 1, 0):
            return False, f"cone has cohomology in degree {n}"
    return True, ""


# -- univariate Euclidean arithmetic ------------------------------------------


def _to_poly(ring: LaurentRing, a):
    """Split a univariate element as t^shift * P(t) with P(0) != 0 (Laurent)."""
    if not a:
        return 0, []
    lo = a[0][0][0]
    hi = a[-1][0][0]
    coeffs = [ring.base.zero()] * (hi - lo + 1)
    for (e,), c in a:
        coeffs[e - lo] = c
    return lo, coeffs


def _from_poly(ring: LaurentRing, shift: int, coeffs):
    return ring.from_dict({(shift + i,): c for i, c in enumerate(coeffs)})


def _size(ring: LaurentRing, a) -> int:
    if not a:
        raise RingError("size of zero")
    if ring.polynomial:
        return a[-1][0][0]
    return a[-1][0][0] - a[0][0][0]


def _divmod(ring: LaurentRing, b, a):
    """q, r with b = q a + r and r = 0 or size(r) < size(a)."""
    base = ring.base
    sa, A = _to_poly(ring, a)
    sb, B = _to_poly(ring, b)
    if ring.polynomial:
        # genuine polynomials: exponents start at sa, sb >= 0
        A = [base.zero()] * sa + A
        B = [base.zero()] * sb + B
        sa = sb = 0
    B = list(B)
    inv = base.inverse(A[-1])
    q = [base.zero()] * max(len(B) - len(A) + 1, 0)
    while len(B) >= len(A) and any(not base.is_zero(x) for x in B):
        if base.is_zero(B[-1]):
            B.pop()
            continue
        k = len(B) - len(A)
        c = base.mul(B[-1], inv)
        q[k] = c
        for i, x in enumerate(A):
            B[i + k] = base.sub(B[i + k], base.mul(c, x))
        B.pop()
    # b = t^sb (Q A + R) = t^{sb-sa} Q * a + t^sb R
    quo = _from_poly(ring, sb - sa, q)
    rem = _from_poly(ring, sb, B)
    return quo, rem


def euclidean_diagonal(m: Matrix) -> list:
    """Diagonal entries of an equivalent diagonal form over K[t] or K[t^±]."""
    ring = m.ring
    rows = [list(r) for r in m.data]
    nr, nc = m.rows, m.cols
    diag = []
    top = 0
    while top < min(nr, nc):
        # find the nonzero entry of least size in the remaining block
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                x = rows[i][j]
                if x:
                    s = _size(ring, x)
                    if best is None or s < best[0]:
                        best = (s, i, j)
        if best is None:
            break
        _, i, j = best
        rows[top], rows[i] = rows[i], rows[top]
        for r in rows:
            r[top], r[j] = r[j], r[top]
        done = False
        while not done:
            done = True
            piv = rows[top][top]
            for i in range(top + 1, nr):
                x = rows[i][top]
                if x:
                    q, _ = _divmod(ring, x, piv)
                    rows[i] = [ring.sub(a, ring.mul(q, b)) for a, b in zip(rows[i], rows[top])]
            for j in range(top + 1, nc):
                x = rows[top][j]
                if x:
                    q, _ = _divmod(ring, x, piv)
                    for r in rows:
                        r[j] = ring.sub(r[j], ring.mul(q, r[top]))
            # any leftover in the pivot row/column is smaller than the pivot
            cand = None
            for i in range(top + 1, nr):
                if rows[i][top]:
                    cand = ("r", i)
                    break
            if cand is None:
                for j in range(top + 1, nc):
                    if rows[top][j]:
                        cand = ("c", j)
                        break
            if cand is not None:
                done = False
                kind, idx = cand
                if kind == "r":
                    rows[top], rows[idx] = rows[idx], rows[top]
                else:
                    for r in rows:
                        r[top], r[idx] = r[idx], r[top]
        diag.append(rows[top][top])
        top += 1
    return diag


def _acyclic_euclidean(diffs: dict) -> tuple[bool, str]:
    ranks = {}
    for n, m in diffs.items():
        diag = euclidean_diagonal(m)
        ring = m.ring
        for x in diag:
            if not ring.is_unit(x):
                return False, f"cone differential in degree {n} has non-unit elementary divisor {ring.fmt(x)}"
        ranks[n] = len(diag)
    for n, m in diffs.items():
        if m.cols != ranks[n] + ranks.get(n - 1, 0):
            return False, f"cone has cohomology in degree {n}"
    return True, ""


# -- multivariate fallbacks ---------------------------------------------------


def _basis_weights(f: GradedMap, dE: GradedMap, dF: GradedMap):
    """Exponent weights χ on basis vectors making all maps homogeneous, or None."""
    ring = f.ring
    nodes = {}
    edges: dict = {}

    def node(side, d, i):
        key = (side, d, i)
        nodes.setdefault(key, None)
        return key

    for side, mod in (("E", f.source), ("F", f.target)):
        for d, r in mod.ranks:
            for i in range(r):
                node(side, d, i)
    for m_src, m_tgt, g in (("E", "E", dE), ("F", "F", dF), ("E", "F", f)):
        for d, blk in g.blocks.items():
            for i, j, x in blk.nonzero_entries():
                if len(x) != 1:
                    return None
                e = x[0][0]
                a = (m_tgt, d + g.degree, i)
                b = (m_src, d, j)
                # χ_b = e + χ_a
                edges.setdefault(a, []).append((b, e))
                edges.setdefault(b, []).append((a, tuple(-v for v in e)))
    n = ring.nvars
    chi = {}
    for start in nodes:
        if start in chi:
            continue
        chi[start] = (0,) * n
        stack = [start]
        while stack:
            a = stack.pop()
            for b, e in edges.get(a, ()):
                want = tuple(x + y for x, y in zip(chi[a], e))
                if b in chi:
                    if chi[b] != want:
                        return None
                else:
                    chi[b] = want
                    stack.append(b)
    return chi


def _slice(m: Matrix, rows_keep, cols_keep):
    base = m.ring.base
    data = [[(m.data[i][j][0][1] if m.data[i][j] else base.zero()) for j in cols_keep] for i in rows_keep]
    return Matrix(base, len(rows_keep), len(cols_keep), data)


def _acyclic_homogeneous(f, dE, dF, chi) -> tuple[bool, str]:
    ring = f.ring
    n = ring.nvars
    if ring.polynomial:
        vals = list(chi.values())
        boxes = [range(min(v[c] for v in vals), max(v[c] for v in vals) + 1) for c in range(n)]
        weights = list(itertools.product(*boxes))
    else:
        weights = [None]
    for w in weights:
        def keep(side, d, r):
            if w is None:
                return list(range(r))
            return [i for i in range(r) if all(a <= b for a, b in zip(chi[(side, d, i)], w))]

        def sl(g, s_side, t_side):
            blocks = {}
            src_r = {}
            tgt_r = {}
            for d, r in g.source.ranks:
                src_r[d] = keep(s_side, d, r)
            for d, r in g.target.ranks:
                tgt_r[d] = keep(t_side, d, r)
            for d, blk in g.blocks.items():
                blocks[d] = _slice(blk, tgt_r.get(d + g.degree, []), src_r.get(d, []))
            src = GradedModule({d: len(v) for d, v in src_r.items()})
            tgt = GradedModule({d: len(v) for d, v in tgt_r.items()})
            fixed = {}
            for d, b in blocks.items():
                fixed[d] = b
            return GradedMap(ring.base, src, tgt, g.degree, fixed)

        ok, why = _acyclic_field(cone_differentials(sl(f, "E", "F"), sl(dE, "E", "E"), sl(dF, "F", "F")))
        if not ok:
            return False, why + ("" if w is None else f" (weight {w})")
    return True, ""


def _strictly_invertible(f: GradedMap) -> bool:
    if f.source != f.target:
        return False
    for d, r in f.source.ranks:
        blk = f.block(d)
        if not f.ring.is_unit(blk.det()):
            return False
    return True


def _specializations(ring: LaurentRing):
    base = ring.base
    pts = [1, -1, 2, 3, -2]
    if ring.polynomial:
        pts = [0] + pts
    if isinstance(base, PrimeField):
        pts = [p % base.p for p in pts]
        pts = [p for p in dict.fromkeys(pts) if ring.polynomial or p != 0]
    combos = itertools.product(pts, repeat=ring.nvars) if ring.nvars <= 2 else (
        [tuple([p] * ring.nvars) for p in pts])
    for c in combos:
        yield RingHom(ring, base, {v: base.coerce(x) for v, x in zip(ring.variables, c)})


def homotopy_invertible(f: GradedMap, dE: GradedMap, dF: GradedMap, witness=None) -> Verdict:
    """Decide whether ``f`` is a homotopy equivalence (E, dE) -> (F, dF)."""
    if f.degree != 0:
        return Verdict(NOT_INVERTIBLE, "degree", "map does not have degree 0")
    if not hom_differential(f, dE, dF).is_zero():
        return Verdict(NOT_INVERTIBLE, "closedness", "map is not a chain map")
    if witness is not None:
        g, h, h2 = witness
        try:
            ok = (
                hom_differential(g, dF, dE).is_zero()
                and f @ g - GradedMap.identity(f.ring, f.target) == hom_differential(h, dF, dF)
                and g @ f - GradedMap.identity(f.ring, f.source) == hom_differential(h2, dE, dE)
            )
        except RingError:
            ok = False
        if ok:
            return Verdict(INVERTIBLE, "witness", "homotopy inverse witness verified")
    ring = f.ring
    if ring.is_field:
        ok, why = _acyclic_field(cone_differentials(f, dE, dF))
        return Verdict(INVERTIBLE if ok else NOT_INVERTIBLE, "cone-rank", why)
    if ring.nvars == 1:
        ok, why = _acyclic_euclidean(cone_differentials(f, dE, dF))
        return Verdict(INVERTIBLE if ok else NOT_INVERTIBLE, "cone-euclidean", why)
    chi = _basis_weights(f, dE, dF)
    if chi is not None:
        ok, why = _acyclic_homogeneous(f, dE, dF, chi)
        return Verdict(INVERTIBLE if ok else NOT_INVERTIBLE, "cone-graded", why)
    if _strictly_invertible(f):
        return Verdict(INVERTIBLE, "strict", "degreewise invertible chain map")
    for h in _specializations(ring):
        special = cone_differentials(f.map_ring(h), dE.map_ring(h), dF.map_ring(h))
        ok, why = _acyclic_field(special)
        if not ok:
            pt = ", ".join(f"{v}={h.target.fmt(x)}" for v, x in h.images.items())
            return Verdict(NOT_INVERTIBLE, "specialization", f"{why} at {pt}")
    return Verdict(INCONCLUSIVE, "specialization", "non-homogeneous multivariate data; no obstruction found")
