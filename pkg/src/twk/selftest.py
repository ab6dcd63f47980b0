"""Seeded property suites behind ``twk selftest``.

Each suite returns a SuiteResult; a failing suite carries its first
counterexample as a standalone manifest fragment.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cochains import cochain_D
from .dgresolution import SimplexMor, mc_check_simplex, mor_diff
from .exactalg import QQ
from .generate import (
    BACKENDS,
    backend_ring,
    gauge_simplex,
    gauge_tw,
    perturb_tw,
    rand_complex,
    rand_cochain,
    rand_cover,
    rand_module,
    rand_simplex_morphism,
    rand_tw_morphism,
)
from .manifest import fragment
from .simplicial import (
    ActionNerve,
    GroupAction,
    RingedCover,
    StandardSimplex,
    epi_mono_failures,
    simplicial_identity_failures,
)
from .totalization import matching_witness
from .twisted import TwMorphism, mc_check_tw, tw_mor_diff

IDENTITY_LEVEL_CAP = 3
MATCHING_LEVEL_CAP = 5


@dataclass
class SuiteResult:
    name: str
    ok: bool
    checked: int
    detail: str = ""
    counterexample: dict | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"suite": self.name, "ok": self.ok, "checked": self.checked}
        if self.detail:
            out["detail"] = self.detail
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _compose(f: TwMorphism, g: TwMorphism) -> TwMorphism:
    return TwMorphism(g.source, f.target, f.degree + g.degree, f.f.mul(g.f))


def suite_mc(rng, trials, inject_bad=False) -> SuiteResult:
    n = 0
    for b in BACKENDS:
        ring = backend_ring(b)
        for _ in range(trials):
            obj = gauge_tw(rng, rand_cover(rng, ring), name="counterexample")
            rep = mc_check_tw(obj)
            n += 1
            if rep.status() != "pass":
                return SuiteResult("maurer-cartan", False, n, f"{b}: generated object fails: {rep.to_text()}",
                                   fragment(obj.cover, objects={"counterexample": obj}))
    if inject_bad:
        obj = gauge_tw(rng, RingedCover.constant(2, QQ), rand_module(rng, 1), name="counterexample")
        while True:
            bad, info = perturb_tw(rng, obj)
            rep = mc_check_tw(bad)
            if rep.status() == "fail":
                break
        n += 1
        return SuiteResult("maurer-cartan", False, n,
                           f"injected fixture (entry changed at {info['simplex']}) fails: {rep.to_text()}",
                           fragment(bad.cover, objects={"counterexample": bad},
                                    note="validate with: twk validate <this file> --object counterexample"))
    return SuiteResult("maurer-cartan", True, n)


def suite_d_squared(rng, trials) -> SuiteResult:
    n = 0
    for b in BACKENDS:
        ring = backend_ring(b)
        for _ in range(trials):
            cover = rand_cover(rng, ring)
            A = gauge_tw(rng, cover, name="A")
            B = gauge_tw(rng, cover, name="B")
            f = rand_tw_morphism(rng, A, B, rng.randint(-1, 1))
            n += 1
            if not tw_mor_diff(tw_mor_diff(f)).f.is_zero():
                return SuiteResult("d-squared", False, n, f"{b}: d(d f) != 0",
                                   fragment(cover, objects={"A": A, "B": B}, morphisms={"probe": (f, "A", "B")}))
    return SuiteResult("d-squared", True, n)


def suite_twisted_algebra(rng, trials) -> SuiteResult:
    """Leibniz rule, associativity and unit for composition of twisted morphisms."""
    n = 0
    for b in BACKENDS:
        ring = backend_ring(b)
        for _ in range(trials):
            cover = rand_cover(rng, ring, rng.randint(1, 3))
            A, B, C, D = (gauge_tw(rng, cover, name=x) for x in "ABCD")
            f = rand_tw_morphism(rng, C, D, rng.randint(-1, 1))
            g = rand_tw_morphism(rng, B, C, rng.randint(-1, 1))
            h = rand_tw_morphism(rng, A, B, rng.randint(-1, 1))
            n += 1
            lhs = tw_mor_diff(_compose(f, g)).f
            sign = -1 if f.degree % 2 else 1
            rhs = _compose(tw_mor_diff(f), g).f + (_compose(f, tw_mor_diff(g)).f if sign > 0
                                                   else -_compose(f, tw_mor_diff(g)).f)
            objs = {"A": A, "B": B, "C": C, "D": D}
            if lhs != rhs:
                return SuiteResult("twisted-algebra", False, n, f"{b}: Leibniz rule fails",
                                   fragment(cover, objects=objs, morphisms={"f": (f, "C", "D"), "g": (g, "B", "C")}))
            if _compose(_compose(f, g), h).f != _compose(f, _compose(g, h)).f:
                return SuiteResult("twisted-algebra", False, n, f"{b}: composition is not associative",
                                   fragment(cover, objects=objs,
                                            morphisms={"f": (f, "C", "D"), "g": (g, "B", "C"), "h": (h, "A", "B")}))
            one = TwMorphism.identity(C)
            if _compose(one, g).f != g.f or _compose(f, one).f != f.f:
                return SuiteResult("twisted-algebra", False, n, f"{b}: identity is not a unit",
                                   fragment(cover, objects=objs, morphisms={"f": (f, "C", "D"), "g": (g, "B", "C")}))
    return SuiteResult("twisted-algebra", True, n)


def suite_simplex_algebra(rng, trials) -> SuiteResult:
    """Leibniz rule and associativity for the Δₙ algebra, and validity of generated objects."""
    n = 0
    for b in BACKENDS:
        ring = backend_ring(b)
        for _ in range(trials):
            k = rng.randint(1, 3)
            A = gauge_simplex(rng, k, ring)
            rep = mc_check_simplex(A)
            if rep.status() != "pass":
                return SuiteResult("simplex-algebra", False, n, f"{b}: generated Δ_{k} object fails",
                                   fragment(objects={"counterexample": A}))
            B = gauge_simplex(rng, k, ring)
            C = gauge_simplex(rng, k, ring)
            f = rand_simplex_morphism(rng, B, C, rng.randint(-1, 1))
            g = rand_simplex_morphism(rng, A, B, rng.randint(-1, 1))
            h = rand_simplex_morphism(rng, A, A, rng.randint(-1, 1))
            n += 1
            fg = f.theta.mul(g.theta)
            lhs = mor_diff(SimplexMor(A, f.target, f.degree + g.degree, fg)).theta
            df, dg = mor_diff(f).theta, mor_diff(g).theta
            rhs = df.mul(g.theta) + (f.theta.mul(dg) if f.degree % 2 == 0 else -f.theta.mul(dg))
            if lhs != rhs:
                return SuiteResult("simplex-algebra", False, n, f"{b}: Leibniz rule fails on Δ_{k}",
                                   fragment(objects={"A": A, "B": B, "C": C}))
            if fg.mul(h.theta) != f.theta.mul(g.theta.mul(h.theta)):
                return SuiteResult("simplex-algebra", False, n, f"{b}: product is not associative on Δ_{k}",
                                   fragment(objects={"A": A, "B": B, "C": C}))
    return SuiteResult("simplex-algebra", True, n)


def suite_delta(rng, trials) -> SuiteResult:
    """δδ = 0 and DD = 0 on random bigraded cochains."""
    n = 0
    for b in BACKENDS:
        ring = backend_ring(b)
        for _ in range(trials):
            cover = rand_cover(rng, ring)
            cx = {i: rand_complex(rng, ring) for i in range(cover.size)}
            fam = {i: c.module for i, c in cx.items()}
            diffs = {i: c.diff for i, c in cx.items()}
            u = rand_cochain(rng, cover.cech, fam, fam, max_p=2)
            n += 1
            if not u.delta().delta().is_zero():
                return SuiteResult("delta-squared", False, n, f"{b}: δδ != 0 on the Čech nerve")
            if not cochain_D(cochain_D(u, diffs, diffs), diffs, diffs).is_zero():
                return SuiteResult("delta-squared", False, n, f"{b}: DD != 0 on the Čech nerve")
            space = StandardSimplex(rng.randint(1, 3), ring)
            sx = {i: rand_complex(rng, ring) for i in range(space.n + 1)}
            sfam = {i: c.module for i, c in sx.items()}
            sd = {i: c.diff for i, c in sx.items()}
            v = rand_cochain(rng, space, sfam, sfam, max_p=2)
            if not v.delta().delta().is_zero() or not cochain_D(cochain_D(v, sd, sd), sd, sd).is_zero():
                return SuiteResult("delta-squared", False, n, f"{b}: δδ or DD != 0 on Δ_{space.n}")
    return SuiteResult("delta-squared", True, n)


def suite_matching(rng, max_level) -> SuiteResult:
    cover = RingedCover.constant(3, QQ)
    top = min(max_level, MATCHING_LEVEL_CAP)
    notes = []
    if max_level > top:
        notes.append(f"levels {top + 1}..{max_level} skipped (enumeration bound {MATCHING_LEVEL_CAP})")
    for k in range(1, top + 1):
        w = matching_witness(cover.cech, k, rng)
        if not w.ok:
            return SuiteResult("matching-witness", False, k, f"level {k}: {w.to_json()}",
                               fragment(cover, objects={}), notes)
    return SuiteResult("matching-witness", True, top, notes=notes)


def _actions():
    yield GroupAction.cyclic(2, ["p"])
    yield GroupAction.cyclic(2, ["p", "q"], [1, 0])
    yield GroupAction.cyclic(2, ["p", "q", "r"], [1, 0, 2])
    yield GroupAction.cyclic(3, ["x"])
    yield GroupAction.cyclic(3, ["x", "y", "z"], [1, 2, 0])
    yield GroupAction.symmetric3(["0", "1", "2"])


def suite_simplicial(max_level) -> SuiteResult:
    top = min(max_level, IDENTITY_LEVEL_CAP)
    n = 0
    for a in _actions():
        fails = simplicial_identity_failures(ActionNerve(a), top)
        n += 1
        if fails:
            return SuiteResult("simplicial-identities", False, n, fails[0])
    notes = []
    if max_level > top:
        # beyond the exhaustive bound, run the smallest nontrivial action only
        fails = simplicial_identity_failures(ActionNerve(GroupAction.cyclic(2, ["p"])), max_level)
        if fails:
            return SuiteResult("simplicial-identities", False, n, fails[0])
        notes.append(f"levels {top + 1}..{max_level} checked on Z/2 acting on a point only")
    fails = epi_mono_failures(4)
    if fails:
        return SuiteResult("simplicial-identities", False, n, fails[0])
    return SuiteResult("simplicial-identities", True, n + 1, notes=notes)


def run_selftest(seed: int = 0, trials: int = 3, max_level: int = 3, inject_bad: bool = False) -> list[SuiteResult]:
    rng = random.Random(seed)
    return [
        suite_mc(rng, trials, inject_bad),
        suite_d_squared(rng, trials),
        suite_twisted_algebra(rng, trials),
        suite_simplex_algebra(rng, trials),
        suite_delta(rng, trials),
        suite_matching(rng, max_level),
        suite_simplicial(max_level),
    ]
