"""JSON manifests: covers, group actions, objects and morphisms with exact literals.

Every scalar is a string literal parsed in the ring where it lives; floats
are rejected.  Maps are written as ``{"simplex": [...], "blocks": {"<source
degree>": [[row literals]]}}``; the degree of a map is implied by where it
sits.  Any schema, name or literal problem raises ManifestError.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .cochains import CochainError
from .dgresolution import ComplexObj, SimplexMor, SimplexObj
from .equivariant import EquivariantComplex
from .exactalg import GradedMap, GradedModule, LaurentRing, Matrix, RingError, RingHom, parse_scalar, ring_from_json
from .simplicial import GroupAction, RingedCover, SimplicialError
from .twisted import TwMorphism, TwPerfComplex

SHIPPED = ("p1-line-bundles", "z2-sign-rep", "three-open-nerve")


class ManifestError(ValueError):
    pass


def shipped_path(name: str) -> Path:
    return Path(__file__).with_name("manifests") / f"{name}.json"


def _need(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise ManifestError(f"{where}: missing field {key!r}")
    return d[key]


def _reject_floats(x, where="manifest"):
    if isinstance(x, float):
        raise ManifestError(f"{where}: numeric literal {x!r} must be an exact string")
    if isinstance(x, dict):
        for k, v in x.items():
            _reject_floats(v, f"{where}.{k}")
    elif isinstance(x, list):
        for i, v in enumerate(x):
            _reject_floats(v, f"{where}[{i}]")


def _ring(d, where: str):
    try:
        return ring_from_json(d)
    except (RingError, KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"{where}: bad ring descriptor: {exc}") from None


def _module(d, where: str) -> GradedModule:
    if not isinstance(d, dict):
        raise ManifestError(f"{where}: module must map degrees to ranks")
    try:
        return GradedModule({int(k): int(v) for k, v in d.items()})
    except (ValueError, RingError) as exc:
        raise ManifestError(f"{where}: bad module: {exc}") from None


def _map(ring, src: GradedModule, tgt: GradedModule, degree: int, blocks, where: str) -> GradedMap:
    if not isinstance(blocks, dict):
        raise ManifestError(f"{where}: blocks must map source degrees to matrices")
    out = {}
    for k, rows in blocks.items():
        try:
            d = int(k)
        except ValueError:
            raise ManifestError(f"{where}: bad source degree {k!r}") from None
        r, c = tgt.rank(d + degree), src.rank(d)
        if not isinstance(rows, list) or len(rows) != r or any(not isinstance(x, list) or len(x) != c for x in rows):
            raise ManifestError(f"{where}: block at source degree {d} must be {r}x{c}")
        try:
            out[d] = Matrix(ring, r, c, [[parse_scalar(x, ring) for x in row] for row in rows])
        except RingError as exc:
            raise ManifestError(f"{where}: {exc}") from None
    return GradedMap(ring, src, tgt, degree, out)


def _blocks_json(f: GradedMap) -> dict:
    return {str(d): m.to_literals() for d, m in sorted(f.blocks.items()) if not m.is_zero()}


def _module_json(m: GradedModule) -> dict:
    return {str(d): r for d, r in m.ranks}


# -- covers and actions ---------------------------------------------------------------


def load_cover(d: dict) -> RingedCover:
    names = list(_need(d, "opens", "cover"))
    idx = {n: i for i, n in enumerate(names)}

    def key(lst, where):
        try:
            return frozenset(idx[x] for x in lst)
        except (KeyError, TypeError):
            raise ManifestError(f"{where}: unknown open in {lst!r}") from None

    nerve = [key(s, "cover.nerve") for s in d.get("nerve", [])]
    nerve += [frozenset([i]) for i in range(len(names))]
    closed = set()
    for s in nerve:
        for r in range(1, len(s) + 1):
            for sub in itertools.combinations(sorted(s), r):
                closed.add(frozenset(sub))
    default = _ring(d["ring"], "cover.ring") if "ring" in d else None
    rings = {s: default for s in closed}
    for e in d.get("rings", []):
        s = key(_need(e, "set", "cover.rings"), "cover.rings")
        if s not in closed:
            raise ManifestError(f"cover.rings: {sorted(names[i] for i in s)} is not in the nerve")
        rings[s] = _ring(_need(e, "ring", "cover.rings"), "cover.rings")
    missing = [s for s, r in rings.items() if r is None]
    if missing:
        raise ManifestError(f"cover: no ring for {[sorted(names[i] for i in s) for s in missing]}")
    restr = {}
    for e in d.get("restrictions", []):
        a = key(_need(e, "from", "cover.restrictions"), "cover.restrictions")
        b = key(_need(e, "to", "cover.restrictions"), "cover.restrictions")
        if a not in rings or b not in rings:
            raise ManifestError("cover.restrictions: sets must be in the nerve")
        src, tgt = rings[a], rings[b]
        try:
            images = {v: parse_scalar(x, tgt) for v, x in e.get("images", {}).items()}
            restr[(a, b)] = RingHom(src, tgt, images)
        except RingError as exc:
            raise ManifestError(f"cover.restrictions: {exc}") from None
    try:
        return RingedCover(names, closed, rings, restr)
    except (SimplicialError, RingError) as exc:
        raise ManifestError(f"cover: {exc}") from None


def cover_json(c: RingedCover) -> dict:
    names = c.names
    maximal = [s for s in c.nerve if not any(s < t for t in c.nerve)]
    out: dict = {
        "opens": list(names),
        "nerve": [[names[i] for i in sorted(s)] for s in sorted(maximal, key=lambda s: sorted(s))],
        "rings": [{"set": [names[i] for i in sorted(s)], "ring": c.rings[s].to_json()} for s in c.nerve_sets()],
    }
    restr = []
    for (a, b), h in sorted(c._given.items(), key=lambda kv: (sorted(kv[0][0]), sorted(kv[0][1]))):
        restr.append({"from": [names[i] for i in sorted(a)], "to": [names[i] for i in sorted(b)],
                      "images": {v: h.target.fmt(x) for v, x in h.images.items()}})
    if restr:
        out["restrictions"] = restr
    return out


def load_action(d: dict) -> GroupAction:
    try:
        if "cyclic" in d:
            pts = list(_need(d, "points", "action"))
            pi = {p: i for i, p in enumerate(pts)}
            shift = d.get("shift")
            if isinstance(shift, dict):
                shift = [pi[shift[p]] for p in pts]
            return GroupAction.cyclic(int(d["cyclic"]), pts, shift)
        if d.get("symmetric3"):
            return GroupAction.symmetric3(d.get("points"))
        els = list(_need(d, "elements", "action"))
        pts = list(_need(d, "points", "action"))
        ei = {g: i for i, g in enumerate(els)}
        pi = {p: i for i, p in enumerate(pts)}
        table = [[ei[x] for x in row] for row in _need(d, "table", "action")]
        act = _need(d, "act", "action")
        act_table = [[pi[act[p][g]] for g in els] for p in pts]
        return GroupAction(els, table, pts, act_table)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ManifestError):
            raise
        raise ManifestError(f"action: {exc}") from None


def action_json(a: GroupAction) -> dict:
    return {
        "elements": list(a.elements),
        "points": list(a.points),
        "table": [[a.elements[a.mul(g, h)] for h in range(a.order)] for g in range(a.order)],
        "act": {a.points[x]: {a.elements[g]: a.points[a.act(x, g)] for g in range(a.order)}
                for x in range(len(a.points))},
    }


# -- objects --------------------------------------------------------------------------


def _tuple(c: RingedCover, lst, where: str) -> tuple:
    idx = {n: i for i, n in enumerate(c.names)}
    try:
        t = tuple(idx[x] for x in lst)
    except (KeyError, TypeError):
        raise ManifestError(f"{where}: unknown open in {lst!r}") from None
    if not t or not c.in_nerve(t):
        raise ManifestError(f"{where}: {lst!r} is not a simplex of the nerve")
    return t


def load_twisted(c: RingedCover, name: str, d: dict) -> TwPerfComplex:
    where = f"objects.{name}"
    kind = d.get("type", "twisted")
    if kind == "line-bundle":
        mod = GradedModule({0: 1})
        comps = {}
        for k, lit in _need(d, "units", where).items():
            pair = _tuple(c, [x.strip() for x in k.split(",")], where)
            if len(pair) != 2:
                raise ManifestError(f"{where}: unit keys are pairs 'A,B'")
            ring = c.ring(pair)
            try:
                comps[pair] = parse_scalar(lit, ring)
            except RingError as exc:
                raise ManifestError(f"{where}: {exc}") from None
        for (i, j) in list(comps):
            if (j, i) not in comps:
                ring = c.ring((i, j))
                if not ring.is_unit(comps[(i, j)]):
                    raise ManifestError(f"{where}: {ring.fmt(comps[(i, j)])} is not a unit and g_ji is not given")
                comps[(j, i)] = ring.inverse(comps[(i, j)])
        for i in range(c.size):
            comps.setdefault((i, i), c.ring((i,)).one())
        a = {t: GradedMap(c.ring(t), mod, mod, 0, {0: Matrix(c.ring(t), 1, 1, [[x]])}) for t, x in comps.items()}
        for s in c.nerve_level(1):
            if s not in a:
                raise ManifestError(f"{where}: no transition unit for {[c.names[i] for i in s]}")
        return TwPerfComplex(c, {i: mod for i in range(c.size)}, a, name=name)
    if kind != "twisted":
        raise ManifestError(f"{where}: type {kind!r} is not a twisted complex")
    if "module" in d:
        m = _module(d["module"], where)
        locals_ = {i: m for i in range(c.size)}
    else:
        ld = _need(d, "locals", where)
        locals_ = {}
        for i, n in enumerate(c.names):
            if n not in ld:
                raise ManifestError(f"{where}: no local module for {n}")
            locals_[i] = _module(ld[n], f"{where}.locals.{n}")
    a = {}
    for e in d.get("components", []):
        t = _tuple(c, _need(e, "simplex", where), where)
        if t in a:
            raise ManifestError(f"{where}: component {list(e['simplex'])} given twice")
        a[t] = _map(c.ring(t), locals_[t[-1]], locals_[t[0]], 2 - len(t), _need(e, "blocks", where),
                    f"{where}.{','.join(e['simplex'])}")
    if d.get("fill_units", True):
        for i in range(c.size):
            if (i, i) not in a:
                a[(i, i)] = GradedMap.identity(c.ring((i,)), locals_[i])
    try:
        return TwPerfComplex(c, locals_, a, name=name)
    except (CochainError, RingError) as exc:
        raise ManifestError(f"{where}: {exc}") from None


def twisted_json(t: TwPerfComplex) -> dict:
    names = t.cover.names
    out: dict = {"type": "twisted", "fill_units": False,
                 "locals": {names[i]: _module_json(m) for i, m in t.locals.items()}}
    comps = []
    for (s, q), f in t.a.sorted_items():
        comps.append({"simplex": [names[i] for i in s], "blocks": _blocks_json(f)})
    out["components"] = comps
    return out


def _complex(ring, d: dict, where: str) -> ComplexObj:
    m = _module(_need(d, "module", where), where)
    diff = _map(ring, m, m, 1, d.get("differential", {}), f"{where}.differential")
    try:
        return ComplexObj(m, diff)
    except CochainError as exc:
        raise ManifestError(f"{where}: {exc}") from None


def _complex_json(c: ComplexObj) -> dict:
    return {"module": _module_json(c.module), "differential": _blocks_json(c.diff)}


def load_equivariant(action: GroupAction, name: str, d: dict) -> EquivariantComplex:
    where = f"objects.{name}"
    ring = _ring(_need(d, "ring", where), where)
    cd = _need(d, "complexes", where)
    complexes = {}
    for x, p in enumerate(action.points):
        if p not in cd:
            raise ManifestError(f"{where}: no complex at point {p}")
        complexes[x] = _complex(ring, cd[p], f"{where}.complexes.{p}")
    pi = {p: i for i, p in enumerate(action.points)}
    gi = {g: i for i, g in enumerate(action.elements)}
    phi: dict = {}
    for e in d.get("phi", []):
        lst = _need(e, "simplex", where)
        try:
            s = (pi[lst[0]],) + tuple(gi[g] for g in lst[1:])
        except (KeyError, IndexError, TypeError):
            raise ManifestError(f"{where}: bad simplex {lst!r}") from None
        k = len(s) - 1
        if k < 1:
            raise ManifestError(f"{where}: φ lives on simplices of level >= 1")
        x, y = s[0], s[0]
        for g in s[1:]:
            y = action.act(y, g)
        phi.setdefault(k, {})[s] = _map(ring, complexes[y].module, complexes[x].module, 1 - k,
                                        _need(e, "blocks", where), f"{where}.{lst}")
    if d.get("fill_units", True):
        for x in range(len(action.points)):
            phi.setdefault(1, {}).setdefault((x, action.e), GradedMap.identity(ring, complexes[x].module))
    try:
        return EquivariantComplex(action, ring, complexes, phi, name=name)
    except (CochainError, RingError) as exc:
        raise ManifestError(f"{where}: {exc}") from None


def equivariant_json(e: EquivariantComplex) -> dict:
    a = e.action
    phi = []
    for k in sorted(e.phi):
        for s in sorted(e.phi[k]):
            phi.append({"simplex": [a.points[s[0]]] + [a.elements[g] for g in s[1:]],
                        "blocks": _blocks_json(e.phi[k][s])})
    ring = e.backend.ring((0,))
    return {
        "type": "equivariant",
        "fill_units": False,
        "ring": ring.to_json(),
        "complexes": {a.points[x]: _complex_json(ComplexObj(e.modules[x], e.diffs[x])) for x in e.modules},
        "phi": phi,
    }


def load_simplex(name: str, d: dict) -> SimplexObj:
    where = f"objects.{name}"
    ring = _ring(_need(d, "ring", where), where)
    n = int(_need(d, "n", where))
    objs = _need(d, "objects", where)
    if len(objs) != n + 1:
        raise ManifestError(f"{where}: Δ_{n} needs {n + 1} objects")
    objects = [_complex(ring, o, f"{where}.objects[{i}]") for i, o in enumerate(objs)]
    phi = {}
    for e in d.get("phi", []):
        t = tuple(int(x) for x in _need(e, "simplex", where))
        if len(t) < 2 or any(a > b for a, b in zip(t, t[1:])) or not all(0 <= x <= n for x in t):
            raise ManifestError(f"{where}: {list(t)} is not a nondecreasing tuple of length >= 2 in [{n}]")
        phi[t] = _map(ring, objects[t[-1]].module, objects[t[0]].module, 2 - len(t), _need(e, "blocks", where),
                      f"{where}.{list(t)}")
    try:
        return SimplexObj(n, objects, phi, fill_units=d.get("fill_units", True))
    except (CochainError, RingError) as exc:
        raise ManifestError(f"{where}: {exc}") from None


def simplex_json(s: SimplexObj) -> dict:
    return {
        "type": "simplex",
        "fill_units": False,
        "ring": s.ring.to_json(),
        "n": s.n,
        "objects": [_complex_json(o) for o in s.objects],
        "phi": [{"simplex": list(t), "blocks": _blocks_json(f)} for (t, q), f in s.phi.sorted_items()],
    }


# -- whole manifests ------------------------------------------------------------------


@dataclass
class Manifest:
    raw: dict
    cover: RingedCover | None = None
    action: GroupAction | None = None
    objects: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    source: str = ""

    def object(self, name: str):
        if name not in self.objects:
            known = ", ".join(sorted(self.objects)) or "none"
            raise ManifestError(f"no object named {name!r} (known: {known})")
        return self.objects[name]


def parse_manifest(raw: Any, source: str = "") -> Manifest:
    if not isinstance(raw, dict):
        raise ManifestError("manifest must be a JSON object")
    _reject_floats(raw)
    m = Manifest(raw=raw, source=source, options=dict(raw.get("options", {})))
    if "cover" in raw:
        m.cover = load_cover(raw["cover"])
    if "action" in raw:
        m.action = load_action(raw["action"])
    for name, d in raw.get("objects", {}).items():
        if not isinstance(d, dict):
            raise ManifestError(f"objects.{name} must be an object")
        kind = d.get("type", "twisted")
        if kind in ("twisted", "line-bundle"):
            if m.cover is None:
                raise ManifestError(f"objects.{name}: twisted complexes need a cover section")
            m.objects[name] = load_twisted(m.cover, name, d)
        elif kind == "equivariant":
            action = load_action(d["action"]) if "action" in d else m.action
            if action is None:
                raise ManifestError(f"objects.{name}: equivariant complexes need an action section")
            m.objects[name] = load_equivariant(action, name, d)
        elif kind == "simplex":
            m.objects[name] = load_simplex(name, d)
        else:
            raise ManifestError(f"objects.{name}: unknown type {kind!r}")
    for name, d in raw.get("morphisms", {}).items():
        m.morphisms[name] = load_morphism(m, name, d)
    return m


def load_morphism(m: Manifest, name: str, d: dict):
    where = f"morphisms.{name}"
    src = m.object(_need(d, "from", where))
    tgt = m.object(_need(d, "to", where))
    deg = int(_need(d, "degree", where))
    if isinstance(src, TwPerfComplex) and isinstance(tgt, TwPerfComplex):
        c = src.cover
        f = {}
        for e in d.get("components", []):
            t = _tuple(c, _need(e, "simplex", where), where)
            f[t] = _map(c.ring(t), src.locals[t[-1]], tgt.locals[t[0]], deg - (len(t) - 1),
                        _need(e, "blocks", where), where)
        return TwMorphism(src, tgt, deg, f)
    if isinstance(src, SimplexObj) and isinstance(tgt, SimplexObj):
        f = {}
        for e in d.get("components", []):
            t = tuple(int(x) for x in _need(e, "simplex", where))
            f[t] = _map(src.ring, src.family[t[-1]], tgt.family[t[0]], deg - (len(t) - 1),
                        _need(e, "blocks", where), where)
        return SimplexMor(src, tgt, deg, f)
    raise ManifestError(f"{where}: morphisms are supported between twisted or Δₙ objects of one kind")


def load_manifest(path: str | Path) -> Manifest:
    p = Path(path)
    if not p.exists() and (Path(str(path)).suffix == "" and shipped_path(str(path)).exists()):
        p = shipped_path(str(path))
    try:
        text = p.read_text()
    except OSError as exc:
        raise ManifestError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON: {exc}") from None
    return parse_manifest(raw, str(p))


def morphism_json(f, source: str, target: str) -> dict:
    if isinstance(f, TwMorphism):
        names = f.source.cover.names
        comps = [{"simplex": [names[i] for i in t], "blocks": _blocks_json(g)} for (t, q), g in f.f.sorted_items()]
    else:
        comps = [{"simplex": list(t), "blocks": _blocks_json(g)} for (t, q), g in f.theta.sorted_items()]
    return {"from": source, "to": target, "degree": f.degree, "components": comps}


def fragment(cover: RingedCover | None = None, action: GroupAction | None = None, objects: dict | None = None,
             note: str = "", morphisms: dict | None = None) -> dict:
    """A standalone manifest holding the given objects (used for counterexamples)."""
    out: dict = {}
    if note:
        out["note"] = note
    if cover is not None:
        out["cover"] = cover_json(cover)
    if action is not None:
        out["action"] = action_json(action)
    objs = {}
    for name, o in (objects or {}).items():
        if isinstance(o, TwPerfComplex):
            objs[name] = twisted_json(o)
        elif isinstance(o, EquivariantComplex):
            objs[name] = equivariant_json(o)
        elif isinstance(o, SimplexObj):
            objs[name] = simplex_json(o)
        else:
            raise ManifestError(f"cannot serialize {type(o).__name__}")
    out["objects"] = objs
    if morphisms:
        out["morphisms"] = {name: morphism_json(f, src, tgt) for name, (f, src, tgt) in morphisms.items()}
    return out


def is_laurent_cover(c: RingedCover) -> bool:
    return any(isinstance(r, LaurentRing) for r in c.rings.values())
