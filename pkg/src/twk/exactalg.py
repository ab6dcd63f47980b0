"""Exact coefficient rings, matrices and graded maps.

Three ring families are supported: the rationals, prime fields and
(multivariate) Laurent or polynomial rings over one of those.  Ring elements
are stored as plain Python values (``Fraction``, ``int`` mod p, or a sorted
tuple of ``(exponents, coefficient)`` pairs) so that the hot loops stay cheap;
``Scalar`` wraps a value together with its ring for the public API.

Every value is kept in canonical form, so equality is structural.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class RingError(ValueError):
    """Raised on ring mismatches, bad literals and inverses of non-units."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class Rationals:
    kind = "rationals"

    @property
    def is_field(self) -> bool:
        return True

    @property
    def base(self) -> "Rationals":
        return self

    @property
    def variables(self) -> tuple:
        return ()

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, str)):
            return Fraction(x)
        raise RingError(f"cannot coerce {x!r} into QQ")

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_unit(self, a) -> bool:
        return a != 0

    def inverse(self, a):
        if a == 0:
            raise RingError("0 is not a unit")
        return 1 / a

    def fmt(self, a) -> str:
        return str(a)

    def to_json(self) -> dict:
        return {"kind": "rationals"}

    def __str__(self) -> str:
        return "QQ"


@dataclass(frozen=True)
class PrimeField:
    p: int
    kind = "prime-field"

    def __post_init__(self):
        if not _is_prime(self.p):
            raise RingError(f"{self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return True

    @property
    def base(self) -> "PrimeField":
        return self

    @property
    def variables(self) -> tuple:
        return ()

    def zero(self):
        return 0

    def one(self):
        return 1

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise RingError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        raise RingError(f"cannot coerce {x!r} into F_{self.p}")

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def is_unit(self, a) -> bool:
        return a != 0

    def inverse(self, a):
        if a == 0:
            raise RingError("0 is not a unit")
        return pow(a, -1, self.p)

    def fmt(self, a) -> str:
        return f"{a} mod {self.p}"

    def to_json(self) -> dict:
        return {"kind": "prime-field", "p": self.p}

    def __str__(self) -> str:
        return f"F_{self.p}"


BaseRing = "Rationals | PrimeField"


@dataclass(frozen=True)
class LaurentRing:
    """K[x1^±, ..., xn^±], or K[x1, ..., xn] when ``polynomial`` is set.

    Elements are tuples of ``(exponent_vector, coefficient)`` sorted by
    exponent vector, with no zero coefficients.
    """

    base: Rationals | PrimeField
    variables: tuple[str, ...]
    polynomial: bool = False

    def __post_init__(self):
        if not isinstance(self.base, (Rationals, PrimeField)):
            raise RingError("Laurent base must be QQ or a prime field")
        if len(set(self.variables)) != len(self.variables):
            raise RingError("variable names must be distinct")
        if not self.variables:
            raise RingError("Laurent ring needs at least one variable")
        for v in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise RingError(f"bad variable name {v!r}")

    @property
    def kind(self) -> str:
        return "polynomial" if self.polynomial else "laurent"

    @property
    def is_field(self) -> bool:
        return False

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero(self):
        return ()

    def one(self):
        return (((0,) * self.nvars, self.base.one()),)

    def monomial(self, exps: Sequence[int], coeff=None):
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise RingError("exponent vector has wrong length")
        if self.polynomial and min(exps) < 0:
            raise RingError("negative exponent in a polynomial ring")
        c = self.base.one() if coeff is None else self.base.coerce(coeff)
        if self.base.is_zero(c):
            return ()
        return ((exps, c),)

    def from_dict(self, terms: Mapping) -> tuple:
        base = self.base
        out = []
        for e, c in terms.items():
            if not base.is_zero(c):
                if self.polynomial and min(e) < 0:
                    raise RingError("negative exponent in a polynomial ring")
                out.append((tuple(e), c))
        out.sort()
        return tuple(out)

    def coerce(self, x):
        if isinstance(x, tuple):
            return x
        c = self.base.coerce(x)
        if self.base.is_zero(c):
            return ()
        return (((0,) * self.nvars, c),)

    def is_zero(self, a) -> bool:
        return not a

    def add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        base = self.base
        d = dict(a)
        for e, c in b:
            if e in d:
                d[e] = base.add(d[e], c)
            else:
                d[e] = c
        return self.from_dict(d)

    def neg(self, a):
        base = self.base
        return tuple((e, base.neg(c)) for e, c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        base = self.base
        d: dict = {}
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(x + y for x, y in zip(e1, e2))
                c = base.mul(c1, c2)
                if e in d:
                    d[e] = base.add(d[e], c)
                else:
                    d[e] = c
        return self.from_dict(d)

    def is_unit(self, a) -> bool:
        # units of K[x^±] are the nonzero monomials; of K[x] the nonzero constants
        if len(a) != 1:
            return False
        e, _ = a[0]
        return not self.polynomial or not any(e)

    def inverse(self, a):
        if not self.is_unit(a):
            raise RingError(f"{self.fmt(a)} is not a unit in {self}")
        e, c = a[0]
        return ((tuple(-x for x in e), self.base.inverse(c)),)

    def is_monomial(self, a) -> bool:
        return len(a) == 1

    def fmt(self, a) -> str:
        if not a:
            return "0"
        parts = []
        for e, c in a:
            cs = str(c)
            factors = []
            for v, k in zip(self.variables, e):
                if k == 1:
                    factors.append(v)
                elif k != 0:
                    factors.append(f"{v}^{k}")
            if not factors:
                term = cs
            elif cs == "1":
                term = "*".join(factors)
            elif cs == "-1":
                term = "-" + "*".join(factors)
            else:
                term = cs + "*" + "*".join(factors)
            parts.append(term)
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": self.base.to_json(), "variables": list(self.variables)}

    def __str__(self) -> str:
        if self.polynomial:
            return f"{self.base}[{','.join(self.variables)}]"
        return f"{self.base}[{','.join(v + '^±' for v in self.variables)}]"


Ring = Rationals | PrimeField | LaurentRing

QQ = Rationals()


def ring_from_json(d) -> Ring:
    if isinstance(d, str):
        d = {"kind": d}
    kind = d.get("kind")
    if kind == "rationals":
        return QQ
    if kind == "prime-field":
        return PrimeField(int(d["p"]))
    if kind in ("laurent", "polynomial"):
        base = ring_from_json(d.get("base", {"kind": "rationals"}))
        if isinstance(base, LaurentRing):
            raise RingError("nested Laurent rings are not supported")
        return LaurentRing(base, tuple(d["variables"]), polynomial=(kind == "polynomial"))
    raise RingError(f"unknown ring kind {kind!r}")


# ---------------------------------------------------------------------------
# scalar literals

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise RingError(f"bad scalar literal {text!r} at position {pos}")
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif name is not None:
            toks.append(("name", name))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return toks


def parse_scalar(text: str, ring: Ring):
    """Parse a literal such as ``3/4``, ``5 mod 7`` or ``2*t^-1*u - 1/3``."""
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            return ring.coerce(text)
        raise RingError(f"scalar literal must be a string, got {text!r}")
    m = re.fullmatch(r"\s*(-?\s*\d+)\s*mod\s*(\d+)\s*", text)
    if m:
        p = int(m.group(2))
        base = ring.base if isinstance(ring, LaurentRing) else ring
        if not isinstance(base, PrimeField) or base.p != p:
            raise RingError(f"literal {text!r} does not live in {ring}")
        return ring.coerce(int(m.group(1).replace(" ", "")))
    toks = _tokenize(text)
    if not toks:
        raise RingError("empty scalar literal")
    variables = ring.variables if isinstance(ring, LaurentRing) else ()
    nv = len(variables)
    terms: dict = {}
    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def read_int():
        nonlocal i
        sign = 1
        kind, val = peek()
        if kind == "op" and val == "(":
            i += 1
            v = read_int()
            if peek() != ("op", ")"):
                raise RingError(f"unbalanced parenthesis in {text!r}")
            i += 1
            return v
        while kind == "op" and val in "+-":
            if val == "-":
                sign = -sign
            i += 1
            kind, val = peek()
        if kind != "num":
            raise RingError(f"expected an integer in {text!r}")
        i += 1
        return sign * val

    sign = 1
    first = True
    while i < len(toks):
        kind, val = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            while peek()[0] == "op" and peek()[1] in "+-":
                if peek()[1] == "-":
                    sign = -sign
                i += 1
        elif not first:
            raise RingError(f"expected '+' or '-' in {text!r}")
        first = False
        coeff = Fraction(sign)
        exps = [0] * nv
        need_factor = True
        while need_factor:
            kind, val = peek()
            if kind == "num":
                i += 1
                num = val
                if peek() == ("op", "/"):
                    i += 1
                    den = read_int()
                    if den == 0:
                        raise RingError(f"zero denominator in {text!r}")
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
            elif kind == "name":
                if val not in variables:
                    raise RingError(f"unknown variable {val!r} for ring {ring}")
                i += 1
                k = 1
                if peek() == ("op", "^"):
                    i += 1
                    k = read_int()
                exps[variables.index(val)] += k
            else:
                raise RingError(f"unexpected token {val!r} in {text!r}")
            if peek() == ("op", "*"):
                i += 1
            else:
                need_factor = False
        e = tuple(exps)
        terms[e] = terms.get(e, Fraction(0)) + coeff
    if isinstance(ring, LaurentRing):
        base = ring.base
        return ring.from_dict({e: base.coerce(c) for e, c in terms.items()})
    if any(e for e in terms if any(e)):
        raise RingError(f"variables not allowed in {ring}")
    return ring.coerce(sum(terms.values(), Fraction(0)))


def format_scalar(value, ring: Ring) -> str:
    return ring.fmt(value)


# ---------------------------------------------------------------------------
# public scalar wrapper


@dataclass(frozen=True)
class Scalar:
    ring: Ring
    value: object

    @classmethod
    def parse(cls, text: str, ring: Ring) -> "Scalar":
        return cls(ring, parse_scalar(text, ring))

    def _check(self, other: "Scalar") -> None:
        if not isinstance(other, Scalar) or other.ring != self.ring:
            raise RingError("ring mismatch")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.ring, self.ring.add(self.value, other.value))

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.ring, self.ring.sub(self.value, other.value))

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.ring, self.ring.mul(self.value, other.value))

    def __neg__(self) -> "Scalar":
        return Scalar(self.ring, self.ring.neg(self.value))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.value)

    def inverse(self) -> "Scalar":
        return Scalar(self.ring, self.ring.inverse(self.value))

    def __str__(self) -> str:
        return self.ring.fmt(self.value)


# ---------------------------------------------------------------------------
# ring homomorphisms


class RingHom:
    """A homomorphism determined by the images of the source variables.

    Base coefficients map by the canonical inclusion.  Negative powers of a
    variable require its image to be a unit in the target.
    """

    __slots__ = ("source", "target", "images", "_identity", "_inv_cache")

    def __init__(self, source: Ring, target: Ring, images: Mapping | None = None):
        images = dict(images or {})
        src_vars = source.variables
        tgt_base = target.base if isinstance(target, LaurentRing) else target
        if source.base != tgt_base:
            raise RingError(f"no canonical inclusion {source.base} -> {tgt_base}")
        for v in src_vars:
            if v not in images:
                if v in target.variables:
                    images[v] = target.monomial([1 if w == v else 0 for w in target.variables])
                else:
                    raise RingError(f"no image given for variable {v!r}")
        extra = set(images) - set(src_vars)
        if extra:
            raise RingError(f"images given for unknown variables {sorted(extra)}")
        self.source = source
        self.target = target
        self.images = {v: target.coerce(images[v]) for v in src_vars}
        self._identity = source == target and all(
            images[v] == target.monomial([1 if w == v else 0 for w in target.variables]) for v in src_vars
        )
        self._inv_cache: dict = {}

    @classmethod
    def identity(cls, ring: Ring) -> "RingHom":
        return cls(ring, ring)

    @property
    def is_identity(self) -> bool:
        return self._identity

    def _power(self, v: str, k: int):
        tgt = self.target
        img = self.images[v]
        if k < 0:
            if v not in self._inv_cache:
                self._inv_cache[v] = tgt.inverse(img)
            img = self._inv_cache[v]
            k = -k
        out = tgt.one()
        for _ in range(k):
            out = tgt.mul(out, img)
        return out

    def apply(self, a):
        if self._identity:
            return a
        src, tgt = self.source, self.target
        if not isinstance(src, LaurentRing):
            return tgt.coerce(a)
        out = tgt.zero()
        for e, c in a:
            term = tgt.coerce(c)
            for v, k in zip(src.variables, e):
                if k:
                    term = tgt.mul(term, self._power(v, k))
            out = tgt.add(out, term)
        return out

    def __call__(self, s: Scalar) -> Scalar:
        if s.ring != self.source:
            raise RingError("ring mismatch")
        return Scalar(self.target, self.apply(s.value))

    def compose(self, first: "RingHom") -> "RingHom":
        """``self ∘ first``."""
        if first.target != self.source:
            raise RingError("homomorphisms are not composable")
        return RingHom(first.source, self.target, {v: self.apply(img) for v, img in first.images.items()})

    def is_monomial(self) -> bool:
        return all(isinstance(self.target, LaurentRing) and len(img) == 1 for img in self.images.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingHom)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.images.items()))))

    def __repr__(self) -> str:
        imgs = ", ".join(f"{v} -> {self.target.fmt(i)}" for v, i in self.images.items())
        return f"RingHom({self.source} -> {self.target}: {imgs})"


def apply_hom(h: RingHom, m: "Matrix") -> "Matrix":
    if m.ring != h.source:
        raise RingError("ring mismatch")
    return m.map(h)


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    __slots__ = ("ring", "rows", "cols", "data")

    def __init__(self, ring: Ring, rows: int, cols: int, data: Sequence[Sequence] | None = None):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        if data is None:
            z = ring.zero()
            data = tuple((z,) * cols for _ in range(rows))
        else:
            data = tuple(tuple(r) for r in data)
            if len(data) != rows or any(len(r) != cols for r in data):
                raise RingError("matrix data does not match its shape")
        self.data = data

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "Matrix":
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero(), ring.one()
        return cls(ring, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, ring: Ring, rows: int, cols: int, i: int, j: int, value=None) -> "Matrix":
        z = ring.zero()
        v = ring.one() if value is None else value
        return cls(ring, rows, cols, [[v if (r, c) == (i, j) else z for c in range(cols)] for r in range(rows)])

    @classmethod
    def from_literals(cls, ring: Ring, rows: Sequence[Sequence[str]]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), ncols, [[parse_scalar(x, ring) for x in r] for r in rows])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def is_zero(self) -> bool:
        isz = self.ring.is_zero
        return all(isz(x) for r in self.data for x in r)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.shape == other.shape
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.ring, self.data))

    def _same(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise RingError("ring mismatch")
        if self.shape != other.shape:
            raise RingError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        add = self.ring.add
        return Matrix(self.ring, self.rows, self.cols,
                      [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        sub = self.ring.sub
        return Matrix(self.ring, self.rows, self.cols,
                      [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(self.ring, self.rows, self.cols, [[neg(a) for a in r] for r in self.data])

    def scale(self, c) -> "Matrix":
        mul = self.ring.mul
        return Matrix(self.ring, self.rows, self.cols, [[mul(c, a) for a in r] for r in self.data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise RingError("ring mismatch")
        if self.cols != other.rows:
            raise RingError(f"cannot multiply {self.shape} by {other.shape}")
        ring = self.ring
        if isinstance(ring, PrimeField):
            p = ring.p
            cols = list(zip(*other.data)) if other.rows else [()] * other.cols
            data = [[sum(a * b for a, b in zip(r, c)) % p for c in cols] for r in self.data]
            return Matrix(ring, self.rows, other.cols, data)
        if isinstance(ring, Rationals):
            cols = list(zip(*other.data)) if other.rows else [()] * other.cols
            data = [[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols] for r in self.data]
            return Matrix(ring, self.rows, other.cols, data)
        add, mul, isz, z = ring.add, ring.mul, ring.is_zero, ring.zero()
        data = []
        for r in self.data:
            row = []
            for j in range(other.cols):
                acc = z
                for k, a in enumerate(r):
                    if not isz(a):
                        b = other.data[k][j]
                        if not isz(b):
                            acc = add(acc, mul(a, b))
                row.append(acc)
            data.append(row)
        return Matrix(ring, self.rows, other.cols, data)

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.cols, self.rows, list(zip(*self.data)) if self.rows else [])

    def map(self, h: RingHom) -> "Matrix":
        if self.ring != h.source:
            raise RingError("ring mismatch")
        if h.is_identity:
            return self
        ap = h.apply
        return Matrix(h.target, self.rows, self.cols, [[ap(a) for a in r] for r in self.data])

    def with_entry(self, i: int, j: int, value) -> "Matrix":
        data = [list(r) for r in self.data]
        data[i][j] = value
        return Matrix(self.ring, self.rows, self.cols, data)

    def nonzero_entries(self) -> list[tuple[int, int, object]]:
        isz = self.ring.is_zero
        return [(i, j, x) for i, r in enumerate(self.data) for j, x in enumerate(r) if not isz(x)]

    def to_literals(self) -> list[list[str]]:
        return [[self.ring.fmt(x) for x in r] for r in self.data]

    def __repr__(self) -> str:
        return f"Matrix({self.ring}, {self.to_literals()})"

    # -- field linear algebra --------------------------------------------

    def _echelon(self):
        ring = self.ring
        if not ring.is_field:
            raise RingError(f"{ring} is not a field")
        m = [list(r) for r in self.data]
        pivots = []
        row = 0
        for col in range(self.cols):
            piv = next((r for r in range(row, self.rows) if not ring.is_zero(m[r][col])), None)
            if piv is None:
                continue
            m[row], m[piv] = m[piv], m[row]
            inv = ring.inverse(m[row][col])
            m[row] = [ring.mul(inv, x) for x in m[row]]
            for r in range(self.rows):
                if r != row and not ring.is_zero(m[r][col]):
                    f = m[r][col]
                    m[r] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(m[r], m[row])]
            pivots.append(col)
            row += 1
            if row == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def kernel_basis(self) -> list["Matrix"]:
        m, pivots = self._echelon()
        ring = self.ring
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [ring.zero()] * self.cols
            v[f] = ring.one()
            for r, pc in enumerate(pivots):
                v[pc] = ring.neg(m[r][f])
            basis.append(Matrix(ring, self.cols, 1, [[x] for x in v]))
        return basis

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise RingError("only square matrices can be inverted")
        ring = self.ring
        n = self.rows
        if ring.is_field:
            aug = Matrix(ring, n, 2 * n, [list(r) + list(e) for r, e in zip(self.data, Matrix.identity(ring, n).data)])
            m, pivots = aug._echelon()
            if pivots[:n] != list(range(n)):
                raise RingError("matrix is not invertible")
            return Matrix(ring, n, n, [r[n:] for r in m])
        d = self.det()
        if not ring.is_unit(d):
            raise RingError("matrix is not invertible over its ring")
        dinv = ring.inverse(d)
        adj = [[ring.zero()] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = Matrix(ring, n - 1, n - 1, [
                    [self.data[r][c] for c in range(n) if c != j] for r in range(n) if r != i
                ])
                c = minor.det()
                if (i + j) % 2:
                    c = ring.neg(c)
                adj[j][i] = ring.mul(dinv, c)
        return Matrix(ring, n, n, adj)

    def det(self):
        if self.rows != self.cols:
            raise RingError("determinant of a non-square matrix")
        ring = self.ring
        n = self.rows
        if n == 0:
            return ring.one()
        if ring.is_field:
            m = [list(r) for r in self.data]
            det = ring.one()
            for c in range(n):
                piv = next((r for r in range(c, n) if not ring.is_zero(m[r][c])), None)
                if piv is None:
                    return ring.zero()
                if piv != c:
                    m[c], m[piv] = m[piv], m[c]
                    det = ring.neg(det)
                det = ring.mul(det, m[c][c])
                inv = ring.inverse(m[c][c])
                for r in range(c + 1, n):
                    if not ring.is_zero(m[r][c]):
                        f = ring.mul(m[r][c], inv)
                        m[r] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(m[r], m[c])]
            return det
        # Laplace expansion; only used for the small matrices we build
        if n == 1:
            return self.data[0][0]
        total = ring.zero()
        for j in range(n):
            a = self.data[0][j]
            if ring.is_zero(a):
                continue
            minor = Matrix(ring, n - 1, n - 1, [[self.data[r][c] for c in range(n) if c != j] for r in range(1, n)])
            term = ring.mul(a, minor.det())
            total = ring.sub(total, term) if j % 2 else ring.add(total, term)
        return total


def field_rank(m: Matrix) -> int:
    return m.rank()


def kernel_basis(m: Matrix) -> list[Matrix]:
    return m.kernel_basis()


def block_matrix(ring: Ring, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    rows = []
    for brow in blocks:
        h = brow[0].rows
        for i in range(h):
            rows.append([x for b in brow for x in b.data[i]])
    ncols = sum(b.cols for b in blocks[0]) if blocks else 0
    return Matrix(ring, len(rows), ncols, rows)


# ---------------------------------------------------------------------------
# graded modules and maps


class GradedModule:
    """Ranks of a graded free module, ``degree -> rank`` with finite support."""

    __slots__ = ("ranks",)

    def __init__(self, ranks: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = ranks.items() if isinstance(ranks, Mapping) else ranks
        clean = {}
        for d, r in items:
            if r < 0:
                raise RingError("ranks must be nonnegative")
            if r:
                clean[int(d)] = int(r)
        self.ranks = tuple(sorted(clean.items()))

    def rank(self, d: int) -> int:
        for dd, r in self.ranks:
            if dd == d:
                return r
        return 0

    @property
    def degrees(self) -> list[int]:
        return [d for d, _ in self.ranks]

    @property
    def total_rank(self) -> int:
        return sum(r for _, r in self.ranks)

    @property
    def min_degree(self):
        return self.ranks[0][0] if self.ranks else None

    @property
    def max_degree(self):
        return self.ranks[-1][0] if self.ranks else None

    def is_zero(self) -> bool:
        return not self.ranks

    def direct_sum(self, other: "GradedModule") -> "GradedModule":
        d = dict(self.ranks)
        for k, r in other.ranks:
            d[k] = d.get(k, 0) + r
        return GradedModule(d)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedModule) and self.ranks == other.ranks

    def __hash__(self):
        return hash(self.ranks)

    def __repr__(self) -> str:
        return f"GradedModule({dict(self.ranks)})"


def hom_degree_range(source: GradedModule, target: GradedModule):
    """Degrees q for which Hom^q(source, target) can be nonzero, or None."""
    if source.is_zero() or target.is_zero():
        return None
    return (target.min_degree - source.max_degree, target.max_degree - source.min_degree)


class GradedMap:
    """A degree-``degree`` map ``source -> target`` of graded free modules.

    ``blocks[d]`` is the matrix ``target_{d+degree} x source_d``; zero blocks
    are omitted.
    """

    __slots__ = ("ring", "source", "target", "degree", "blocks")

    def __init__(self, ring: Ring, source: GradedModule, target: GradedModule, degree: int,
                 blocks: Mapping[int, Matrix] | None = None, check: bool = True):
        self.ring = ring
        self.source = source
        self.target = target
        self.degree = degree
        clean = {}
        for d, m in (blocks or {}).items():
            if check:
                if m.ring != ring:
                    raise RingError("block over the wrong ring")
                if m.shape != (target.rank(d + degree), source.rank(d)):
                    raise RingError(
                        f"block at degree {d} has shape {m.shape}, expected "
                        f"{(target.rank(d + degree), source.rank(d))}"
                    )
            if m.rows and m.cols and not m.is_zero():
                clean[d] = m
        self.blocks = clean

    @classmethod
    def zero(cls, ring: Ring, source: GradedModule, target: GradedModule, degree: int) -> "GradedMap":
        return cls(ring, source, target, degree, {}, check=False)

    @classmethod
    def identity(cls, ring: Ring, module: GradedModule) -> "GradedMap":
        return cls(ring, module, module, 0, {d: Matrix.identity(ring, r) for d, r in module.ranks}, check=False)

    def block(self, d: int) -> Matrix:
        m = self.blocks.get(d)
        if m is None:
            return Matrix(self.ring, self.target.rank(d + self.degree), self.source.rank(d))
        return m

    def is_zero(self) -> bool:
        return not self.blocks

    def _same(self, other: "GradedMap") -> None:
        if (self.ring, self.source, self.target, self.degree) != (other.ring, other.source, other.target, other.degree):
            raise RingError("graded maps are not of the same type")

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._same(other)
        blocks = dict(self.blocks)
        for d, m in other.blocks.items():
            blocks[d] = blocks[d] + m if d in blocks else m
        return GradedMap(self.ring, self.source, self.target, self.degree, blocks, check=False)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + (-other)

    def __neg__(self) -> "GradedMap":
        return GradedMap(self.ring, self.source, self.target, self.degree,
                         {d: -m for d, m in self.blocks.items()}, check=False)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.ring, self.source, self.target, self.degree,
                         {d: m.scale(c) for d, m in self.blocks.items()}, check=False)

    def signed(self, sign: int) -> "GradedMap":
        return self if sign > 0 else -self

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """Composition ``self ∘ other``."""
        if self.ring != other.ring:
            raise RingError("ring mismatch")
        if other.target != self.source:
            raise RingError("graded maps are not composable")
        blocks = {}
        q = other.degree
        for d, m in other.blocks.items():
            f = self.blocks.get(d + q)
            if f is not None:
                blocks[d] = f @ m
        return GradedMap(self.ring, other.source, self.target, self.degree + other.degree, blocks, check=False)

    def map_ring(self, h: RingHom) -> "GradedMap":
        if self.ring != h.source:
            raise RingError("ring mismatch")
        if h.is_identity:
            return self
        return GradedMap(h.target, self.source, self.target, self.degree,
                         {d: m.map(h) for d, m in self.blocks.items()}, check=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedMap)
            and (self.ring, self.source, self.target, self.degree) == (other.ring, other.source, other.target, other.degree)
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.ring, self.source, self.target, self.degree, tuple(sorted(self.blocks.items()))))

    def __repr__(self) -> str:
        inner = ", ".join(f"{d}: {m.to_literals()}" for d, m in sorted(self.blocks.items()))
        return f"GradedMap(deg={self.degree}, {{{inner}}})"


def graded_compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """``f ∘ g``; degrees add."""
    return f @ g


def hom_differential(f: GradedMap, d_source: GradedMap, d_target: GradedMap) -> GradedMap:
    """``d_target ∘ f - (-1)^|f| f ∘ d_source``."""
    a = d_target @ f
    b = f @ d_source
    return a - b if f.degree % 2 == 0 else a + b


def weight_component(f: GradedMap, w: Sequence[int]) -> GradedMap:
    """Coefficient matrices of the monomial ``x^w`` in each block of ``f``."""
    ring = f.ring
    if not isinstance(ring, LaurentRing):
        raise RingError("weight components need a Laurent ring")
    w = tuple(w)
    base = ring.base
    blocks = {}
    for d, m in f.blocks.items():
        data = [[dict(x).get(w, base.zero()) for x in r] for r in m.data]
        blocks[d] = Matrix(base, m.rows, m.cols, data)
    return GradedMap(base, f.source, f.target, f.degree, blocks, check=False)


def matrix_weights(m: Matrix) -> set:
    if not isinstance(m.ring, LaurentRing):
        return {()}
    return {e for r in m.data for x in r for e, _ in x}


def direct_sum_map(f: GradedMap, g: GradedMap) -> GradedMap:
    """Block-diagonal ``f ⊕ g``."""
    if f.degree != g.degree or f.ring != g.ring:
        raise RingError("cannot sum maps of different degree or ring")
    ring = f.ring
    src = f.source.direct_sum(g.source)
    tgt = f.target.direct_sum(g.target)
    blocks = {}
    for d in set(src.degrees):
        a, b = f.block(d), g.block(d)
        top = [list(r) + [ring.zero()] * b.cols for r in a.data]
        bot = [[ring.zero()] * a.cols + list(r) for r in b.data]
        blocks[d] = Matrix(ring, a.rows + b.rows, a.cols + b.cols, top + bot)
    return GradedMap(ring, src, tgt, f.degree, blocks, check=False)
