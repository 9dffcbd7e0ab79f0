# pyright: basic
"""
Exact scalar kernel: rationals, sparse polynomials and rational functions over QQ in
the generic-entry variables, and dense exact matrices with rank, span solving and LDLT.

Polynomials are sympy PolyElements over QQ in graded-lex order. A MultiPoly carries the
sorted tuple of VarIds its ring is built on; binary operations lift both operands to the
ring on the union of their variables.
"""
from __future__ import annotations

import logging
import math
import re
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Any, ClassVar, Union

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from tracealg.config import currentSettings
from tracealg.errors import (
    DenominatorVanishes,
    MissingVariable,
    NotSymmetric,
    SizeMismatch,
    TermBudgetExceeded,
)

Rational = Fraction

RATIONAL_PATTERN = re.compile(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*")


def parseRational(text: str) -> Fraction:
    """Parse "p/q" or "p"; floats and other spellings are rejected."""
    m = RATIONAL_PATTERN.fullmatch(text)
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def formatRational(value: int | Fraction) -> str:
    return str(Fraction(value))


def toQQ(value: int | Fraction) -> Any:
    q = Fraction(value)
    return QQ(q.numerator, q.denominator)


def fromQQ(coeff: Any) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))


class Family(IntEnum):
    Xi = 0   # generic matrix entries xi_{j,i,k}
    U = 1    # orthogonal group entries u_{i,k}
    Aux = 2  # auxiliary coordinates (vector variables, split coordinates)


FAMILY_TAGS = {Family.Xi: "xi", Family.U: "u", Family.Aux: "aux"}
TAG_FAMILIES = {tag: family for family, tag in FAMILY_TAGS.items()}


@dataclass(frozen=True, order=True)
class VarId:
    """Commuting variable; ordered by (family, j, i, k)."""
    family: Family
    j: int
    i: int
    k: int

    @classmethod
    def xi(cls, j: int, i: int, k: int) -> VarId:
        return cls(Family.Xi, j, i, k)

    @classmethod
    def u(cls, i: int, k: int) -> VarId:
        return cls(Family.U, 0, i, k)

    @classmethod
    def aux(cls, j: int, i: int, k: int) -> VarId:
        return cls(Family.Aux, j, i, k)

    @property
    def name(self) -> str:
        if self.family == Family.U:
            return f"u_{self.i}_{self.k}"
        return f"{FAMILY_TAGS[self.family]}_{self.j}_{self.i}_{self.k}"

    def toJson(self) -> list[Any]:
        return [FAMILY_TAGS[self.family], self.j, self.i, self.k]

    @classmethod
    def fromJson(cls, data: Sequence[Any]) -> VarId:
        if len(data) != 4 or data[0] not in TAG_FAMILIES:
            raise ValueError(f"bad variable {data!r}")
        return cls(TAG_FAMILIES[data[0]], int(data[1]), int(data[2]), int(data[3]))

    def __str__(self) -> str:
        return self.name


# placeholder generator for the ring of constants; its exponent is always zero
CONSTANT_SYMBOL = "const0"


@lru_cache(maxsize=512)
def polyRing(variables: tuple[VarId, ...]) -> PolyRing:
    names = [v.name for v in variables] or [CONSTANT_SYMBOL]
    return PolyRing(names, QQ, grlex)


def unionVariables(*groups: Iterable[VarId]) -> tuple[VarId, ...]:
    merged: set[VarId] = set()
    for group in groups:
        merged.update(group)
    return tuple(sorted(merged))


def checkBudget(rep: PolyElement) -> PolyElement:
    budget = currentSettings().termBudget
    if len(rep) > budget:
        raise TermBudgetExceeded(len(rep), budget)
    return rep


Monomial = tuple[tuple[VarId, int], ...]


@dataclass(frozen=True, eq=False)
class MultiPoly:
    """Sparse polynomial with exact rational coefficients."""
    variables: tuple[VarId, ...]
    rep: PolyElement

    @classmethod
    def const(cls, value: int | Fraction) -> MultiPoly:
        return cls((), polyRing(()).ground_new(toQQ(value)))

    @classmethod
    def zero(cls) -> MultiPoly:
        return cls.const(0)

    @classmethod
    def one(cls) -> MultiPoly:
        return cls.const(1)

    @classmethod
    def var(cls, v: VarId) -> MultiPoly:
        return cls((v,), polyRing((v,)).gens[0])

    @classmethod
    def fromTerms(cls, terms: Mapping[Monomial, int | Fraction]) -> MultiPoly:
        variables = unionVariables(*(tuple(v for v, _ in mono) for mono in terms))
        ring = polyRing(variables)
        pos = {v: idx for idx, v in enumerate(variables)}
        data: dict[tuple[int, ...], Any] = {}
        for mono, coeff in terms.items():
            expv = [0] * ring.ngens
            for v, e in mono:
                if e < 0:
                    raise ValueError(f"negative exponent for {v.name}")
                expv[pos[v]] += e
            key = tuple(expv)
            data[key] = data.get(key, QQ.zero) + toQQ(coeff)
        return cls(variables, ring.from_dict({m: c for m, c in data.items() if c}))

    @staticmethod
    def coerce(value: Any) -> MultiPoly | None:
        if isinstance(value, MultiPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return MultiPoly.const(value)
        return None

    # --- ring plumbing ---
    def lifted(self, variables: tuple[VarId, ...]) -> PolyElement:
        return self.rep.set_ring(polyRing(variables))

    def withVariables(self, variables: tuple[VarId, ...]) -> MultiPoly:
        """Same polynomial over a superset of its variables."""
        merged = unionVariables(self.variables, variables)
        return MultiPoly(merged, self.lifted(merged))

    def unify(self, other: MultiPoly) -> tuple[tuple[VarId, ...], PolyElement, PolyElement]:
        if self.variables == other.variables:
            return self.variables, self.rep, other.rep
        variables = unionVariables(self.variables, other.variables)
        return variables, self.lifted(variables), other.lifted(variables)

    # --- arithmetic ---
    def __add__(self, other: Any) -> MultiPoly:
        o = MultiPoly.coerce(other)
        if o is None:
            return NotImplemented
        variables, a, b = self.unify(o)
        return MultiPoly(variables, a + b)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.variables, -self.rep)

    def __sub__(self, other: Any) -> MultiPoly:
        o = MultiPoly.coerce(other)
        if o is None:
            return NotImplemented
        variables, a, b = self.unify(o)
        return MultiPoly(variables, a - b)

    def __rsub__(self, other: Any) -> MultiPoly:
        o = MultiPoly.coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            return MultiPoly(self.variables, self.rep.mul_ground(toQQ(other)))
        if not isinstance(other, MultiPoly):
            return NotImplemented
        variables, a, b = self.unify(other)
        return MultiPoly(variables, checkBudget(a * b))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("polynomial exponent must be non-negative")
        return MultiPoly(self.variables, checkBudget(self.rep**k))

    def __truediv__(self, other: Any) -> MultiPoly | RatFunc:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("polynomial divided by zero")
            return MultiPoly(self.variables, self.rep.quo_ground(toQQ(other)))
        if isinstance(other, MultiPoly):
            return RatFunc.make(self, other)
        return NotImplemented

    def __rtruediv__(self, other: Any) -> RatFunc:
        o = MultiPoly.coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc.make(o, self)

    def __eq__(self, other: object) -> bool:
        o = MultiPoly.coerce(other)
        if o is None:
            return NotImplemented
        _, a, b = self.unify(o)
        return a == b

    def __hash__(self) -> int:
        return hash(frozenset(self.terms().items()))

    def __len__(self) -> int:
        return len(self.rep)

    # --- inspection ---
    def isZero(self) -> bool:
        return not self.rep

    def isConstant(self) -> bool:
        return all(not any(m) for m in self.rep.itermonoms())

    def constantValue(self) -> Fraction:
        return fromQQ(self.rep.get(polyRing(self.variables).zero_monom, QQ.zero))

    def isOne(self) -> bool:
        return self.isConstant() and self.constantValue() == 1

    def terms(self) -> dict[Monomial, Fraction]:
        out: dict[Monomial, Fraction] = {}
        for expv, coeff in self.rep.iterterms():
            mono = tuple((v, e) for v, e in zip(self.variables, expv) if e)
            out[mono] = fromQQ(coeff)
        return out

    def usedVariables(self) -> tuple[VarId, ...]:
        used = [False] * len(self.variables)
        for expv in self.rep.itermonoms():
            for idx, e in enumerate(expv[:len(self.variables)]):
                if e:
                    used[idx] = True
        return tuple(v for v, flag in zip(self.variables, used) if flag)

    def degree(self) -> int:
        return max((sum(m) for m in self.rep.itermonoms()), default=0)

    def degreeIn(self, v: VarId) -> int:
        if v not in self.variables:
            return 0
        idx = self.variables.index(v)
        return max((m[idx] for m in self.rep.itermonoms()), default=0)

    def coefficient(self, monomial: Mapping[VarId, int]) -> Fraction:
        expv = [0] * polyRing(self.variables).ngens
        for v, e in monomial.items():
            if e == 0:
                continue
            if v not in self.variables:
                return Fraction(0)
            expv[self.variables.index(v)] = e
        return fromQQ(self.rep.get(tuple(expv), QQ.zero))

    def splitBy(self, family: Family) -> dict[Monomial, MultiPoly]:
        """Write self as sum of f_i * mu_i with mu_i monomials in one variable family."""
        ring = polyRing(self.variables)
        positions = [idx for idx, v in enumerate(self.variables) if v.family == family]
        groups: dict[Monomial, dict[tuple[int, ...], Any]] = {}
        for expv, coeff in self.rep.iterterms():
            key = tuple((self.variables[p], expv[p]) for p in positions if expv[p])
            rest = list(expv)
            for p in positions:
                rest[p] = 0
            groups.setdefault(key, {})[tuple(rest)] = coeff
        return {key: MultiPoly(self.variables, ring.from_dict(data))
            for key, data in groups.items()}

    # --- evaluation and substitution ---
    def evaluate(self, assignment: Mapping[VarId, int | Fraction]) -> Fraction:
        for v in self.usedVariables():
            if v not in assignment:
                raise MissingVariable(f"no value for {v.name}")
        values = [toQQ(assignment[v]) if v in assignment else QQ.zero for v in self.variables]
        total = QQ.zero
        for expv, coeff in self.rep.iterterms():
            term = coeff
            for value, e in zip(values, expv):
                if e:
                    term = term * value**e
            total += term
        return fromQQ(total)

    def substitute(self, images: Mapping[VarId, MultiPoly | int | Fraction]) -> MultiPoly:
        """Replace variables by polynomials; variables without an image stay."""
        mapped: dict[int, MultiPoly] = {}
        for v, image in images.items():
            if v in self.variables:
                poly = MultiPoly.coerce(image)
                if poly is None:
                    raise TypeError(f"image of {v.name} is not a polynomial")
                mapped[self.variables.index(v)] = poly
        if not mapped:
            return self
        keep = [v for idx, v in enumerate(self.variables) if idx not in mapped]
        variables = unionVariables(keep, *(p.variables for p in mapped.values()))
        ring = polyRing(variables)
        keepPos = [(self.variables.index(v), variables.index(v)) for v in keep]
        imageReps = {idx: p.lifted(variables) for idx, p in mapped.items()}
        powers: dict[tuple[int, int], PolyElement] = {}

        def power(idx: int, e: int) -> PolyElement:
            key = (idx, e)
            if key not in powers:
                powers[key] = imageReps[idx] ** e
            return powers[key]

        acc: dict[tuple[int, ...], Any] = {}
        for expv, coeff in self.rep.iterterms():
            base = [0] * ring.ngens
            for selfIdx, ringIdx in keepPos:
                base[ringIdx] = expv[selfIdx]
            term = ring.term_new(tuple(base), coeff)
            for idx in imageReps:
                if expv[idx]:
                    term = term * power(idx, expv[idx])
            for m, c in term.iterterms():
                acc[m] = acc.get(m, QQ.zero) + c
        kept = {m: c for m, c in acc.items() if c}
        return MultiPoly(variables, checkBudget(ring.from_dict(kept)))

    def diff(self, v: VarId) -> MultiPoly:
        if v not in self.variables:
            return MultiPoly(self.variables, polyRing(self.variables).zero)
        ring = polyRing(self.variables)
        return MultiPoly(self.variables, self.rep.diff(ring.gens[self.variables.index(v)]))

    def toCallable(self, variables: Sequence[VarId]) -> Callable[[np.ndarray], np.ndarray]:
        """Float evaluator over rows of points ordered like `variables`; oracles only."""
        pos = {v: idx for idx, v in enumerate(variables)}
        for v in self.usedVariables():
            if v not in pos:
                raise MissingVariable(f"no column for {v.name}")
        exps = np.zeros((max(len(self.rep), 1), len(variables)), dtype=np.int64)
        coeffs = np.zeros(max(len(self.rep), 1), dtype=float)
        for row, (expv, coeff) in enumerate(self.rep.iterterms()):
            coeffs[row] = float(fromQQ(coeff))
            for v, e in zip(self.variables, expv):
                if e:
                    exps[row, pos[v]] = e

        def evaluate(points: np.ndarray) -> np.ndarray:
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            return np.prod(pts[:, None, :] ** exps[None, :, :], axis=2) @ coeffs

        return evaluate

    # --- serialization ---
    def toJson(self) -> list[dict[str, Any]]:
        return [{"coef": formatRational(c), "exps": [[v.toJson(), e] for v, e in mono]}
            for mono, c in sorted(self.terms().items(), key=lambda kv: str(kv[0]))]

    @classmethod
    def fromJson(cls, data: Sequence[Mapping[str, Any]]) -> MultiPoly:
        terms: dict[Monomial, Fraction] = {}
        for term in data:
            mono = tuple((VarId.fromJson(v), int(e)) for v, e in term["exps"])
            terms[mono] = terms.get(mono, Fraction(0)) + parseRational(str(term["coef"]))
        return cls.fromTerms(terms)

    def __str__(self) -> str:
        if self.isConstant():
            return formatRational(self.constantValue())
        return str(self.rep)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def polyToJson(p: MultiPoly) -> list[dict[str, Any]]:
    return p.toJson()


def polyFromJson(data: Sequence[Mapping[str, Any]]) -> MultiPoly:
    return MultiPoly.fromJson(data)


def shiftDown(rep: PolyElement, expv: tuple[int, ...]) -> PolyElement:
    return rep.ring.from_dict({tuple(a - b for a, b in zip(m, expv)): c
        for m, c in rep.iterterms()})


def polyCofactors(a: MultiPoly, b: MultiPoly) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """(g, a/g, b/g) with g a gcd when both sides are under the gcd threshold, else g = 1."""
    threshold = currentSettings().gcdTermThreshold
    variables, ra, rb = a.unify(b)
    if len(ra) > threshold or len(rb) > threshold or len(ra) == 0 or len(rb) == 0:
        one = polyRing(variables).one
        return MultiPoly(variables, one), MultiPoly(variables, ra), MultiPoly(variables, rb)
    g, ca, cb = ra.cofactors(rb)
    return MultiPoly(variables, g), MultiPoly(variables, ca), MultiPoly(variables, cb)


def normalizeParts(num: MultiPoly, den: MultiPoly,
    fullGcd: bool = True) -> tuple[MultiPoly, MultiPoly]:
    variables, n, d = num.unify(den)
    if not d:
        raise ZeroDivisionError("rational function with zero denominator")
    if not n:
        return MultiPoly.zero(), MultiPoly.one()
    # monomial content
    low: tuple[int, ...] | None = None
    for m in list(n.itermonoms()) + list(d.itermonoms()):
        low = m if low is None else tuple(map(min, low, m))
    if low is not None and any(low):
        n, d = shiftDown(n, low), shiftDown(d, low)
    threshold = currentSettings().gcdTermThreshold
    if fullGcd and len(d) > 1 and len(n) <= threshold and len(d) <= threshold:
        _, n, d = n.cofactors(d)
    lc = d.LC
    if lc != QQ.one:
        n, d = n.quo_ground(lc), d.quo_ground(lc)
    return MultiPoly(variables, n), MultiPoly(variables, d)


@dataclass(frozen=True, eq=False)
class RatFunc:
    """Quotient num/den with a monic denominator; build through make() to normalize."""
    num: MultiPoly
    den: MultiPoly

    def __post_init__(self) -> None:
        if self.den.isZero():
            raise ZeroDivisionError("rational function with zero denominator")

    @classmethod
    def make(cls, num: MultiPoly | int | Fraction, den: MultiPoly | int | Fraction = 1,
        fullGcd: bool = True) -> RatFunc:
        n, d = MultiPoly.coerce(num), MultiPoly.coerce(den)
        if n is None or d is None:
            raise TypeError("numerator and denominator must be polynomials")
        return cls(*normalizeParts(n, d, fullGcd))

    @classmethod
    def lift(cls, value: Any) -> RatFunc | None:
        if isinstance(value, RatFunc):
            return value
        poly = MultiPoly.coerce(value)
        if poly is None:
            return None
        return cls(poly, MultiPoly.one())

    def isZero(self) -> bool:
        return self.num.isZero()

    def isPolynomial(self) -> bool:
        return self.den.isConstant()

    def isConstant(self) -> bool:
        return self.num.isConstant() and self.den.isConstant()

    def scaled(self, c: int | Fraction) -> RatFunc:
        if c == 0:
            return RatFunc(MultiPoly.zero(), MultiPoly.one())
        return RatFunc(self.num * c, self.den)

    def __add__(self, other: Any) -> RatFunc:
        o = RatFunc.lift(other)
        if o is None:
            return NotImplemented
        if o.isZero():
            return self
        if self.isZero():
            return o
        if self.den == o.den:
            return RatFunc.make(self.num + o.num, self.den)
        _, c1, c2 = polyCofactors(self.den, o.den)
        return RatFunc.make(self.num * c2 + o.num * c1, self.den * c2)

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: Any) -> RatFunc:
        o = RatFunc.lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> RatFunc:
        o = RatFunc.lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> RatFunc:
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        o = RatFunc.lift(other)
        if o is None:
            return NotImplemented
        if self.isZero() or o.isZero():
            return RatFunc.lift(0)  # type: ignore[return-value]
        # cross-cancel before multiplying
        _, n1, d2 = polyCofactors(self.num, o.den)
        _, n2, d1 = polyCofactors(o.num, self.den)
        return RatFunc.make(n1 * n2, d1 * d2, fullGcd=False)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.isZero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc.make(self.den, self.num, fullGcd=False)

    def __truediv__(self, other: Any) -> RatFunc:
        o = RatFunc.lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> RatFunc:
        o = RatFunc.lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> RatFunc:
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc.make(self.num**k, self.den**k, fullGcd=False)

    def __eq__(self, other: object) -> bool:
        o = RatFunc.lift(other)
        if o is None:
            return NotImplemented
        return ratfuncEqual(self, o)

    __hash__ = None  # type: ignore[assignment]

    def evaluate(self, assignment: Mapping[VarId, int | Fraction]) -> Fraction:
        d = self.den.evaluate(assignment)
        if d == 0:
            raise DenominatorVanishes("denominator vanishes at the given point")
        return self.num.evaluate(assignment) / d

    def diff(self, v: VarId) -> RatFunc:
        top = self.num.diff(v) * self.den - self.num * self.den.diff(v)
        return RatFunc.make(top, self.den * self.den)

    def usedVariables(self) -> tuple[VarId, ...]:
        return unionVariables(self.num.usedVariables(), self.den.usedVariables())

    def __str__(self) -> str:
        if self.den.isOne():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def ratfuncEqual(f: Any, g: Any) -> bool:
    """Exact equality by cross-multiplication."""
    a, b = RatFunc.lift(f), RatFunc.lift(g)
    if a is None or b is None:
        raise TypeError("ratfuncEqual needs polynomials or rational functions")
    if a.den == b.den:
        return a.num == b.num
    return a.num * b.den == b.num * a.den


Entry = Union[int, Fraction, MultiPoly, RatFunc]


def isZeroEntry(x: Any) -> bool:
    if isinstance(x, (MultiPoly, RatFunc)):
        return x.isZero()
    return x == 0


def evaluateEntry(x: Any, assignment: Mapping[VarId, int | Fraction]) -> Fraction:
    if isinstance(x, (MultiPoly, RatFunc)):
        return x.evaluate(assignment)
    return Fraction(x)


def dot(pairs: Iterable[tuple[Any, Any]]) -> Any:
    acc: Any = None
    for a, b in pairs:
        if isZeroEntry(a) or isZeroEntry(b):
            continue
        p = a * b
        acc = p if acc is None else acc + p
    return Fraction(0) if acc is None else acc


@dataclass(frozen=True)
class ExactMatrix:
    """Dense row-major matrix over Fraction, MultiPoly or RatFunc entries; 0-based indices."""
    rows: int
    cols: int
    entries: tuple[Any, ...]

    zeroEntry: ClassVar[Fraction] = Fraction(0)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def fromRows(cls, rows: Sequence[Sequence[Any]]) -> ExactMatrix:
        nCols = len(rows[0]) if rows else 0
        if any(len(r) != nCols for r in rows):
            raise SizeMismatch("ragged rows")
        return cls(len(rows), nCols,
            tuple(Fraction(x) if isinstance(x, int) else x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls.scalar(n, 1)

    @classmethod
    def scalar(cls, n: int, value: Any) -> ExactMatrix:
        value = Fraction(value) if isinstance(value, int) else value
        return cls(n, n, tuple(value if i == k else Fraction(0)
            for i in range(n) for k in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[Any]) -> ExactMatrix:
        n = len(values)
        return cls(n, n, tuple((Fraction(values[i]) if isinstance(values[i], int) else values[i])
            if i == k else Fraction(0) for i in range(n) for k in range(n)))

    @classmethod
    def unit(cls, n: int, i: int, k: int, value: Any = 1) -> ExactMatrix:
        entries = [Fraction(0)] * (n * n)
        entries[i * n + k] = Fraction(value) if isinstance(value, int) else value
        return cls(n, n, tuple(entries))

    def __getitem__(self, index: tuple[int, int]) -> Any:
        i, k = index
        if not (0 <= i < self.rows and 0 <= k < self.cols):
            raise IndexError(f"entry ({i}, {k}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + k]

    def row(self, i: int) -> tuple[Any, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, k: int) -> tuple[Any, ...]:
        return tuple(self.entries[i * self.cols + k] for i in range(self.rows))

    def toRows(self) -> list[list[Any]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def isSquare(self) -> bool:
        return self.rows == self.cols

    def map(self, fn: Callable[[Any], Any]) -> ExactMatrix:
        return ExactMatrix(self.rows, self.cols, tuple(fn(x) for x in self.entries))

    def checkShape(self, other: ExactMatrix) -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise SizeMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self.checkShape(other)
        return ExactMatrix(self.rows, self.cols,
            tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self.checkShape(other)
        return ExactMatrix(self.rows, self.cols,
            tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> ExactMatrix:
        return self.map(lambda x: -x)

    def __mul__(self, other: Any) -> ExactMatrix:
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise SizeMismatch(f"cannot multiply {self.rows}x{self.cols} "
                    f"by {other.rows}x{other.cols}")
            cols = [other.col(k) for k in range(other.cols)]
            return ExactMatrix(self.rows, other.cols, tuple(dot(zip(self.row(i), cols[k]))
                for i in range(self.rows) for k in range(other.cols)))
        if isinstance(other, (int, Fraction, MultiPoly, RatFunc)):
            return self.map(lambda x: x * other)
        return NotImplemented

    def __rmul__(self, other: Any) -> ExactMatrix:
        if isinstance(other, (int, Fraction, MultiPoly, RatFunc)):
            return self.map(lambda x: other * x)
        return NotImplemented

    def power(self, k: int) -> ExactMatrix:
        if not self.isSquare or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        result = ExactMatrix.identity(self.rows)
        for _ in range(k):
            result = result * self
        return result

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.cols, self.rows,
            tuple(self[i, k] for k in range(self.cols) for i in range(self.rows)))

    def trace(self) -> Any:
        if not self.isSquare:
            raise SizeMismatch("trace of a non-square matrix")
        acc: Any = Fraction(0)
        for i in range(self.rows):
            acc = acc + self[i, i]
        return acc

    def isZero(self) -> bool:
        return all(isZeroEntry(x) for x in self.entries)

    def isSymmetric(self) -> bool:
        if not self.isSquare:
            return False
        return all(isZeroEntry(self[i, k] - self[k, i])
            for i in range(self.rows) for k in range(i + 1, self.cols))

    def directSum(self, other: ExactMatrix) -> ExactMatrix:
        rows = [list(r) + [Fraction(0)] * other.cols for r in self.toRows()]
        rows += [[Fraction(0)] * self.cols + list(r) for r in other.toRows()]
        return ExactMatrix.fromRows(rows)

    def block(self, row0: int, col0: int, nRows: int, nCols: int) -> ExactMatrix:
        return ExactMatrix.fromRows([[self[row0 + i, col0 + k] for k in range(nCols)]
            for i in range(nRows)])

    def evaluate(self, assignment: Mapping[VarId, int | Fraction]) -> ExactMatrix:
        return self.map(lambda x: evaluateEntry(x, assignment))

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in self.row(i)) + "]"
            for i in range(self.rows)) + "]"


def stackMatrices(blocks: Sequence[Sequence[ExactMatrix]]) -> ExactMatrix:
    rows: list[list[Any]] = []
    for blockRow in blocks:
        for i in range(blockRow[0].rows):
            rows.append([x for b in blockRow for x in b.row(i)])
    return ExactMatrix.fromRows(rows)


def requireRational(M: ExactMatrix) -> list[list[Fraction]]:
    out = []
    for i in range(M.rows):
        row = []
        for x in M.row(i):
            if isinstance(x, (MultiPoly, RatFunc)):
                if not x.isConstant():
                    raise TypeError("expected a matrix of rationals")
                x = x.num.constantValue() / x.den.constantValue() \
                    if isinstance(x, RatFunc) else x.constantValue()
            row.append(Fraction(x))
        out.append(row)
    return out


def exactRank(M: ExactMatrix) -> int:
    """Rank by fraction-free (Bareiss) elimination on the integer-scaled rows."""
    a: list[list[int]] = []
    for row in requireRational(M):
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        a.append([int(x * scale) for x in row])
    rows, cols = M.rows, M.cols
    rank, prev = 0, 1
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r][c] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            lead = a[r][c]
            for cc in range(c + 1, cols):
                a[r][cc] = (p * a[r][cc] - lead * a[rank][cc]) // prev
            a[r][c] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def solveInSpan(vectors: Sequence[Sequence[Fraction]],
    target: Sequence[Fraction]) -> list[Fraction] | None:
    """Coordinates x with sum x_i * vectors[i] == target, or None outside the span."""
    k, m = len(vectors), len(target)
    for v in vectors:
        if len(v) != m:
            raise SizeMismatch("vectors and target differ in length")
    a = [[Fraction(vectors[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(m)]
    pivotCols: list[int] = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivotCols.append(c)
        r += 1
    if any(a[i][k] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * k
    for i, c in enumerate(pivotCols):
        x[c] = a[i][k]
    return x


@dataclass(frozen=True)
class LdltResult:
    """P M P^t = L D L^t on success; otherwise an indefinite direction of M."""
    success: bool
    pivots: tuple[Fraction, ...]
    perm: tuple[int, ...]
    lower: ExactMatrix
    witness: tuple[Fraction, ...] | None = None
    witnessValue: Fraction | None = None

    @property
    def diagonal(self) -> tuple[Fraction, ...]:
        """Pivots placed at the original index they were taken from."""
        out = [Fraction(0)] * len(self.perm)
        for pos, d in enumerate(self.pivots):
            out[self.perm[pos]] = d
        return tuple(out)

    @property
    def transform(self) -> ExactMatrix:
        return self.lower

    def reconstruct(self) -> ExactMatrix:
        n = len(self.perm)
        d = list(self.pivots) + [Fraction(0)] * (n - len(self.pivots))
        low = self.lower
        out = [[Fraction(0)] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                out[self.perm[a]][self.perm[b]] = sum(
                    (low[a, t] * d[t] * low[b, t] for t in range(n)), Fraction(0))
        return ExactMatrix.fromRows(out)


def exactLdlt(M: ExactMatrix) -> LdltResult:
    """
    Symmetric-pivoted LDL^t over the rationals.
    Pivot is the largest |diagonal| of the remaining block, ties to the lowest position.
    A negative pivot, or a zero diagonal block with a nonzero off-diagonal entry, ends the
    factorization with a witness v satisfying v^t M v < 0.
    """
    if not M.isSquare or not M.isSymmetric():
        raise NotSymmetric("LDLT needs a square symmetric matrix")
    n = M.rows
    a = requireRational(M)
    perm = list(range(n))
    low = [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    pivots: list[Fraction] = []

    def swap(k: int, p: int) -> None:
        if k == p:
            return
        a[k], a[p] = a[p], a[k]
        for row in a:
            row[k], row[p] = row[p], row[k]
        perm[k], perm[p] = perm[p], perm[k]
        low[k][:k], low[p][:k] = low[p][:k], low[k][:k]

    def failure(w: list[Fraction]) -> LdltResult:
        z = [Fraction(0)] * n
        for i in range(n - 1, -1, -1):
            z[i] = w[i] - sum((low[j][i] * z[j] for j in range(i + 1, n)), Fraction(0))
        v = [Fraction(0)] * n
        for pos, idx in enumerate(perm):
            v[idx] = z[pos]
        value = sum((v[i] * M[i, k] * v[k] for i in range(n) for k in range(n)), Fraction(0))
        logging.debug("Ldlt: indefinite direction %s value %s", v, value)
        return LdltResult(False, tuple(pivots), tuple(perm), ExactMatrix.fromRows(low),
            tuple(v), Fraction(value))

    for k in range(n):
        p = max(range(k, n), key=lambda i: (abs(a[i][i]), -i))
        if a[p][p] == 0:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0),
                None)
            if off is None:
                pivots.extend([Fraction(0)] * (n - k))
                break
            i, j = off
            w = [Fraction(0)] * n
            w[i] = Fraction(1)
            w[j] = Fraction(-1) if a[i][j] > 0 else Fraction(1)
            return failure(w)
        swap(k, p)
        d = a[k][k]
        if d < 0:
            w = [Fraction(0)] * n
            w[k] = Fraction(1)
            return failure(w)
        pivots.append(d)
        for i in range(k + 1, n):
            low[i][k] = a[i][k] / d
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] -= low[i][k] * a[k][j]
        for i in range(k + 1, n):
            a[i][k] = a[k][i] = Fraction(0)
    return LdltResult(True, tuple(pivots), tuple(perm), ExactMatrix.fromRows(low))


def jacobian(fs: Sequence[Any], variables: Sequence[VarId]) -> ExactMatrix:
    """Symbolic Jacobian by the quotient rule; den^2 is formed once per function."""
    rows = []
    for f in fs:
        r = RatFunc.lift(f)
        if r is None:
            raise TypeError("jacobian needs polynomials or rational functions")
        den2 = r.den * r.den
        rows.append([RatFunc.make(r.num.diff(v) * r.den - r.num * r.den.diff(v), den2)
            for v in variables])
    return ExactMatrix.fromRows(rows)


def jacobianAt(fs: Sequence[Any], variables: Sequence[VarId],
    assignment: Mapping[VarId, int | Fraction]) -> ExactMatrix:
    """Jacobian evaluated at a point without forming the symbolic quotients."""
    rows = []
    for f in fs:
        r = RatFunc.lift(f)
        if r is None:
            raise TypeError("jacobianAt needs polynomials or rational functions")
        n, d = r.num.evaluate(assignment), r.den.evaluate(assignment)
        if d == 0:
            raise DenominatorVanishes("denominator vanishes at the Jacobian point")
        rows.append([(r.num.diff(v).evaluate(assignment) * d
            - n * r.den.diff(v).evaluate(assignment)) / (d * d) for v in variables])
    return ExactMatrix.fromRows(rows)
