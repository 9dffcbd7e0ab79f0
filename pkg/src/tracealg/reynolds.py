# pyright: basic
"""
Reynolds operators for simultaneous orthogonal conjugation.

R'' (SO(n)) comes from the Casimir functional c on group-entry monomials: find the monic
minimal polynomial p of c~ on f; when p(t) = t q(t), R''(f) = q(c~)(f) / q(0). R' (O(n))
averages R'' with its image under the reflection diag(-1, 1, ..., 1). The matrix lift R
reads f0 off R'(tr(f Xi_a)) for an auxiliary generic matrix Xi_a.
"""
from __future__ import annotations

import logging
import math
import threading
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from tracealg.errors import NotLinearInAuxiliary, ReynoldsIterationCap
from tracealg.genericEval import GenericContext, applyGroupElement, evalSymbolic
from tracealg.scalarPoly import ExactMatrix, Family, Monomial, MultiPoly, VarId, solveInSpan
from tracealg.traceRing import TracePolynomial
from tracealg.verdictPublisher import EXACT

# elements a0 + a1 s + a2 t + a3 st with s^2 = t^2 = 0
Truncated = tuple[Fraction, Fraction, Fraction, Fraction]

UMonomial = tuple[tuple[tuple[int, int], int], ...]


def truncMul(a: Truncated, b: Truncated) -> Truncated:
    return (a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[0] * b[2] + a[2] * b[0],
        a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0])


def truncPow(a: Truncated, e: int) -> Truncated:
    out: Truncated = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    for _ in range(e):
        out = truncMul(out, a)
    return out


def unitProduct(n: int, e: tuple[int, int], f: tuple[int, int]) -> dict[tuple[int, int], Truncated]:
    """Entries of (1 + s E_e)(1 + t E_f) that differ from zero, 1-based."""
    zero = Fraction(0)
    entries: dict[tuple[int, int], list[Fraction]] = {}

    def slot(ab: tuple[int, int]) -> list[Fraction]:
        return entries.setdefault(ab, [zero, zero, zero, zero])

    for a in range(1, n + 1):
        slot((a, a))[0] = Fraction(1)
    slot(e)[1] += 1
    slot(f)[2] += 1
    if e[1] == f[0]:
        slot((e[0], f[1]))[3] += 1
    return {ab: (v[0], v[1], v[2], v[3]) for ab, v in entries.items()}


def stCoefficient(mu: UMonomial, entries: Mapping[tuple[int, int], Truncated]) -> Fraction:
    value: Truncated = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    zero: Truncated = (Fraction(0),) * 4  # type: ignore[assignment]
    for ab, e in mu:
        value = truncMul(value, truncPow(entries.get(ab, zero), e))
    return value[3]


class CasimirCache:
    """c(mu) per group size, memoized; entries are idempotent so concurrent writes agree."""

    def __init__(self, n: int):
        self.n = n
        self.memo: dict[UMonomial, Fraction] = {}
        self.lock = threading.Lock()

    def value(self, mu: UMonomial) -> Fraction:
        cached = self.memo.get(mu)
        if cached is not None:
            return cached
        n = self.n
        total = Fraction(0)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j:
                    continue  # both products coincide
                total += stCoefficient(mu, unitProduct(n, (i, j), (i, j)))
                total -= stCoefficient(mu, unitProduct(n, (i, j), (j, i)))
        with self.lock:
            self.memo[mu] = total
        return total


caches: dict[int, CasimirCache] = {}
cachesLock = threading.Lock()


def casimirCache(n: int) -> CasimirCache:
    with cachesLock:
        if n not in caches:
            caches[n] = CasimirCache(n)
        return caches[n]


def toUMonomial(mu: Monomial | Mapping[VarId, int]) -> UMonomial:
    items = mu.items() if isinstance(mu, Mapping) else mu
    out = []
    for v, e in items:
        if v.family != Family.U:
            raise ValueError(f"{v.name} is not a group-entry variable")
        if e:
            out.append(((v.i, v.k), e))
    return tuple(sorted(out))


def casimirValue(mu: Union[Monomial, Mapping[VarId, int], MultiPoly], n: int) -> Fraction:
    """c(mu) for a monomial in the u variables; a polynomial is handled linearly."""
    cache = casimirCache(n)
    if isinstance(mu, MultiPoly):
        return sum((c * cache.value(toUMonomial(m)) for m, c in mu.terms().items()), Fraction(0))
    return cache.value(toUMonomial(mu))


def liftAction(f: MultiPoly, i: int, j: int) -> MultiPoly:
    """d/ds f((1 + s E_ij) X (1 + s E_ij)^t) at s = 0, for every generic matrix in f."""
    out = MultiPoly.zero()
    for v in f.usedVariables():
        if v.family != Family.Xi:
            continue
        # (E_ij X + X E_ji)_{ab} = delta_{ai} x_{jb} + delta_{bi} x_{aj}
        image = MultiPoly.zero()
        if v.i == i:
            image = image + MultiPoly.var(VarId.xi(v.j, j, v.k))
        if v.k == i:
            image = image + MultiPoly.var(VarId.xi(v.j, v.i, j))
        if not image.isZero():
            out = out + f.diff(v) * image
    return out


def casimirTilde(f: MultiPoly, n: int, method: str = "casimir") -> MultiPoly:
    """
    c~(f) = sum_i f_i c(mu_i) where f^u = sum_i f_i mu_i.
    method="derivation" computes the same operator as sum over i != j of
    L_ij L_ij f - L_ji L_ij f with L the infinitesimal conjugation action.
    """
    if method == "derivation":
        out = MultiPoly.zero()
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j:
                    first = liftAction(f, i, j)
                    out = out + liftAction(first, i, j) - liftAction(first, j, i)
        return out
    if method != "casimir":
        raise ValueError(f"unknown Casimir method {method!r}")
    g = max((v.j for v in f.usedVariables() if v.family == Family.Xi), default=1)
    moved = applyGroupElement(f, GenericContext(n, g))
    assert isinstance(moved, MultiPoly)
    out = MultiPoly.zero()
    for mu, part in moved.splitBy(Family.U).items():
        c = casimirValue(mu, n)
        if c != 0:
            out = out + part * c
    return out


@dataclass(frozen=True)
class ReynoldsReport:
    input: MultiPoly
    output: MultiPoly
    minimalPolynomial: tuple[Fraction, ...]  # lowest degree first, monic
    iterates: int
    mode: str = EXACT

    def toJson(self) -> dict[str, Any]:
        return {"input": self.input.toJson(), "output": self.output.toJson(),
            "minimalPolynomial": [str(c) for c in self.minimalPolynomial],
            "iterates": self.iterates, "mode": self.mode}


def ambientDimension(f: MultiPoly, n: int) -> int:
    """Number of monomials of degree <= deg f in the xi variables f's matrices live in."""
    matrices = {v.j for v in f.usedVariables() if v.family == Family.Xi}
    count = max(len(matrices), 1) * n * n
    return math.comb(count + f.degree(), f.degree())


def coefficientVectors(polys: list[MultiPoly]) -> list[list[Fraction]]:
    keys = sorted({m for p in polys for m in p.terms()}, key=str)
    termMaps = [p.terms() for p in polys]
    return [[t.get(k, Fraction(0)) for k in keys] for t in termMaps]


def soReport(f: MultiPoly, n: int, method: str = "derivation") -> ReynoldsReport:
    """R''(f) with the minimal polynomial of c~ on f."""
    if f.isZero():
        return ReynoldsReport(f, f, (Fraction(0), Fraction(1)), 0)
    cap = ambientDimension(f, n)
    degree = f.degree()
    iterates = [f]
    while True:
        if len(iterates) > cap:
            raise ReynoldsIterationCap(f"no minimal polynomial within {cap} iterates")
        nxt = casimirTilde(iterates[-1], n, method)
        if nxt.degree() > degree:
            raise ReynoldsIterationCap(f"Casimir iterate has degree {nxt.degree()} > {degree}")
        vectors = coefficientVectors(iterates + [nxt])
        coords = solveInSpan(vectors[:-1], vectors[-1])
        if coords is not None:
            break
        iterates.append(nxt)
    # p(t) = t^k - sum coords[i] t^i
    p = tuple([-c for c in coords] + [Fraction(1)])
    logging.debug("Reynolds: minimal polynomial %s after %d iterates", p, len(iterates))
    if p[0] != 0:
        logging.info("Reynolds: p(0) = %s != 0, the invariant part is 0", p[0])
        return ReynoldsReport(f, MultiPoly.zero(), p, len(iterates))
    q = p[1:]
    if q[0] == 0:
        raise ReynoldsIterationCap("Casimir action is not semisimple on the input")
    out = MultiPoly.zero()
    for coeff, it in zip(q, iterates):
        if coeff != 0:
            out = out + it * (coeff / q[0])
    return ReynoldsReport(f, out, p, len(iterates))


def reynoldsSo(f: MultiPoly, n: int) -> MultiPoly:
    return soReport(f, n).output


def reflect(f: MultiPoly) -> MultiPoly:
    """f^v for v = diag(-1, 1, ..., 1): xi_{j,i,k} changes sign when exactly one of i, k is 1."""
    images = {v: -MultiPoly.var(v) for v in f.usedVariables()
        if v.family == Family.Xi and (v.i == 1) != (v.k == 1)}
    return f.substitute(images)


def reynoldsOn(f: MultiPoly, n: int) -> MultiPoly:
    r = reynoldsSo(f, n)
    return (r + reflect(r)) * Fraction(1, 2)


def reynoldsMatrix(f: ExactMatrix | TracePolynomial, ctx: GenericContext) -> ExactMatrix:
    """R(f) = f0 with R'(tr(f Xi_a)) = tr(f0 Xi_a) for a fresh generic matrix Xi_a."""
    if isinstance(f, TracePolynomial):
        ctx = GenericContext(ctx.n, max(ctx.g, f.maxIndex()))
        f = evalSymbolic(f, ctx)
    n = ctx.n
    if f.rows != n or f.cols != n:
        raise ValueError(f"matrix is {f.rows}x{f.cols}, context size is {n}")
    used = [v.j for x in f.entries if isinstance(x, MultiPoly)
        for v in x.usedVariables() if v.family == Family.Xi]
    aux = max([ctx.g] + used) + 1
    t = MultiPoly.zero()
    for i in range(n):
        for k in range(n):
            entry = f[i, k]
            if entry != 0:
                t = t + MultiPoly.var(VarId.xi(aux, k + 1, i + 1)) * entry
    r = reynoldsOn(t, n)
    for mono in r.terms():
        if sum(e for v, e in mono if v.family == Family.Xi and v.j == aux) != 1:
            raise NotLinearInAuxiliary(f"term {mono} is not linear in the auxiliary matrix")
    logging.debug("Reynolds: lifted %dx%d matrix through auxiliary index %d", n, n, aux)
    return ExactMatrix.fromRows([[r.diff(VarId.xi(aux, k + 1, i + 1)) for k in range(n)]
        for i in range(n)])
