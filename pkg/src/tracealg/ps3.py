# pyright: basic
"""
The 3x3 counterexample data for one generic matrix Xi: the idempotents e1, e2, the twisted
involution diag(1, b1, b2)^-1 M^t diag(1, b1, b2), the transcendence basis alpha1..alpha6,
the beta formulas, algebraic independence and the total positivity witness b1 b2.

Everything is computed in split coordinates Xi = S + A with S symmetric and A antisymmetric.
Matrices with rational function entries are carried as a polynomial matrix over one scalar
denominator, so identities reduce to polynomial identities by cross-multiplication. The same
construction runs on a rational point, which gives the fast sampling pre-checks.
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from tracealg.config import currentSettings
from tracealg.errors import DenominatorVanishes
from tracealg.scalarPoly import (
    Entry,
    ExactMatrix,
    MultiPoly,
    RatFunc,
    VarId,
    exactRank,
    formatRational,
    isZeroEntry,
    jacobianAt,
    ratfuncEqual,
)
from tracealg.verdictPublisher import EXACT, SAMPLED, Verdict, VerdictPublisher

SIZE = 3
MODELS = ("full", "diagonal")
PARTS = ("idempotents", "cubic", "betas", "jacobian", "witness")
POINT_DENOMINATORS = 7
POINT_RADIUS = 9
TOPIC = "ps3"


def sVar(i: int, k: int) -> VarId:
    return VarId.aux(1, min(i, k), max(i, k))


def aVar(i: int, k: int) -> VarId:
    return VarId.aux(2, i, k)


def rhoVar(i: int, k: int) -> VarId:
    return VarId.aux(3, i, k)


def splitVariables(model: str = "full") -> tuple[VarId, ...]:
    if model not in MODELS:
        raise ValueError(f"unknown coordinate model {model!r}")
    symmetric = [sVar(i, k) for i in range(1, SIZE + 1) for k in range(i, SIZE + 1)
        if model == "full" or i == k]
    return tuple(symmetric + [aVar(i, k) for i in range(1, SIZE + 1)
        for k in range(i + 1, SIZE + 1)])


def genericSplit(model: str = "full") -> tuple[ExactMatrix, ExactMatrix]:
    """Generic symmetric S (diagonal in the diagonal model) and generic antisymmetric A."""
    if model not in MODELS:
        raise ValueError(f"unknown coordinate model {model!r}")
    zero = MultiPoly.zero()
    S = ExactMatrix.fromRows([[MultiPoly.var(sVar(i, k)) if model == "full" or i == k else zero
        for k in range(1, SIZE + 1)] for i in range(1, SIZE + 1)])
    A = ExactMatrix.fromRows([[MultiPoly.var(aVar(i, k)) if i < k
        else -MultiPoly.var(aVar(k, i)) if i > k else zero
        for k in range(1, SIZE + 1)] for i in range(1, SIZE + 1)])
    return S, A


def splitOf(X: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    half = Fraction(1, 2)
    return (X + X.transpose()) * half, (X - X.transpose()) * half


def divide(x: Any, d: Any) -> Any:
    """x/d as a Fraction on points and as a RatFunc on polynomials."""
    if isinstance(x, (int, Fraction)) and isinstance(d, (int, Fraction)):
        if d == 0:
            raise DenominatorVanishes("denominator vanishes at the sample point")
        return Fraction(x) / d
    if isinstance(x, RatFunc) or isinstance(d, RatFunc):
        return RatFunc.lift(x) / RatFunc.lift(d)  # type: ignore[operator]
    return RatFunc.make(x, d)


def same(x: Any, y: Any) -> bool:
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return x == y
    return ratfuncEqual(x, y)


@dataclass(frozen=True)
class Invariants:
    """Pure trace data of (S, A); the alphas are numerator/denominator pairs."""
    t1: Entry   # tr(s)
    t2: Entry   # tr(s0^2)
    t3: Entry   # tr(s0^3)
    alpha2: Entry   # tr(a^2)
    alpha3: Entry   # tr(s0 a^2)
    q: Entry    # tr(s0^2 a^2)
    p: Entry    # tr(a s0 a^2 s0^2)

    @property
    def d6(self) -> Entry:
        return self.alpha2 * self.alpha2 * self.t2 - self.alpha3 * self.alpha3 * 6

    @property
    def d4(self) -> Entry:
        return (self.alpha2 * self.alpha2 * self.t2 - self.alpha2 * self.q * 4
            - self.alpha3 * self.alpha3 * 2)

    @property
    def alpha5Numerator(self) -> Entry:
        return self.alpha2 ** 3 * self.t3 + self.alpha3 ** 3 * 6

    def alphas(self) -> tuple[Any, ...]:
        return (self.t1, self.alpha2, self.alpha3, divide(self.d6, self.d4),
            divide(self.alpha5Numerator, self.d6), divide(self.p, self.d6))


def invariantsOf(S: ExactMatrix, A: ExactMatrix) -> Invariants:
    t1 = S.trace()
    s0 = S - ExactMatrix.scalar(SIZE, t1 * Fraction(1, 3))
    a2 = A * A
    s02 = s0 * s0
    return Invariants(t1, s02.trace(), (s02 * s0).trace(), a2.trace(), (s0 * a2).trace(),
        (s02 * a2).trace(), (A * s0 * a2 * s02).trace())


@dataclass(frozen=True)
class PS3Context:
    """
    e1 = e1Num / alpha2, a2 = a2Num / alpha2^2, e2 = e2Num / tr(a2Num^2). Entries are MultiPoly
    for the generic context and Fraction for a context built at a rational point.
    """
    xi: ExactMatrix
    s: ExactMatrix
    a: ExactMatrix
    s0: ExactMatrix
    a1: ExactMatrix
    e1Num: ExactMatrix
    e1Den: Entry
    a2Num: ExactMatrix
    a2Den: Entry
    e2Num: ExactMatrix
    e2Den: Entry
    beta1: Entry
    beta2: Entry
    invariants: Invariants
    model: str = "full"
    variables: tuple[VarId, ...] = field(default=())

    @property
    def isSymbolic(self) -> bool:
        return bool(self.variables)

    def quotient(self, M: ExactMatrix, d: Entry) -> ExactMatrix:
        return M.map(lambda x: divide(x, d))

    @property
    def a2(self) -> ExactMatrix:
        return self.quotient(self.a2Num, self.a2Den)

    @property
    def e1(self) -> ExactMatrix:
        return self.quotient(self.e1Num, self.e1Den)

    @property
    def e2(self) -> ExactMatrix:
        return self.quotient(self.e2Num, self.e2Den)

    @property
    def alphas(self) -> tuple[Any, ...]:
        return self.invariants.alphas()

    @property
    def diagonal(self) -> tuple[Entry, ...]:
        return (Fraction(1), self.beta1, self.beta2)


def contextFromSplit(S: ExactMatrix, A: ExactMatrix, model: str = "full",
    variables: tuple[VarId, ...] = ()) -> PS3Context:
    Xi = S + A
    identity = ExactMatrix.identity(SIZE)
    a1 = Xi - Xi.transpose()
    a1sq = a1 * a1
    # e1 = 1 - 2 a1^2 / tr(a1^2) and tr(a1^2) = 4 alpha2
    alpha2 = (A * A).trace()
    if isZeroEntry(alpha2):
        raise DenominatorVanishes("tr(a^2) vanishes")
    e1Num = identity * alpha2 - a1sq * Fraction(1, 2)
    compl = a1sq * Fraction(1, 2)  # alpha2 (1 - e1)
    a2Num = e1Num * Xi * compl - compl * Xi.transpose() * e1Num
    a2sq = a2Num * a2Num
    e2Den = a2sq.trace()
    if isZeroEntry(e2Den):
        raise DenominatorVanishes("tr(a2^2) vanishes")
    e2Num = identity * e2Den - a2sq * 2
    beta1 = a1sq.trace() * Fraction(-1, 2)
    beta2 = divide(e2Den * Fraction(-1, 2), alpha2 ** 4)
    s0 = S - identity * (S.trace() * Fraction(1, 3))
    return PS3Context(Xi, S, A, s0, a1, e1Num, alpha2, a2Num, alpha2 * alpha2, e2Num, e2Den,
        beta1, beta2, invariantsOf(S, A), model, variables)


def buildContext(model: str = "full") -> PS3Context:
    S, A = genericSplit(model)
    ctx = contextFromSplit(S, A, model, splitVariables(model))
    logging.info("PS3: built %s context, tr(a2^2) has %d terms", model, len(ctx.e2Den))
    return ctx


def numericContext(X: ExactMatrix) -> PS3Context:
    S, A = splitOf(X)
    return contextFromSplit(S, A)


def randomPoint(rng: np.random.Generator) -> ExactMatrix:
    """3x3 matrix with entries p/q, q in 1..7."""
    def entry() -> Fraction:
        q = int(rng.integers(1, POINT_DENOMINATORS + 1))
        return Fraction(int(rng.integers(-POINT_RADIUS, POINT_RADIUS + 1)), q)
    return ExactMatrix.fromRows([[entry() for _ in range(SIZE)] for _ in range(SIZE)])


def sampleContexts(count: int, rng: np.random.Generator) -> list[PS3Context]:
    limit = currentSettings().resampleLimit
    out: list[PS3Context] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > limit * max(count, 1):
            raise DenominatorVanishes(f"no admissible point after {attempts - 1} attempts")
        try:
            out.append(numericContext(randomPoint(rng)))
        except (DenominatorVanishes, ZeroDivisionError):
            continue
    return out


# --------- identities ---------
def zeroMatrix(M: ExactMatrix) -> bool:
    return M.isZero()


def idempotentChecks() -> dict[str, Callable[[PS3Context], bool]]:
    def squares(num: ExactMatrix, den: Entry) -> bool:
        return zeroMatrix(num * num - num * den)

    def traceOne(num: ExactMatrix, den: Entry) -> bool:
        return isZeroEntry(num.trace() - den)

    def annihilates(a: ExactMatrix, num: ExactMatrix) -> bool:
        return zeroMatrix(a * num) and zeroMatrix(num * a)

    return {
        "e1^2 = e1": lambda c: squares(c.e1Num, c.e1Den),
        "e1^t = e1": lambda c: c.e1Num.isSymmetric(),
        "tr(e1) = 1": lambda c: traceOne(c.e1Num, c.e1Den),
        "a1 e1 = e1 a1 = 0": lambda c: annihilates(c.a1, c.e1Num),
        "e2^2 = e2": lambda c: squares(c.e2Num, c.e2Den),
        "e2^t = e2": lambda c: c.e2Num.isSymmetric(),
        "tr(e2) = 1": lambda c: traceOne(c.e2Num, c.e2Den),
        "a2 e2 = e2 a2 = 0": lambda c: annihilates(c.a2Num, c.e2Num),
        "e1 e2 = e2 e1 = 0": lambda c: annihilates(c.e1Num, c.e2Num),
    }


def beta2Formula(c: PS3Context) -> bool:
    """
    b2 = (288 a2^3 a4^2 a6^2 - (3 a3 a4 + 2 a4 a5 + 9 a3)^2) / (9 a2^2 (a4 + 1)), which with
    a4 = D6/D4, a5 = N5/D6, a6 = P/D6 reads -1/2 tr(a2Num^2) 9 a2^2 D4 (D6 + D4)
    = a2^4 (288 a2^3 P^2 - M^2) for M = 3 a3 D6 + 2 N5 + 9 a3 D4.
    """
    inv = c.invariants
    d6, d4 = inv.d6, inv.d4
    m = inv.alpha3 * d6 * 3 + inv.alpha5Numerator * 2 + inv.alpha3 * d4 * 9
    lhs = c.e2Den * Fraction(-9, 2) * inv.alpha2 ** 2 * d4 * (d6 + d4)
    rhs = inv.alpha2 ** 4 * (inv.alpha2 ** 3 * inv.p * inv.p * 288 - m * m)
    return isZeroEntry(lhs - rhs)


def trS0SquaredFormula(c: PS3Context) -> bool:
    """tr(s0^2) = 2 a4/(a4 + 1) b2 + 6 a3^2/a2^2, multiplied through by (D6 + D4) a2^4."""
    inv = c.invariants
    d6, d4 = inv.d6, inv.d4
    lhs = inv.t2 * (d6 + d4) * inv.alpha2 ** 4
    rhs = -d6 * c.e2Den + inv.alpha3 ** 2 * inv.alpha2 ** 2 * (d6 + d4) * 6
    return isZeroEntry(lhs - rhs)


def trS0CubedFormula(c: PS3Context) -> bool:
    """tr(s0^3) = (a5 (a2^2 tr(s0^2) - 6 a3^2) - 6 a3^3) / a2^3, multiplied through by D6."""
    inv = c.invariants
    lhs = inv.t3 * inv.alpha2 ** 3 * inv.d6
    rhs = inv.alpha5Numerator * (inv.alpha2 ** 2 * inv.t2 - inv.alpha3 ** 2 * 6) \
        - inv.alpha3 ** 3 * inv.d6 * 6
    return isZeroEntry(lhs - rhs)


def betaChecks() -> dict[str, Callable[[PS3Context], bool]]:
    """
    beta1 = -1/2 tr(a1^2) with a1 = 2a, so beta1 = -2 alpha2. This is -1/2 alpha2 times the
    square 4, which leaves its square class unchanged.
    """
    return {
        "beta1 = -2 alpha2": lambda c: isZeroEntry(c.beta1 + c.invariants.alpha2 * 2),
        "beta2 in alpha2..alpha6": beta2Formula,
        "tr(s0^2) in alpha2..alpha6": trS0SquaredFormula,
        "tr(s0^3) in alpha2, alpha3, alpha5, tr(s0^2)": trS0CubedFormula,
    }


def precheck(name: str, check: Callable[[PS3Context], bool],
    points: Sequence[PS3Context]) -> Verdict | None:
    """A failing sampled verdict for the first point that breaks the identity, else None."""
    for idx, point in enumerate(points):
        if not check(point):
            logging.warning("PS3: %s fails at sample point %d", name, idx)
            xi = [[formatRational(x) for x in row] for row in point.xi.toRows()]
            return Verdict(name, False, SAMPLED, {"point": xi})
    return None


def runChecks(checks: dict[str, Callable[[PS3Context], bool]], ctx: Callable[[], PS3Context],
    points: Sequence[PS3Context]) -> list[Verdict]:
    verdicts = []
    for name, check in checks.items():
        failed = precheck(name, check, points)
        if failed is not None:
            verdicts.append(failed)
            continue
        holds = check(ctx())
        logging.info("PS3: %s holds=%s", name, holds)
        verdicts.append(Verdict(name, holds, EXACT, {"points": len(points)}))
    return verdicts


def verifyIdempotents(ctx: PS3Context) -> bool:
    return all(check(ctx) for check in idempotentChecks().values())


def verifyBetaFormulas(ctx: PS3Context) -> bool:
    return all(check(ctx) for check in betaChecks().values())


def verifyAntisymCubic(n: int = SIZE) -> bool:
    """a^3 - 1/2 tr(a^2) a = 0 for a generic n x n antisymmetric a."""
    zero = MultiPoly.zero()
    a = ExactMatrix.fromRows([[MultiPoly.var(aVar(i, k)) if i < k
        else -MultiPoly.var(aVar(k, i)) if i > k else zero
        for k in range(1, n + 1)] for i in range(1, n + 1)])
    a2 = a * a
    return zeroMatrix(a2 * a - a * (a2.trace() * Fraction(1, 2)))


# --------- algebraic independence ---------
def xiVariables() -> tuple[VarId, ...]:
    return tuple(VarId.xi(1, i, k) for i in range(1, SIZE + 1) for k in range(1, SIZE + 1))


def chainMatrix(variables: Sequence[VarId]) -> ExactMatrix:
    """d(split coordinate)/d(xi): s_ik = (xi_ik + xi_ki)/2, a_ik = (xi_ik - xi_ki)/2."""
    half = Fraction(1, 2)
    rows = []
    for v in variables:
        row = []
        for w in xiVariables():
            if v.j == 1:
                row.append(Fraction(1) if v.i == v.k == w.i == w.k
                    else half if v.i != v.k and {w.i, w.k} == {v.i, v.k} else Fraction(0))
            else:
                row.append(half if (w.i, w.k) == (v.i, v.k)
                    else -half if (w.k, w.i) == (v.i, v.k) else Fraction(0))
        rows.append(row)
    return ExactMatrix.fromRows(rows)


def splitAssignment(X: ExactMatrix) -> dict[VarId, Fraction]:
    S, A = splitOf(X)
    out = {}
    for i in range(1, SIZE + 1):
        for k in range(i, SIZE + 1):
            out[sVar(i, k)] = S[i - 1, k - 1]
            if i < k:
                out[aVar(i, k)] = A[i - 1, k - 1]
    return out


def jacobianRank(fs: Sequence[Any], seed: int = 0) -> int:
    """Exact rank in the xi coordinates of the Jacobian of fs at a random rational point."""
    variables = splitVariables("full")
    chain = chainMatrix(variables)
    rng = np.random.default_rng(seed)
    for attempt in range(currentSettings().resampleLimit):
        X = randomPoint(rng)
        try:
            J = jacobianAt(fs, variables, splitAssignment(X))
        except DenominatorVanishes:
            logging.debug("PS3: resampling Jacobian point after attempt %d", attempt)
            continue
        return exactRank(J * chain)
    limit = currentSettings().resampleLimit
    raise DenominatorVanishes(f"no admissible Jacobian point in {limit} attempts")


def alphaFunctions() -> tuple[Any, ...]:
    S, A = genericSplit("full")
    return invariantsOf(S, A).alphas()


def verifyIndependence(seed: int = 0) -> bool:
    rank = jacobianRank(alphaFunctions(), seed)
    logging.info("PS3: Jacobian of alpha1..alpha6 has rank %d", rank)
    return rank == 6


# --------- twisted involution ---------
def twistedInvolution(M: ExactMatrix, ctx: PS3Context) -> ExactMatrix:
    """diag(1, b1, b2)^-1 M^t diag(1, b1, b2)."""
    d = ctx.diagonal
    rows = []
    for i in range(SIZE):
        row = []
        for k in range(SIZE):
            x = M[k, i]
            if isZeroEntry(x):
                row.append(Fraction(0))
            elif i == k:
                row.append(x)
            else:
                row.append(divide(x * d[k], d[i]))
        rows.append(row)
    return ExactMatrix.fromRows(rows)


def matricesEqual(M: ExactMatrix, N: ExactMatrix) -> bool:
    return all(same(x, y) for x, y in zip(M.entries, N.entries))


def witnessMatrix(ctx: PS3Context) -> ExactMatrix:
    return ExactMatrix.unit(SIZE, 1, 2, ctx.beta2)


def witnessTrace(ctx: PS3Context) -> Any:
    h = witnessMatrix(ctx)
    return (h * twistedInvolution(h, ctx)).trace()


def totalPositivityWitness(ctx: PS3Context) -> Any:
    """b1 b2 = tr(h h^ti) for h = b2 E_23; returns b1 b2."""
    target = ctx.beta2 * ctx.beta1
    if not same(witnessTrace(ctx), target):
        raise ArithmeticError("tr(h h^ti) differs from beta1 beta2")
    return target


def entry11ThreeTerm(rs: Sequence[ExactMatrix], ctx: PS3Context) -> Any:
    acc: Any = Fraction(0)
    for r in rs:
        acc = acc + r[0, 0] * r[0, 0] + divide(r[0, 1] * r[0, 1], ctx.beta1) \
            + divide(r[0, 2] * r[0, 2], ctx.beta2)
    return acc


def entry11Obstruction(rs: Sequence[ExactMatrix], ctx: PS3Context) -> Any:
    """(1,1) entry of sum r_i r_i^ti, checked against sum rho_11^2 + rho_12^2/b1 + rho_13^2/b2."""
    acc: Any = Fraction(0)
    for r in rs:
        acc = acc + (r * twistedInvolution(r, ctx))[0, 0]
    if not same(acc, entry11ThreeTerm(rs, ctx)):
        raise ArithmeticError("(1,1) entry differs from the three-term form")
    return acc


def genericRho() -> ExactMatrix:
    return ExactMatrix.fromRows([[MultiPoly.var(rhoVar(i, k)) for k in range(1, SIZE + 1)]
        for i in range(1, SIZE + 1)])


def witnessChecks(seed: int) -> dict[str, Callable[[PS3Context], bool]]:
    rng = np.random.default_rng(seed)
    M, N = randomPoint(rng), randomPoint(rng)

    def involutive(c: PS3Context) -> bool:
        R = genericRho()
        return matricesEqual(twistedInvolution(twistedInvolution(R, c), c), R)

    def antiMultiplicative(c: PS3Context) -> bool:
        return matricesEqual(twistedInvolution(M * N, c),
            twistedInvolution(N, c) * twistedInvolution(M, c))

    def entry11(c: PS3Context) -> bool:
        R = genericRho()
        return same((R * twistedInvolution(R, c))[0, 0], entry11ThreeTerm([R], c))

    return {
        "twisted involution is an involution": involutive,
        "(MN)^ti = N^ti M^ti": antiMultiplicative,
        "tr(h h^ti) = beta1 beta2": lambda c: same(witnessTrace(c), c.beta2 * c.beta1),
        "(1,1) entry of r r^ti in three terms": entry11,
    }


# --------- driver ---------
def verifyAll(seed: int = 0, only: Sequence[str] | None = None, model: str = "full",
    publisher: VerdictPublisher | None = None) -> list[Verdict]:
    """Run the selected parts, publishing one verdict per identity on topic 'ps3'."""
    parts = tuple(only) if only else PARTS
    unknown = [p for p in parts if p not in PARTS]
    if unknown:
        raise ValueError(f"unknown ps3 parts {unknown}, choose from {PARTS}")
    rng = np.random.default_rng(seed)
    points = sampleContexts(currentSettings().precheckPoints, rng)
    cached: list[PS3Context] = []

    def ctx() -> PS3Context:
        if not cached:
            cached.append(buildContext(model))
        return cached[0]

    verdicts: list[Verdict] = []
    if "idempotents" in parts:
        verdicts += runChecks(idempotentChecks(), ctx, points)
    if "cubic" in parts:
        verdicts.append(Verdict("a^3 = 1/2 tr(a^2) a for antisymmetric 3x3", verifyAntisymCubic()))
    if "betas" in parts:
        verdicts += runChecks(betaChecks(), ctx, points)
    if "jacobian" in parts:
        verdicts.append(Verdict("alpha1..alpha6 Jacobian has rank 6", verifyIndependence(seed),
            EXACT, {"seed": seed}))
    if "witness" in parts:
        verdicts += runChecks(witnessChecks(seed), ctx, points)
    if publisher is not None:
        for v in verdicts:
            publisher.publish(TOPIC, v)
    return verdicts
