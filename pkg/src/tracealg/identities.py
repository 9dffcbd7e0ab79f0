# pyright: basic
"""
Explicit trace identities and their controls: the f_m family, Capelli polynomials, the
symplectic involution, Cayley-Hamilton for symmetric matrices and the matrix embeddings
of the complex numbers and the quaternions.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from tracealg.errors import DEvenRejected, MTooLarge, OddDimension
from tracealg.genericEval import (
    GenericContext,
    IdentityVerdict,
    charCoeffs,
    evalNumeric,
    genericMatrix,
    isTraceIdentity,
)
from tracealg.scalarPoly import ExactMatrix, stackMatrices
from tracealg.traceRing import Letter, TracePolynomial, Word
from tracealg.verdictPublisher import Verdict

CAPELLI_MAX = 6
CAYLEY_HAMILTON_MAX = 4

# word-only trace polynomial
NCPolynomial = TracePolynomial


@dataclass(frozen=True)
class FmPolynomial:
    m: int
    value: TracePolynomial
    primes: tuple[TracePolynomial, ...]  # f'_0 .. f'_m


def productWord() -> TracePolynomial:
    return TracePolynomial.word(Word.of(Letter(1), Letter(2)))


def newtonFm(m: int, useOrderExponent: bool = False) -> FmPolynomial:
    """
    f'_0 = 1, f'_k = sum_{i=1..k} (-1)^(i-1) / (2k) Tr(z^i) f'_{k-i} with z = x1 x2, and
    f_m = sum_k (-1)^k f'_k z^(m-k). useOrderExponent puts Tr(z^k) in place of Tr(z^i).
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    z = productWord()
    zPowers = [z.power(i) for i in range(m + 1)]
    traces = [p.trace() for p in zPowers]
    primes = [TracePolynomial.const(1)]
    for k in range(1, m + 1):
        acc = TracePolynomial.zero()
        for i in range(1, k + 1):
            sign = 1 if i % 2 == 1 else -1
            t = traces[k] if useOrderExponent else traces[i]
            acc = acc + t * primes[k - i] * Fraction(sign, 2 * k)
        primes.append(acc)
    value = TracePolynomial.zero()
    for k in range(m + 1):
        value = value + primes[k] * zPowers[m - k] * (1 if k % 2 == 0 else -1)
    return FmPolynomial(m, value, tuple(primes))


def skewSubstituted(f: TracePolynomial) -> TracePolynomial:
    return f.substitute({1: TracePolynomial.var(1) - TracePolynomial.var(1, True),
        2: TracePolynomial.var(2) - TracePolynomial.var(2, True)})


def verifyFmIdentity(m: int, n: int | None = None,
    useOrderExponent: bool = False) -> IdentityVerdict:
    """f_m(x1 - x1', x2 - x2') is a trace identity at size n (default 2m)."""
    size = 2 * m if n is None else n
    fm = newtonFm(m, useOrderExponent)
    verdict = isTraceIdentity(skewSubstituted(fm.value), size)
    logging.info("Identities: f_%d skew substitution at n=%d holds=%s (%s)",
        m, size, verdict.holds, verdict.mode)
    return verdict


def symplecticUnit(n: int) -> ExactMatrix:
    """Block diagonal J of size 2n with blocks [[0, 1], [-1, 0]]."""
    rows = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for b in range(n):
        rows[2 * b][2 * b + 1] = Fraction(1)
        rows[2 * b + 1][2 * b] = Fraction(-1)
    return ExactMatrix.fromRows(rows)


def directPower(M: ExactMatrix, d: int) -> ExactMatrix:
    out = M
    for _ in range(d - 1):
        out = out.directSum(M)
    return out


def fmSymplecticWitness(n: int, m: int, d: int) -> tuple[ExactMatrix, ExactMatrix]:
    """
    (S^{+d}, f_m(A1^{+d}, A2^{+d})) with S = diag(1, ..., 1, 0) of size 2n, A1 = -SJ and
    A2 = J, so that A1 A2 = S. The value is expected to be nonzero.
    """
    if d % 2 == 0:
        raise DEvenRejected(f"d must be odd, got {d}")
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    S = ExactMatrix.diagonal([1] * (2 * n - 1) + [0])
    J = symplecticUnit(n)
    A1, A2 = -(S * J), J
    X = [directPower(A1, d), directPower(A2, d)]
    value = evalNumeric(newtonFm(m).value, X)
    return directPower(S, d), value


def capelli(m: int) -> NCPolynomial:
    """sum over permutations p of sgn(p) x_p(1) x_{m+1} x_p(2) x_{m+2} ... x_{2m-1} x_p(m)."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    if m > CAPELLI_MAX:
        raise MTooLarge(f"capelli({m}) has {m}! terms, cap is m <= {CAPELLI_MAX}")
    out = TracePolynomial.zero()
    for perm in itertools.permutations(range(1, m + 1)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        letters: list[Letter] = []
        for pos, idx in enumerate(perm):
            letters.append(Letter(idx))
            if pos < m - 1:
                letters.append(Letter(m + 1 + pos))
        out = out + TracePolynomial.word(Word(tuple(letters))) * (-1 if inversions % 2 else 1)
    return out


def evaluateWordPolynomial(f: NCPolynomial, matrices: Sequence[ExactMatrix]) -> ExactMatrix:
    if not f.isWordOnly():
        raise ValueError("expected a polynomial without trace factors")
    return evalNumeric(f, matrices)


def symplecticInvolution(M: ExactMatrix) -> ExactMatrix:
    """(a b; c d) -> (d^t -b^t; -c^t a^t) with half-size blocks."""
    if not M.isSquare or M.rows % 2:
        raise OddDimension(f"symplectic involution needs even size, got {M.rows}x{M.cols}")
    h = M.rows // 2
    a, b = M.block(0, 0, h, h), M.block(0, h, h, h)
    c, d = M.block(h, 0, h, h), M.block(h, h, h, h)
    return stackMatrices([[d.transpose(), -b.transpose()], [-c.transpose(), a.transpose()]])


def cayleyHamiltonCheck(n: int, perturb: bool = False) -> bool:
    """(-a)^n + sum_j sigma_j (-a)^(n-j) = 0 for the generic symmetric a = (Xi + Xi^t) / 2."""
    if not 1 <= n <= CAYLEY_HAMILTON_MAX:
        raise ValueError(f"Cayley-Hamilton check supports 1 <= n <= {CAYLEY_HAMILTON_MAX}")
    xi = genericMatrix(GenericContext(n, 1), 1)
    a = (xi + xi.transpose()) * Fraction(1, 2)
    sigma = charCoeffs(a)
    if perturb:
        sigma[0] = sigma[0] + 1
    neg = -a
    powers = [ExactMatrix.identity(n)]
    for _ in range(n):
        powers.append(powers[-1] * neg)
    total = powers[n]
    for j in range(1, n + 1):
        total = total + powers[n - j] * sigma[j - 1]
    return total.isZero()


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __add__(self, other: GaussianRational) -> GaussianRational:
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __mul__(self, other: GaussianRational) -> GaussianRational:
        return GaussianRational(self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re)

    def conj(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def reducedTrace(self) -> Fraction:
        return 2 * self.re


@dataclass(frozen=True)
class Quaternion:
    a: Fraction
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __mul__(self, o: Quaternion) -> Quaternion:
        return Quaternion(
            self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a)

    def conj(self) -> Quaternion:
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def reducedTrace(self) -> Fraction:
        return 2 * self.a


def psi1(z: GaussianRational) -> ExactMatrix:
    return ExactMatrix.fromRows([[z.re, -z.im], [z.im, z.re]])


def psi2(q: Quaternion) -> ExactMatrix:
    a, b, c, d = q.a, q.b, q.c, q.d
    return ExactMatrix.fromRows([[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]])


def psiMatrix(entries: Sequence[Sequence[GaussianRational | Quaternion]]) -> ExactMatrix:
    """Entrywise embedding of a matrix over C or H into a real block matrix."""
    return stackMatrices([[psi1(x) if isinstance(x, GaussianRational) else psi2(x) for x in row]
        for row in entries])


def matMul(A: Sequence[Sequence[GaussianRational | Quaternion]],
    B: Sequence[Sequence[GaussianRational | Quaternion]],
) -> list[list[GaussianRational | Quaternion]]:
    out = []
    for i in range(len(A)):
        row = []
        for k in range(len(B[0])):
            acc = A[i][0] * B[0][k]
            for j in range(1, len(B)):
                acc = acc + A[i][j] * B[j][k]
            row.append(acc)
        out.append(row)
    return out


def conjTranspose(
    A: Sequence[Sequence[GaussianRational | Quaternion]],
) -> list[list[GaussianRational | Quaternion]]:
    return [[A[i][k].conj() for i in range(len(A))] for k in range(len(A[0]))]


def randomFraction(rng: np.random.Generator, radius: int = 5, denominator: int = 7) -> Fraction:
    return Fraction(int(rng.integers(-radius * denominator, radius * denominator + 1)), denominator)


def psiChecks(seed: int = 0, trials: int = 5) -> list[Verdict]:
    rng = np.random.default_rng(seed)

    def gauss() -> GaussianRational:
        return GaussianRational(randomFraction(rng), randomFraction(rng))

    def quat() -> Quaternion:
        return Quaternion(*(randomFraction(rng) for _ in range(4)))

    one = Fraction(1)
    units = psi2(Quaternion(0, one)) * psi2(Quaternion(0, 0, one)) == psi2(Quaternion(0, 0, 0, one))
    verdicts = [
        Verdict("psi1 unit", psi1(GaussianRational(one)) == ExactMatrix.identity(2)),
        Verdict("psi2 unit", psi2(Quaternion(one)) == ExactMatrix.identity(4)),
        Verdict("psi2 i*j = k", units),
    ]
    mult = trace = invol = True
    for _ in range(trials):
        z, w = gauss(), gauss()
        p, q = quat(), quat()
        mult &= psi1(z * w) == psi1(z) * psi1(w) and psi2(p * q) == psi2(p) * psi2(q)
        trace &= psi1(z).trace() == z.reducedTrace()
        trace &= psi2(p).trace() == 2 * p.reducedTrace()
        invol &= psi1(z.conj()) == psi1(z).transpose() and psi2(p.conj()) == psi2(p).transpose()
        # 2x2 matrices over C and H
        for make, scale in ((gauss, 1), (quat, 2)):
            A = [[make() for _ in range(2)] for _ in range(2)]
            B = [[make() for _ in range(2)] for _ in range(2)]
            mult &= psiMatrix(matMul(A, B)) == psiMatrix(A) * psiMatrix(B)
            reduced = sum((A[i][i].reducedTrace() for i in range(2)), Fraction(0))
            trace &= psiMatrix(A).trace() == scale * reduced
            invol &= psiMatrix(conjTranspose(A)) == psiMatrix(A).transpose()
    verdicts += [
        Verdict("psi multiplicative", mult, detail={"trials": trials}),
        Verdict("psi1 keeps reduced trace, psi2 doubles it", trace, detail={"trials": trials}),
        Verdict("psi turns conjugation into transpose", invol, detail={"trials": trials}),
    ]
    return verdicts


def psiEmbeddingsCheck(seed: int = 0, trials: int = 5) -> bool:
    return all(psiChecks(seed, trials))
