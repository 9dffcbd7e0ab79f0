# pyright: basic
"""
Evaluation of trace polynomials at generic matrices Xi_j = (xi_{j,i,k}) and at rational
matrix tuples, the trace identity oracle, characteristic coefficients and exact PSD tests.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from tracealg.config import currentSettings
from tracealg.errors import IndexOutOfRange, NotSymmetric, SizeMismatch, TermBudgetExceeded
from tracealg.scalarPoly import (
    ExactMatrix,
    Family,
    MultiPoly,
    VarId,
    formatRational,
    parseRational,
    requireRational,
)
from tracealg.traceRing import Letter, TracePolynomial, TraceSymbol, Word
from tracealg.verdictPublisher import EXACT, PROBABILISTIC

# integer sample range for the probabilistic identity test
SAMPLE_RANGE_BITS = 32


@dataclass(frozen=True)
class GenericContext:
    n: int
    g: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.g < 1:
            raise ValueError(f"context needs n >= 1 and g >= 1, got n={self.n} g={self.g}")


def genericMatrix(ctx: GenericContext, j: int) -> ExactMatrix:
    if not 1 <= j <= ctx.g:
        raise IndexOutOfRange(f"generic matrix index {j} outside 1..{ctx.g}")
    return ExactMatrix.fromRows([[MultiPoly.var(VarId.xi(j, i, k))
        for k in range(1, ctx.n + 1)] for i in range(1, ctx.n + 1)])


def transpose(M: ExactMatrix) -> ExactMatrix:
    return M.transpose()


class TraceEvaluator:
    """Evaluates at one matrix tuple, caching letter, word and trace symbol values."""

    def __init__(self, matrices: Sequence[ExactMatrix], n: int):
        self.matrices = list(matrices)
        self.n = n
        self.letters: dict[Letter, ExactMatrix] = {}
        self.words: dict[Word, ExactMatrix] = {}
        self.symbols: dict[TraceSymbol, Any] = {}

    def letterValue(self, x: Letter) -> ExactMatrix:
        if x not in self.letters:
            if x.index > len(self.matrices):
                raise IndexOutOfRange(f"x{x.index} has no matrix")
            M = self.matrices[x.index - 1]
            self.letters[x] = M.transpose() if x.starred else M
        return self.letters[x]

    def wordValue(self, w: Word) -> ExactMatrix:
        if w not in self.words:
            if w.isOne():
                value = ExactMatrix.identity(self.n)
            elif len(w) == 1:
                value = self.letterValue(w.letters[0])
            else:
                # reuse the prefix
                value = self.wordValue(Word(w.letters[:-1])) * self.letterValue(w.letters[-1])
            self.words[w] = value
        return self.words[w]

    def symbolValue(self, s: TraceSymbol) -> Any:
        if s not in self.symbols:
            self.symbols[s] = Fraction(self.n) if s.rep.isOne() else self.wordValue(s.rep).trace()
        return self.symbols[s]

    def evaluate(self, f: TracePolynomial) -> ExactMatrix:
        byWord: dict[Word, Any] = {}
        for m, c in f.terms.items():
            scalar: Any = c
            for s in m.pure:
                scalar = scalar * self.symbolValue(s)
            byWord[m.word] = byWord[m.word] + scalar if m.word in byWord else scalar
        result = ExactMatrix.zeros(self.n, self.n)
        for w, scalar in byWord.items():
            if w.isOne():
                result = result + ExactMatrix.scalar(self.n, scalar)
            else:
                result = result + self.wordValue(w) * scalar
        return result


def evalSymbolic(f: TracePolynomial, ctx: GenericContext) -> ExactMatrix:
    if f.maxIndex() > ctx.g:
        raise IndexOutOfRange(f"x{f.maxIndex()} used but context has g={ctx.g}")
    matrices = [genericMatrix(ctx, j) for j in range(1, ctx.g + 1)]
    return TraceEvaluator(matrices, ctx.n).evaluate(f)


def checkTuple(X: Sequence[ExactMatrix], n: int | None = None) -> int:
    sizes = {(M.rows, M.cols) for M in X}
    if n is not None:
        sizes.add((n, n))
    if len(sizes) != 1:
        raise SizeMismatch(f"matrices must be square of one size, got {sorted(sizes)}")
    rows, cols = sizes.pop()
    if rows != cols:
        raise SizeMismatch(f"matrices must be square, got {rows}x{cols}")
    return rows


def evalNumeric(f: TracePolynomial, X: Sequence[ExactMatrix], n: int | None = None) -> ExactMatrix:
    size = checkTuple(X, n)
    if f.maxIndex() > len(X):
        raise SizeMismatch(f"x{f.maxIndex()} used but only {len(X)} matrices given")
    return TraceEvaluator(X, size).evaluate(f)


def xiAssignment(X: Sequence[ExactMatrix]) -> dict[VarId, Fraction]:
    """Point of the xi variables corresponding to a rational matrix tuple."""
    out: dict[VarId, Fraction] = {}
    for j, M in enumerate(X, start=1):
        for i, row in enumerate(requireRational(M), start=1):
            for k, value in enumerate(row, start=1):
                out[VarId.xi(j, i, k)] = value
    return out


def uAssignment(u: ExactMatrix) -> dict[VarId, Fraction]:
    return {VarId.u(i, k): value for i, row in enumerate(requireRational(u), start=1)
        for k, value in enumerate(row, start=1)}


@dataclass(frozen=True)
class IdentityVerdict:
    holds: bool
    mode: str = EXACT
    points: int = 0
    witness: tuple[ExactMatrix, ...] | None = field(default=None, compare=False)

    def __bool__(self) -> bool:
        return self.holds


def samplesForFailureBound(degree: int) -> int:
    """Points needed so a nonzero polynomial of this degree survives with probability < 2^-e."""
    exponent = currentSettings().failureExponent
    perPoint = SAMPLE_RANGE_BITS - math.log2(max(degree, 1))
    if perPoint <= 0:
        raise ValueError(f"degree {degree} too large for {SAMPLE_RANGE_BITS}-bit sampling")
    return math.ceil(exponent / perPoint)


def isTraceIdentity(f: TracePolynomial, n: int, seed: int = 0) -> IdentityVerdict:
    """Decide whether f vanishes on all n x n tuples by expanding at generic matrices."""
    g = max(f.maxIndex(), 1)
    try:
        holds = evalSymbolic(f, GenericContext(n, g)).isZero()
        return IdentityVerdict(holds, EXACT)
    except TermBudgetExceeded as e:
        logging.info("GenericEval: expansion over budget (%s), sampling instead", e)
    count = samplesForFailureBound(f.degree())
    rng = np.random.default_rng(seed)
    for point in range(count):
        X = [ExactMatrix.fromRows([[Fraction(int(rng.integers(0, 2**SAMPLE_RANGE_BITS)))
            for _ in range(n)] for _ in range(n)]) for _ in range(g)]
        if not evalNumeric(f, X).isZero():
            # a nonzero value is a proof
            return IdentityVerdict(False, EXACT, point + 1, tuple(X))
    return IdentityVerdict(True, PROBABILISTIC, count)


def charCoeffs(M: ExactMatrix) -> list[Any]:
    """[sigma_1, ..., sigma_n] with char poly t^n - sigma_1 t^(n-1) + sigma_2 t^(n-2) - ..."""
    if not M.isSquare:
        raise SizeMismatch("characteristic coefficients need a square matrix")
    n = M.rows
    # Faddeev-LeVerrier: c[n] = 1, M_k = A M_{k-1} + c[n-k+1] I, c[n-k] = -tr(A M_k) / k
    c: list[Any] = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    Mk = ExactMatrix.zeros(n, n)
    for k in range(1, n + 1):
        Mk = M * Mk + ExactMatrix.scalar(n, c[n - k + 1])
        c[n - k] = (M * Mk).trace() * Fraction(-1, k)
    return [c[n - k] if k % 2 == 0 else -c[n - k] for k in range(1, n + 1)]


def requireSymmetric(M: ExactMatrix) -> None:
    if not M.isSymmetric():
        raise NotSymmetric(f"matrix is not symmetric: {M}")


def isPsd(M: ExactMatrix) -> bool:
    requireSymmetric(M)
    return all(Fraction(s) >= 0 for s in charCoeffs(ExactMatrix.fromRows(requireRational(M))))


def isPd(M: ExactMatrix) -> bool:
    requireSymmetric(M)
    return all(Fraction(s) > 0 for s in charCoeffs(ExactMatrix.fromRows(requireRational(M))))


def groupMatrix(n: int) -> ExactMatrix:
    return ExactMatrix.fromRows([[MultiPoly.var(VarId.u(i, k)) for k in range(1, n + 1)]
        for i in range(1, n + 1)])


def groupImages(variables: Sequence[VarId], n: int) -> dict[VarId, MultiPoly]:
    """xi_{j,i,k} -> (u Xi_j u^t)_{i,k} for every xi variable given."""
    images: dict[VarId, MultiPoly] = {}
    for v in variables:
        if v.family != Family.Xi:
            continue
        if not (1 <= v.i <= n and 1 <= v.k <= n):
            raise IndexOutOfRange(f"{v.name} outside size {n}")
        acc = MultiPoly.zero()
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                acc = acc + MultiPoly.var(VarId.u(v.i, a)) * MultiPoly.var(VarId.xi(v.j, a, b)) \
                    * MultiPoly.var(VarId.u(v.k, b))
        images[v] = acc
    return images


def applyGroupElement(f: MultiPoly | ExactMatrix, ctx: GenericContext,
    frame: bool = False) -> MultiPoly | ExactMatrix:
    """
    f^u: substitute xi_{j,i,k} by the (i,k) entry of u Xi_j u^t with symbolic u.
    No relation u u^t = 1 is applied. With frame=True a matrix result is conjugated back
    to u^t f^u u, which equals f for a concomitant once u is orthogonal.
    """
    if isinstance(f, MultiPoly):
        return f.substitute(groupImages(f.usedVariables(), ctx.n))
    used: set[VarId] = set()
    for x in f.entries:
        if isinstance(x, MultiPoly):
            used.update(x.usedVariables())
    images = groupImages(sorted(used), ctx.n)
    moved = f.map(lambda x: x.substitute(images) if isinstance(x, MultiPoly) else x)
    if not frame:
        return moved
    u = groupMatrix(ctx.n)
    return u.transpose() * moved * u


def randomRationalTuple(n: int, g: int, rng: np.random.Generator, radius: int = 2,
    denominator: int | None = None) -> list[ExactMatrix]:
    """g random n x n matrices on the grid (1/denominator)Z within [-radius, radius]."""
    den = denominator or currentSettings().sampleDenominator
    bound = radius * den
    return [ExactMatrix.fromRows([[Fraction(int(rng.integers(-bound, bound + 1)), den)
        for _ in range(n)] for _ in range(n)]) for _ in range(g)]


def randomSymmetric(n: int, rng: np.random.Generator, radius: int = 2,
    denominator: int | None = None) -> ExactMatrix:
    (M,) = randomRationalTuple(n, 1, rng, radius, denominator)
    return (M + M.transpose()) * Fraction(1, 2)


def matrixTupleToJson(matrices: Sequence[ExactMatrix]) -> dict[str, Any]:
    n = checkTuple(matrices) if matrices else 0
    return {"n": n, "g": len(matrices),
        "matrices": [[[formatRational(x) for x in row] for row in requireRational(M)]
            for M in matrices]}


def matrixTupleFromJson(data: Mapping[str, Any]) -> list[ExactMatrix]:
    try:
        n, g = int(data["n"]), int(data["g"])
        raw = data["matrices"]
    except (KeyError, TypeError) as e:
        raise SizeMismatch(f"matrix tuple needs n, g and matrices: {e}") from e
    if not isinstance(raw, list):
        raise SizeMismatch("matrices must be a list")
    if len(raw) != g:
        raise SizeMismatch(f"declared g={g} but {len(raw)} matrices given")
    for j, M in enumerate(raw, start=1):
        if not (isinstance(M, list) and len(M) == n
            and all(isinstance(row, list) and len(row) == n for row in M)):
            raise SizeMismatch(f"matrix {j} is not an {n} x {n} list of rows")
    matrices = [ExactMatrix.fromRows([[parseRational(str(x)) for x in row] for row in M])
        for M in raw]
    if matrices:
        checkTuple(matrices, n)
    return matrices
