# pyright: basic
"""
Positivity certificates in the trace ring and their verifiers.

A certificate names trace polynomials h and constraint generators s; its value is rebuilt
in the free trace ring and every claimed equation is decided with the trace identity
oracle at the constraint set's matrix size. Nothing here searches for certificates.
"""
from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

import numpy as np

from tracealg.errors import BadIndex, DimensionMismatch, ModeMismatch, NotSymmetric, WrongSize
from tracealg.exprParser import parseTrace
from tracealg.genericEval import (
    GenericContext,
    IdentityVerdict,
    evalNumeric,
    evalSymbolic,
    isPsd,
    isTraceIdentity,
    randomRationalTuple,
)
from tracealg.scalarPoly import (
    ExactMatrix,
    MultiPoly,
    VarId,
    exactLdlt,
    formatRational,
    parseRational,
)
from tracealg.traceRing import TracePolynomial
from tracealg.verdictPublisher import EXACT, PROBABILISTIC, Verdict


def tp(value: TracePolynomial | str | int | Fraction) -> TracePolynomial:
    if isinstance(value, TracePolynomial):
        return value
    if isinstance(value, str):
        return parseTrace(value)
    return TracePolynomial.const(value)


def hermitianSquare(h: TracePolynomial) -> TracePolynomial:
    return h * h.involute()


def conjugate(h: TracePolynomial, s: TracePolynomial) -> TracePolynomial:
    return h * s * h.involute()


def combineVerdicts(verdicts: Sequence[IdentityVerdict]) -> IdentityVerdict:
    holds = all(v.holds for v in verdicts)
    mode = PROBABILISTIC if holds and any(v.mode == PROBABILISTIC for v in verdicts) else EXACT
    return IdentityVerdict(holds, mode, sum(v.points for v in verdicts))


@dataclass(frozen=True)
class ConstraintSet:
    generators: tuple[TracePolynomial, ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"matrix size must be positive, got {self.n}")
        for idx, s in enumerate(self.generators):
            if not s.isSymmetric():
                raise NotSymmetric(f"generator {idx} is not symmetric: {s}")

    def generator(self, idx: int) -> TracePolynomial:
        if not 0 <= idx < len(self.generators):
            raise BadIndex(f"generator index {idx} outside 0..{len(self.generators) - 1}")
        return self.generators[idx]

    def maxIndex(self) -> int:
        return max((s.maxIndex() for s in self.generators), default=0)

    def contains(self, X: Sequence[ExactMatrix]) -> bool:
        return all(isPsd(evalNumeric(s, X)) for s in self.generators)

    def toJson(self) -> dict[str, Any]:
        return {"n": self.n, "generators": [str(s) for s in self.generators]}

    @classmethod
    def fromJson(cls, data: Mapping[str, Any]) -> ConstraintSet:
        try:
            return cls(tuple(tp(str(s)) for s in data.get("generators", [])), int(data["n"]))
        except (KeyError, TypeError, AttributeError) as e:
            raise ValueError(f"malformed constraint set: {e!r}") from e


# --------- Omega: sums of weighted products of tr(h h^*) ---------
@dataclass(frozen=True)
class OmegaProduct:
    factors: tuple[TracePolynomial, ...] = ()
    weight: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.weight < 0:
            raise ValueError(f"Omega weights must be non-negative, got {self.weight}")

    def value(self) -> TracePolynomial:
        out = TracePolynomial.const(self.weight)
        for h in self.factors:
            out = out * hermitianSquare(h).trace()
        return out


@dataclass(frozen=True)
class OmegaCertificate:
    products: tuple[OmegaProduct, ...] = ()

    def value(self) -> TracePolynomial:
        return sum((p.value() for p in self.products), TracePolynomial.zero())

    @classmethod
    def one(cls) -> OmegaCertificate:
        return cls((OmegaProduct(),))


@dataclass(frozen=True)
class TraceProduct:
    """prod_i tr(h_i s_i h_i^*), an element of the extended generator set."""
    factors: tuple[tuple[TracePolynomial, int], ...]


GeneratorRef = Union[int, TraceProduct]


def generatorValue(ref: GeneratorRef, S: ConstraintSet) -> TracePolynomial:
    if isinstance(ref, int):
        return S.generator(ref)
    out = TracePolynomial.const(1)
    for h, idx in ref.factors:
        out = out * conjugate(h, S.generator(idx)).trace()
    return out


@dataclass(frozen=True)
class OmegaTerm:
    omega: OmegaCertificate


@dataclass(frozen=True)
class SquareTerm:
    h: TracePolynomial
    omega: OmegaCertificate = field(default_factory=OmegaCertificate.one)


@dataclass(frozen=True)
class ConjugateTerm:
    h: TracePolynomial
    gen: GeneratorRef


@dataclass(frozen=True)
class ScaledTraceTerm:
    h: TracePolynomial
    gen: GeneratorRef
    omega: OmegaCertificate


CertificateTerm = Union[OmegaTerm, SquareTerm, ConjugateTerm, ScaledTraceTerm]


@dataclass(frozen=True)
class CyclicQMCertificate:
    terms: tuple[CertificateTerm, ...] = ()


def termValue(term: CertificateTerm, S: ConstraintSet) -> TracePolynomial:
    if isinstance(term, OmegaTerm):
        return term.omega.value()
    if isinstance(term, SquareTerm):
        return term.omega.value() * hermitianSquare(term.h)
    if isinstance(term, ConjugateTerm):
        return conjugate(term.h, generatorValue(term.gen, S))
    return conjugate(term.h, generatorValue(term.gen, S)).trace() * term.omega.value()


def certificateValue(cert: OmegaCertificate | CyclicQMCertificate,
    S: ConstraintSet) -> TracePolynomial:
    if isinstance(cert, OmegaCertificate):
        return cert.value()
    return sum((termValue(t, S) for t in cert.terms), TracePolynomial.zero())


# --------- Krivine-Stengle style certificates ---------
KS_MODES = ("psd", "pd", "zero")


@dataclass(frozen=True)
class KSCertificate:
    mode: str
    t1: CyclicQMCertificate | None
    t2: CyclicQMCertificate
    k: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in KS_MODES:
            raise ModeMismatch(f"unknown mode {self.mode!r}")
        if self.mode == "pd":
            if self.k is not None or self.t1 is None:
                raise ModeMismatch("pd certificates need t1 and no k")
        elif self.k is None or self.k < 0:
            raise ModeMismatch(f"{self.mode} certificates need k >= 0")
        elif self.mode == "psd" and self.t1 is None:
            raise ModeMismatch("psd certificates need t1")
        elif self.mode == "zero" and self.t1 is not None:
            raise ModeMismatch("zero certificates carry no t1")


def verifyKs(a: TracePolynomial, cert: KSCertificate, S: ConstraintSet) -> IdentityVerdict:
    """
    psd:  a t1 = t1 a = a^(2k) + t2
    pd:   a t1 = t1 a = 1 + t2
    zero: -a^(2k) = t2
    each equation taken modulo the trace identities of n x n matrices.
    """
    if not a.isSymmetric():
        raise NotSymmetric(f"a is not symmetric: {a}")
    t2 = certificateValue(cert.t2, S)
    if cert.mode == "zero":
        assert cert.k is not None
        return isTraceIdentity(-a.power(2 * cert.k) - t2, S.n)
    assert cert.t1 is not None
    t1 = certificateValue(cert.t1, S)
    rhs = (a.power(2 * cert.k) if cert.mode == "psd" and cert.k is not None
        else TracePolynomial.const(1)) + t2
    verdict = combineVerdicts([isTraceIdentity(a * t1 - rhs, S.n),
        isTraceIdentity(t1 * a - rhs, S.n)])
    logging.info("Positivity: %s certificate holds=%s (%s)", cert.mode, verdict.holds, verdict.mode)
    return verdict


@dataclass(frozen=True)
class EmptyRefutation:
    """-1 = sum_i omega_i prod_j tr(h_ij s_ij h_ij^*)."""
    terms: tuple[tuple[OmegaCertificate, TraceProduct], ...] = ()


def verifyEmptyRefutation(S: ConstraintSet, cert: EmptyRefutation) -> IdentityVerdict:
    total = TracePolynomial.zero()
    for omega, product in cert.terms:
        total = total + omega.value() * generatorValue(product, S)
    return isTraceIdentity(total + 1, S.n)


@dataclass(frozen=True)
class IdealTerm:
    """left * g * right, or Tr(left * g) * right when traced."""
    left: TracePolynomial
    gen: int
    right: TracePolynomial = field(default_factory=lambda: TracePolynomial.const(1))
    traced: bool = False


@dataclass(frozen=True)
class NullstellensatzCertificate:
    omega: OmegaCertificate = OmegaCertificate()
    terms: tuple[IdealTerm, ...] = ()


def verifyNullstellensatz(h: TracePolynomial, idealGenerators: Sequence[TracePolynomial],
    cert: NullstellensatzCertificate, k: int, n: int) -> IdentityVerdict:
    """-(h^* h)^k = omega + sum of ideal terms, modulo n x n trace identities."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    total = cert.omega.value()
    for term in cert.terms:
        if not 0 <= term.gen < len(idealGenerators):
            raise BadIndex(f"ideal generator index {term.gen} outside "
                f"0..{len(idealGenerators) - 1}")
        g = idealGenerators[term.gen]
        total = total + ((term.left * g).trace() * term.right if term.traced
            else term.left * g * term.right)
    target = -(h.involute() * h).power(k)
    return isTraceIdentity(target - total, n)


def verifyArchimedeanBound(cert: CyclicQMCertificate, S: ConstraintSet, rho: int | Fraction,
    g: int | None = None) -> IdentityVerdict:
    """certificate value = rho - sum_j x_j x_j^* modulo n x n trace identities."""
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    count = g if g is not None else max(S.maxIndex(), 1)
    target = TracePolynomial.const(rho)
    for j in range(1, count + 1):
        target = target - hermitianSquare(TracePolynomial.var(j))
    return isTraceIdentity(certificateValue(cert, S) - target, S.n)


# --------- central reduction ---------
def centralReduceSigma(s: TracePolynomial, n: int) -> list[TracePolynomial]:
    """[sigma_1(s), ..., sigma_n(s)] from the power sums Tr(s^i) by Newton's identities."""
    if not s.isSymmetric():
        raise NotSymmetric(f"s is not symmetric: {s}")
    powerSums = [TracePolynomial.zero()] + [s.power(i).trace() for i in range(1, n + 1)]
    sigma = [TracePolynomial.const(1)]
    for k in range(1, n + 1):
        acc = TracePolynomial.zero()
        for i in range(1, k + 1):
            acc = acc + sigma[k - i] * powerSums[i] * (1 if i % 2 == 1 else -1)
        sigma.append(acc * Fraction(1, k))
    return sigma[1:]


@dataclass(frozen=True)
class Example61Reduction:
    values: tuple[TracePolynomial, ...]       # c1..c4
    sigmaForms: tuple[TracePolynomial, ...]   # the same in sigma_1..sigma_3
    verdicts: tuple[IdentityVerdict, ...]

    @property
    def holds(self) -> bool:
        return all(self.verdicts)


def example61Values(s: TracePolynomial) -> tuple[TracePolynomial, ...]:
    """c1 = Tr(s), c2 = Tr(l2 s l2), c3 = Tr(l3 s l3), c4 = Tr(l4 s l4) with sigma_j at size 3."""
    s1, s2, _ = centralReduceSigma(s, 3)
    l2 = s - s1
    l3 = s.power(2) - s1 * s + s2
    l4 = s - s1 - 1
    return (s.trace(), (l2 * s * l2).trace(), (l3 * s * l3).trace(), (l4 * s * l4).trace())


def centralReduceExample61(s: TracePolynomial, n: int = 3) -> Example61Reduction:
    """
    c1 = s1, c2 = s1 s2 + 3 s3, c3 = s2 s3, c4 = s1 + 4 s2 + 3 s3 + s1 s2 modulo the
    trace identities of 3 x 3 matrices, s_j = sigma_j(s).
    """
    if n != 3:
        raise WrongSize(f"this reduction is stated for n = 3, got {n}")
    s1, s2, s3 = centralReduceSigma(s, 3)
    values = example61Values(s)
    forms = (s1, s1 * s2 + s3 * 3, s2 * s3, s1 + s2 * 4 + s3 * 3 + s1 * s2)
    verdicts = tuple(isTraceIdentity(c - e, 3) for c, e in zip(values, forms))
    return Example61Reduction(values, forms, verdicts)


# --------- negativity functional ---------
@dataclass(frozen=True)
class NegativityWitness:
    coefficients: tuple[Fraction, ...]  # f = sum coefficients[i] zeta^i
    value: Fraction                     # sum_j f(lambda_j)^2 lambda_j

    def at(self, x: Fraction) -> Fraction:
        return sum((c * x**i for i, c in enumerate(self.coefficients)), Fraction(0))


def negativityFunctional(lambdas: Sequence[int | Fraction]) -> NegativityWitness | None:
    """
    A polynomial f with sum_j f(l_j)^2 l_j < 0, built from the power sums p_i = sum_j l_j^i
    through the Hankel matrix P[i][j] = p_{i+j+1}; None when P is positive semidefinite.
    """
    lam = [Fraction(x) for x in lambdas]
    size = len(lam)
    if size == 0:
        return None
    powerSums = [sum((x**i for x in lam), Fraction(0)) for i in range(2 * size)]
    P = ExactMatrix.fromRows([[powerSums[i + j + 1] for j in range(size)] for i in range(size)])
    result = exactLdlt(P)
    if result.success:
        return None
    assert result.witness is not None
    witness = NegativityWitness(result.witness, Fraction(0))
    value = sum((witness.at(x) ** 2 * x for x in lam), Fraction(0))
    if value >= 0:
        raise ArithmeticError(f"indefinite direction gave non-negative value {value}")
    return NegativityWitness(result.witness, value)


# --------- Gram matrices ---------
def etaVar(i: int) -> VarId:
    return VarId.aux(0, 1, i)


@dataclass(frozen=True)
class GramCheck:
    identityHolds: bool
    psd: bool

    def __bool__(self) -> bool:
        return self.identityHolds and self.psd


def gramVerify(f: TracePolynomial, basis: Sequence[MultiPoly], G: ExactMatrix, n: int) -> GramCheck:
    """u f u^t = v G v^t in vector variables u, and G is positive semidefinite."""
    if not G.isSquare or G.rows != len(basis):
        raise DimensionMismatch(f"Gram matrix is {G.rows}x{G.cols}, basis has {len(basis)} entries")
    F = evalSymbolic(f, GenericContext(n, max(f.maxIndex(), 1)))
    form = MultiPoly.zero()
    for i in range(n):
        for k in range(n):
            if F[i, k] != 0:
                form = form + MultiPoly.var(etaVar(i + 1)) * MultiPoly.var(etaVar(k + 1)) * F[i, k]
    gram = MultiPoly.zero()
    for a in range(G.rows):
        for b in range(G.cols):
            if G[a, b] != 0:
                gram = gram + basis[a] * basis[b] * G[a, b]
    matches = form == gram
    psd = isPsd(G) if G.isSymmetric() else False
    logging.debug("Positivity: Gram identity %s, PSD %s", matches, psd)
    return GramCheck(matches, psd)


INTRO_F = "5*Tr(x1*x1') - 2*Tr(x1)*(x1 + x1')"


def introPolynomial() -> TracePolynomial:
    return parseTrace(INTRO_F)


def xi(i: int, k: int) -> MultiPoly:
    return MultiPoly.var(VarId.xi(1, i, k))


@dataclass(frozen=True)
class GramData:
    f: TracePolynomial
    basis: tuple[MultiPoly, ...]
    G: ExactMatrix


def exampleGram(alpha: int | Fraction) -> GramData:
    """Gram data of the intro polynomial at n = 2; G_alpha is PSD iff -7/2 <= alpha <= -5/2."""
    a = Fraction(alpha)
    e1, e2 = MultiPoly.var(etaVar(1)), MultiPoly.var(etaVar(2))
    basis = (xi(2, 2) * e1, xi(2, 1) * e2, xi(1, 2) * e2, xi(1, 1) * e1,
        xi(2, 2) * e2, xi(2, 1) * e1, xi(1, 2) * e1, xi(1, 1) * e2)
    m = -a - 2
    upper = [[5, a, a, -2], [a, 5, 0, m], [a, 0, 5, m], [-2, m, m, 1]]
    lower = [[1, m, m, -2], [m, 5, 0, a], [m, 0, 5, a], [-2, a, a, 5]]
    G = ExactMatrix.fromRows(upper).directSum(ExactMatrix.fromRows(lower))
    return GramData(introPolynomial(), basis, G)


def tildeH2() -> ExactMatrix:
    return ExactMatrix.fromRows([[xi(1, 2) + xi(2, 1), xi(2, 2) - xi(1, 1)],
        [xi(1, 1) - xi(2, 2), xi(1, 2) + xi(2, 1)]])


def tildeH3() -> ExactMatrix:
    return ExactMatrix.fromRows([[(xi(1, 2) + xi(2, 1)) * 2, xi(1, 1) - xi(2, 2) * 3],
        [xi(2, 2) - xi(1, 1) * 3, (xi(1, 2) + xi(2, 1)) * 2]])


def introH() -> tuple[TracePolynomial, TracePolynomial, TracePolynomial]:
    return (parseTrace("x1 - x1'"), parseTrace("x1*x1' - x1'*x1"),
        parseTrace("x1^2 - 2*x1*x1' + 2*x1'*x1 - x1'^2"))


def introDecompositionChecks() -> list[Verdict]:
    ctx = GenericContext(2, 1)
    H1, H2, H3 = (evalSymbolic(h, ctx) for h in introH())
    F = evalSymbolic(introPolynomial(), ctx)
    T2, T3 = tildeH2(), tildeH3()
    d = xi(1, 2) - xi(2, 1)
    d2 = d * d
    sq = lambda M: M * M.transpose()  # noqa: E731
    half = Fraction(1, 2)
    checks = {
        "H1 H1^t = (xi12 - xi21)^2": sq(H1) - ExactMatrix.scalar(2, d2),
        "H2 H2^t = (xi12 - xi21)^2 H~2 H~2^t": sq(H2) - sq(T2) * d2,
        "H3 H3^t = H1 H~3 H~3^t H1^t": sq(H3) - H1 * sq(T3) * H1.transpose(),
        "f = 5/2 (xi12 - xi21)^2 + 1/2 H~2 H~2^t + 1/2 H~3 H~3^t":
            F - ExactMatrix.scalar(2, d2 * Fraction(5, 2)) - (sq(T2) + sq(T3)) * half,
        "H1 f H1^t = 5/2 (H1 H1^t)^2 + 1/2 H2 H2^t + 1/2 H3 H3^t":
            H1 * F * H1.transpose() - sq(H1) * sq(H1) * Fraction(5, 2) - (sq(H2) + sq(H3)) * half,
    }
    return [Verdict(name, diff.isZero()) for name, diff in checks.items()]


def displayedH3RelationHolds() -> bool:
    """H3 H3^t = (xi12 - xi21)^2 H~3 H~3^t taken literally; it does not hold."""
    H3 = evalSymbolic(introH()[2], GenericContext(2, 1))
    d = xi(1, 2) - xi(2, 1)
    T3 = tildeH3()
    return (H3 * H3.transpose() - T3 * T3.transpose() * (d * d)).isZero()


# --------- sampling ---------
@dataclass(frozen=True)
class RefutationWitness:
    trial: int
    matrices: tuple[ExactMatrix, ...]
    value: ExactMatrix


def diagonalTuple(n: int, g: int, rng: np.random.Generator, radius: int,
    denominator: int | None) -> list[ExactMatrix]:
    return [ExactMatrix.diagonal([M[i, i] for i in range(n)])
        for M in randomRationalTuple(n, g, rng, radius, denominator)]


def sampleRefute(f: TracePolynomial, S: ConstraintSet, trials: int, radius: int = 2,
    seed: int = 0, denominator: int | None = None,
    strategy: str = "uniform") -> RefutationWitness | None:
    """
    First sampled X in K_S with f(X) not PSD, by trial index. strategy "uniform" draws every
    entry uniformly from the grid on [-radius, radius]; "mixed" alternates those tuples with
    diagonal ones.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if strategy not in ("uniform", "mixed"):
        raise ValueError(f"unknown sampling strategy {strategy!r}")
    if not f.isSymmetric():
        raise NotSymmetric(f"f is not symmetric: {f}")
    g = max(f.maxIndex(), S.maxIndex(), 1)
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        if strategy == "mixed" and trial % 2 == 1:
            X = diagonalTuple(S.n, g, rng, radius, denominator)
        else:
            X = randomRationalTuple(S.n, g, rng, radius, denominator)
        if not S.contains(X):
            continue
        value = evalNumeric(f, X)
        if not isPsd(value):
            logging.info("Positivity: refuted at trial %d", trial)
            return RefutationWitness(trial, tuple(X), value)
    return None


# --------- JSON ---------
def omegaFromJson(data: Sequence[Mapping[str, Any]]) -> OmegaCertificate:
    return OmegaCertificate(tuple(OmegaProduct(tuple(tp(str(h)) for h in p.get("factors", [])),
        parseRational(str(p.get("weight", "1")))) for p in data))


def omegaToJson(omega: OmegaCertificate) -> list[dict[str, Any]]:
    return [{"weight": formatRational(p.weight), "factors": [str(h) for h in p.factors]}
        for p in omega.products]


def generatorFromJson(data: Any) -> GeneratorRef:
    if isinstance(data, int):
        return data
    if isinstance(data, Mapping) and "product" in data:
        return TraceProduct(tuple((tp(str(f["h"])), int(f["gen"])) for f in data["product"]))
    raise ValueError(f"bad generator reference {data!r}")


def generatorToJson(ref: GeneratorRef) -> Any:
    if isinstance(ref, int):
        return ref
    return {"product": [{"h": str(h), "gen": idx} for h, idx in ref.factors]}


def termFromJson(data: Mapping[str, Any]) -> CertificateTerm:
    kind = data.get("kind")
    if kind == "omega":
        return OmegaTerm(omegaFromJson(data["omega"]))
    if kind == "square":
        omega = omegaFromJson(data["omega"]) if "omega" in data else OmegaCertificate.one()
        return SquareTerm(tp(str(data["h"])), omega)
    if kind == "conjugate":
        return ConjugateTerm(tp(str(data["h"])), generatorFromJson(data["gen"]))
    if kind == "scaledTrace":
        return ScaledTraceTerm(tp(str(data["h"])), generatorFromJson(data["gen"]),
            omegaFromJson(data["omega"]))
    raise ValueError(f"unknown certificate term kind {kind!r}")


def termToJson(term: CertificateTerm) -> dict[str, Any]:
    if isinstance(term, OmegaTerm):
        return {"kind": "omega", "omega": omegaToJson(term.omega)}
    if isinstance(term, SquareTerm):
        return {"kind": "square", "h": str(term.h), "omega": omegaToJson(term.omega)}
    if isinstance(term, ConjugateTerm):
        return {"kind": "conjugate", "h": str(term.h), "gen": generatorToJson(term.gen)}
    return {"kind": "scaledTrace", "h": str(term.h), "gen": generatorToJson(term.gen),
        "omega": omegaToJson(term.omega)}


def qmFromJson(data: Sequence[Mapping[str, Any]]) -> CyclicQMCertificate:
    return CyclicQMCertificate(tuple(termFromJson(t) for t in data))


def ksCertificateFromJson(data: Mapping[str, Any]) -> KSCertificate:
    try:
        mode = str(data["mode"])
        t1 = qmFromJson(data["t1"]) if data.get("t1") is not None else None
        t2 = qmFromJson(data.get("t2", []))
        k = data.get("k")
    except (KeyError, TypeError, AttributeError) as e:
        raise ValueError(f"malformed certificate: {e!r}") from e
    return KSCertificate(mode, t1, t2, None if k is None else int(k))


def ksCertificateToJson(cert: KSCertificate) -> dict[str, Any]:
    out: dict[str, Any] = {"mode": cert.mode, "t2": [termToJson(t) for t in cert.t2.terms]}
    if cert.t1 is not None:
        out["t1"] = [termToJson(t) for t in cert.t1.terms]
    if cert.k is not None:
        out["k"] = cert.k
    return out
