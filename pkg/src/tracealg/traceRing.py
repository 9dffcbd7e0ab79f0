"""
The free trace ring with involution.

Words are over letters x_j and x_j' (the involution of x_j). A TraceSymbol is Tr(w) in
canonical form: the smallest word among the cyclic rotations of w and of w'. Tr(1) is a
formal symbol here; it becomes the matrix size only on evaluation.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

from tracealg.errors import MissingImage
from tracealg.scalarPoly import formatRational


@dataclass(frozen=True, order=True)
class Letter:
    # ordered x1 < x1' < x2 < x2' < ...
    index: int
    starred: bool = False

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"letter index must be positive, got {self.index}")

    def involute(self) -> Letter:
        return Letter(self.index, not self.starred)

    def __str__(self) -> str:
        return f"x{self.index}" + ("'" if self.starred else "")


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    @classmethod
    def of(cls, *letters: Letter) -> Word:
        return cls(tuple(letters))

    @classmethod
    def one(cls) -> Word:
        return cls(())

    def sortKey(self) -> tuple[int, tuple[Letter, ...]]:
        return (len(self.letters), self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def involute(self) -> Word:
        return Word(tuple(x.involute() for x in reversed(self.letters)))

    def rotate(self, k: int) -> Word:
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k])

    def rotations(self) -> list[Word]:
        return [self.rotate(k) for k in range(max(len(self.letters), 1))]

    def maxIndex(self) -> int:
        return max((x.index for x in self.letters), default=0)

    def isOne(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return "*".join(str(x) for x in self.letters) if self.letters else "1"


@lru_cache(maxsize=65536)
def canonicalLetters(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    if not letters:
        return letters
    starred = tuple(x.involute() for x in reversed(letters))
    n = len(letters)
    return min(min(w[k:] + w[:k] for k in range(n)) for w in (letters, starred))


@dataclass(frozen=True)
class TraceSymbol:
    rep: Word

    @classmethod
    def of(cls, w: Word) -> TraceSymbol:
        return cls(Word(canonicalLetters(w.letters)))

    def sortKey(self) -> tuple[int, tuple[Letter, ...]]:
        return self.rep.sortKey()

    @property
    def degree(self) -> int:
        return len(self.rep)

    def __str__(self) -> str:
        return f"Tr({self.rep})"


@dataclass(frozen=True)
class TraceMonomial:
    """Product of trace symbols (kept sorted) with a word on the right."""
    pure: tuple[TraceSymbol, ...] = ()
    word: Word = Word()

    @classmethod
    def make(cls, pure: Iterable[TraceSymbol], word: Word) -> TraceMonomial:
        return cls(tuple(sorted(pure, key=TraceSymbol.sortKey)), word)

    def __mul__(self, other: TraceMonomial) -> TraceMonomial:
        return TraceMonomial.make(self.pure + other.pure, self.word * other.word)

    def sortKey(self) -> tuple[Any, ...]:
        return (self.degree, self.word.sortKey(), tuple(p.sortKey() for p in self.pure))

    @property
    def degree(self) -> int:
        return len(self.word) + sum(p.degree for p in self.pure)

    def isOne(self) -> bool:
        return not self.pure and self.word.isOne()

    def __str__(self) -> str:
        factors = [str(p) for p in self.pure]
        if not self.word.isOne():
            factors.append(str(self.word))
        return "*".join(factors) if factors else "1"


ONE_MONOMIAL = TraceMonomial()


def cleanTerms(terms: Mapping[TraceMonomial, Fraction]) -> dict[TraceMonomial, Fraction]:
    return {m: c for m, c in terms.items() if c != 0}


@dataclass(frozen=True, eq=False)
class TracePolynomial:
    """Rational combination of trace monomials. Treat `terms` as read-only."""
    terms: dict[TraceMonomial, Fraction]

    @classmethod
    def fromTerms(cls, terms: Mapping[TraceMonomial, int | Fraction]) -> TracePolynomial:
        return cls(cleanTerms({m: Fraction(c) for m, c in terms.items()}))

    @classmethod
    def zero(cls) -> TracePolynomial:
        return cls({})

    @classmethod
    def const(cls, value: int | Fraction) -> TracePolynomial:
        return cls.fromTerms({ONE_MONOMIAL: value})

    @classmethod
    def var(cls, j: int, starred: bool = False) -> TracePolynomial:
        return cls.word(Word.of(Letter(j, starred)))

    @classmethod
    def word(cls, w: Word) -> TracePolynomial:
        return cls({TraceMonomial((), w): Fraction(1)})

    @classmethod
    def tr(cls, w: Word) -> TracePolynomial:
        return cls({TraceMonomial((TraceSymbol.of(w),), Word()): Fraction(1)})

    @staticmethod
    def coerce(value: Any) -> TracePolynomial | None:
        if isinstance(value, TracePolynomial):
            return value
        if isinstance(value, (int, Fraction)):
            return TracePolynomial.const(value)
        return None

    # --- arithmetic ---
    def __add__(self, other: Any) -> TracePolynomial:
        o = TracePolynomial.coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return TracePolynomial(cleanTerms(out))

    __radd__ = __add__

    def __neg__(self) -> TracePolynomial:
        return TracePolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Any) -> TracePolynomial:
        o = TracePolynomial.coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> TracePolynomial:
        o = TracePolynomial.coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> TracePolynomial:
        if isinstance(other, (int, Fraction)):
            return TracePolynomial(cleanTerms({m: c * other for m, c in self.terms.items()}))
        if not isinstance(other, TracePolynomial):
            return NotImplemented
        out: dict[TraceMonomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return TracePolynomial(cleanTerms(out))

    def __rmul__(self, other: Any) -> TracePolynomial:
        if isinstance(other, (int, Fraction)):
            return self * other
        o = TracePolynomial.coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def __pow__(self, k: int) -> TracePolynomial:
        return self.power(k)

    def power(self, k: int) -> TracePolynomial:
        if k < 0:
            raise ValueError("trace polynomial exponent must be non-negative")
        result = TracePolynomial.const(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        o = TracePolynomial.coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # --- structure maps ---
    def involute(self) -> TracePolynomial:
        # pure part is fixed since Tr(w') = Tr(w)
        return TracePolynomial({TraceMonomial(m.pure, m.word.involute()): c
            for m, c in self.terms.items()})

    def trace(self) -> TracePolynomial:
        out: dict[TraceMonomial, Fraction] = {}
        for m, c in self.terms.items():
            key = TraceMonomial.make(m.pure + (TraceSymbol.of(m.word),), Word())
            out[key] = out.get(key, Fraction(0)) + c
        return TracePolynomial(cleanTerms(out))

    def substitute(self, images: Mapping[int, TracePolynomial]) -> TracePolynomial:
        """Replace x_j by images[j] and x_j' by its involution; Tr(w) goes to Tr of the image."""
        letterCache: dict[Letter, TracePolynomial] = {}
        wordCache: dict[Word, TracePolynomial] = {}
        symbolCache: dict[TraceSymbol, TracePolynomial] = {}

        def letterImage(x: Letter) -> TracePolynomial:
            if x not in letterCache:
                if x.index not in images:
                    raise MissingImage(f"no image for x{x.index}")
                image = images[x.index]
                letterCache[x] = image.involute() if x.starred else image
            return letterCache[x]

        def wordImage(w: Word) -> TracePolynomial:
            if w not in wordCache:
                result = TracePolynomial.const(1)
                for x in w.letters:
                    result = result * letterImage(x)
                wordCache[w] = result
            return wordCache[w]

        def symbolImage(s: TraceSymbol) -> TracePolynomial:
            if s not in symbolCache:
                symbolCache[s] = wordImage(s.rep).trace()
            return symbolCache[s]

        total = TracePolynomial.zero()
        for m, c in self.terms.items():
            term = TracePolynomial.const(c)
            for s in m.pure:
                term = term * symbolImage(s)
            total = total + term * wordImage(m.word)
        return total

    # --- inspection ---
    def isZero(self) -> bool:
        return not self.terms

    def isSymmetric(self) -> bool:
        return self.involute() == self

    def isPure(self) -> bool:
        return all(m.word.isOne() for m in self.terms)

    def isWordOnly(self) -> bool:
        return all(not m.pure for m in self.terms)

    def isConstant(self) -> bool:
        return all(m.isOne() for m in self.terms)

    def constantValue(self) -> Fraction:
        return self.terms.get(ONE_MONOMIAL, Fraction(0))

    def maxIndex(self) -> int:
        best = 0
        for m in self.terms:
            best = max(best, m.word.maxIndex(), *(p.rep.maxIndex() for p in m.pure))
        return best

    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def coefficient(self, monomial: TraceMonomial) -> Fraction:
        return self.terms.get(monomial, Fraction(0))

    def sortedTerms(self) -> list[tuple[TraceMonomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: mc[0].sortKey())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for m, c in self.sortedTerms():
            if m.isOne():
                text = formatRational(c)
            elif c == 1:
                text = str(m)
            elif c == -1:
                text = "-" + str(m)
            else:
                text = f"{formatRational(c)}*{m}"
            if not parts:
                parts.append(text)
            elif text.startswith("-"):
                parts.append(f"- {text[1:]}")
            else:
                parts.append(f"+ {text}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"TracePolynomial({self})"


def x(j: int) -> TracePolynomial:
    return TracePolynomial.var(j)


def xs(j: int) -> TracePolynomial:
    return TracePolynomial.var(j, starred=True)


def trOf(f: TracePolynomial) -> TracePolynomial:
    return f.trace()
