from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracealg.errors import MissingImage
from tracealg.exprParser import parseTrace
from tracealg.traceRing import Letter, TracePolynomial, TraceSymbol, Word, x, xs


def test_trace_is_cyclic():
    assert parseTrace("Tr(x1*x2*x3)") == parseTrace("Tr(x2*x3*x1)")
    assert parseTrace("Tr(x1*x2*x3)") != parseTrace("Tr(x2*x1*x3)")

def test_trace_is_involution_invariant():
    assert parseTrace("Tr(x1*x2)") == parseTrace("Tr(x2'*x1')")
    assert parseTrace("Tr(x1*x1*x2')") == parseTrace("Tr(x2*x1'*x1')")

def test_canonical_symbol_is_smallest_rotation():
    w = Word.of(Letter(2), Letter(1, True), Letter(1))
    assert str(TraceSymbol.of(w)) == "Tr(x1*x2*x1')"

def test_involute_reverses_words():
    f = x(1) * x(2) + Fraction(3) * xs(1)
    assert f.involute() == xs(2) * xs(1) + x(1) * 3

def test_symmetric_elements():
    assert parseTrace("x1 + x1'").isSymmetric()
    assert parseTrace("x1*x1'").isSymmetric()
    assert parseTrace("Tr(x1*x2)*x3*x3'").isSymmetric()
    assert not parseTrace("x1*x2 + x2'*x1").isSymmetric()

def test_trace_of_scalar_is_formal():
    two = TracePolynomial.const(2).trace()
    assert str(two) == "2*Tr(1)"
    assert not two.isConstant()
    assert two.isPure()

def test_trace_is_linear_and_pure():
    f = parseTrace("Tr(x1)*x2 + 2*x1")
    assert f.trace() == parseTrace("Tr(x1)*Tr(x2) + 2*Tr(x1)")

def test_substitute():
    f = x(1) * x(1)
    g = f.substitute({1: x(1) + x(2)})
    assert g == parseTrace("x1^2 + x1*x2 + x2*x1 + x2^2")
    h = parseTrace("Tr(x1*x1')").substitute({1: x(2) * x(3)})
    assert h == parseTrace("Tr(x2*x3*x3'*x2')")

def test_substitute_needs_every_image():
    with pytest.raises(MissingImage):
        (x(1) * x(2)).substitute({1: x(2)})

def test_inspection():
    f = parseTrace("Tr(x1*x3)*x2 - 1/2")
    assert f.maxIndex() == 3
    assert f.degree() == 3
    assert f.constantValue() == Fraction(-1, 2)
    assert not f.isWordOnly()

def test_printing_order():
    assert str(parseTrace("-2*x2 + x1")) == "x1 - 2*x2"
    assert str(TracePolynomial.zero()) == "0"

def test_letter_index_positive():
    with pytest.raises(ValueError):
        Letter(0)

def test_negative_power():
    with pytest.raises(ValueError):
        x(1).power(-1)


letters = st.builds(Letter, st.integers(min_value=1, max_value=3), st.booleans())
words = st.lists(letters, max_size=4).map(lambda ls: TracePolynomial.word(Word(tuple(ls))))
coefficients = st.fractions(min_value=-3, max_value=3, max_denominator=4)
polys = st.lists(st.tuples(coefficients, words), max_size=3).map(
    lambda terms: sum((w * c for c, w in terms), TracePolynomial.zero()))


@settings(max_examples=50, deadline=None)
@given(polys, polys)
def test_involution_is_anti_multiplicative(f: TracePolynomial, g: TracePolynomial):
    assert (f * g).involute() == g.involute() * f.involute()
    assert f.involute().involute() == f

@settings(max_examples=50, deadline=None)
@given(polys, polys)
def test_trace_of_commutator_vanishes(f: TracePolynomial, g: TracePolynomial):
    assert (f * g - g * f).trace().isZero()
    assert f.involute().trace() == f.trace()
