import unittest
from fractions import Fraction

import numpy as np
import pytest

from tracealg.errors import DEvenRejected, MTooLarge, OddDimension
from tracealg.exprParser import parseTrace
from tracealg.genericEval import isTraceIdentity, randomRationalTuple
from tracealg.identities import (
    Quaternion,
    capelli,
    cayleyHamiltonCheck,
    evaluateWordPolynomial,
    fmSymplecticWitness,
    newtonFm,
    psi2,
    psiChecks,
    psiEmbeddingsCheck,
    symplecticInvolution,
    verifyFmIdentity,
)
from tracealg.scalarPoly import ExactMatrix


class TestFm(unittest.TestCase):
    def testFirstMember(self) -> None:
        fm = newtonFm(1)
        self.assertEqual(fm.value, parseTrace("x1*x2 - 1/2*Tr(x1*x2)"))
        self.assertEqual(fm.primes[1], parseTrace("1/2*Tr(x1*x2)"))

    def testSecondPrime(self) -> None:
        # f'_2 = 1/4 (Tr(z) f'_1 - Tr(z^2))
        fm = newtonFm(2)
        self.assertEqual(fm.primes[2], parseTrace("1/8*Tr(x1*x2)^2 - 1/4*Tr(x1*x2*x1*x2)"))

    def testOrderExponentVariantDiffers(self) -> None:
        self.assertEqual(newtonFm(1, True).value, newtonFm(1).value)
        self.assertNotEqual(newtonFm(2, True).value, newtonFm(2).value)

    def testSkewIdentityAtTwo(self) -> None:
        verdict = verifyFmIdentity(1)
        self.assertTrue(verdict.holds)
        self.assertFalse(verifyFmIdentity(1, n=3).holds)

    def testMustBePositive(self) -> None:
        with self.assertRaises(ValueError):
            newtonFm(0)

    def testSymplecticWitness(self) -> None:
        S, value = fmSymplecticWitness(1, 1, 1)
        self.assertEqual(S, ExactMatrix.diagonal([1, 0]))
        self.assertEqual(value, ExactMatrix.diagonal([Fraction(1, 2), Fraction(-1, 2)]))
        S3, value3 = fmSymplecticWitness(1, 1, 3)
        self.assertEqual(S3.rows, 6)
        self.assertFalse(value3.isZero())

    def testEvenCopiesRejected(self) -> None:
        with self.assertRaises(DEvenRejected):
            fmSymplecticWitness(1, 1, 2)


class TestCapelli(unittest.TestCase):
    def testSecond(self) -> None:
        self.assertEqual(capelli(2), parseTrace("x1*x3*x2 - x2*x3*x1"))

    def testTermCount(self) -> None:
        self.assertEqual(len(capelli(3).terms), 6)

    def testLimits(self) -> None:
        with self.assertRaises(MTooLarge):
            capelli(7)
        with self.assertRaises(ValueError):
            capelli(0)

    def testVanishesOnlyBelowItsSize(self) -> None:
        self.assertTrue(isTraceIdentity(capelli(2), 1))
        self.assertFalse(isTraceIdentity(capelli(2), 2))
        # c_m vanishes on n x n matrices exactly when m > n^2
        self.assertFalse(isTraceIdentity(capelli(3), 2))

    def testAlternatingInFirstArguments(self) -> None:
        rng = np.random.default_rng(1)
        X = randomRationalTuple(2, 3, rng)
        swapped = [X[1], X[0], X[2]]
        c2 = capelli(2)
        self.assertEqual(evaluateWordPolynomial(c2, swapped), -evaluateWordPolynomial(c2, X))
        repeated = [X[0], X[0], X[2]]
        self.assertTrue(evaluateWordPolynomial(c2, repeated).isZero())

    def testWordOnly(self) -> None:
        with self.assertRaises(ValueError):
            evaluateWordPolynomial(parseTrace("Tr(x1)"), [ExactMatrix.identity(2)])


class TestSymplecticAndCayleyHamilton(unittest.TestCase):
    def testSymplecticInvolution(self) -> None:
        rng = np.random.default_rng(2)
        M, N = randomRationalTuple(4, 2, rng)
        self.assertEqual(symplecticInvolution(symplecticInvolution(M)), M)
        self.assertEqual(symplecticInvolution(M * N),
            symplecticInvolution(N) * symplecticInvolution(M))

    def testSymplecticNeedsEvenSize(self) -> None:
        with self.assertRaises(OddDimension):
            symplecticInvolution(ExactMatrix.identity(3))

    def testCayleyHamilton(self) -> None:
        for n in (1, 2, 3):
            with self.subTest(n=n):
                self.assertTrue(cayleyHamiltonCheck(n))
        self.assertFalse(cayleyHamiltonCheck(2, perturb=True))
        with self.assertRaises(ValueError):
            cayleyHamiltonCheck(5)


class TestPsi(unittest.TestCase):
    def testAllChecksHold(self) -> None:
        verdicts = psiChecks(seed=4, trials=3)
        self.assertEqual(len(verdicts), 6)
        self.assertTrue(all(verdicts))
        self.assertTrue(psiEmbeddingsCheck())

    def testQuaternionUnits(self) -> None:
        i = Quaternion(Fraction(0), Fraction(1))
        j = Quaternion(Fraction(0), Fraction(0), Fraction(1))
        self.assertEqual(psi2(i) * psi2(i), -ExactMatrix.identity(4))
        self.assertEqual(psi2(i * j), psi2(i) * psi2(j))


@pytest.mark.slow
def test_fm_skew_identity_at_four():
    assert verifyFmIdentity(2).holds
