import unittest
from fractions import Fraction

from tracealg.errors import ExprSyntaxError
from tracealg.exprParser import Add, Mul, Pow, TrNode, Var, formatTrace, parse, parseTrace
from tracealg.traceRing import TracePolynomial, x, xs


class TestExprParser(unittest.TestCase):
    def testPrecedence(self) -> None:
        node = parse("x1 + x2*x3^2")
        self.assertIsInstance(node, Add)
        assert isinstance(node, Add)
        self.assertEqual(node.left, Var(1))
        self.assertIsInstance(node.right, Mul)
        assert isinstance(node.right, Mul)
        self.assertEqual(node.right.right, Pow(Var(3), 2))

    def testPrimeAndTrace(self) -> None:
        node = parse("Tr(x2')")
        self.assertEqual(node, TrNode(Var(2, starred=True)))
        self.assertEqual(parseTrace("x1'"), xs(1))

    def testExpansion(self) -> None:
        self.assertEqual(parseTrace("(x1 + x2)^2"), parseTrace("x1^2 + x1*x2 + x2*x1 + x2^2"))
        self.assertEqual(parseTrace("-x1^2"), -(x(1) * x(1)))
        self.assertEqual(parseTrace("x1 - x2 - x3"), x(1) - x(2) - x(3))

    def testRationalCoefficients(self) -> None:
        f = parseTrace("3/6*Tr(x1) - 2")
        self.assertEqual(f, x(1).trace() * Fraction(1, 2) - 2)
        self.assertEqual(parseTrace("Tr(1)"), TracePolynomial.const(1).trace())

    def testCanonicalTextParsesBack(self) -> None:
        for text in ("1/2*Tr(x1*x2')*x1 - x2'*x1 + 3", "Tr(x1)^2 - Tr(x1^2)", "x1*x1' - 7/3"):
            f = parseTrace(text)
            self.assertEqual(parseTrace(formatTrace(f)), f)

    def testMissingParenPosition(self) -> None:
        with self.assertRaises(ExprSyntaxError) as ctx:
            parseTrace("Tr(x1")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (1, 6))
        self.assertEqual(ctx.exception.expected, ("')'",))

    def testSecondLinePosition(self) -> None:
        with self.assertRaises(ExprSyntaxError) as ctx:
            parseTrace("x1 +\n  *")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 3))
        self.assertIn("variable", ctx.exception.expected)

    def testFloatRejected(self) -> None:
        with self.assertRaises(ExprSyntaxError) as ctx:
            parseTrace("1.5*x1")
        self.assertIn("p/q", str(ctx.exception))

    def testBadTokens(self) -> None:
        for text in ("x0", "x1^1/2", "x1 x2", "y1", "1/0", ""):
            with self.subTest(text=text):
                with self.assertRaises(ExprSyntaxError):
                    parseTrace(text)

    def testErrorIsValueError(self) -> None:
        with self.assertRaises(ValueError):
            parseTrace("Tr()")
