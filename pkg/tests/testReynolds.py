import math
from fractions import Fraction

import numpy as np
import pytest

from tracealg.exprParser import parseTrace
from tracealg.genericEval import GenericContext, genericMatrix
from tracealg.positivity import tildeH2, tildeH3
from tracealg.reynolds import (
    casimirTilde,
    casimirValue,
    reflect,
    reynoldsMatrix,
    reynoldsOn,
    reynoldsSo,
    soReport,
)
from tracealg.scalarPoly import ExactMatrix, MultiPoly, VarId

XI_VARS = [VarId.xi(1, i, k) for i in (1, 2) for k in (1, 2)]


def xi(i: int, k: int) -> MultiPoly:
    return MultiPoly.var(VarId.xi(1, i, k))


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def haarAverage(f: MultiPoly, X: np.ndarray, withReflections: bool, steps: int = 16) -> float:
    """Equally spaced rotations integrate trig polynomials of degree < steps exactly."""
    fn = f.toCallable(XI_VARS)
    group = [rotation(2 * math.pi * k / steps) for k in range(steps)]
    if withReflections:
        v = np.diag([-1.0, 1.0])
        group += [u @ v for u in group]
    values = [fn((u @ X @ u.T).reshape(1, -1))[0] for u in group]
    return float(np.mean(values))


def valueAt(f: MultiPoly, X: np.ndarray) -> float:
    return float(f.toCallable(XI_VARS)(X.reshape(1, -1))[0])


def test_casimir_value_of_diagonal_monomial():
    assert casimirValue({VarId.u(1, 1): 1, VarId.u(2, 2): 1}, 2) == Fraction(-2)
    assert casimirValue({}, 3) == 0

def test_casimir_tilde_on_one_entry():
    expected = xi(2, 2) * 2 - xi(1, 1) * 2
    assert casimirTilde(xi(1, 1), 2, "derivation") == expected
    assert casimirTilde(xi(1, 1), 2, "casimir") == expected

def test_casimir_methods_agree():
    f = xi(1, 1) * xi(1, 2) + xi(2, 1) * xi(2, 1) * 3 - xi(2, 2)
    assert casimirTilde(f, 2, "casimir") == casimirTilde(f, 2, "derivation")

def test_unknown_method():
    with pytest.raises(ValueError):
        casimirTilde(xi(1, 1), 2, "bogus")

def test_so_report_for_one_entry():
    report = soReport(xi(1, 1), 2)
    assert report.output == (xi(1, 1) + xi(2, 2)) * Fraction(1, 2)
    assert report.minimalPolynomial == (Fraction(0), Fraction(4), Fraction(1))
    assert report.iterates == 2

def test_invariants_are_fixed():
    f = xi(1, 1) + xi(2, 2)
    assert reynoldsSo(f, 2) == f
    assert reynoldsOn(f * f, 2) == f * f

def test_antisymmetric_part_survives_so_but_not_o():
    a = xi(1, 2) - xi(2, 1)
    assert reynoldsSo(a, 2) == a
    assert reynoldsOn(a, 2).isZero()
    assert reflect(a) == -a

@pytest.mark.parametrize("f", [
    xi(1, 1) * xi(1, 2) + xi(1, 1) * xi(1, 1) * 3,
    xi(1, 2) * xi(2, 1) - xi(2, 2),
    xi(1, 1) * xi(1, 2) * xi(2, 1),
])
def test_matches_haar_average(f: MultiPoly):
    rng = np.random.default_rng(5)
    X = rng.normal(size=(2, 2))
    assert valueAt(reynoldsSo(f, 2), X) == pytest.approx(haarAverage(f, X, False), abs=1e-9)
    assert valueAt(reynoldsOn(f, 2), X) == pytest.approx(haarAverage(f, X, True), abs=1e-9)

def test_matrix_lift_fixes_concomitants():
    ctx = GenericContext(2, 1)
    assert reynoldsMatrix(parseTrace("x1"), ctx) == genericMatrix(ctx, 1)

def test_matrix_lift_of_constant_unit():
    value = reynoldsMatrix(ExactMatrix.unit(2, 0, 0), GenericContext(2, 1))
    assert value == ExactMatrix.scalar(2, Fraction(1, 2))

def test_tilde_h_matrices_average_to_zero():
    ctx = GenericContext(2, 1)
    assert reynoldsMatrix(tildeH2(), ctx).isZero()
    assert reynoldsMatrix(tildeH3(), ctx).isZero()


# --------- operator laws on random inputs ---------
SEEDS = list(range(6)) + [pytest.param(s, marks=pytest.mark.slow) for s in range(6, 50)]


def randomPoly(rng: np.random.Generator, degree: int, terms: int = 4) -> MultiPoly:
    f = MultiPoly.zero()
    for _ in range(terms):
        mono = MultiPoly.const(int(rng.integers(-3, 4)))
        for _ in range(int(rng.integers(0, degree + 1))):
            mono = mono * MultiPoly.var(XI_VARS[int(rng.integers(len(XI_VARS)))])
        f = f + mono
    return f


def randomPolyMatrix(rng: np.random.Generator, degree: int) -> ExactMatrix:
    return ExactMatrix.fromRows([[randomPoly(rng, degree, 2) for _ in range(2)]
        for _ in range(2)])


TRACE_X = xi(1, 1) + xi(2, 2)
FROBENIUS = xi(1, 1) ** 2 + xi(1, 2) ** 2 + xi(2, 1) ** 2 + xi(2, 2) ** 2


@pytest.mark.parametrize("seed", SEEDS)
def test_reynolds_on_laws(seed):
    rng = np.random.default_rng(seed)
    f = randomPoly(rng, 3)
    r = reynoldsOn(f, 2)
    assert reynoldsOn(r, 2) == r
    assert reflect(r) == r
    g = randomPoly(rng, 2)
    assert reynoldsOn(TRACE_X * g, 2) == TRACE_X * reynoldsOn(g, 2)
    assert reynoldsOn(g * FROBENIUS, 2) == reynoldsOn(g, 2) * FROBENIUS

@pytest.mark.parametrize("seed", SEEDS)
def test_reynolds_matrix_laws(seed):
    rng = np.random.default_rng(seed)
    ctx = GenericContext(2, 1)
    X = genericMatrix(ctx, 1)
    F = randomPolyMatrix(rng, 1)
    R = reynoldsMatrix(F, ctx)
    assert reynoldsMatrix(R, ctx) == R
    assert R.trace() == reynoldsOn(F.trace(), 2)
    assert reynoldsMatrix(F * X, ctx) == R * X
    assert reynoldsMatrix(X * F, ctx) == X * R
    assert reynoldsMatrix(F * TRACE_X, ctx) == R * TRACE_X
