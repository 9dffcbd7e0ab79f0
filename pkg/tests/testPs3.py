from fractions import Fraction

import numpy as np
import pytest

from tracealg.errors import DenominatorVanishes
from tracealg.ps3 import (
    PARTS,
    betaChecks,
    buildContext,
    entry11Obstruction,
    entry11ThreeTerm,
    numericContext,
    precheck,
    randomPoint,
    sampleContexts,
    splitVariables,
    totalPositivityWitness,
    twistedInvolution,
    verifyAll,
    verifyAntisymCubic,
    verifyBetaFormulas,
    verifyIdempotents,
    verifyIndependence,
    witnessChecks,
)
from tracealg.scalarPoly import ExactMatrix
from tracealg.verdictPublisher import EXACT, SAMPLED, VerdictCollector, VerdictPublisher


def familyPoint(c: int) -> ExactMatrix:
    """S = E13 + E31 + c E11 plus A = E12 - E21."""
    return ExactMatrix.fromRows([[c, 1, 1], [-1, 0, 0], [1, 0, 0]])


@pytest.fixture
def points():
    return sampleContexts(3, np.random.default_rng(11))


# --------- rational points ---------
def test_family_point_values():
    ctx = numericContext(familyPoint(2))
    assert ctx.beta1 == 4
    assert ctx.beta2 == 1
    assert ctx.invariants.alpha2 == -2
    assert ctx.invariants.alpha3 == Fraction(-2, 3)
    assert ctx.e2Den == -32
    assert ctx.e1 == ExactMatrix.unit(3, 2, 2)
    assert ctx.e2 == ExactMatrix.unit(3, 1, 1)

@pytest.mark.parametrize("c", [-3, 0, 2, 5])
def test_family_point_identities(c):
    ctx = numericContext(familyPoint(c))
    assert verifyIdempotents(ctx)
    assert verifyBetaFormulas(ctx)
    assert totalPositivityWitness(ctx) == 4

def test_random_points(points):
    assert len(points) == 3
    for ctx in points:
        assert not ctx.isSymbolic
        assert verifyIdempotents(ctx)
        assert verifyBetaFormulas(ctx)
        assert totalPositivityWitness(ctx) == ctx.beta1 * ctx.beta2

def test_beta_checks_are_distinct():
    checks = betaChecks()
    assert list(checks)[0] == "beta1 = -2 alpha2"
    assert len(checks) == 4
    assert not any("square" in name for name in checks)
    ctx = numericContext(familyPoint(2))
    assert all(check(ctx) for check in checks.values())

def test_witness_checks_at_points(points):
    for name, check in witnessChecks(3).items():
        for ctx in points:
            assert check(ctx), name

def test_twisted_involution_scales_off_diagonal():
    ctx = numericContext(familyPoint(2))
    h = ExactMatrix.unit(3, 1, 2)
    # E23 goes to diag(1, 4, 1)^-1 E32 diag(1, 4, 1) = 4 E32, 1-based
    assert twistedInvolution(h, ctx) == ExactMatrix.unit(3, 2, 1, 4)

def test_entry11_obstruction(points):
    rng = np.random.default_rng(5)
    rs = [randomPoint(rng), randomPoint(rng)]
    for ctx in points:
        assert entry11Obstruction(rs, ctx) == entry11ThreeTerm(rs, ctx)
    ident = entry11Obstruction([ExactMatrix.identity(3)], numericContext(familyPoint(2)))
    assert ident == 1

def test_symmetric_point_has_no_context():
    with pytest.raises(DenominatorVanishes):
        numericContext(ExactMatrix.fromRows([[1, 2, 0], [2, 1, 0], [0, 0, 3]]))


# --------- structure ---------
def test_split_variables():
    assert len(splitVariables()) == 9
    assert len(splitVariables("diagonal")) == 6
    with pytest.raises(ValueError):
        splitVariables("banded")

def test_antisymmetric_cubic():
    assert verifyAntisymCubic()
    assert verifyAntisymCubic(2)

def test_precheck_reports_the_failing_point(points):
    verdict = precheck("never", lambda c: False, points)
    assert verdict is not None
    assert not verdict.holds
    assert verdict.mode == SAMPLED
    assert len(verdict.detail["point"]) == 3
    assert precheck("always", lambda c: True, points) is None


# --------- driver ---------
def test_verify_all_publishes():
    publisher = VerdictPublisher("PS3")
    collector = VerdictCollector()
    publisher.sub("ps3", collector)
    verdicts = verifyAll(only=["cubic"], publisher=publisher)
    assert len(verdicts) == 1
    assert collector.verdicts == verdicts
    assert collector.allHold
    assert verdicts[0].mode == EXACT

def test_verify_all_rejects_unknown_parts():
    with pytest.raises(ValueError):
        verifyAll(only=["cubic", "everything"])
    assert "witness" in PARTS


# --------- full symbolic runs ---------
@pytest.mark.slow
def test_diagonal_context_is_symbolic():
    ctx = buildContext("diagonal")
    assert ctx.isSymbolic
    assert verifyIdempotents(ctx)

@pytest.mark.slow
def test_independence():
    assert verifyIndependence(0)

@pytest.mark.slow
@pytest.mark.parametrize("model", ["diagonal", "full"])
def test_verify_all(model):
    verdicts = verifyAll(model=model)
    assert all(verdicts), [v.name for v in verdicts if not v]
