import pytest

from gencheb.intervals import BranchConfig
from gencheb.mapping import periodic_family
from gencheb.verify import Verifier


@pytest.mark.parametrize(
    "cfg",
    [
        BranchConfig((-0.6,), (0.6,)),
        BranchConfig((-0.3,), (0.1,)),
        BranchConfig((-0.7, 0.3), (-0.3, 0.7)),
        periodic_family(3, "closed_gap", alpha=-0.8).cfg,
        BranchConfig(),
    ],
)
def test_all_suites_pass(cfg):
    checks = Verifier(cfg).run()
    failed = [c for c in checks if not c.passed]
    assert checks and not failed, failed


def test_periodic_suite_runs_on_periodic_sets():
    names = [c.name for c in Verifier(BranchConfig((-0.6,), (0.6,))).run("periodic")]
    assert "envelope bound excess" in names


def test_deterministic_given_seed():
    cfg = BranchConfig((-0.3,), (0.1,))
    a = [c.to_dict() for c in Verifier(cfg, seed=3).run("identities")]
    b = [c.to_dict() for c in Verifier(cfg, seed=3).run("identities")]
    assert a == b


def test_tolerance_override_fails_checks():
    checks = Verifier(BranchConfig((-0.3,), (0.1,)), tol=1e-300).run("orthogonality")
    assert any(not c.passed for c in checks)


def test_unknown_suite():
    with pytest.raises(ValueError):
        Verifier(BranchConfig()).run("nope")
