import pytest

from tubebeta.domain import BetaParams
from tubebeta.errors import ParameterError
from tubebeta.sampling import SamplerConfig
from tubebeta.steps import STEPS, verify_step


def sets(n):
    return [
        BetaParams(n, n + 1, n + 1, n + 2, n + 2, n + 1, n + 1),
        BetaParams(n, n + 1.3 + 0.5j, n + 1.1 - 0.7j, n + 2 + 1j, n + 1.5, n + 1.2 - 2j, n + 0.9 + 0.3j),
    ]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("step", STEPS)
def test_steps_pass_sample_wise(n, step):
    for p in sets(n):
        rep = verify_step(step, p, SamplerConfig(budget=1000, seed=n))
        assert rep.passed, rep.summary()
        assert rep.max_rel_error <= 1e-10
        assert rep.before_mean == pytest.approx(rep.after_mean, rel=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_unit_jacobian_fault_is_caught(n):
    rep = verify_step("whitening", sets(n)[0], SamplerConfig(budget=1000), fault="unit-jacobian")
    assert not rep.passed
    assert rep.max_rel_error > 1e-3
    assert "FAIL" in rep.summary()


def test_unit_jacobian_is_harmless_at_n1():
    # no whitening leg exists, so the fault changes nothing
    rep = verify_step("whitening", sets(1)[0], fault="unit-jacobian")
    assert rep.passed


def test_report_names_worst_sample():
    rep = verify_step("whitening", sets(3)[0], fault="unit-jacobian")
    assert set(rep.worst_point) == {"v1", "w1", "r", "h", "p", "q"}
    assert len(rep.worst_point["p"]) == 2
    assert 0 <= rep.worst_index < rep.n_samples


def test_unknown_step_and_invalid_params():
    with pytest.raises(ValueError):
        verify_step("shear", sets(2)[0])
    with pytest.raises(ValueError):
        verify_step("whitening", sets(2)[0], fault="other")
    with pytest.raises(ParameterError):
        verify_step("h-shift", BetaParams(2, 3, 2, 4, 4, 3, 3))
