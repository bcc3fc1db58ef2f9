"""Tests for the information measures and the capacity solver."""

import numpy as np
import pytest

from authcap.channels import DiscreteChannel, JointLaw, Pmf, bsc, push_joint
from authcap.errors import ValidationError
from authcap.measures import (
    binary_entropy,
    channel_capacity,
    conditional_entropy,
    entropy,
    mutual_information,
)

# Frozen from a high-precision evaluation of -p log2 p - (1-p) log2 (1-p).
H_011 = 0.49991595816452800
H_01 = 0.46899559358928122
H_02 = 0.72192809488736235


def random_joint(rng, shape, names):
    table = rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
    return JointLaw(names, table)


class TestEntropy:
    def test_uniform_binary(self):
        assert entropy(Pmf(np.array([0.5, 0.5]))) == 1.0

    def test_point_mass(self):
        assert entropy(Pmf(np.array([1.0, 0.0]))) == 0.0

    def test_binary_entropy_oracle(self):
        assert binary_entropy(0.11) == pytest.approx(H_011, abs=1e-12)


class TestConditionalEntropy:
    def test_deterministic_channel(self):
        j = push_joint(Pmf.uniform(2), bsc(0.0))
        assert conditional_entropy(j, "Y", "X") == pytest.approx(0.0, abs=1e-12)

    def test_independent(self):
        j = push_joint(Pmf.uniform(2), bsc(0.5))
        assert conditional_entropy(j, "Y", "X") == pytest.approx(1.0, abs=1e-12)

    def test_bsc_value(self):
        j = push_joint(Pmf.uniform(2), bsc(0.11))
        assert conditional_entropy(j, "Y", "X") == pytest.approx(H_011, abs=1e-12)

    def test_matches_entropy_when_independent_of_given(self):
        j = push_joint(Pmf.uniform(2), bsc(0.5))
        assert conditional_entropy(j, "Y", "X") == pytest.approx(
            entropy(Pmf(j.marginal("Y").table)), abs=1e-12
        )

    def test_unknown_variable(self):
        j = push_joint(Pmf.uniform(2), bsc(0.1))
        with pytest.raises(ValidationError):
            conditional_entropy(j, "Q", "X")


class TestMutualInformation:
    def test_noiseless(self):
        j = push_joint(Pmf.uniform(2), bsc(0.0))
        assert mutual_information(j, "X", "Y") == pytest.approx(1.0, abs=1e-12)

    def test_overlapping_sets_rejected(self):
        j = push_joint(Pmf.uniform(2), bsc(0.1))
        with pytest.raises(ValidationError, match="overlap"):
            mutual_information(j, "X", "Y", given="X")

    def test_bsc_closed_form(self):
        j = push_joint(Pmf.uniform(2), bsc(0.11))
        assert mutual_information(j, "X", "Y") == pytest.approx(1 - H_011, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        j = random_joint(rng, (3, 4), ("A", "B"))
        assert mutual_information(j, "A", "B") == pytest.approx(
            mutual_information(j, "B", "A"), abs=1e-12
        )

    @pytest.mark.parametrize("seed", range(6))
    def test_chain_rule(self, seed):
        rng = np.random.default_rng(seed)
        j = random_joint(rng, (2, 3, 2), ("Y", "U", "W"))
        lhs = mutual_information(j, "Y", ("U", "W"))
        rhs = mutual_information(j, "Y", "W") + mutual_information(j, "Y", "U", "W")
        assert lhs == pytest.approx(rhs, abs=1e-8)

    @pytest.mark.parametrize("seed", range(6))
    def test_data_processing(self, seed):
        # W -> U -> X -> Y built from random stochastic maps.
        rng = np.random.default_rng(100 + seed)
        w = rng.dirichlet(np.ones(3))
        uw = rng.dirichlet(np.ones(3), size=3)
        xu = rng.dirichlet(np.ones(2), size=3)
        yx = rng.dirichlet(np.ones(2), size=2)
        table = np.einsum("w,wu,ux,xy->wuxy", w, uw, xu, yx)
        j = JointLaw(("W", "U", "X", "Y"), table)
        i_w = mutual_information(j, "Y", "W")
        i_u = mutual_information(j, "Y", "U")
        i_x = mutual_information(j, "Y", "X")
        assert i_w <= i_u + 1e-8
        assert i_u <= i_x + 1e-8


class TestChannelCapacity:
    def test_bsc_closed_form(self):
        cap, maximizer = channel_capacity(bsc(0.11), tol=1e-9)
        assert cap == pytest.approx(1 - H_011, abs=1e-8)
        assert np.allclose(maximizer.probs, 0.5, atol=1e-6)

    def test_useless_channel(self):
        cap, _ = channel_capacity(bsc(0.5), tol=1e-9)
        assert cap == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_identity_channel(self, q):
        cap, _ = channel_capacity(DiscreteChannel(np.eye(q)), tol=1e-9)
        assert cap == pytest.approx(np.log2(q), abs=1e-8)

    @pytest.mark.parametrize("lam", np.linspace(0.0, 0.5, 11))
    def test_matches_binary_entropy_sweep(self, lam):
        cap, _ = channel_capacity(bsc(lam), tol=1e-8)
        assert cap == pytest.approx(1 - binary_entropy(lam), abs=1e-8)

    def test_symmetric_channel_uniform_maximizer(self):
        # Cyclic (hence symmetric) ternary channel.
        row = np.array([0.7, 0.2, 0.1])
        rows = np.stack([np.roll(row, k) for k in range(3)])
        _, maximizer = channel_capacity(DiscreteChannel(rows), tol=1e-10)
        tv = 0.5 * np.abs(maximizer.probs - 1 / 3).sum()
        assert tv < 1e-6

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ValidationError):
            channel_capacity(bsc(0.1), tol=0.0)

    def test_non_convergence_reports_bracket(self):
        from authcap.errors import ConvergenceError

        asym = DiscreteChannel(np.array([[0.9, 0.1], [0.3, 0.7]]))
        with pytest.raises(ConvergenceError, match="bracket"):
            channel_capacity(asym, tol=1e-12, max_iter=2)
