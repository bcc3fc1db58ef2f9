"""Tests for attack construction, exact evaluation, and the rate bracket."""

import numpy as np
import pytest

from authcap.channels import ChannelPair, bsc
from authcap.codes import CodeParams, TabularCode, lai_toy_code, simmons_noiseless_code
from authcap.adversary import (
    AttackStrategy,
    attack_report,
    best_deterministic_attack,
    exhaustive_deterministic_failure,
    failure_probability,
    false_accept_probs,
    impostor_attack,
    key_targeting_profile,
    mi_key_bounds,
    observation_joint,
    substitution_attack,
    tail_bound_checks,
    typical_auth_rate,
)
from authcap.errors import ValidationError

NOISELESS_PAIR = ChannelPair(main=bsc(0.0), tap=bsc(0.0))
BLIND_TAP_PAIR = ChannelPair(main=bsc(0.0), tap=bsc(0.5))

SIMMONS = simmons_noiseless_code(4, 1.0, rng_seed=7)


def single_message_code():
    # n=4, kappa=2 leaves exactly one message: 2^(4 - 4) = 1.
    return simmons_noiseless_code(4, 2.0, rng_seed=1)


def key_ignoring_code(n=2):
    """Encoder and decoder that never consult the key."""
    params = CodeParams(n=n, r=1.0, kappa=0.5)
    m, k, size = params.num_messages, params.num_keys, 2**n
    encoder = np.zeros((m, k, size))
    decoder = np.zeros((size, k, m + 1))
    for mm in range(m):
        encoder[mm, :, mm] = 1.0
        decoder[mm, :, mm] = 1.0
    return TabularCode(
        params=params, x_base=2, y_base=2, encoder=encoder, decoder=decoder, meta={}
    )


def accept_all_keys_code():
    """Observation 0 is accepted (as message 1) under every key."""
    params = CodeParams(n=2, r=0.5, kappa=0.5)
    m, k, size = 2, 2, 4
    encoder = np.zeros((m, k, size))
    encoder[0, :, 1] = 1.0
    encoder[1, :, 2] = 1.0
    decoder = np.zeros((size, k, m + 1))
    decoder[:, :, m] = 1.0
    decoder[0, :, m] = 0.0
    decoder[0, :, 1] = 1.0
    return TabularCode(
        params=params, x_base=2, y_base=2, encoder=encoder, decoder=decoder, meta={}
    )


class TestFalseAcceptProbs:
    def test_single_message_code_is_unforgeable(self):
        code = single_message_code()
        attack = impostor_attack(code, NOISELESS_PAIR)
        omega = false_accept_probs(code, NOISELESS_PAIR, attack)
        assert np.all(omega == 0.0)

    def test_reject_everything_decoder(self):
        params = CodeParams(n=2, r=0.5, kappa=0.5)
        encoder = np.zeros((2, 2, 4))
        encoder[:, :, 0] = 1.0
        decoder = np.zeros((4, 2, 3))
        decoder[:, :, 2] = 1.0
        code = TabularCode(
            params=params, x_base=2, y_base=2, encoder=encoder, decoder=decoder, meta={}
        )
        attack = impostor_attack(code, NOISELESS_PAIR)
        assert np.all(false_accept_probs(code, NOISELESS_PAIR, attack) == 0.0)

    def test_range_and_linearity_in_the_attack(self):
        a1 = impostor_attack(SIMMONS, NOISELESS_PAIR)
        a2 = substitution_attack(SIMMONS, NOISELESS_PAIR)
        lam = 0.3
        mixed = AttackStrategy(
            kind="mix", table=lam * a1.table + (1 - lam) * a2.table
        )
        o1 = false_accept_probs(SIMMONS, NOISELESS_PAIR, a1)
        o2 = false_accept_probs(SIMMONS, NOISELESS_PAIR, a2)
        om = false_accept_probs(SIMMONS, NOISELESS_PAIR, mixed)
        for table in (o1, o2, om):
            assert np.all(table >= 0.0) and np.all(table <= 1.0 + 1e-12)
        assert np.allclose(om, lam * o1 + (1 - lam) * o2, atol=1e-12)


class TestImpostorAttack:
    def test_rows_constant_across_observations(self):
        attack = impostor_attack(SIMMONS, NOISELESS_PAIR)
        assert np.all(attack.table == attack.table[0])

    def test_uniform_over_used_codewords(self):
        # With r + kappa = 1 the toy code's codewords cover every word once.
        code = lai_toy_code(4, 0.5, 0.5, tap=bsc(0.2), rng_seed=3)
        pair = ChannelPair(main=bsc(0.0), tap=bsc(0.2))
        attack = impostor_attack(code, pair)
        assert np.allclose(attack.table, 1.0 / 16, atol=1e-12)

    def test_success_floor_on_simmons(self):
        attack = impostor_attack(SIMMONS, NOISELESS_PAIR)
        omega = false_accept_probs(SIMMONS, NOISELESS_PAIR, attack)
        weights = observation_joint(SIMMONS, NOISELESS_PAIR)
        success = float((weights * omega).sum())
        assert success >= 2.0 ** (-4 * 1.0)  # key-collision floor 2^(-n*kappa)


class TestSubstitutionAttack:
    def test_blind_tap_reduces_to_impostor(self):
        sub = substitution_attack(SIMMONS, BLIND_TAP_PAIR)
        imp = impostor_attack(SIMMONS, BLIND_TAP_PAIR)
        tv = 0.5 * np.abs(sub.table - imp.table).sum(axis=1).max()
        assert tv <= 1e-9

    def test_identity_tap_concentrates_on_the_key(self):
        # Full leakage: the attacker resamples a codeword of the true key,
        # hitting a different message with probability 1 - 1/|M|.
        code = lai_toy_code(4, 0.5, 0.5, tap=bsc(0.0), rng_seed=3)
        sub = substitution_attack(code, NOISELESS_PAIR)
        omega = false_accept_probs(code, NOISELESS_PAIR, sub)
        weights = observation_joint(code, NOISELESS_PAIR)
        assert float((weights * omega).sum()) == pytest.approx(0.75, abs=1e-12)

    def test_mean_exponent_below_key_equivocation(self):
        sub = substitution_attack(SIMMONS, NOISELESS_PAIR)
        omega = false_accept_probs(SIMMONS, NOISELESS_PAIR, sub)
        weights = observation_joint(SIMMONS, NOISELESS_PAIR)
        mask = (weights > 0) & (omega > 0)
        mean_exp = float(
            (weights[mask] * (-np.log2(omega[mask]) / 4)).sum() / weights[mask].sum()
        )
        _, h_kz = mi_key_bounds(SIMMONS, NOISELESS_PAIR)
        assert mean_exp <= h_kz + 2.0 / 4


class TestBestDeterministicAttack:
    def test_single_message_never_fails(self):
        code = single_message_code()
        attack = best_deterministic_attack(code, NOISELESS_PAIR, 0.5)
        assert failure_probability(code, NOISELESS_PAIR, attack, 0.5) == 0.0

    def test_universally_accepted_observation_is_chosen(self):
        code = accept_all_keys_code()
        attack = best_deterministic_attack(code, NOISELESS_PAIR, 0.5)
        assert np.all(attack.table[:, 0] == 1.0)
        # Accepted as message 1 under every key: fails whenever the true
        # message differs, i.e. with probability 1 - 1/|M|.
        fail = failure_probability(code, NOISELESS_PAIR, attack, 0.5)
        assert fail == pytest.approx(0.5, abs=1e-12)

    def test_matches_literal_exhaustive_search(self):
        # Independent oracle: loop every deterministic choice per observation.
        a = 0.4  # kappa/2 - 0.1, threshold not representable as a table value
        fail, _ = exhaustive_deterministic_failure(SIMMONS, NOISELESS_PAIR, a)
        weights = observation_joint(SIMMONS, NOISELESS_PAIR)
        dec = SIMMONS.decoder[:, :, :4]
        cells = dec.sum(axis=2)[:, None, :] - dec.transpose(0, 2, 1)
        thr = 2.0 ** (-4 * a)
        best_total = 0.0
        for z in range(16):
            best_total += max(
                float(weights[z][cells[y] > thr].sum()) for y in range(16)
            )
        assert fail == pytest.approx(best_total, abs=1e-15)
        constructed = best_deterministic_attack(SIMMONS, NOISELESS_PAIR, a)
        assert failure_probability(
            SIMMONS, NOISELESS_PAIR, constructed, a
        ) == pytest.approx(fail, abs=1e-15)

    def test_never_worse_than_impostor_or_substitution(self):
        for a in (0.25, 0.4, 0.5):
            best, _ = exhaustive_deterministic_failure(SIMMONS, NOISELESS_PAIR, a)
            for make in (impostor_attack, substitution_attack):
                attack = make(SIMMONS, NOISELESS_PAIR)
                assert best >= failure_probability(
                    SIMMONS, NOISELESS_PAIR, attack, a
                ) - 1e-12


class TestKeyTargetingProfile:
    TAPS = (0.0, 0.2, 0.5)

    @pytest.mark.parametrize("tap", TAPS)
    def test_profile_is_a_distribution_for_lai_codes(self, tap):
        code = lai_toy_code(4, 0.5, 0.25, tap=bsc(tap), rng_seed=5)
        pair = ChannelPair(main=bsc(0.0), tap=bsc(tap))
        attack = substitution_attack(code, pair)
        per_key, none = key_targeting_profile(code, attack)
        assert np.allclose(per_key.sum(axis=1) + none, 1.0, atol=1e-9)

    @pytest.mark.parametrize("tap", TAPS)
    def test_false_accept_bounded_by_key_mass_exactly(self, tap):
        # Single-accepting-key structure: each (z, m, k) cell is at most the
        # attack mass landing on key k's accepting observations.
        code = lai_toy_code(4, 0.5, 0.25, tap=bsc(tap), rng_seed=5)
        pair = ChannelPair(main=bsc(0.0), tap=bsc(tap))
        attacks = [
            impostor_attack(code, pair),
            substitution_attack(code, pair),
            best_deterministic_attack(code, pair, 0.25),
        ]
        for attack in attacks:
            omega = false_accept_probs(code, pair, attack)
            per_key, _ = key_targeting_profile(code, attack)
            assert np.all(omega <= per_key[:, None, :])


class TestMiKeyBounds:
    def test_key_ignoring_code(self):
        code = key_ignoring_code()
        i_yk, h_kz = mi_key_bounds(code, NOISELESS_PAIR)
        assert i_yk == pytest.approx(0.0, abs=1e-12)
        assert h_kz == pytest.approx(code.params.kappa, abs=1e-12)

    def test_toy_code_with_blind_tap_reveals_key_only_to_receiver(self):
        code = lai_toy_code(4, 0.5, 0.5, tap=bsc(0.5), rng_seed=3)
        pair = ChannelPair(main=bsc(0.0), tap=bsc(0.5))
        i_yk, h_kz = mi_key_bounds(code, pair)
        assert i_yk == pytest.approx(0.5, abs=1e-12)  # kappa
        assert h_kz == pytest.approx(0.5, abs=1e-12)

    def test_equal_channels_both_bounds_reported(self):
        pair = ChannelPair(main=bsc(0.0), tap=bsc(0.0))
        i_yk, h_kz = mi_key_bounds(SIMMONS, pair)
        assert i_yk > 0.0 and h_kz > 0.0
        assert i_yk + h_kz == pytest.approx(1.0, abs=1e-9)  # split of H(K)/n


class TestTypicalAuthRate:
    def test_single_message_unbounded(self):
        code = single_message_code()
        attack = impostor_attack(code, NOISELESS_PAIR)
        bracket = typical_auth_rate(code, NOISELESS_PAIR, 0.05, [attack])
        assert bracket.unbounded
        assert bracket.alpha_lb == pytest.approx(code.params.kappa + 1.0, abs=1e-6)

    def test_key_ignoring_code_capped_near_zero(self):
        code = key_ignoring_code()
        attacks = [
            impostor_attack(code, NOISELESS_PAIR),
            best_deterministic_attack(code, NOISELESS_PAIR, 0.25),
        ]
        bracket = typical_auth_rate(code, NOISELESS_PAIR, 0.05, attacks)
        # I(Y;K) = 0, so the information side is just the finite-n slack.
        assert bracket.alpha_ub == pytest.approx(2.0 / code.n, abs=1e-12)
        assert bracket.alpha_lb == 0.0

    def test_simmons_bracket_frozen_values(self):
        # Frozen from the exhaustive evaluation at seed 7: the impostor
        # tolerates exponents up to 0.4375, the key-inference substitution
        # up to 0.3125, and the optimal deterministic attack succeeds with
        # probability ~0.58, killing every positive exponent.
        attacks = [
            impostor_attack(SIMMONS, NOISELESS_PAIR),
            substitution_attack(SIMMONS, NOISELESS_PAIR),
            best_deterministic_attack(SIMMONS, NOISELESS_PAIR, 0.4),
        ]
        bracket = typical_auth_rate(SIMMONS, NOISELESS_PAIR, 0.05, attacks)
        assert bracket.per_attack["impostor"] == pytest.approx(0.4375, abs=1e-12)
        assert bracket.per_attack["substitution"] == pytest.approx(0.3125, abs=1e-12)
        assert bracket.alpha_lb == 0.0
        assert not bracket.unbounded
        assert bracket.alpha_lb <= bracket.alpha_ub + 1e-9

    def test_requires_attacks(self):
        with pytest.raises(ValidationError):
            typical_auth_rate(SIMMONS, NOISELESS_PAIR, 0.05, [])

    def test_requires_valid_epsilon(self):
        attack = impostor_attack(SIMMONS, NOISELESS_PAIR)
        with pytest.raises(ValidationError):
            typical_auth_rate(SIMMONS, NOISELESS_PAIR, 0.0, [attack])


class TestAttackReport:
    def test_summary_fields_and_cells(self):
        attack = impostor_attack(SIMMONS, NOISELESS_PAIR)
        report = attack_report(SIMMONS, NOISELESS_PAIR, attack, threshold_a=0.4)
        doc = report.as_dict()
        assert doc["attack"] == "impostor"
        assert 0.0 <= doc["failure_prob"] <= 1.0
        assert "q50" in doc["exponent_quantiles"]
        assert doc["cells"]  # small table, per-cell map included

    def test_cells_elided_above_limit(self):
        attack = impostor_attack(SIMMONS, NOISELESS_PAIR)
        report = attack_report(
            SIMMONS, NOISELESS_PAIR, attack, threshold_a=0.4, cell_limit=10
        )
        assert report.cells is None
        assert report.exponent_quantiles  # summary always present


class TestTailBounds:
    def test_batteries_pass(self):
        report = tail_bound_checks(rng_seed=2, trials=2000)
        assert report.ok
        assert len(report.bernoulli_cases) == 4
        # The negative control (premise broken) must be present and show the
        # bound failing, demonstrating the premise is load-bearing.
        controls = [c for c in report.info_cases if not c.premise_holds]
        assert len(controls) == 1
        assert controls[0].observed > controls[0].bound

    def test_impossible_event_has_zero_frequency(self):
        report = tail_bound_checks(rng_seed=3, trials=1500)
        twice_mean = [c for c in report.bernoulli_cases if "factor=2.0" in c.label]
        assert twice_mean and twice_mean[0].observed == 0.0

    def test_trials_floor(self):
        with pytest.raises(ValidationError):
            tail_bound_checks(rng_seed=1, trials=100)

    def test_independent_pair_has_zero_tail(self):
        report = tail_bound_checks(rng_seed=4, trials=1000)
        indep = [c for c in report.info_cases if c.label.startswith("independent")]
        assert indep and indep[0].observed == 0.0
