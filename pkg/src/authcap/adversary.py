"""The interloping adversary: attack construction and exact evaluation.

The adversary observes the tap output z and replaces the receiver's
observation with y drawn from an attack table psi(y | z).  The quantity of
interest per cell (z, m, k) is the false-acceptance probability

    sum_y psi(y|z) * sum_{m' != m} phi(m' | y, k)

and the code-level failure event at exponent a is
``-(1/n) log2(false_accept) < a``, i.e. the false-acceptance probability
exceeds 2^(-n*a).

The supremum over all attacks is not computable in general; this module
brackets it.  Attack constructors give the achieved side (impostor,
key-inference substitution, and the per-observation best deterministic
choice, which by separability over z is the exact optimum among
deterministic attacks); the converse side comes from the exact
mutual-information quantities I(Y;K) and H(K|Z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .caps import check_entries, code_cap
from .channels import ChannelPair, product_extension
from .codes import TabularCode
from .errors import AuthcapError, ValidationError
from .measures import entropy_bits
from .rng import substream

ROW_TOL = 1e-9


@dataclass(frozen=True)
class AttackStrategy:
    """Conditional table psi(y | z); kind records how it was built."""

    kind: str
    table: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.table, dtype=np.float64)
        if arr.ndim != 2:
            raise ValidationError("attack table must be 2-D (observations x outputs)")
        if np.any(arr < 0):
            raise ValidationError("attack table has negative entries")
        sums = arr.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > ROW_TOL):
            raise ValidationError("attack rows must sum to 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)


def _extensions(code: TabularCode, pair: ChannelPair):
    if pair.input_size != code.x_base:
        raise ValidationError("channel pair input alphabet does not match the code")
    if pair.main.output_size != code.y_base:
        raise ValidationError("main channel output alphabet does not match the code")
    main = product_extension(pair.main, code.n)
    tap = product_extension(pair.tap, code.n)
    return main, tap


def observation_joint(code: TabularCode, pair: ChannelPair) -> np.ndarray:
    """p(z, m, k) under no attack, shape (|Z|^n, M, K)."""
    _, tap = _extensions(code, pair)
    check_entries(
        tap.output_size * code.num_messages * code.num_keys,
        code_cap(),
        "adversary joint law",
    )
    joint = np.einsum("mkx,xz->zmk", code.encoder, tap.rows)
    return joint / (code.num_messages * code.num_keys)


def received_joint(code: TabularCode, pair: ChannelPair) -> np.ndarray:
    """p(y, m, k) under no attack, shape (|Y|^n, M, K)."""
    main, _ = _extensions(code, pair)
    check_entries(
        main.output_size * code.num_messages * code.num_keys,
        code_cap(),
        "receiver joint law",
    )
    joint = np.einsum("mkx,xy->ymk", code.encoder, main.rows)
    return joint / (code.num_messages * code.num_keys)


def _accept_other(code: TabularCode) -> np.ndarray:
    """cells[y, m, k] = phi(M - {m} | y, k): acceptance mass as any other message."""
    accept = code.decoder[:, :, : code.num_messages]
    total = accept.sum(axis=2)  # (Y, K)
    return total[:, None, :] - accept.transpose(0, 2, 1)


def false_accept_probs(
    code: TabularCode, pair: ChannelPair, attack: AttackStrategy
) -> np.ndarray:
    """Exact false-acceptance probability for every (z, m, k) cell."""
    _, tap = _extensions(code, pair)
    if attack.table.shape != (tap.output_size, code.y_size):
        raise ValidationError(
            f"attack table shape {attack.table.shape}, expected "
            f"{(tap.output_size, code.y_size)}"
        )
    cells = _accept_other(code)
    check_entries(
        attack.table.shape[0] * code.num_messages * code.num_keys,
        code_cap(),
        "false-acceptance table",
    )
    return np.einsum("zy,ymk->zmk", attack.table, cells)


def failure_probability(
    code: TabularCode, pair: ChannelPair, attack: AttackStrategy, threshold_a: float
) -> float:
    """Pr over (Z, M, K) that false acceptance exceeds 2^(-n*a)."""
    omega = false_accept_probs(code, pair, attack)
    weights = observation_joint(code, pair)
    return float(weights[omega > 2.0 ** (-code.n * threshold_a)].sum())


def impostor_attack(code: TabularCode, pair: ChannelPair) -> AttackStrategy:
    """Ignore z; draw the receiver's observation from its no-attack marginal."""
    p_y = received_joint(code, pair).sum(axis=(1, 2))
    _, tap = _extensions(code, pair)
    table = np.broadcast_to(p_y, (tap.output_size, p_y.size)).copy()
    return AttackStrategy(kind="impostor", table=table)


def substitution_attack(code: TabularCode, pair: ChannelPair) -> AttackStrategy:
    """Infer the key from z, then draw y consistent with it:
    psi(y|z) = sum_k p(y|k) p(k|z).

    Observations with zero probability have no defined posterior; their rows
    fall back to the impostor marginal and are never weighted in reports.
    """
    y_joint = received_joint(code, pair)
    z_joint = observation_joint(code, pair)
    p_y_given_k = y_joint.sum(axis=1) * code.num_keys  # (Y, K); p(k) = 1/K
    p_zk = z_joint.sum(axis=1)  # (Z, K)
    p_z = p_zk.sum(axis=1)
    table = np.empty((p_zk.shape[0], p_y_given_k.shape[0]))
    fallback = y_joint.sum(axis=(1, 2))
    positive = p_z > 0
    table[positive] = (p_zk[positive] / p_z[positive, None]) @ p_y_given_k.T
    table[~positive] = fallback
    return AttackStrategy(kind="substitution", table=table)


def best_deterministic_attack(
    code: TabularCode, pair: ChannelPair, threshold_a: float
) -> AttackStrategy:
    """For each z, the single y maximizing the posterior probability that the
    acceptance mass reaches 2^(-n*a); ties break to the lowest y index."""
    z_joint = observation_joint(code, pair)
    cells = _accept_other(code)
    hit = (cells >= 2.0 ** (-code.n * threshold_a)).astype(np.float64)
    scores = np.einsum("zmk,ymk->zy", z_joint, hit)
    best = scores.argmax(axis=1)  # argmax returns the first (lowest) maximizer
    table = np.zeros((z_joint.shape[0], code.y_size))
    table[np.arange(table.shape[0]), best] = 1.0
    return AttackStrategy(kind=f"best-deterministic(a={threshold_a})", table=table)


def exhaustive_deterministic_failure(
    code: TabularCode, pair: ChannelPair, threshold_a: float
) -> tuple[float, AttackStrategy]:
    """Exact supremum of the failure probability over all deterministic
    attacks at exponent a.

    The failure functional is a sum over z of terms each depending only on
    the y chosen for that z, so optimizing per observation is optimal
    globally; this is the oracle the constructive attacks are compared to.
    """
    z_joint = observation_joint(code, pair)
    cells = _accept_other(code)
    exceed = (cells > 2.0 ** (-code.n * threshold_a)).astype(np.float64)
    gains = np.einsum("zmk,ymk->zy", z_joint, exceed)
    best = gains.argmax(axis=1)
    table = np.zeros((z_joint.shape[0], code.y_size))
    table[np.arange(table.shape[0]), best] = 1.0
    attack = AttackStrategy(kind=f"exhaustive-deterministic(a={threshold_a})", table=table)
    return float(gains.max(axis=1).sum()), attack


def key_targeting_profile(
    code: TabularCode, attack: AttackStrategy
) -> tuple[np.ndarray, np.ndarray]:
    """Per-observation probability that the attack lands on an observation
    accepted under key k, plus the mass landing where no key accepts.

    For codes with the single-accepting-key structure the two pieces form a
    distribution over keys + reject for every z, and every false-acceptance
    cell (z, m, k) is bounded by the key-k entry.
    """
    accept_any = (code.decoder[:, :, : code.num_messages].sum(axis=2) > 0).astype(
        np.float64
    )  # (Y, K)
    per_key = attack.table @ accept_any
    none = attack.table @ (1.0 - accept_any.max(axis=1))
    return per_key, none


def mi_key_bounds(code: TabularCode, pair: ChannelPair) -> tuple[float, float]:
    """Exact (I(Y;K)/n, H(K|Z)/n) from the no-attack joint laws."""
    y_joint = received_joint(code, pair).sum(axis=1)  # (Y, K)
    z_joint = observation_joint(code, pair).sum(axis=1)  # (Z, K)
    i_yk = (
        entropy_bits(y_joint.sum(axis=1))
        + entropy_bits(y_joint.sum(axis=0))
        - entropy_bits(y_joint)
    )
    h_k_given_z = entropy_bits(z_joint) - entropy_bits(z_joint.sum(axis=1))
    n = code.n
    return max(i_yk, 0.0) / n, max(h_k_given_z, 0.0) / n


@dataclass(frozen=True)
class AuthRateBracket:
    """Attack-side and converse-side estimates of the authentication rate.

    ``alpha_lb`` is the largest dyadic grid exponent every supplied attack
    fails to beat more than epsilon of the time; ``alpha_ub`` is the
    information-theoretic cap min(I(Y;K), H(K|Z))/n plus the finite-n slack.
    ``unbounded`` marks codes (e.g. single-message) where no supplied attack
    ever succeeds and the grid cap was hit.
    """

    alpha_lb: float
    alpha_ub: float
    unbounded: bool
    epsilon: float
    grid_step: float
    per_attack: dict

    def as_dict(self) -> dict:
        return {
            "alpha_lb": self.alpha_lb,
            "alpha_ub": self.alpha_ub,
            "unbounded": self.unbounded,
            "epsilon": self.epsilon,
            "grid_step": self.grid_step,
            "per_attack": dict(self.per_attack),
        }


def typical_auth_rate(
    code: TabularCode,
    pair: ChannelPair,
    epsilon: float,
    attacks: list[AttackStrategy],
    max_alpha: float | None = None,
    ub_slack: float | None = None,
) -> AuthRateBracket:
    """Bracket the typical authentication rate against a family of attacks.

    The exponent grid is dyadic with step 1/(8n) so threshold comparisons are
    exact for power-of-two acceptance masses.  The internal consistency
    contract alpha_lb <= alpha_ub + 1e-9 is enforced unless the grid cap was
    hit with no successful attack at all.
    """
    if not attacks:
        raise ValidationError("at least one attack strategy is required")
    if not 0.0 < epsilon < 1.0:
        raise ValidationError(f"epsilon must lie in (0, 1), got {epsilon}")
    n = code.n
    step = 1.0 / (8.0 * n)
    cap = max_alpha if max_alpha is not None else code.params.kappa + 1.0
    if cap <= 0.0:
        raise ValidationError(f"max_alpha must be positive, got {cap}")
    num_steps = int(math.floor(cap / step + 1e-9))
    grid_exponents = np.arange(num_steps + 1)  # a_j = j / (8n)

    weights = observation_joint(code, pair)
    per_attack: dict[str, float] = {}
    lb = math.inf
    saturated = True
    for attack in attacks:
        omega = false_accept_probs(code, pair, attack)
        best_a = 0.0
        hit_cap = True
        for j in grid_exponents:
            a = j / (8.0 * n)
            failure = float(weights[omega > 2.0 ** (-(n * a))].sum())
            if failure <= epsilon:
                best_a = a
            else:
                hit_cap = False
                break
        per_attack[attack.kind] = best_a
        lb = min(lb, best_a)
        saturated = saturated and hit_cap

    i_yk, h_kz = mi_key_bounds(code, pair)
    slack = ub_slack if ub_slack is not None else 2.0 / n
    ub = min(i_yk, h_kz) + slack
    if not saturated and lb > ub + 1e-9:
        raise AuthcapError(
            f"attack-side estimate {lb} exceeds the information bound {ub}; "
            "the code evaluation is inconsistent"
        )
    return AuthRateBracket(
        alpha_lb=lb,
        alpha_ub=ub,
        unbounded=saturated,
        epsilon=epsilon,
        grid_step=step,
        per_attack=per_attack,
    )


@dataclass(frozen=True)
class AttackReport:
    """Serializable summary of one attack's exact evaluation."""

    attack_kind: str
    threshold_a: float
    failure_prob: float
    exponent_quantiles: dict
    mean_false_accept: float
    cells: dict | None

    def as_dict(self) -> dict:
        doc = {
            "attack": self.attack_kind,
            "threshold_a": self.threshold_a,
            "failure_prob": self.failure_prob,
            "exponent_quantiles": dict(self.exponent_quantiles),
            "mean_false_accept": self.mean_false_accept,
        }
        if self.cells is not None:
            doc["cells"] = dict(self.cells)
        return doc


# Reports elide the raw per-cell map above this many cells.
REPORT_CELL_LIMIT = 4096


def attack_report(
    code: TabularCode,
    pair: ChannelPair,
    attack: AttackStrategy,
    threshold_a: float,
    cell_limit: int = REPORT_CELL_LIMIT,
) -> AttackReport:
    """Exact per-cell evaluation plus weighted quantiles of the exponent
    -(1/n) log2(false_accept) over supported (z, m, k) cells."""
    omega = false_accept_probs(code, pair, attack)
    weights = observation_joint(code, pair)
    n = code.n
    failure = float(weights[omega > 2.0 ** (-n * threshold_a)].sum())

    supported = weights > 0
    w = weights[supported]
    vals = omega[supported]
    with np.errstate(divide="ignore"):
        exponents = np.where(vals > 0, -np.log2(np.maximum(vals, 1e-300)) / n, math.inf)
    order = np.argsort(exponents)
    cum = np.cumsum(w[order]) / w.sum()
    quantiles = {}
    for q in (0.1, 0.25, 0.5, 0.75, 0.9):
        idx = int(np.searchsorted(cum, q))
        idx = min(idx, len(order) - 1)
        value = exponents[order[idx]]
        quantiles[f"q{int(q * 100)}"] = value if math.isfinite(value) else None

    cells = None
    if omega.size <= cell_limit:
        cells = {}
        zs, ms, ks = np.nonzero(supported)
        for z, m, k in zip(zs.tolist(), ms.tolist(), ks.tolist()):
            cells[f"{z},{m},{k}"] = float(omega[z, m, k])
    return AttackReport(
        attack_kind=attack.kind,
        threshold_a=threshold_a,
        failure_prob=failure,
        exponent_quantiles=quantiles,
        mean_false_accept=float((weights * omega).sum()),
        cells=cells,
    )


# ---------------------------------------------------------------------------
# Tail-bound batteries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailCase:
    label: str
    observed: float
    bound: float
    premise_holds: bool

    @property
    def satisfied(self) -> bool:
        # Cases with a violated premise are negative controls; they do not
        # count against the battery.
        return bool((not self.premise_holds) or self.observed <= self.bound)


@dataclass(frozen=True)
class TailBoundReport:
    info_cases: tuple
    bernoulli_cases: tuple

    @property
    def ok(self) -> bool:
        return all(c.satisfied for c in self.info_cases + self.bernoulli_cases)

    def as_dict(self) -> dict:
        return {
            "info_cases": [
                {
                    "label": c.label,
                    "observed": c.observed,
                    "bound": c.bound,
                    "premise_holds": c.premise_holds,
                    "satisfied": c.satisfied,
                }
                for c in self.info_cases
            ],
            "bernoulli_cases": [
                {
                    "label": c.label,
                    "observed": c.observed,
                    "bound": c.bound,
                    "premise_holds": c.premise_holds,
                    "satisfied": c.satisfied,
                }
                for c in self.bernoulli_cases
            ],
            "ok": self.ok,
        }


def _info_tail(joint: np.ndarray, c: float, n: int) -> float:
    """Exact Pr(p(A|B) > p(A) 2^(n c)) for a finite joint law."""
    p_a = joint.sum(axis=1)
    p_b = joint.sum(axis=0)
    tail = 0.0
    for i in range(joint.shape[0]):
        for j in range(joint.shape[1]):
            if joint[i, j] <= 0 or p_b[j] <= 0:
                continue
            if joint[i, j] / p_b[j] > p_a[i] * 2.0 ** (n * c):
                tail += joint[i, j]
    return float(tail)


def _joint_mi(joint: np.ndarray) -> float:
    return (
        entropy_bits(joint.sum(axis=1))
        + entropy_bits(joint.sum(axis=0))
        - entropy_bits(joint)
    )


def tail_bound_checks(rng_seed: int, trials: int = 2000) -> TailBoundReport:
    """Monte Carlo batteries for the two concentration tools.

    Information tail: for random joint laws with I(A;B) = c, the exact
    probability that p(A|B) exceeds p(A) 2^(n c) must stay below
    1/n + 1/(n c); a perfectly correlated pair with the premise broken is
    included as a negative control.  Bernoulli counts: the empirical
    frequency that a Binomial(k, q) count crosses factor*q*k must stay below
    exp(-(f ln f - f + 1) q k).
    """
    if trials < 1000:
        raise ValidationError(f"trials must be >= 1000, got {trials}")
    info_cases = []
    for i in range(40):
        rng = substream(rng_seed, "tail-info", i)
        rows = int(rng.integers(2, 7))
        cols = int(rng.integers(2, 7))
        joint = rng.dirichlet(np.ones(rows * cols)).reshape(rows, cols)
        c = _joint_mi(joint)
        if c < 1e-3:
            continue
        n = int(rng.integers(2, 13))
        observed = _info_tail(joint, c, n)
        bound = 1.0 / n + 1.0 / (n * c)
        info_cases.append(
            TailCase(
                label=f"random-joint-{i}(n={n},c={c:.3f})",
                observed=observed,
                bound=bound,
                premise_holds=True,
            )
        )
    # Independent pair: zero tail for any c > 0.
    p = np.array([0.3, 0.7])
    q = np.array([0.25, 0.5, 0.25])
    info_cases.append(
        TailCase(
            label="independent(c=0.1,n=8)",
            observed=_info_tail(np.outer(p, q), 0.1, 8),
            bound=1.0 / 8 + 1.0 / (8 * 0.1),
            premise_holds=True,
        )
    )
    # Negative control: A = B uniform, threshold exponent below the true MI.
    size = 32
    diag = np.eye(size) / size
    c_low, n_ctrl = 0.3, 10
    info_cases.append(
        TailCase(
            label=f"correlated-control(c={c_low},n={n_ctrl})",
            observed=_info_tail(diag, c_low, n_ctrl),
            bound=1.0 / n_ctrl + 1.0 / (n_ctrl * c_low),
            premise_holds=False,  # I(A;B) = 5 bits > c
        )
    )

    bern_specs = [
        (0.5, 100, 2.0), (0.3, 50, 1.5), (0.4, 60, 0.5), (0.2, 200, 1.3),
    ]
    bern_cases = []
    for i, (q_p, k, factor) in enumerate(bern_specs):
        rng = substream(rng_seed, "tail-bernoulli", i)
        counts = rng.binomial(k, q_p, size=trials)
        threshold = factor * q_p * k
        if factor > 1.0:
            observed = float((counts > threshold).mean())
        else:
            observed = float((counts < threshold).mean())
        rate = factor * math.log(factor) - factor + 1.0
        bound = math.exp(-rate * q_p * k)
        bern_cases.append(
            TailCase(
                label=f"bernoulli(q={q_p},k={k},factor={factor})",
                observed=observed,
                bound=bound,
                premise_holds=True,
            )
        )
    return TailBoundReport(info_cases=tuple(info_cases), bernoulli_cases=tuple(bern_cases))
