"""Typical-authentication capacity region.

The region over a channel pair is the set of rate triples (r, alpha, kappa)
for which some auxiliary chain W -> U -> X -> (Y, Z) satisfies

    r + alpha           <= I(Y; U, W)
    2*alpha - kappa     <= I(Y; U|W) - I(Z; U|W)
    alpha - kappa       <= 0

This module evaluates those constraints for explicit chains, searches for
witness chains (an inner approximation: TRUE answers carry a verified
witness, FALSE answers only mean the search budget found none), provides the
closed forms for binary-symmetric pairs, checks the Fourier-Motzkin
equivalence between the two-stage description and the eliminated system, and
produces boundary sweeps.

Search strategy (is_achievable / best_constraints):
  stage 1: canonical chains (U = X with constant W, for uniform and
           capacity-achieving inputs; fully-correlated W = U = X),
  stage 2: multi-start projected-gradient ascent over the product of
           simplices parameterizing (p_W, p_{U|W}, p_{X|U}), with
           finite-difference gradients evaluated in one batched pass,
  stage 3: coarse grid over the U = X, |W| <= 2 sub-family (binary input
           alphabets only).
Work units (restarts, grid rows) own independent RNG substreams keyed by
(seed, unit index) and results merge deterministically by stage order, so a
fixed seed gives a fixed answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelPair, DiscreteChannel, JointLaw, Pmf
from .errors import ValidationError
from .measures import (
    binary_entropy,
    channel_capacity,
    entropy_bits,
    mutual_information,
)
from .rng import substream

# Additive slack on every region inequality; covers float error in the
# entropy arithmetic without admitting materially infeasible points.
INEQ_SLACK = 1e-9
MIN_RATE = 1e-12


def card_caps(input_size: int) -> tuple[int, int]:
    """Auxiliary-alphabet caps (|W|, |U|) that lose no part of the region."""
    return input_size + 2, (input_size + 1) * (input_size + 2)


@dataclass(frozen=True)
class RateTriple:
    """Message rate r, authentication rate alpha, key consumption kappa (bits/use)."""

    r: float
    alpha: float
    kappa: float

    def __post_init__(self):
        for name in ("r", "alpha", "kappa"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"rate {name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class RegionConstraints:
    """Constraint values produced by one auxiliary chain.

    ``sum_bound`` is I(Y;U,W); ``secrecy_margin`` is I(Y;U|W) - I(Z;U|W)
    (may be negative when the tap channel is the less noisy one).
    """

    sum_bound: float
    secrecy_margin: float

    def __post_init__(self):
        if self.sum_bound < 0:
            raise ValidationError(f"sum bound must be >= 0, got {self.sum_bound}")


@dataclass(frozen=True)
class AuxiliaryChain:
    """Distributions (p_W, p_{U|W}, p_{X|U}) realizing W -> U -> X -> (Y, Z)."""

    w_dist: Pmf
    u_given_w: DiscreteChannel
    x_given_u: DiscreteChannel

    def __post_init__(self):
        if self.w_dist.size != self.u_given_w.input_size:
            raise ValidationError("w_dist size does not match u_given_w input")
        if self.u_given_w.output_size != self.x_given_u.input_size:
            raise ValidationError("u_given_w output does not match x_given_u input")
        cap_w, cap_u = card_caps(self.x_given_u.output_size)
        if self.w_dist.size > cap_w:
            raise ValidationError(
                f"|W| = {self.w_dist.size} exceeds the cardinality cap {cap_w}"
            )
        if self.x_given_u.input_size > cap_u:
            raise ValidationError(
                f"|U| = {self.x_given_u.input_size} exceeds the cardinality cap {cap_u}"
            )

    @property
    def input_size(self) -> int:
        return self.x_given_u.output_size

    def joint_with(self, pair: ChannelPair) -> JointLaw:
        """Joint law over (W, U, X, Y, Z) with the Markov structure built in."""
        if self.input_size != pair.input_size:
            raise ValidationError(
                f"chain emits {self.input_size} input symbols, pair expects {pair.input_size}"
            )
        table = np.einsum(
            "w,wu,ux,xy,xz->wuxyz",
            self.w_dist.probs,
            self.u_given_w.rows,
            self.x_given_u.rows,
            pair.main.rows,
            pair.tap.rows,
        )
        return JointLaw(("W", "U", "X", "Y", "Z"), table)


def identity_chain(x_dist: Pmf) -> AuxiliaryChain:
    """U = X with constant W: the chain behind the single-letter closed forms."""
    size = x_dist.size
    return AuxiliaryChain(
        w_dist=Pmf(np.ones(1)),
        u_given_w=DiscreteChannel(x_dist.probs[None, :]),
        x_given_u=DiscreteChannel(np.eye(size)),
    )


def correlated_chain(x_dist: Pmf) -> AuxiliaryChain:
    """W = U = X: every auxiliary reveals the channel input."""
    size = x_dist.size
    eye = DiscreteChannel(np.eye(size))
    return AuxiliaryChain(w_dist=x_dist, u_given_w=eye, x_given_u=eye)


def evaluate_constraints(chain: AuxiliaryChain, pair: ChannelPair) -> RegionConstraints:
    """Constraint values (I(Y;U,W), I(Y;U|W) - I(Z;U|W)) for one chain."""
    joint = chain.joint_with(pair)
    sum_bound = mutual_information(joint, "Y", ("U", "W"))
    margin = mutual_information(joint, "Y", "U", "W") - mutual_information(
        joint, "Z", "U", "W"
    )
    return RegionConstraints(sum_bound=sum_bound, secrecy_margin=margin)


def lai_inner_constraints(chain: AuxiliaryChain, pair: ChannelPair) -> RegionConstraints:
    """Same numeric pair as evaluate_constraints; membership for the Lai inner
    region uses alpha <= margin in place of 2*alpha - kappa <= margin."""
    return evaluate_constraints(chain, pair)


def satisfies_region(point: RateTriple, c: RegionConstraints) -> bool:
    """Full-region membership against fixed constraint values."""
    return (
        point.r + point.alpha <= c.sum_bound + INEQ_SLACK
        and 2 * point.alpha - point.kappa <= c.secrecy_margin + INEQ_SLACK
        and point.alpha <= point.kappa + INEQ_SLACK
    )


def satisfies_lai_region(point: RateTriple, c: RegionConstraints) -> bool:
    """Membership in the channel-security-only inner region (no key recycling)."""
    return (
        point.r + point.alpha <= c.sum_bound + INEQ_SLACK
        and point.alpha <= c.secrecy_margin + INEQ_SLACK
        and point.alpha <= point.kappa + INEQ_SLACK
    )


def simmons_shift(point: RateTriple, beta: float) -> RateTriple:
    """Trade beta bits of message rate for beta bits of authentication at a
    cost of 2*beta bits of key: (r, a, k) -> (r - beta, a + beta, k + 2*beta)."""
    if not 0.0 <= beta < point.r:
        raise ValidationError(f"shift requires 0 <= beta < r = {point.r}, got {beta}")
    return RateTriple(point.r - beta, point.alpha + beta, point.kappa + 2 * beta)


def bsc_region_constraints(lambda_t: float, lambda_q: float) -> RegionConstraints:
    """Closed-form constraints when both channels are binary symmetric.

    For lambda_t <= lambda_q (main channel less noisy) the margin is
    h(lambda_q) - h(lambda_t); otherwise the degraded main channel leaves no
    channel-provided secrecy and the margin is 0.
    """
    for name, lam in (("lambda_t", lambda_t), ("lambda_q", lambda_q)):
        if not 0.0 <= lam <= 0.5:
            raise ValidationError(f"{name} must lie in [0, 1/2], got {lam}")
    sum_bound = 1.0 - binary_entropy(lambda_t)
    if lambda_t <= lambda_q:
        margin = binary_entropy(lambda_q) - binary_entropy(lambda_t)
    else:
        margin = 0.0
    return RegionConstraints(sum_bound=sum_bound, secrecy_margin=margin)


def bsc_parameters(pair: ChannelPair) -> tuple[float, float] | None:
    """(lambda_t, lambda_q) when both channels are BSCs in [0, 1/2], else None."""
    params = []
    for ch in (pair.main, pair.tap):
        rows = ch.rows
        if rows.shape != (2, 2):
            return None
        lam = rows[0, 1]
        if abs(rows[1, 0] - lam) > 1e-12 or abs(rows[0, 0] - (1 - lam)) > 1e-12:
            return None
        if lam > 0.5 + 1e-12:
            return None
        params.append(min(float(lam), 0.5))
    return params[0], params[1]


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchParams:
    """Budget and shape of the witness search.

    Cardinalities may be lowered below the region-preserving caps for speed
    but never raised above them (raising would void the membership claim).
    """

    restarts: int = 32
    steps: int = 500
    step_size: float = 0.05
    grid_resolution: int = 16
    seed: int = 0
    card_w: int | None = None
    card_u: int | None = None

    def resolved_cards(self, input_size: int) -> tuple[int, int]:
        cap_w, cap_u = card_caps(input_size)
        w = cap_w if self.card_w is None else self.card_w
        u = cap_u if self.card_u is None else self.card_u
        if w < 1 or u < 1:
            raise ValidationError("cardinalities must be >= 1")
        if w > cap_w or u > cap_u:
            raise ValidationError(
                f"cardinalities ({w}, {u}) may not exceed the caps ({cap_w}, {cap_u})"
            )
        return w, u


@dataclass(frozen=True)
class SearchResult:
    achievable: bool
    witness: AuxiliaryChain | None
    witness_kind: str
    budget_flag: bool


def _canonical_chains(pair: ChannelPair) -> list[tuple[str, AuxiliaryChain]]:
    size = pair.input_size
    uniform = Pmf.uniform(size)
    _, maximizer = channel_capacity(pair.main, tol=1e-10)
    chains = [
        ("canonical:U=X:capacity-input", identity_chain(maximizer)),
        ("canonical:U=X:uniform-input", identity_chain(uniform)),
        ("canonical:W=U=X:capacity-input", correlated_chain(maximizer)),
        ("canonical:W=U=X:uniform-input", correlated_chain(uniform)),
    ]
    return chains


class _ChainObjective:
    """Batched evaluation of region constraints over parameter vectors.

    A parameter vector stacks p_W, the rows of p_{U|W}, and the rows of
    p_{X|U}; each block lives on its own simplex.  Batching lets one call
    score a whole finite-difference stencil.
    """

    def __init__(self, pair: ChannelPair, card_w: int, card_u: int):
        self.pair = pair
        self.cw = card_w
        self.cu = card_u
        self.cx = pair.input_size
        self.block_sizes = [card_w] + [card_u] * card_w + [self.cx] * card_u
        self.dim = sum(self.block_sizes)

    def split(self, theta: np.ndarray):
        b = theta.shape[0]
        w = theta[:, : self.cw]
        uw = theta[:, self.cw : self.cw + self.cw * self.cu].reshape(b, self.cw, self.cu)
        xu = theta[:, self.cw + self.cw * self.cu :].reshape(b, self.cu, self.cx)
        return w, uw, xu

    def constraints(self, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(sum_bound, margin) for each parameter vector in the batch."""
        w, uw, xu = self.split(theta)
        joint = np.einsum(
            "bw,bwu,bux,xy,xz->bwuxyz",
            w,
            uw,
            xu,
            self.pair.main.rows,
            self.pair.tap.rows,
            optimize=True,
        )
        h = _batch_entropy
        yuw = joint.sum(axis=(3, 5))  # (b, W, U, Y)
        zuw = joint.sum(axis=(3, 4))  # (b, W, U, Z)
        h_y = h(joint.sum(axis=(1, 2, 3, 5)))
        h_uw = h(joint.sum(axis=(3, 4, 5)))
        h_yw = h(yuw.sum(axis=2))
        h_zw = h(zuw.sum(axis=2))
        h_yuw = h(yuw)
        h_zuw = h(zuw)
        sum_bound = h_y + h_uw - h_yuw
        margin = (h_yw - h_yuw) - (h_zw - h_zuw)
        return sum_bound, margin

    def chain(self, theta_row: np.ndarray) -> AuxiliaryChain:
        w, uw, xu = self.split(theta_row[None, :])
        return AuxiliaryChain(
            w_dist=Pmf(w[0]),
            u_given_w=DiscreteChannel(uw[0]),
            x_given_u=DiscreteChannel(xu[0]),
        )

    def random_theta(self, rng: np.random.Generator) -> np.ndarray:
        parts = [rng.dirichlet(np.ones(size)) for size in self.block_sizes]
        return np.concatenate(parts)

    def project(self, theta: np.ndarray) -> np.ndarray:
        out = np.empty_like(theta)
        offset = 0
        for size in self.block_sizes:
            out[offset : offset + size] = _project_simplex(theta[offset : offset + size])
            offset += size
        return out


def _batch_entropy(tables: np.ndarray) -> np.ndarray:
    flat = tables.reshape(tables.shape[0], -1)
    safe = np.where(flat > 0, flat, 1.0)
    return -(flat * np.log2(safe)).sum(axis=1)


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    tau = css[rho - 1] / rho
    return np.maximum(v - tau, 0.0)


def _gradient_ascent(
    objective,
    space: _ChainObjective,
    params: SearchParams,
    stream_name: str,
    target: float | None = None,
) -> tuple[float, np.ndarray]:
    """Multi-start projected-gradient ascent; deterministic given the seed.

    `objective` maps a batch of parameter vectors to a batch of scores.
    Stops a restart early once `target` is reached (when given).
    """
    best_val = -np.inf
    best_theta = None
    h = 1e-6
    for restart in range(params.restarts):
        rng = substream(params.seed, stream_name, restart)
        theta = space.random_theta(rng)
        value = float(objective(theta[None, :])[0])
        step = params.step_size
        for _ in range(params.steps):
            if target is not None and value >= target:
                break
            stencil = np.repeat(theta[None, :], space.dim + 1, axis=0)
            stencil[1:] += h * np.eye(space.dim)
            scores = objective(stencil)
            grad = (scores[1:] - scores[0]) / h
            norm = np.linalg.norm(grad)
            if norm < 1e-12:
                break
            candidate = space.project(theta + step * grad / norm)
            cand_val = float(objective(candidate[None, :])[0])
            if cand_val > value:
                theta, value = candidate, cand_val
            else:
                step *= 0.5
                if step < 1e-7:
                    break
        if value > best_val:
            best_val, best_theta = value, theta
        if target is not None and best_val >= target:
            break
    return best_val, best_theta


def _binary_grid_chains(pair: ChannelPair, resolution: int):
    """Coarse grid over the U = X, |W| <= 2 sub-family (binary inputs only)."""
    ticks = np.linspace(0.0, 1.0, resolution + 1)
    eye = DiscreteChannel(np.eye(2))
    for pw in ticks:
        for a in ticks:
            for b in ticks:
                w_dist = Pmf(np.array([pw, 1.0 - pw]))
                rows = np.array([[a, 1.0 - a], [b, 1.0 - b]])
                chain = AuxiliaryChain(
                    w_dist=w_dist,
                    u_given_w=DiscreteChannel(rows),
                    x_given_u=eye,
                )
                yield chain


def is_achievable(
    point: RateTriple, pair: ChannelPair, search: SearchParams | None = None
) -> SearchResult:
    """Search for a witness chain covering `point`.

    TRUE results are sound: the returned witness satisfies the region
    inequalities for the point.  FALSE results mean no witness was found
    within the search budget (budget_flag set), except for the
    chain-independent violations alpha > kappa and r + alpha above channel
    capacity, which are certified false.
    """
    search = search or SearchParams()
    if point.r < MIN_RATE:
        raise ValidationError(
            f"region membership requires r > 0 (r >= {MIN_RATE}), got {point.r}"
        )
    if point.alpha > point.kappa + INEQ_SLACK:
        return SearchResult(False, None, "certified:alpha>kappa", budget_flag=False)
    capacity, _ = channel_capacity(pair.main, tol=1e-10)
    if point.r + point.alpha > capacity + 1e-6 + INEQ_SLACK:
        # I(Y;U,W) <= I(Y;X) <= C for every admissible chain.
        return SearchResult(False, None, "certified:sum>capacity", budget_flag=False)

    # Stage 1: canonical chains.
    for kind, chain in _canonical_chains(pair):
        if satisfies_region(point, evaluate_constraints(chain, pair)):
            return SearchResult(True, chain, kind, budget_flag=False)

    # Stage 2: gradient ascent on the total violation (0 iff covered).
    card_w, card_u = search.resolved_cards(pair.input_size)
    space = _ChainObjective(pair, card_w, card_u)

    def coverage(theta_batch: np.ndarray) -> np.ndarray:
        sum_bound, margin = space.constraints(theta_batch)
        s1 = sum_bound - (point.r + point.alpha)
        s2 = margin - (2 * point.alpha - point.kappa)
        return np.minimum(s1, 0.0) + np.minimum(s2, 0.0)

    best, theta = _gradient_ascent(
        coverage, space, search, "region-search", target=-INEQ_SLACK
    )
    if theta is not None and best >= -INEQ_SLACK:
        chain = space.chain(theta)
        if satisfies_region(point, evaluate_constraints(chain, pair)):
            return SearchResult(True, chain, "gradient", budget_flag=False)

    # Stage 3: coarse grid, binary input alphabets only.
    if pair.input_size == 2:
        for chain in _binary_grid_chains(pair, search.grid_resolution):
            if satisfies_region(point, evaluate_constraints(chain, pair)):
                return SearchResult(True, chain, "grid", budget_flag=False)

    return SearchResult(False, None, "search-exhausted", budget_flag=True)


def best_constraints(
    pair: ChannelPair, search: SearchParams | None = None
) -> RegionConstraints:
    """Best sum bound and best secrecy margin found over chains (searched
    independently; they are generally achieved by different chains)."""
    search = search or SearchParams()
    best_sum = 0.0
    best_margin = -np.inf
    for _, chain in _canonical_chains(pair):
        c = evaluate_constraints(chain, pair)
        best_sum = max(best_sum, c.sum_bound)
        best_margin = max(best_margin, c.secrecy_margin)

    card_w, card_u = search.resolved_cards(pair.input_size)
    space = _ChainObjective(pair, card_w, card_u)
    val, _ = _gradient_ascent(
        lambda t: space.constraints(t)[0], space, search, "best-sum"
    )
    best_sum = max(best_sum, val)
    val, _ = _gradient_ascent(
        lambda t: space.constraints(t)[1], space, search, "best-margin"
    )
    best_margin = max(best_margin, val)

    if pair.input_size == 2:
        for chain in _binary_grid_chains(pair, search.grid_resolution):
            c = evaluate_constraints(chain, pair)
            best_sum = max(best_sum, c.sum_bound)
            best_margin = max(best_margin, c.secrecy_margin)
    return RegionConstraints(sum_bound=best_sum, secrecy_margin=best_margin)


# ---------------------------------------------------------------------------
# Fourier-Motzkin equivalence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FmReport:
    samples: int
    disagreements: tuple
    constraints: RegionConstraints

    @property
    def ok(self) -> bool:
        return not self.disagreements


def _preelimination_feasible(
    r: float, alpha: float, kappa: float, c: RegionConstraints
) -> bool:
    """Decide the two-stage system by constructing and verifying a witness.

    Variables (r', a', k', beta) with r = r' - beta, a = a' + beta,
    k = k' + 2*beta; the strict inequalities are those of the pre-eliminated
    achievability system.  Substituting leaves a one-dimensional feasibility
    problem in beta; we intersect the interval bounds, take an interior
    candidate, and verify every original constraint on it.
    """
    s, d = c.sum_bound, c.secrecy_margin
    lo = max(0.0, alpha - d)  # beta >= 0 (closed), beta > alpha - d (open)
    hi = min(alpha, kappa / 2.0, kappa - alpha)  # first two closed, third open
    if lo > hi:
        return False
    candidates = [(lo + hi) / 2.0, lo, hi]
    for beta in candidates:
        rp, ap, kp = r + beta, alpha - beta, kappa - 2 * beta
        if (
            beta >= 0.0
            and beta < rp
            and rp >= 0.0
            and ap >= 0.0
            and kp >= 0.0
            and rp + ap < s
            and ap < d
            and ap - kp < 0.0
        ):
            return True
    return False


def fm_equivalence_check(
    pair: ChannelPair,
    chain: AuxiliaryChain,
    samples: int = 10_000,
    rng_seed: int = 0,
) -> FmReport:
    """Sample rate triples and compare the eliminated three-inequality system
    against feasibility of the pre-elimination system at the chain's
    constraint values.  Both sides use strict inequalities (the eliminated
    system describes the region's interior); any disagreement is reported.
    """
    c = evaluate_constraints(chain, pair)
    rng = substream(rng_seed, "fm-check", 0)
    span = max(c.sum_bound, 0.25)
    disagreements = []
    for _ in range(samples):
        r = rng.uniform(1e-6, span * 1.5)
        alpha = rng.uniform(0.0, span * 1.5)
        kappa = rng.uniform(0.0, span * 2.5)
        eliminated = (
            r + alpha < c.sum_bound
            and 2 * alpha - kappa < c.secrecy_margin
            and alpha - kappa < 0.0
        )
        feasible = _preelimination_feasible(r, alpha, kappa, c)
        if eliminated != feasible:
            disagreements.append((r, alpha, kappa, eliminated, feasible))
    return FmReport(samples=samples, disagreements=tuple(disagreements), constraints=c)


# ---------------------------------------------------------------------------
# Boundary sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    r: float
    alpha: float
    kappa: float
    witness_kind: str
    budget_flag: bool


BISECT_TOL = 1e-4
BISECT_MAX_ITER = 20


def _bsc_max_alpha(r: float, kappa: float, c: RegionConstraints) -> float | None:
    """Largest feasible alpha at (r, kappa), or None when even alpha = 0 fails."""
    if r > c.sum_bound + INEQ_SLACK:
        return None
    return max(
        0.0,
        min(c.sum_bound - r, (c.secrecy_margin + kappa) / 2.0, kappa),
    )


def boundary_sweep(
    pair: ChannelPair,
    fixed: dict,
    step: float,
    stop: float | None = None,
    search: SearchParams | None = None,
) -> list[SweepRow]:
    """Maximal authentication rate along a grid of the free coordinate.

    `fixed` is ``{"kappa": value}`` (sweep message rate r) or ``{"r": value}``
    (sweep key rate kappa).  For binary-symmetric pairs the closed form is
    used; otherwise alpha is bisected over is_achievable (tolerance 1e-4,
    at most 20 iterations) and rows whose search budget ran out carry
    budget_flag.
    """
    if step <= 0:
        raise ValidationError(f"grid step must be positive, got {step}")
    if set(fixed.keys()) not in ({"kappa"}, {"r"}):
        raise ValidationError("fixed must be exactly {'kappa': value} or {'r': value}")
    search = search or SearchParams()
    bsc_params = bsc_parameters(pair)

    if bsc_params is not None:
        constraints = bsc_region_constraints(*bsc_params)
        capacity = constraints.sum_bound
    else:
        constraints = None
        capacity, _ = channel_capacity(pair.main, tol=1e-10)

    rows: list[SweepRow] = []
    if "kappa" in fixed:
        kappa = float(fixed["kappa"])
        if kappa < 0:
            raise ValidationError(f"kappa must be >= 0, got {kappa}")
        r_stop = stop if stop is not None else capacity
        grid = _grid(step, r_stop, start=step)
        for r in grid:
            row = _sweep_row(pair, r, kappa, constraints, capacity, search)
            if row is not None:
                rows.append(row)
    else:
        r = float(fixed["r"])
        if r < MIN_RATE:
            raise ValidationError(f"fixed r must be > 0, got {r}")
        k_stop = stop if stop is not None else 2.0 * capacity
        grid = _grid(step, k_stop, start=0.0)
        for kappa in grid:
            row = _sweep_row(pair, r, kappa, constraints, capacity, search)
            if row is not None:
                rows.append(row)
    return rows


def _grid(step: float, stop: float, start: float) -> np.ndarray:
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        return np.array([])
    return start + step * np.arange(count)


def _sweep_row(
    pair: ChannelPair,
    r: float,
    kappa: float,
    constraints: RegionConstraints | None,
    capacity: float,
    search: SearchParams,
) -> SweepRow | None:
    """One sweep row, or None when the row is certified infeasible."""
    if constraints is not None:
        alpha = _bsc_max_alpha(r, kappa, constraints)
        if alpha is None:
            return None
        return SweepRow(r, alpha, kappa, "bsc-closed-form", budget_flag=False)

    # Generic pair: bisect alpha over is_achievable.
    lo, hi = 0.0, min(kappa, capacity)
    base = is_achievable(RateTriple(r, 0.0, kappa), pair, search)
    if not base.achievable:
        if not base.budget_flag:
            return None
        return SweepRow(r, 0.0, kappa, base.witness_kind, budget_flag=True)
    kind = base.witness_kind
    budget = False
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= BISECT_TOL:
            break
        mid = (lo + hi) / 2.0
        result = is_achievable(RateTriple(r, mid, kappa), pair, search)
        if result.achievable:
            lo, kind = mid, result.witness_kind
        else:
            hi = mid
            budget = budget or result.budget_flag
    return SweepRow(r, lo, kappa, kind, budget_flag=budget)
