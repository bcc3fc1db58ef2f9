"""Command-line interface.

Three subcommands:

* ``region``   - boundary sweep of the achievable (r, alpha, kappa) triples
                 for a channel pair, as CSV (default) or JSON, optionally
                 rendering a figure next to the data.
* ``simulate`` - build one of the concrete codes, run the attack family
                 against it, and emit the exact evaluation as JSON.
* ``verify``   - run the property batteries (Fourier-Motzkin equivalence,
                 relabeling-spread concentration, tail bounds, fixture
                 validation) and fail on any violation.

Exit codes: 0 ok, 1 property failure, 2 usage/validation, 3 search budget
exhausted under --strict, 4 enumeration cap breached.  All randomness flows
from --seed through named substreams, so identical (args, seed) give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import adversary, codes, region
from .channels import ChannelPair, DiscreteChannel, Pmf, bsc
from .errors import SizeCapError, ValidationError

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_CAP = 4

# Example pair used when a battery needs a channel pair and none was given.
# The choice is ours, not sourced data; outputs flag it.
DEFAULT_BSC_PAIR = (0.1, 0.2)


def fmt(x: float) -> str:
    """9 significant digits, '.' decimal, no locale."""
    return f"{x:.9g}"


def load_channel_pair(args) -> tuple[ChannelPair, dict]:
    """Channel pair from --bsc or a spec file, plus provenance metadata."""
    if args.bsc is not None:
        lt, lq = args.bsc
        return ChannelPair(main=bsc(lt), tap=bsc(lq)), {
            "main_bsc": lt,
            "tap_bsc": lq,
        }
    if args.spec is None:
        raise ValidationError("either --bsc LT LQ or --spec FILE is required")
    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"spec file not found: {args.spec}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"spec file {args.spec} is not valid JSON: {exc}")
    if "main_bsc" in doc or "tap_bsc" in doc:
        try:
            lt, lq = float(doc["main_bsc"]), float(doc["tap_bsc"])
        except KeyError as exc:
            raise ValidationError(f"spec file missing field {exc}")
        return ChannelPair(main=bsc(lt), tap=bsc(lq)), {
            "name": doc.get("name", args.spec),
            "main_bsc": lt,
            "tap_bsc": lq,
        }
    try:
        main = DiscreteChannel(np.asarray(doc["main"], dtype=np.float64))
        tap = DiscreteChannel(np.asarray(doc["tap"], dtype=np.float64))
    except KeyError as exc:
        raise ValidationError(f"spec file missing field {exc}")
    return ChannelPair(main=main, tap=tap), {"name": doc.get("name", args.spec)}


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# region
# ---------------------------------------------------------------------------


def cmd_region(args) -> int:
    pair, channel_meta = load_channel_pair(args)
    if (args.kappa is None) == (args.r is None):
        raise ValidationError("exactly one of --kappa or --r must be given")
    fixed = {"kappa": args.kappa} if args.kappa is not None else {"r": args.r}
    search = region.SearchParams(
        seed=args.seed,
        restarts=args.restarts,
        steps=args.steps,
        grid_resolution=args.grid_resolution,
        card_w=args.card_w,
        card_u=args.card_u,
    )
    search.resolved_cards(pair.input_size)  # caps may be lowered, never raised
    rows = region.boundary_sweep(pair, fixed, step=args.step, stop=args.stop, search=search)

    if args.format == "csv":
        lines = ["r,alpha,kappa,witness_kind,budget_flag"]
        for row in rows:
            lines.append(
                f"{fmt(row.r)},{fmt(row.alpha)},{fmt(row.kappa)},"
                f"{row.witness_kind},{str(row.budget_flag).lower()}"
            )
        text = "\n".join(lines) + "\n"
    else:
        doc = {
            "meta": {
                "channels": channel_meta,
                "fixed": fixed,
                "step": args.step,
                "seed": args.seed,
            },
            "rows": [
                {
                    "r": row.r,
                    "alpha": row.alpha,
                    "kappa": row.kappa,
                    "witness_kind": row.witness_kind,
                    "budget_flag": row.budget_flag,
                }
                for row in rows
            ],
        }
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    _write_output(text, args.out)

    if args.plot is not None:
        from .plotting import render_region_figure

        render_region_figure(rows, args.plot)

    if args.strict and any(row.budget_flag for row in rows):
        print("search budget exhausted on flagged rows", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

ATTACK_NAMES = ("impostor", "substitution", "bestdet")


def build_code(args) -> codes.TabularCode:
    if args.code == "simmons":
        return codes.simmons_noiseless_code(args.n, args.kappa, rng_seed=args.seed)
    if args.code == "lai-toy":
        if args.r is None:
            raise ValidationError("--r is required for the lai-toy code")
        return codes.lai_toy_code(
            args.n, args.kappa, args.r, tap=bsc(args.tap_bsc), rng_seed=args.seed
        )
    raise ValidationError(f"unknown code builder {args.code!r}")


def cmd_simulate(args) -> int:
    code = build_code(args)
    pair = ChannelPair(main=bsc(args.main_bsc), tap=bsc(args.tap_bsc))
    names = [name.strip() for name in args.attacks.split(",") if name.strip()]
    for name in names:
        if name not in ATTACK_NAMES:
            raise ValidationError(
                f"unknown attack {name!r}; choose from {', '.join(ATTACK_NAMES)}"
            )
    if not names:
        raise ValidationError("at least one attack name is required")
    threshold = args.threshold if args.threshold is not None else args.kappa / 2.0

    attacks = []
    for name in names:
        if name == "impostor":
            attacks.append(adversary.impostor_attack(code, pair))
        elif name == "substitution":
            attacks.append(adversary.substitution_attack(code, pair))
        else:
            attacks.append(adversary.best_deterministic_attack(code, pair, threshold))

    bracket = adversary.typical_auth_rate(code, pair, args.epsilon, attacks)
    i_yk, h_kz = adversary.mi_key_bounds(code, pair)
    reports = [
        adversary.attack_report(code, pair, attack, threshold).as_dict()
        for attack in attacks
    ]
    meta = {k: v for k, v in code.meta.items() if k != "subsets"}
    doc = {
        "code": {
            "kind": code.meta.get("kind"),
            "n": code.n,
            "r": code.params.r,
            "kappa": code.params.kappa,
            "num_messages": code.num_messages,
            "num_keys": code.num_keys,
            "meta": meta,
        },
        "channels": {"main_bsc": args.main_bsc, "tap_bsc": args.tap_bsc},
        "seed": args.seed,
        "epsilon": args.epsilon,
        "threshold_a": threshold,
        "message_error": codes.message_error(code, bsc(args.main_bsc)),
        "mi_key_bounds": {"i_yk_per_use": i_yk, "h_k_given_z_per_use": h_kz},
        "auth_rate": bracket.as_dict(),
        "attacks": reports,
    }
    if args.code == "lai-toy":
        check = codes.check_lai_strategy(code, pair, epsilon=args.epsilon)
        doc["lai_check"] = {
            "structural": check.structural,
            "leakage_bits": check.leakage,
            "ok": check.ok,
        }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    _write_output(text, args.out)
    if args.plot is not None:
        from .plotting import render_simulation_figure

        render_simulation_figure(doc, args.plot)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

BATTERY_NAMES = ("fm", "spread", "tail", "fixture")


def cmd_verify(args) -> int:
    selected = BATTERY_NAMES if args.only is None else tuple(
        name.strip() for name in args.only.split(",") if name.strip()
    )
    for name in selected:
        if name not in BATTERY_NAMES:
            raise ValidationError(
                f"unknown battery {name!r}; choose from {', '.join(BATTERY_NAMES)}"
            )
    results = {}

    if "fm" in selected:
        if args.bsc is not None:
            lt, lq = args.bsc
            pair_note = "user"
        else:
            lt, lq = DEFAULT_BSC_PAIR
            pair_note = "default-example-pair"
        pair = ChannelPair(main=bsc(lt), tap=bsc(lq))
        chain = region.identity_chain(Pmf.uniform(2))
        report = region.fm_equivalence_check(
            pair, chain, samples=args.samples, rng_seed=args.seed
        )
        results["fm"] = {
            "ok": report.ok,
            "samples": report.samples,
            "disagreements": len(report.disagreements),
            "pair": {"main_bsc": lt, "tap_bsc": lq, "choice": pair_note},
        }

    if "spread" in selected:
        rates = codes.mapping_spread_rates(
            n=4, base_rate=1.0, beta=0.5, num_seeds=args.spread_seeds, rng_seed=args.seed
        )
        ok = (
            rates["pair_violation_rate"] <= rates["pair_fail_bound"]
            and rates["load_violation_rate"] <= rates["load_fail_bound"]
        )
        results["spread"] = {"ok": ok, **rates}

    if "tail" in selected:
        report = adversary.tail_bound_checks(rng_seed=args.seed, trials=args.trials)
        results["tail"] = report.as_dict()

    if "fixture" in selected and args.fixture is None and args.only is not None:
        raise ValidationError("--only fixture requires --fixture FILE")
    if "fixture" in selected and args.fixture is not None:
        try:
            with open(args.fixture, "r", encoding="utf-8") as fh:
                codes.code_from_json(fh.read())
            results["fixture"] = {"ok": True, "path": args.fixture}
        except FileNotFoundError:
            raise ValidationError(f"fixture file not found: {args.fixture}")
        except ValidationError as exc:
            results["fixture"] = {"ok": False, "path": args.fixture, "violation": str(exc)}

    all_ok = all(r.get("ok", False) for r in results.values())
    doc = {"batteries": results, "ok": all_ok, "seed": args.seed}
    _write_output(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK if all_ok else EXIT_PROPERTY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="authcap",
        description="Authentication capacity regions and code simulations "
        "over adversarial channel pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_region = sub.add_parser("region", help="boundary sweep of the rate region")
    p_region.add_argument("--bsc", nargs=2, type=float, metavar=("LT", "LQ"),
                          help="binary symmetric pair parameters")
    p_region.add_argument("--spec", help="channel pair JSON file")
    p_region.add_argument("--kappa", type=float, help="fix the key rate; sweep r")
    p_region.add_argument("--r", type=float, help="fix the message rate; sweep kappa")
    p_region.add_argument("--step", type=float, default=0.01)
    p_region.add_argument("--stop", type=float, default=None,
                          help="end of the swept coordinate (default: derived)")
    p_region.add_argument("--seed", type=int, default=0)
    p_region.add_argument("--restarts", type=int, default=32,
                          help="witness-search restarts (generic pairs)")
    p_region.add_argument("--steps", type=int, default=500,
                          help="witness-search gradient steps per restart")
    p_region.add_argument("--grid-resolution", type=int, default=16,
                          help="witness-search grid ticks per simplex coordinate")
    p_region.add_argument("--card-w", type=int, default=None,
                          help="lower the first auxiliary cardinality (never above its cap)")
    p_region.add_argument("--card-u", type=int, default=None,
                          help="lower the second auxiliary cardinality (never above its cap)")
    p_region.add_argument("--strict", action="store_true",
                          help="exit 3 when any row's search budget ran out")
    p_region.add_argument("--out", default=None)
    p_region.add_argument("--format", choices=("csv", "json"), default="csv")
    p_region.add_argument("--plot", default=None, help="render the sweep to this image file")
    p_region.set_defaults(func=cmd_region)

    p_sim = sub.add_parser("simulate", help="build a code and attack it")
    p_sim.add_argument("--code", choices=("simmons", "lai-toy"), required=True)
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--kappa", type=float, required=True)
    p_sim.add_argument("--r", type=float, default=None, help="message rate (lai-toy)")
    p_sim.add_argument("--main-bsc", type=float, default=0.0)
    p_sim.add_argument("--tap-bsc", type=float, default=0.0)
    p_sim.add_argument("--attacks", default="impostor,substitution,bestdet")
    p_sim.add_argument("--epsilon", type=float, default=0.05)
    p_sim.add_argument("--threshold", type=float, default=None,
                       help="exponent for the deterministic attack (default kappa/2)")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default=None)
    p_sim.add_argument("--format", choices=("json",), default="json")
    p_sim.add_argument("--plot", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_verify = sub.add_parser("verify", help="run the property batteries")
    p_verify.add_argument("--only", default=None,
                          help=f"comma list from: {', '.join(BATTERY_NAMES)}")
    p_verify.add_argument("--samples", type=int, default=10_000,
                          help="points for the Fourier-Motzkin battery")
    p_verify.add_argument("--spread-seeds", type=int, default=10_000,
                          help="spec draws for the relabeling-spread battery")
    p_verify.add_argument("--trials", type=int, default=2000,
                          help="Monte Carlo draws for the tail battery")
    p_verify.add_argument("--bsc", nargs=2, type=float, metavar=("LT", "LQ"), default=None)
    p_verify.add_argument("--fixture", default=None, help="code JSON to validate")
    p_verify.add_argument("--seed", type=int, default=1)
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
