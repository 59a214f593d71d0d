"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 infeasible, 4 numeric degeneracy.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .mini import Winner, classify_two_offer, critical_probability, optimize_proposer_two
from .model import DegenerateGameError, GameSpec, GameValidationError, RegretSpec, UtilitySpec, validate_game
from .multi import InfeasibleError, U2Mode, grid_units, optimize_U1, optimize_U2, winning_domain

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_DEGENERATE = 0, 2, 3, 4

# (a_0, a_1, a_2, beta) -> (U1, (pi_0, pi_2), U2 tilde, (pi_0, pi_1, pi_2)); A = 100
TABLE1 = [
    ((59, 51, 47, 17), 53.24, (0.52, 0.48), 53.44, (0.39, 0.44, 0.17)),
    ((70, 54, 46, 16), 55.36, (0.39, 0.61), 55.6, (0.27, 0.39, 0.34)),
    ((69, 55, 47, 15), 54.04, (0.32, 0.68), 54.3, (0.23, 0.28, 0.49)),
    ((77, 61, 41, 18), 62.6, (0.6, 0.4), 62.8, (0.55, 0.1, 0.35)),
    ((72, 56, 43, 18), 59.24, (0.56, 0.34), 59.46, (0.46, 0.24, 0.3)),
]


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "TRUE" if x else "FALSE"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".6g")
    if isinstance(x, (tuple, list)):
        return " ".join(fmt(v) for v in x)
    return str(x)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise CLIError(f"bad number list {text!r}", EXIT_INVALID) from e


def _betas(text: str) -> list[float]:
    if ":" in text:
        parts = [float(t) for t in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise CLIError("beta range must be start:stop:step", EXIT_INVALID)
        start, stop, step = parts
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    return _floats(text)


def _utility(kind: str, gamma: float | None) -> UtilitySpec:
    try:
        return UtilitySpec(kind, gamma if kind != "linear" else None)
    except ValueError as e:
        raise CLIError(str(e), EXIT_INVALID) from e


def _regret(args) -> RegretSpec:
    if args.regret == "linear" or args.beta is None:
        return RegretSpec.linear()
    try:
        return RegretSpec.sinh(args.beta)
    except ValueError as e:
        raise CLIError(str(e), EXIT_INVALID) from e


def _game(args, need_offers: bool = True) -> GameSpec:
    if getattr(args, "spec", None):
        try:
            return GameSpec.from_json(Path(args.spec).read_text(encoding="utf-8"))
        except (OSError, KeyError, ValueError) as e:
            raise CLIError(f"cannot read spec file: {e}", EXIT_INVALID) from e
    if args.A is None:
        raise CLIError("--A (or --spec) is required", EXIT_INVALID)
    offers = _floats(args.offers) if getattr(args, "offers", None) else []
    if need_offers and not offers:
        raise CLIError("--offers is required", EXIT_INVALID)
    u1 = _utility(args.u, args.gamma)
    u2 = _utility(args.u_responder or args.u, args.gamma_responder if args.gamma_responder else args.gamma)
    return GameSpec(args.A, tuple(offers), _regret(args), u1, u2)


def _validated(args) -> GameSpec:
    game = _game(args)
    report = validate_game(game)
    if not report.ok:
        raise CLIError("invalid game: " + "; ".join(report.problems), EXIT_INVALID)
    return game


def _output_format(args) -> str:
    out = getattr(args, "out", None)
    fmt_flag = getattr(args, "format", None)
    ext = Path(out).suffix.lower().lstrip(".") if out else ""
    if fmt_flag and ext and ext in ("csv", "json") and ext != fmt_flag:
        raise CLIError(f"--format {fmt_flag} does not match output extension .{ext}", EXIT_INVALID)
    return fmt_flag or (ext if ext in ("csv", "json") else "csv")


def _emit_rows(args, header: list[str], rows: list[list], stdout) -> None:
    kind = _output_format(args)
    if kind == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=2, default=float) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def _emit_record(args, record: dict, stdout) -> None:
    if args.json:
        stdout.write(json.dumps(record, indent=2, default=float) + "\n")
    else:
        for key, value in record.items():
            stdout.write(f"{key}: {fmt(value) if value is not None else '-'}\n")


def cmd_classify(args, stdout) -> int:
    game = _validated(args)
    if game.size != 2:
        raise CLIError("classify needs exactly two offers", EXIT_INVALID)
    verdict = classify_two_offer(game)
    _emit_record(args, {
        "winner": verdict.winner.value,
        "pi_c": verdict.pi_c,
        "p0_bound": verdict.p0_bound,
        "kappa": verdict.kappa,
    }, stdout)
    return EXIT_OK


def cmd_scan_pic(args, stdout) -> int:
    args.beta = args.beta or 1.0
    base = _validated(args)
    if base.size != 2:
        raise CLIError("scan-pic needs exactly two offers", EXIT_INVALID)
    rows = []
    for beta in _betas(args.betas):
        game = base.with_regret(RegretSpec.sinh(beta))
        pc = critical_probability(game)
        if not np.isfinite(pc):
            raise DegenerateGameError(f"pi_c is not finite at beta={beta}")
        rows.append([beta, pc, classify_two_offer(game).winner.value])
    _emit_rows(args, ["beta", "pi_c", "regime"], rows, stdout)
    return EXIT_OK


def cmd_domain(args, stdout) -> int:
    game = _validated(args)
    try:
        grid_units(args.grid_step)
    except ValueError as e:
        raise CLIError(str(e), EXIT_INVALID) from e
    domain = winning_domain(game, args.grid_step)
    header = [f"pi_{i}" for i in range(game.size)] + ["in_domain"]
    rows = [list(map(float, pt)) + [int(m)] for pt, m in zip(domain.points, domain.mask)]
    _emit_rows(args, header, rows, stdout)
    return EXIT_OK


def cmd_optimize(args, stdout) -> int:
    regret = _regret(args)
    u1 = _utility(args.u, args.gamma)
    u2 = _utility(args.u_responder or args.u, args.gamma_responder or args.gamma)
    if args.A is None:
        raise CLIError("--A is required", EXIT_INVALID)
    if args.mode == "two":
        if args.a1 is None:
            raise CLIError("--a1 is required for mode two", EXIT_INVALID)
        if not 0 < args.a1 < args.A / 2:
            raise CLIError("--a1 must lie in (0, A/2)", EXIT_INVALID)
        game = GameSpec(args.A, (args.A - args.a1, args.a1), regret, u1, u2)
        opt = optimize_proposer_two(game, args.a1, utility_weighted=args.weighted)
        record = {"mode": "two", "value": opt.value, "a0": opt.a0_star, "a1": args.a1,
                  "pi_0": opt.pi_star, "open_boundary": opt.open_boundary}
    else:
        if args.a2 is None:
            raise CLIError("--a2 is required", EXIT_INVALID)
        if args.mode == "u1":
            game = GameSpec(args.A, (args.A, args.a2), regret, u1, u2)
            opt = optimize_U1(game, args.a2, args.grid_step, args.offer_step, args.refine_step)
        else:
            a0 = args.a0
            if args.mode == "tilde" and a0 is None:
                raise CLIError("--a0 is required for mode tilde", EXIT_INVALID)
            game = GameSpec(args.A, (a0 or args.A, args.a2, args.a2), regret, u1, u2)
            mode = U2Mode.TILDE if args.mode == "tilde" else U2Mode.FULL
            opt = optimize_U2(game, args.a2, mode, a0, args.grid_step, args.offer_step, args.refine_step)
        record = {"mode": args.mode, "value": opt.value, "offers": list(opt.offers_star),
                  "pi": list(opt.pi_star), "supremum": opt.supremum}
    _emit_record(args, record, stdout)
    return EXIT_OK


def table1_rows(grid_step: float = 0.01, offer_step: float = 1.0) -> list[list]:
    """Recompute the reference two/three-offer table; one row per quantity, one column per case."""
    rows = {key: [] for key in (
        "U1", "U1_ref", "U1_deviation", "pi_two", "pi_two_ref",
        "U2_tilde", "U2_tilde_ref", "U2_tilde_deviation", "pi_three", "pi_three_ref",
        "a0_star", "a1_star", "sandwich")}
    for (a0, a1, a2, beta), u1p, pi2p, u2p, pi3p in TABLE1:
        game = GameSpec(100.0, (a0, a1, a2), RegretSpec.sinh(beta))
        one = optimize_U1(game, a2, grid_step, offer_step)
        tilde = optimize_U2(game, a2, U2Mode.TILDE, a0, grid_step, offer_step)
        rows["U1"].append(one.value)
        rows["U1_ref"].append(u1p)
        rows["U1_deviation"].append(one.value - u1p)
        rows["pi_two"].append(one.pi_star)
        rows["pi_two_ref"].append(pi2p)
        rows["U2_tilde"].append(tilde.value)
        rows["U2_tilde_ref"].append(u2p)
        rows["U2_tilde_deviation"].append(tilde.value - u2p)
        rows["pi_three"].append(tilde.pi_star)
        rows["pi_three_ref"].append(pi3p)
        rows["a0_star"].append(one.offers_star[0])
        rows["a1_star"].append(tilde.offers_star[1])
        rows["sandwich"].append(one.value <= tilde.value + 1e-9)
    return [[key] + vals for key, vals in rows.items()]


def cmd_table1(args, stdout) -> int:
    header = ["quantity"] + ["({} {} {} {})".format(*c[0]) for c in TABLE1]
    _emit_rows(args, header, table1_rows(args.grid_step, args.offer_step), stdout)
    return EXIT_OK


def cmd_properties(args, stdout) -> int:
    """Randomized cross-checks between the regret engine, the EU oracle and
    the two-offer closed forms; deterministic for a given seed."""
    from .engine import delta_R
    from .eu import eu_regret_gap
    from .mini import kappa_difference, kappa_signed

    rng = np.random.default_rng(args.seed)
    rows = []
    for i in range(args.count):
        total = 100.0
        size = int(rng.integers(2, 5))
        offers = tuple(sorted(rng.uniform(1, 99, size), reverse=True))
        pi = rng.dirichlet(np.ones(size))
        p = np.sort(rng.uniform(0, 1, size))
        p[-1] = 1.0
        lin = GameSpec(total, offers, RegretSpec.linear())
        lhs = float(delta_R(lin, pi, p).delta)
        rhs = -eu_regret_gap(lin, pi, p)
        rows.append([i, "engine_vs_eu", lhs, rhs, abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))])
        two = GameSpec(total, offers[:1] + offers[-1:], RegretSpec.sinh(float(rng.uniform(5, 50))))
        kp, kd = float(kappa_signed(two)), kappa_difference(two)
        rows.append([i, "kappa_forms", kp, kd, abs(kp - kd) <= 1e-9 * max(1.0, abs(kp))])
    _emit_rows(args, ["instance", "check", "lhs", "rhs", "ok"], rows, stdout)
    return EXIT_OK if all(r[-1] for r in rows) else 1


def _add_game_args(p: argparse.ArgumentParser, offers: bool = True) -> None:
    p.add_argument("--spec", help="JSON game spec file (overrides inline flags)")
    p.add_argument("--A", type=float, help="total sum to divide")
    if offers:
        p.add_argument("--offers", help="comma-separated amounts kept by the proposer, greediest first")
    _add_model_args(p)


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=float, help="sinh regret scale (omit for linear regret)")
    p.add_argument("--regret", choices=["sinh", "linear"], default="sinh")
    p.add_argument("--u", choices=["linear", "log"], default="linear", help="proposer utility")
    p.add_argument("--gamma", type=float, help="wealth parameter of a log utility")
    p.add_argument("--u-responder", choices=["linear", "log"], help="responder utility (default: --u)")
    p.add_argument("--gamma-responder", type=float)


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (.csv or .json); stdout if omitted")
    p.add_argument("--format", choices=["csv", "json"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regret-ultimatum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="two-offer winner, pi_c, acceptance bound, kappa")
    _add_game_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan-pic", help="critical probability over a beta sweep")
    _add_game_args(p)
    p.add_argument("--betas", default="0.5:30:0.5", help="start:stop:step or comma list")
    _add_output_args(p)
    p.set_defaults(func=cmd_scan_pic)

    p = sub.add_parser("domain", help="winning-domain membership on the simplex grid")
    _add_game_args(p)
    p.add_argument("--grid-step", type=float, default=0.01)
    _add_output_args(p)
    p.set_defaults(func=cmd_domain)

    p = sub.add_parser("optimize", help="proposer's optimal mean utility")
    p.add_argument("--mode", choices=["two", "u1", "u2", "tilde"], required=True)
    p.add_argument("--A", type=float)
    p.add_argument("--a0", type=float)
    p.add_argument("--a1", type=float)
    p.add_argument("--a2", type=float)
    _add_model_args(p)
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--offer-step", type=float, default=1.0)
    p.add_argument("--refine-step", type=float)
    p.add_argument("--weighted", action="store_true", help="weigh outcomes by proposer utility (mode two)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("table1", help="recompute the two/three-offer comparison table")
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--offer-step", type=float, default=1.0)
    _add_output_args(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("properties", help="randomized engine/oracle cross-checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    _add_output_args(p)
    p.set_defaults(func=cmd_properties)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, stdout)
    except (CLIError,) as e:
        stderr.write(f"error: {e}\n")
        return e.code
    except GameValidationError as e:
        stderr.write(f"error: invalid game: {e}\n")
        return EXIT_INVALID
    except InfeasibleError as e:
        stderr.write(f"infeasible: {e}\n")
        return EXIT_INFEASIBLE
    except DegenerateGameError as e:
        stderr.write(f"degenerate: {e}\n")
        return EXIT_DEGENERATE
    except ValueError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
