"""The approx-stable command line."""

import argparse
import io
import logging
import math
import sys
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, NoReturn, cast

import numpy as np

from ._bench import BENCH_CELLS, run_bench, write_csv
from ._config import OracleLimitError
from ._gda import TieBreak, certified_alpha, run_gda
from ._instances import (
    RandomMarketParams,
    Rendering,
    gen_budget,
    gen_coverage_market,
    gen_crossing_market,
    gen_knapsack_lower_bound,
    gen_matroid_lower_bound,
    gen_overlapping_types,
    gen_random,
    gen_refugee,
    gen_typed_quotas,
)
from ._market import Market
from ._online import ALGORITHMS, ContractViolationError
from ._packing import PackingInstance, solve_exact
from ._serialization import (
    brute_force_to_json,
    market_from_json,
    market_to_json,
    matching_from_json,
    matching_to_json,
    packing_solution_to_json,
    report_to_json,
    trace_to_json,
)
from ._stability import alpha_stability_check, exists_stable_bruteforce, min_alpha

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_LIMIT = 2
EXIT_UNSTABLE = 3

FAMILIES = (
    "crossing",
    "coverage",
    "matroid-lb",
    "knapsack-lb",
    "typed",
    "overlap",
    "budget",
    "refugee",
    "random",
)

# Names the family generators are also known by.
FAMILY_ALIASES = {
    "example1": "crossing",
    "example2": "coverage",
    "thm62": "matroid-lb",
    "thm63": "knapsack-lb",
}

type OutputFormat = Literal["json", "table"]


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit status 1."""

    def error(self, message: str) -> NoReturn:
        """Prints usage and exits with EXIT_USAGE."""
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one CLI invocation."""

    command: str
    market: Path | None = None
    matching: Path | None = None
    alpha: float | None = None
    algorithm: str = "greedy_matroid"
    tie_break: str = "fifo"
    seed: int = 0
    out: Path | None = None
    output_format: OutputFormat = "json"
    trace: Path | None = None
    family: str | None = None
    params: Mapping[str, str] = field(default_factory=dict)
    hospital: str | None = None
    doctors: tuple[str, ...] | None = None
    seeds: int = 20
    n: int = 6
    m: int = 3
    cells: tuple[str, ...] = ()
    workers: int | None = None
    timeout: float = 60.0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Builds a config from parsed arguments.

        Raises:
            ValueError: If a field the command needs is missing or malformed.
        """
        command: str = args.command
        required = {
            "solve": ("market",),
            "check": ("market", "matching", "alpha"),
            "min-alpha": ("market", "matching"),
            "enumerate": ("market", "alpha"),
            "gen": ("family",),
            "pack": ("market", "hospital"),
            "bench": (),
        }[command]
        for name in required:
            if getattr(args, name, None) is None:
                msg = f"{command} requires --{name}"
                raise ValueError(msg)
        alpha = getattr(args, "alpha", None)
        if alpha is not None and not alpha >= 1:
            msg = f"--alpha must be >= 1, got {alpha}"
            raise ValueError(msg)
        tie_break = getattr(args, "tie_break", "fifo")
        TieBreak.from_text(tie_break)
        cells = tuple(_split(getattr(args, "cells", None)))
        known_cells = {cell.name for cell in BENCH_CELLS}
        unknown = [c for c in cells if c not in known_cells]
        if unknown:
            msg = f"Unknown bench cells {unknown}. Choose from {sorted(known_cells)}"
            raise ValueError(msg)
        doctors = getattr(args, "doctors", None)
        return cls(
            command=command,
            market=getattr(args, "market", None),
            matching=getattr(args, "matching", None),
            alpha=alpha,
            algorithm=getattr(args, "alg", "greedy_matroid"),
            tie_break=tie_break,
            seed=getattr(args, "seed", 0),
            out=args.out,
            output_format=args.format,
            trace=getattr(args, "trace", None),
            family=getattr(args, "family", None),
            params=parse_params(getattr(args, "params", None)),
            hospital=getattr(args, "hospital", None),
            doctors=None if doctors is None else tuple(_split(doctors)),
            seeds=getattr(args, "seeds", 20),
            n=getattr(args, "n", 6),
            m=getattr(args, "m", 3),
            cells=cells,
            workers=getattr(args, "workers", None),
            timeout=getattr(args, "timeout", 60.0),
        )


def _split(text: str | None) -> list[str]:
    """Splits a comma-separated option, dropping blanks."""
    return [item.strip() for item in (text or "").split(",") if item.strip()]


def parse_params(text: str | None) -> dict[str, str]:
    """Parses "k=2,eps=0.3" into a dict.

    Raises:
        ValueError: On an item without "=".
    """
    params: dict[str, str] = {}
    for item in _split(text):
        key, sep, value = item.partition("=")
        if not sep:
            msg = f"Invalid parameter '{item}', expected key=value"
            raise ValueError(msg)
        params[key.strip()] = value.strip()
    return params


class _Params:
    """Typed access to generator parameters; leftovers are errors."""

    def __init__(self, family: str, raw: Mapping[str, str]) -> None:
        self._family = family
        self._raw = dict(raw)

    def _convert[T](self, key: str, parse: Callable[[str], T], kind: str) -> T | None:
        value = self._raw.pop(key, None)
        if value is None:
            return None
        try:
            return parse(value)
        except ValueError as e:
            msg = f"Parameter {key} of {self._family} must be {kind}"
            raise ValueError(msg) from e

    def optional_int(self, key: str) -> int | None:
        return self._convert(key, int, "an integer")

    def optional_float(self, key: str) -> float | None:
        return self._convert(key, float, "a number")

    def get_int(self, key: str, default: int) -> int:
        value = self.optional_int(key)
        return default if value is None else value

    def get_float(self, key: str, default: float) -> float:
        value = self.optional_float(key)
        return default if value is None else value

    def get_str(self, key: str, default: str) -> str:
        return self._raw.pop(key, default)

    def finish(self) -> None:
        if self._raw:
            msg = f"unknown parameter(s) {sorted(self._raw)} for family {self._family}"
            raise ValueError(msg)


def generate(family: str, raw: Mapping[str, str], seed: int = 0) -> Market:
    """Builds a market of a named family from key=value parameters.

    Raises:
        ValueError: On an unknown family, unknown parameters or bad values.
    """
    family = FAMILY_ALIASES.get(family, family)
    params = _Params(family, raw)
    seed = params.get_int("seed", seed)
    rng = np.random.default_rng(seed)
    market: Market
    match family:
        case "crossing":
            rendering = params.get_str("rendering", "explicit")
            if rendering not in {"explicit", "matroid_pair", "knapsack"}:
                msg = f"Unknown rendering '{rendering}'"
                raise ValueError(msg)
            market = gen_crossing_market(
                cast("Rendering", rendering),
                params.get_float("eps", 0.25),
            )
        case "coverage":
            market = gen_coverage_market()
        case "matroid-lb":
            market = gen_matroid_lower_bound(
                params.get_int("k", 2), params.optional_float("alpha")
            )
        case "knapsack-lb":
            market = gen_knapsack_lower_bound(
                params.get_int("rho", 1),
                params.get_float("eps", 0.3),
                params.optional_int("m"),
            )
        case "typed":
            n, m = params.get_int("n", 6), params.get_int("m", 2)
            types = params.get_int("types", 2)
            quota, per_type = params.get_int("q", 3), params.get_int("qt", 2)
            groups = [list(range(t, n, types)) for t in range(types)]
            market = gen_typed_quotas(n, groups, [[per_type] * types] * m, [quota] * m)
        case "overlap":
            n, m = params.get_int("n", 6), params.get_int("m", 2)
            k, per_type = params.get_int("k", 2), params.get_int("qt", 1)
            families = [
                [[d for d in range(n) if (d >> f) & 1 == side] for side in (0, 1)]
                for f in range(k)
            ]
            market = gen_overlapping_types(n, families, [[[per_type] * 2] * k] * m)
        case "budget":
            n, m = params.get_int("n", 4), params.get_int("m", 2)
            budget = params.get_float("budget", 10.0)
            wages = rng.integers(1, max(int(budget), 2), size=(m, n))
            market = gen_budget(wages.astype(float).tolist(), [budget] * m)
        case "refugee":
            n, m = params.get_int("n", 4), params.get_int("m", 2)
            services = params.get_int("services", 2)
            capacity = params.get_float("capacity", 10.0)
            demands = rng.integers(0, max(int(capacity), 1), size=(m, n, services))
            market = gen_refugee(
                demands.astype(float).tolist(), [[capacity] * services] * m
            )
        case "random":
            market = gen_random(
                seed,
                params.get_int("n", 6),
                params.get_int("m", 3),
                params.get_str("utility", "cardinality"),
                params.get_str("constraint", "capacity"),
                RandomMarketParams(
                    k=params.get_int("k", 1),
                    rho=params.get_int("rho", 1),
                    epsilon=params.get_float("eps", 0.3),
                    acceptance=params.get_float("acceptance", 0.8),
                ),
            )
        case _:
            msg = f"Unknown family '{family}'. Choose from {list(FAMILIES)}"
            raise ValueError(msg)
    params.finish()
    return market


def _required[T](value: T | None, option: str) -> T:
    """Returns a command option that RunConfig.from_args has checked."""
    if value is None:
        msg = f"Missing required option --{option}"
        raise ValueError(msg)
    return value


def _read(path: Path) -> str:
    """Reads a UTF-8 input file."""
    return path.read_text(encoding="utf-8")


def _emit(config: RunConfig, json_text: str, table_text: str) -> None:
    """Writes the output in the configured format to --out or stdout."""
    text = json_text if config.output_format == "json" else table_text
    if config.out is None:
        sys.stdout.write(text)
    else:
        config.out.write_text(text, encoding="utf-8")
        logger.info("Wrote %s", config.out)


def _format_alpha(value: float) -> str:
    """Formats a stability factor, writing infinity as "inf"."""
    return "inf" if math.isinf(value) else repr(value)


def _pairs_table(market: Market, pairs: Sequence[tuple[int, int]]) -> str:
    """Formats matched pairs as one "doctor -> hospital" line each."""
    if not pairs:
        return "(empty matching)\n"
    return "".join(f"{market.doctors[d]} -> {market.hospitals[h]}\n" for d, h in pairs)


def _load_market(config: RunConfig) -> Market:
    return market_from_json(_read(_required(config.market, "market")))


def cmd_solve(config: RunConfig) -> int:
    """Runs deferred acceptance and writes the matching (and trace)."""
    market = _load_market(config)
    matching, trace = run_gda(market, config.algorithm, config.tie_break)
    logger.info(
        "Certified stability factor for %s: %s",
        config.algorithm,
        _format_alpha(certified_alpha(market, config.algorithm)),
    )
    if config.trace is not None:
        config.trace.write_text(trace_to_json(market, trace), encoding="utf-8")
        logger.info("Wrote trace to %s", config.trace)
    _emit(
        config,
        matching_to_json(market, matching),
        _pairs_table(market, matching.sorted_pairs()),
    )
    return EXIT_OK


def cmd_check(config: RunConfig) -> int:
    """Checks alpha-stability; exit 3 when a blocking coalition exists."""
    market = _load_market(config)
    alpha = _required(config.alpha, "alpha")
    matching = matching_from_json(_read(_required(config.matching, "matching")), market)
    report = alpha_stability_check(market, matching, alpha)
    lines = [f"alpha={alpha}: {'stable' if report.stable else 'blocked'}"]
    lines.extend(
        f"{market.hospitals[c.hospital]}: |D_h|={len(c.candidates)} "
        f"OPT={c.optimum_value!r} current={c.current_value!r}"
        for c in report.hospitals
    )
    if report.blocking is not None:
        coalition = sorted(market.doctors[d] for d in report.blocking.coalition)
        lines.append(
            f"blocking: {market.hospitals[report.blocking.hospital]} with {coalition}"
        )
    _emit(config, report_to_json(market, report), "\n".join(lines) + "\n")
    return EXIT_OK if report.stable else EXIT_UNSTABLE


def cmd_min_alpha(config: RunConfig) -> int:
    """Prints the smallest alpha at which the matching is stable."""
    market = _load_market(config)
    matching = matching_from_json(_read(_required(config.matching, "matching")), market)
    value = _format_alpha(min_alpha(market, matching))
    _emit(config, value + "\n", f"min alpha: {value}\n")
    return EXIT_OK


def cmd_enumerate(config: RunConfig) -> int:
    """Searches all feasible matchings; exit 3 when none is alpha-stable."""
    market = _load_market(config)
    result = exists_stable_bruteforce(market, _required(config.alpha, "alpha"))
    table = io.StringIO()
    table.write(f"best alpha: {_format_alpha(result.best_alpha)}\n")
    if result.witness is None:
        table.write("none\n")
    else:
        table.write(_pairs_table(market, result.witness.sorted_pairs()))
    _emit(config, brute_force_to_json(market, result), table.getvalue())
    return EXIT_OK if result.witness is not None else EXIT_UNSTABLE


def cmd_gen(config: RunConfig) -> int:
    """Writes a generated market."""
    market = generate(_required(config.family, "family"), config.params, config.seed)
    text = market_to_json(market)
    _emit(config, text, text)
    return EXIT_OK


def cmd_pack(config: RunConfig) -> int:
    """Solves one hospital's packing problem over all (or the given) doctors."""
    market = _load_market(config)
    h = market.hospital_index(_required(config.hospital, "hospital"))
    ground = (
        range(market.n_doctors)
        if config.doctors is None
        else [market.doctor_index(name) for name in config.doctors]
    )
    instance = PackingInstance.of(market.utilities[h], market.constraints[h], ground)
    solution = solve_exact(instance)
    chosen = sorted(market.doctors[d] for d in solution.chosen)
    _emit(
        config,
        packing_solution_to_json(market, solution),
        f"value: {solution.value!r}\nchosen: {', '.join(chosen)}\n",
    )
    return EXIT_OK


def cmd_bench(config: RunConfig) -> int:
    """Writes the benchmark CSV."""
    cells = [c for c in BENCH_CELLS if not config.cells or c.name in config.cells]
    rows = run_bench(
        cells,
        range(config.seeds),
        config.n,
        config.m,
        workers=config.workers,
        timeout=config.timeout,
        tie_break=config.tie_break,
    )
    buffer = io.StringIO()
    write_csv(rows, buffer)
    _emit(config, buffer.getvalue(), buffer.getvalue())
    return EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "solve": cmd_solve,
    "check": cmd_check,
    "min-alpha": cmd_min_alpha,
    "enumerate": cmd_enumerate,
    "gen": cmd_gen,
    "pack": cmd_pack,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    """Returns the argument parser for every command."""
    parser = _ArgumentParser(
        prog="approx-stable",
        description="Approximately stable matching under hospital constraints.",
    )
    parser.add_argument("--verbose", action="store_true", help="Log every round.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="Output file (default stdout).")
    common.add_argument("--format", choices=("json", "table"), default="json")
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return commands.add_parser(
            name, help=help_text, parents=[common], description=help_text
        )

    solve = add("solve", "Run generalized deferred acceptance.")
    solve.add_argument("--market", type=Path)
    solve.add_argument("--alg", choices=sorted(ALGORITHMS), default="greedy_matroid")
    solve.add_argument("--tie-break", default="fifo", help="fifo, lifo or seeded:<n>")
    solve.add_argument("--trace", type=Path, help="Write the proposal trace here.")

    check = add("check", "Check alpha-stability of a matching.")
    check.add_argument("--market", type=Path)
    check.add_argument("--matching", type=Path)
    check.add_argument("--alpha", type=float)

    minimum = add("min-alpha", "Smallest alpha at which a matching is stable.")
    minimum.add_argument("--market", type=Path)
    minimum.add_argument("--matching", type=Path)

    enumerate_ = add("enumerate", "Search all feasible matchings.")
    enumerate_.add_argument("--market", type=Path)
    enumerate_.add_argument("--alpha", type=float)

    gen = add("gen", "Generate a market.")
    gen.add_argument("--family", choices=(*FAMILIES, *FAMILY_ALIASES))
    gen.add_argument("--params", help="Comma-separated key=value pairs.")
    gen.add_argument("--seed", type=int, default=0)

    pack = add("pack", "Solve one hospital's packing problem exactly.")
    pack.add_argument("--market", type=Path)
    pack.add_argument("--hospital")
    pack.add_argument("--doctors", help="Comma-separated ground set (default all).")

    bench = add("bench", "Benchmark deferred acceptance over random markets.")
    bench.add_argument("--seeds", type=int, default=20, help="Seeds 0..N-1.")
    bench.add_argument("--n", type=int, default=6, help="Doctors per market.")
    bench.add_argument("--m", type=int, default=3, help="Hospitals per market.")
    bench.add_argument(
        "--cells", help=f"Comma-separated cells from {[c.name for c in BENCH_CELLS]}"
    )
    bench.add_argument("--workers", type=int, help="Default: physical cores.")
    bench.add_argument("--timeout", type=float, default=60.0)
    bench.add_argument("--tie-break", default="fifo")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Runs one command and returns its exit status.

    0 success or stable, 1 usage or validation error, 2 exhaustive limit
    exceeded, 3 instability or nonexistence found.
    """
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        config = RunConfig.from_args(args)
        return COMMANDS[config.command](config)
    except OracleLimitError as e:
        logger.error("%s", e)  # noqa: TRY400
        return EXIT_LIMIT
    except (ValueError, OSError, ContractViolationError) as e:
        logger.error("%s", e)  # noqa: TRY400
        return EXIT_USAGE


def run() -> NoReturn:
    """Console-script entry point."""
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    sys.exit(main())

