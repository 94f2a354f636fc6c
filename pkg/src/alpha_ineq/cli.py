"""Command-line front end.

    alpha-ineq verify young --p 2 --trials 1000 --seed 7 --alpha 0.5
    alpha-ineq sweep holder --alpha-grid 0.25,0.5,0.75,1 --format csv
    alpha-ineq certify minkowski --p 3 --n 3
    alpha-ineq counterexample minkowski_multi --variant as-written

Exit codes: 0 verified or converged, 1 violation or non-convergence found,
2 usage, ingestion or I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass, field, replace

from .catalog import (
    INEQUALITIES,
    Bernoulli,
    Case,
    ConjugatePair,
    ExponentTuple,
    FormVariant,
    Multi,
    NaryYoung,
    Paired,
    Radon,
    Regime,
    Status,
    TolerancePolicy,
    Young,
    normalize_id,
)
from .certifier import (
    DEFAULT_REGION,
    check_equality_manifold,
    minimize_gap,
    perturb_check,
    project_to_manifold,
)
from .core import Dimension
from .errors import AlphaIneqError, IngestionError, UsageError
from .harness import Sampling, SuiteReport, _Partial, case_size, run_suite, shrink
from .ingest import load_instances
from .report import (
    EXIT_ERROR,
    EXIT_FINDING,
    EXIT_OK,
    counterexample_to_dict,
    emit_report,
    render,
    write_text,
)

log = logging.getLogger("alpha_ineq")

SEED_ENV = "ALPHA_INEQ_SEED"
COMMANDS = ("verify", "sweep", "certify", "counterexample")


@dataclass(frozen=True)
class RunConfig:
    command: str
    ineq: str
    variant: FormVariant = FormVariant.NORMALIZED
    regime: Regime = Regime.HOLDER
    trials: int = 1000
    seed: int = 0
    alpha: float | None = None
    alpha_grid: tuple | None = None
    p: float | None = None
    q: float | None = None
    r: float | None = None
    exponents: tuple | None = None
    tol: TolerancePolicy = field(default_factory=TolerancePolicy)
    input: str | None = None
    format: str = "json"
    out: str | None = None
    n: int = 2
    m: int = 2
    restarts: int = 8
    budget: int = 2000
    y_range: tuple | None = None
    workers: int = 1

    def __post_init__(self):
        if self.alpha is not None and self.alpha_grid is not None:
            raise UsageError("--alpha and --alpha-grid are mutually exclusive")
        if self.alpha_grid is not None and self.input is not None:
            raise UsageError("--alpha-grid cannot be combined with --input")
        if self.command == "sweep" and self.alpha_grid is None:
            raise UsageError("sweep needs --alpha-grid")
        if self.command != "sweep" and self.alpha_grid is not None:
            raise UsageError("--alpha-grid is only valid for sweep")
        if self.input is not None and self.command != "verify":
            raise UsageError("--input is only valid for verify")
        for a in self.alpha_grid or ():
            if not (0 < a <= 1):
                raise UsageError(f"grid value {a!r} lies outside (0, 1]")
        if self.trials < 1:
            raise UsageError("--trials must be at least 1")

    @property
    def sampling(self) -> Sampling:
        return Sampling(alpha=self.alpha, p=self.p, q=self.q, r=self.r, exponents=self.exponents,
                        y_range=self.y_range)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated list of numbers") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alpha-ineq", description="Verify fractal Young/Hölder/Minkowski/Radon inequalities.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("inequality", help=", ".join(sorted(INEQUALITIES)))
    parser.add_argument("--variant", default="normalized", choices=("normalized", "as-written", "as_written"))
    parser.add_argument("--regime", choices=("holder", "reverse"))
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--alpha-grid", type=_floats)
    parser.add_argument("--p", type=float)
    parser.add_argument("--q", type=float)
    parser.add_argument("--r", type=float)
    parser.add_argument("--exponents", type=_floats, help="comma-separated p_1..p_n for n-ary and multi Hölder forms")
    parser.add_argument("--input", metavar="FILE")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", metavar="PATH")
    parser.add_argument("--tol-rel", type=float, default=1e-9)
    parser.add_argument("--tol-eq", type=float, default=1e-8)
    parser.add_argument("--n", type=int, default=2, help="sequence length for certify")
    parser.add_argument("--m", type=int, default=2, help="number of sequences for certify (matrix forms)")
    parser.add_argument("--restarts", type=int, default=8)
    parser.add_argument("--budget", type=int, default=2000)
    parser.add_argument("--y-range", type=_floats, help="lo,hi sampling range for the Bernoulli y")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _infer_regime(args) -> Regime:
    hints = []
    if args.p is not None:
        hints.append(Regime.REVERSE if 0 < args.p < 1 else Regime.HOLDER)
    if args.q is not None:
        hints.append(Regime.REVERSE if args.q < 0 else Regime.HOLDER)
    if args.exponents:
        hints.append(Regime.REVERSE if args.exponents[0] < 1 else Regime.HOLDER)
    if args.regime is not None:
        chosen = Regime(args.regime)
        if any(h is not chosen for h in hints):
            raise UsageError(f"--regime {chosen.value} conflicts with the given exponents")
        return chosen
    if len(set(hints)) > 1:
        raise UsageError("exponent flags imply different regimes")
    return hints[0] if hints else Regime.HOLDER


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None or not env.strip():
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def parse_args(argv: list | None = None) -> RunConfig:
    """Map command-line arguments to a :class:`RunConfig`; raises :class:`UsageError`."""
    args = _build_parser().parse_args(argv)
    ineq = normalize_id(args.inequality)
    variant = FormVariant(args.variant.replace("-", "_"))
    if args.y_range is not None and len(args.y_range) != 2:
        raise UsageError("--y-range takes exactly two numbers")
    tol = TolerancePolicy(tol_rel=args.tol_rel, tol_eq=args.tol_eq, abs_floor=min(1e-12, args.tol_rel))
    return RunConfig(
        command=args.command,
        ineq=ineq,
        variant=variant,
        regime=_infer_regime(args),
        trials=args.trials,
        seed=_seed(args.seed),
        alpha=args.alpha,
        alpha_grid=args.alpha_grid,
        p=args.p,
        q=args.q,
        r=args.r,
        exponents=args.exponents,
        tol=tol,
        input=args.input,
        format=args.format,
        out=args.out,
        n=args.n,
        m=args.m,
        restarts=args.restarts,
        budget=args.budget,
        y_range=args.y_range,
        workers=args.workers,
    )


# ---------------------------------------------------------------------------
# commands


def sweep_alpha(config: RunConfig) -> list:
    """One suite per grid alpha, all from the same master seed."""
    if not config.alpha_grid:
        raise UsageError("sweep needs a non-empty alpha grid")
    reports = []
    for a in config.alpha_grid:
        if not (0 < a <= 1):
            raise UsageError(f"grid value {a!r} lies outside (0, 1]")
        sampling = replace(config.sampling, alpha=a)
        reports.append(run_suite(config.ineq, config.variant, config.regime, config.trials,
                                 config.seed, config.tol, sampling, config.workers))
    return reports


def _default_exponent(config: RunConfig, width: int):
    """Exponent object for hand-built cases (input files, certify templates)."""
    kind = INEQUALITIES[config.ineq].exponent_kind
    reverse = config.regime is Regime.REVERSE
    if kind == "none":
        return None
    if kind == "pair":
        if config.p is not None:
            return ConjugatePair(config.p, config.q)
        if config.q is not None:
            return ConjugatePair.from_q(config.q)
        return ConjugatePair(0.5 if reverse else 2.0)
    if kind == "tuple":
        if config.exponents is not None:
            return ExponentTuple(config.exponents)
        if reverse:
            # 1/p_1 = 2, remaining reciprocals share -1 equally
            return ExponentTuple((0.5,) + (-(width - 1.0),) * (width - 1))
        return ExponentTuple((float(width),) * width)
    if config.p is not None:
        return config.p
    return 0.5 if (reverse and config.ineq in ("minkowski", "minkowski_multi")) else 2.0


def _radon_r(config: RunConfig) -> float:
    return 0.5 if config.r is None else config.r


def _template(config: RunConfig) -> Case:
    dim = Dimension(1.0 if config.alpha is None else config.alpha)
    ineq, n, m = config.ineq, config.n, config.m
    if n < 1 or m < 1:
        raise UsageError("--n and --m must be positive")
    if ineq == "young":
        inst, width = Young(1.0, 1.0, dim), 2
    elif ineq == "nary_young":
        width = len(config.exponents) if config.exponents else n
        inst = NaryYoung((1.0,) * width, dim)
    elif ineq in ("holder", "minkowski"):
        inst, width = Paired((1.0,) * n, (1.0,) * n, dim), 2
    elif ineq == "radon":
        inst, width = Radon((1.0,) * n, (1.0,) * n, _radon_r(config), dim), 2
    elif ineq == "bernoulli":
        raise UsageError("bernoulli has no parametrized equality manifold")
    else:
        width = len(config.exponents) if (ineq == "holder_multi" and config.exponents) else m
        inst = Multi(((1.0,) * width,) * n, dim)
    exponent = _default_exponent(config, width)
    r = _radon_r(config) if ineq == "radon_multi" else None
    return Case(ineq, inst, exponent, config.variant, r=r)


def _verify_input(config: RunConfig) -> SuiteReport:
    dim = Dimension(1.0 if config.alpha is None else config.alpha)
    start = time.perf_counter()
    probe = None
    if INEQUALITIES[config.ineq].exponent_kind == "tuple" and config.exponents is None:
        raise UsageError(f"{config.ineq} with --input needs --exponents")
    instances = load_instances(config.input, config.ineq, dim, r=config.r)
    if not instances:
        raise IngestionError("no instances")
    first = instances[0]
    if isinstance(first, NaryYoung):
        width = len(first.a)
    elif isinstance(first, Multi):
        width = first.m
    else:
        width = 2
    exponent = _default_exponent(config, width)
    r = _radon_r(config) if config.ineq == "radon_multi" else None
    total = _Partial()
    for idx, inst in enumerate(instances):
        if isinstance(inst, Bernoulli):
            probe = Case(config.ineq, inst, None, config.variant)
        else:
            probe = Case(config.ineq, inst, exponent, config.variant, r=r)
        try:
            v = probe.evaluate(config.tol)
        except AlphaIneqError as exc:
            raise IngestionError(f"instance {idx + 1}: {exc}") from None
        part = _Partial()
        if v.status is Status.VIOLATION:
            part.violations, part.first_violation = 1, idx
        elif v.status is Status.EQUALITY:
            part.equality = 1
        else:
            part.holds = 1
        part.min_gap, part.worst_index, part.worst_case, part.worst_verdict = v.gap / v.scale, idx, probe, v
        total.merge(part)
    return SuiteReport(
        ineq=config.ineq, variant=config.variant, regime=probe.regime, trials=len(instances),
        seed=config.seed, tolerance=config.tol,
        alpha_policy={"kind": "fixed", "value": dim.alpha, "source": "input"},
        holds=total.holds, equality=total.equality, violations=total.violations,
        min_gap=total.min_gap, worst_index=total.worst_index, worst_case=total.worst_case,
        worst_verdict=total.worst_verdict, first_violation=total.first_violation,
        runtime_ms=(time.perf_counter() - start) * 1000.0,
    )


def _certify(config: RunConfig) -> int:
    template = _template(config)
    manifold = check_equality_manifold(template, samples=100, seed=config.seed, tol=config.tol)
    cert = minimize_gap(template, DEFAULT_REGION, config.restarts, config.budget, config.seed, config.tol)
    point = project_to_manifold(template.with_instance(
        template.instance.with_magnitudes([1.0 + 0.25 * i for i in range(len(template.instance.magnitudes()))])))
    strict = perturb_check(point, 0.01, tol=config.tol)
    extra = {"manifold_max_gap": manifold, "perturb_strict": strict}
    code = emit_report(cert, config.format, config.out, extra)
    if code == EXIT_OK and (manifold > config.tol.tol_eq or not strict):
        return EXIT_FINDING
    return code


def _counterexample(config: RunConfig) -> int:
    report = run_suite(config.ineq, config.variant, config.regime, config.trials, config.seed,
                       config.tol, config.sampling, config.workers)
    shrunk = verdict = sizes = None
    if report.first_violation is not None:
        from .harness import generate_case, trial_rng

        original = generate_case(config.ineq, config.variant, config.regime,
                                 trial_rng(config.seed, report.first_violation), config.sampling)
        shrunk = shrink(original, config.tol)
        verdict = shrunk.evaluate(config.tol)
        sizes = (case_size(original), case_size(shrunk))
    payload = counterexample_to_dict(report, shrunk, verdict, sizes)
    rows = None
    if config.format == "csv":
        from .report import _flatten

        rows = [_flatten(payload)]
    code = write_text(render(payload, rows, config.format), config.out)
    if code != EXIT_OK:
        return code
    return EXIT_FINDING if shrunk is not None else EXIT_OK


def run(config: RunConfig) -> int:
    if config.command == "verify":
        if config.input is not None:
            report = _verify_input(config)
        else:
            report = run_suite(config.ineq, config.variant, config.regime, config.trials, config.seed,
                               config.tol, config.sampling, config.workers)
        return emit_report(report, config.format, config.out)
    if config.command == "sweep":
        return emit_report(sweep_alpha(config), config.format, config.out)
    if config.command == "certify":
        return _certify(config)
    return _counterexample(config)


def main(argv: list | None = None) -> int:
    verbose = argv is not None and ("-v" in argv or "--verbose" in argv)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = parse_args(argv)
        return run(config)
    except (UsageError, IngestionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except AlphaIneqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
