import json
import logging
import sys

import click

from .config import Config
from .errors import ConfigError, DimensionError, IndexRangeError, KappaValidationError, WakimotoError
from .kappa import parse_rational, resolve_kappa, validate_kappa
from .lattice import OrderScheme
from .realization import Realization, RealizationParams, parse_generator
from .verify import CheckConfig, report_to_json, run_suites, write_report

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_BAD_KAPPA = 2
EXIT_USAGE = 64


# Helpers for reading command-line values
# -----------------------------

# Prints an error payload the same shape every command uses
def emit_error(error):
    payload, code = error
    click.echo(json.dumps(payload, indent=2, sort_keys=True), err=True)
    return code


# Validates counts such as --vectors
def require_positive_int(name, raw_value):
    try:
        value = int(raw_value)
    except (TypeError, ValueError):
        return None, ({"errors": [f"{name} must be an integer"]}, EXIT_USAGE)

    if value <= 0:
        return None, ({"errors": [f"{name} must be a positive integer"]}, EXIT_USAGE)

    return value, None


# Empty means "not set"
def parse_optional_positive_int(name, raw_value):
    if raw_value is None or str(raw_value).strip() == "":
        return None, None
    return require_positive_int(name, raw_value)


# Comma separated rationals, e.g. "0,1,-1/2"
def parse_rational_list(name, raw_value):
    if raw_value is None or not str(raw_value).strip():
        return [], None
    try:
        return [parse_rational(part) for part in str(raw_value).split(",")], None
    except KappaValidationError:
        return None, ({"errors": [f"{name} must be a comma separated list of rationals"]}, EXIT_USAGE)


# "" -> all ones, "ramp" -> 1,2,...,N+1, otherwise explicit weights
def parse_scheme(raw_weights, size):
    if raw_weights is None or not str(raw_weights).strip():
        return OrderScheme.uniform(size), None
    if str(raw_weights).strip() == "ramp":
        return OrderScheme.ramp(size), None
    weights, error = parse_rational_list("--weights", raw_weights)
    if error:
        return None, error
    if len(weights) != size:
        return None, ({"errors": [f"--weights needs {size} values, got {len(weights)}"]}, EXIT_USAGE)
    return OrderScheme(tuple(weights)), None


# Loads κ and runs the validator; an invalid κ carries the validator report
def load_valid_kappa(source, scheme, radius):
    try:
        spec = resolve_kappa(source, scheme.size, scheme)
    except OSError as exc:
        return None, None, ({"errors": [f"cannot read κ file: {exc}"]}, EXIT_USAGE)
    except (KappaValidationError, DimensionError, IndexRangeError) as exc:
        return None, None, ({"errors": [str(exc)]}, EXIT_BAD_KAPPA)

    report = validate_kappa(spec, scheme, radius)
    if not report.passed:
        payload = {"errors": ["κ does not satisfy the cocycle conditions"], "kappa": report.to_dict()}
        return None, report, (payload, EXIT_BAD_KAPPA)
    return spec, report, None


def configure_logging(verbose):
    level = logging.DEBUG if verbose else getattr(logging, str(Config.LOG_LEVEL).upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


# Resolves the shared realization options; returns (params, error)
def build_params(n_roots, n_vars, weights, kappa, lambdas, radius, mutated=False):
    if n_roots < 2:
        return None, ({"errors": ["--n must be at least 2"]}, EXIT_USAGE)
    if n_vars < 0:
        return None, ({"errors": ["--N must be nonnegative"]}, EXIT_USAGE)
    scheme, error = parse_scheme(weights, n_vars + 1)
    if error:
        return None, error
    lambda_values, error = parse_rational_list("--lambda", lambdas)
    if error:
        return None, error
    spec, _, error = load_valid_kappa(kappa, scheme, radius)
    if error:
        return None, error
    try:
        params = RealizationParams(n_roots, scheme, spec, tuple(lambda_values), mutated)
    except WakimotoError as exc:
        return None, ({"errors": [str(exc)]}, EXIT_USAGE)
    return params, None


def dump_to_text(dump):
    lines = [f"{dump['generator']}({','.join(str(c) for c in dump['mode'])}): {dump['summands']} summands"]
    lines += [f"  {line}" for line in dump["terms"]]
    return "\n".join(lines)


def dump_generator(params, text):
    try:
        kind, r, m = parse_generator(text)
        return Realization(params).dump(kind, r, m), None
    except WakimotoError as exc:
        return None, ({"errors": [str(exc)]}, EXIT_USAGE)


# Commands
# -----------------------------

realization_options = [
    click.option("--n", "n_roots", type=int, default=Config.N_ROOTS, show_default=True, help="Rank n of A_n (n >= 2)."),
    click.option("--N", "n_vars", type=int, default=Config.N_VARS, show_default=True, help="Number of torus variables minus one."),
    click.option("--weights", default=Config.WEIGHTS, help="Order-scheme weights: empty for all ones, 'ramp', or p/q list."),
    click.option("--kappa", default=Config.KAPPA, show_default=True, help="builtin:<family>:<params> or a κ JSON file."),
    click.option("--lambda", "lambdas", default=Config.LAMBDAS, help="λ_0..λ_n (or λ_1..λ_n) as a rational list."),
    click.option("--box", "radius", type=int, default=Config.BOX_RADIUS, show_default=True, help="Mode box radius."),
]


def with_realization_options(func):
    for option in reversed(realization_options):
        func = option(func)
    return func


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log every check at DEBUG level.")
def wakimoto(verbose):
    """Build the free-field realization of toroidal sl(n+1) and check its relations."""
    configure_logging(verbose)


@wakimoto.command()
@with_realization_options
@click.option("--vectors", default=str(Config.VECTORS), show_default=True, help="Number of test vectors.")
@click.option("--seed", type=int, default=Config.SEED, show_default=True)
@click.option("--suite", "suites", default=Config.SUITES, show_default=True, help="Comma separated suites or 'all'.")
@click.option("--output", default=Config.OUTPUT, show_default=True, help="Report path; '-' writes to stdout.")
@click.option("--instance-limit", default=Config.INSTANCE_LIMIT, help="Sample at most this many instances per check.")
@click.option("--dump-realization", "dump", default=None, help="Print the term list of e.g. F0,1,-1 and stop.")
@click.pass_context
def verify(ctx, n_roots, n_vars, weights, kappa, lambdas, radius, vectors, seed, suites, output, instance_limit, dump):
    """Run the relation suites and write a JSON report."""
    params, error = build_params(n_roots, n_vars, weights, kappa, lambdas, radius)
    if error:
        ctx.exit(emit_error(error))

    if dump:
        result, error = dump_generator(params, dump)
        if error:
            ctx.exit(emit_error(error))
        click.echo(dump_to_text(result))
        ctx.exit(EXIT_PASS)

    vector_count, error = require_positive_int("--vectors", vectors)
    if error:
        ctx.exit(emit_error(error))
    limit, error = parse_optional_positive_int("--instance-limit", instance_limit)
    if error:
        ctx.exit(emit_error(error))

    try:
        cfg = CheckConfig(params, radius=radius, vectors=vector_count, seed=seed, suites=suites, instance_limit=limit)
    except ConfigError as exc:
        ctx.exit(emit_error(({"errors": [str(exc)]}, EXIT_USAGE)))

    report = run_suites(cfg)
    if output == "-":
        click.echo(report_to_json(report), nl=False)
    else:
        write_report(report, output)
        click.echo(f"{'PASS' if report.passed else 'FAIL'}: {len(report.records)} checks, report written to {output}")
    for record in report.failures:
        click.echo(f"  failed: {record.check_id} ({record.failure_count} comparisons)", err=True)
    ctx.exit(EXIT_PASS if report.passed else EXIT_FAIL)


@wakimoto.command("validate-kappa")
@click.option("--N", "n_vars", type=int, default=Config.N_VARS, show_default=True)
@click.option("--weights", default=Config.WEIGHTS)
@click.option("--kappa", default=Config.KAPPA, show_default=True)
@click.option("--box", "radius", type=int, default=Config.BOX_RADIUS, show_default=True)
@click.pass_context
def validate_kappa_command(ctx, n_vars, weights, kappa, radius):
    """Check κ against the cocycle conditions and print the validator report."""
    scheme, error = parse_scheme(weights, n_vars + 1)
    if error:
        ctx.exit(emit_error(error))
    spec, report, error = load_valid_kappa(kappa, scheme, radius)
    if error:
        ctx.exit(emit_error(error))
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    ctx.exit(EXIT_PASS)


@wakimoto.command()
@with_realization_options
@click.argument("generator")
@click.option("--json", "as_json", is_flag=True, help="Print the dump as JSON.")
@click.pass_context
def dump(ctx, n_roots, n_vars, weights, kappa, lambdas, radius, generator, as_json):
    """Print the term list of one generator mode, e.g. `dump F0,1,-1`."""
    params, error = build_params(n_roots, n_vars, weights, kappa, lambdas, radius)
    if error:
        ctx.exit(emit_error(error))
    result, error = dump_generator(params, generator)
    if error:
        ctx.exit(emit_error(error))
    click.echo(json.dumps(result, indent=2, sort_keys=True) if as_json else dump_to_text(result))
    ctx.exit(EXIT_PASS)


def main(argv=None):
    try:
        code = wakimoto.main(args=argv, prog_name="wakimoto", standalone_mode=False)
    except click.UsageError as exc:
        return emit_error(({"errors": [exc.format_message()]}, EXIT_USAGE))
    except click.Abort:
        return EXIT_FAIL
    return code or EXIT_PASS
