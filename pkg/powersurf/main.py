#!/usr/bin/env python3
import argparse
import csv
import logging
import sys
from typing import List, Optional

from .config import ConfigManager
from .core.enumerator import SINGULAR, analyze, orbit_points
from .core.errors import InconsistentTopologyError, PowerSurfError
from .core.report import (
    SWEEP_COLUMNS,
    ReportDocument,
    boundary_constants,
    format_transitions,
    render_text,
    sweep_rows,
    write_sweep_csv,
)
from .core.surface import Regime, SurfaceSpec
from .core.topology import component_count, genus, sweep
from .core.verifier import ProbeVerdict, local_extremum_probe, multistart_verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def create_cli_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0, help='Seed for every random draw')
    common.add_argument('--tol-surface', type=float, help='Constraint residual tolerance')
    common.add_argument('--tol-distinct', type=float, help='Gap below which coordinates count as equal')
    common.add_argument('--format', choices=['json', 'text'], help='Report format on standard output')
    common.add_argument('--config', type=str, help='JSON file merged over the built-in settings')
    common.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG')

    with_level = argparse.ArgumentParser(add_help=False, parents=[common])
    with_level.add_argument('--c', type=float, default=0.0, help='Level C of the constraint p3 = C')

    parser = argparse.ArgumentParser(
        prog='powersurf',
        description="Critical points of p4 on {p1 = 0, p2 = 1, p3 = C} in R^5")
    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # Analyze command
    analyze_parser = subparsers.add_parser('analyze', parents=[with_level], help='Closed-form critical orbits at one C')
    analyze_parser.add_argument('--show-constants', action='store_true',
                                help='Include the regime boundaries 1/sqrt(30) and 3/sqrt(20)')

    # Verify command
    verify_parser = subparsers.add_parser('verify', parents=[with_level], help='Multistart Newton cross-check')
    verify_parser.add_argument('--starts', type=int, help='Number of random starts')

    # Sweep command
    sweep_parser = subparsers.add_parser('sweep', parents=[common], allow_abbrev=False,
                                         help='Census over a grid of C values')
    sweep_parser.add_argument('--lo', type=float, required=True, help='First C of the grid')
    sweep_parser.add_argument('--hi', type=float, required=True, help='Upper end of the grid')
    sweep_parser.add_argument('--step', type=float, required=True, help='Grid spacing')
    sweep_parser.add_argument('-o', '--output', type=str, help='CSV file (standard output if omitted)')

    # Topology command
    topology_parser = subparsers.add_parser('topology', parents=[with_level], help='Sampled component count')
    topology_parser.add_argument('--samples', type=int, help='Number of surface samples')
    topology_parser.add_argument('--eps', type=float, help='Neighbourhood radius of the sample graph')

    return parser


def configure_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format='%(levelname)s:%(name)s:%(message)s',
        stream=sys.stderr,
        force=True
    )


def _setting(args, attr: str, config, key: str):
    value = getattr(args, attr, None)
    return config.get(key) if value is None else value


def _spec(args, config) -> SurfaceSpec:
    return SurfaceSpec(
        args.c,
        tol_surface=_setting(args, 'tol_surface', config, 'surface.tol_surface'),
        tol_distinct=_setting(args, 'tol_distinct', config, 'surface.tol_distinct'),
    )


def _emit(document: ReportDocument, args, config):
    fmt = _setting(args, 'format', config, 'report.format')
    if fmt == 'text':
        sys.stdout.write(render_text(document))
    else:
        sys.stdout.write(document.to_json() + "\n")


def _probe_singular_points(spec: SurfaceSpec, report, args, config):
    singular = next(o for o in report.orbits if o.kind == SINGULAR)
    probes = [
        local_extremum_probe(
            p, spec,
            radius=config.get('verifier.probe_radius'),
            n_probe=config.get('verifier.n_probe'),
            seed=[args.seed, k],
        )
        for k, p in enumerate(orbit_points(singular))
    ]
    verdicts = {p.verdict for p in probes}
    if verdicts == {ProbeVerdict.LOCAL_MIN}:
        summary = "local minima"
    elif verdicts == {ProbeVerdict.LOCAL_MAX}:
        summary = "local maxima"
    else:
        summary = "not a unanimous extremum"
    note = (f"singular-point probe: all {len(probes)} singular points sampled as {summary} "
            f"(verdicts {sorted(v.value for v in verdicts)}); the published answer calls them maxima")
    return probes, note


def cmd_analyze(args, config) -> int:
    spec = _spec(args, config)
    report = analyze(spec, config.get('enumerator.tol_end'))
    document = ReportDocument(
        command='analyze',
        spec=spec,
        regime_report=report,
        schema_version=config.get('report.schema_version'),
    )
    if args.show_constants:
        document.constants = boundary_constants()
    if report.regime == Regime.SINGULAR_SURFACE:
        document.probes, note = _probe_singular_points(spec, report, args, config)
        document.notes.append(note)
    _emit(document, args, config)
    return EXIT_OK


def cmd_verify(args, config) -> int:
    spec = _spec(args, config)
    n_starts = _setting(args, 'starts', config, 'verifier.n_starts')
    verification = multistart_verify(
        spec,
        n_starts,
        seed=args.seed,
        max_iter=config.get('verifier.max_iter'),
        tol=config.get('verifier.tol'),
        max_halvings=config.get('verifier.max_halvings'),
        match_tol=config.get('verifier.match_tol'),
        sampler_options=config.section('sampling'),
    )
    document = ReportDocument(
        command='verify',
        spec=spec,
        regime_report=analyze(spec, config.get('enumerator.tol_end')),
        verification=verification,
        schema_version=config.get('report.schema_version'),
    )
    _emit(document, args, config)
    if not verification.passed:
        logger.warning(f"verification failed: {len(verification.unmatched)} unmatched, "
                       f"max residual {verification.max_residual:.3e}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_sweep(args, config) -> int:
    result = sweep(
        args.lo, args.hi, args.step,
        tol_surface=_setting(args, 'tol_surface', config, 'surface.tol_surface'),
        tol_distinct=_setting(args, 'tol_distinct', config, 'surface.tol_distinct'),
    )
    if args.output:
        path = write_sweep_csv(result, args.output, args.step)
        logger.info(f"wrote {len(result.rows)} rows to {path}")
        sys.stdout.write(format_transitions(result))
    else:
        writer = csv.writer(sys.stdout, lineterminator='\n')
        writer.writerow(SWEEP_COLUMNS)
        writer.writerows(sweep_rows(result, args.step))
        sys.stderr.write(format_transitions(result))
    return EXIT_OK


def cmd_topology(args, config) -> int:
    spec = _spec(args, config)
    report = analyze(spec, config.get('enumerator.tol_end'))
    if report.regime == Regime.EMPTY:
        print(f"Error: the surface is empty at c={spec.c}", file=sys.stderr)
        return EXIT_USAGE

    estimate = component_count(
        spec,
        n_samples=_setting(args, 'samples', config, 'topology.n_samples'),
        epsilon=_setting(args, 'eps', config, 'topology.epsilon'),
        seed=args.seed,
        sampler_options=config.section('sampling'),
    )
    document = ReportDocument(
        command='topology',
        spec=spec,
        regime_report=report,
        components=estimate,
        schema_version=config.get('report.schema_version'),
    )

    exit_code = EXIT_OK
    if report.euler_characteristic is not None:
        chi = report.euler_characteristic
        try:
            sampled_genus = genus(chi, estimate.n_components)
        except InconsistentTopologyError as e:
            sampled_genus = None
            document.notes.append(f"cross-check failed: {e}")
        if sampled_genus is None or estimate.n_components != report.n_components:
            exit_code = EXIT_FAILED
            document.notes.append(
                f"cross-check failed: {estimate.n_components} sampled component(s), "
                f"{report.n_components} expected for regime {report.regime.value}")
        else:
            document.notes.append(
                f"cross-check: chi={chi} = 2*{estimate.n_components} - 2*{sampled_genus}")
    else:
        document.notes.append(f"no Morse count cross-check in regime {report.regime.value}")

    _emit(document, args, config)
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_cli_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    configure_logging(args.verbose)

    try:
        config = ConfigManager(args.config)
        if args.command == 'analyze':
            return cmd_analyze(args, config)
        elif args.command == 'verify':
            return cmd_verify(args, config)
        elif args.command == 'sweep':
            return cmd_sweep(args, config)
        elif args.command == 'topology':
            return cmd_topology(args, config)
    except (PowerSurfError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    parser.print_help()
    return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
