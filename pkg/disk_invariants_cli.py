#!/usr/bin/env python3
"""
Disk Invariant Command Line Tool
Computes one-point disk invariants of odd-dimensional Calabi-Yau complete intersections

Usage:
    python disk_invariants_cli.py [invariants|verify|series] --degrees 5 [options]

Exit codes: 0 success, 1 verification failure, 2 invalid input
"""

import argparse
import logging
import sys
from dataclasses import dataclass

from disk_closed import extract_invariants, guarded_disk_potential
from localization import WeightCollisionError, sample_weights, verify_identities
from mirror_series import (
    GUARD_ORDERS,
    Geometry,
    GeometryError,
    I_tower,
    J_series,
    mirror_q_of_Q,
    tau_series,
)
from report_generator import (
    FORMATS,
    render_invariants,
    render_series,
    render_verification,
    timing_summary,
)

logger = logging.getLogger(__name__)

COMMANDS = ('invariants', 'verify', 'series')
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INVALID_INPUT = 2


class ConfigError(ValueError):
    """Invalid command line configuration"""


def get_default_configuration():
    """Get default configuration for a run"""
    return {
        'degrees': (5,),
        'max_degree': 9,
        'seed': 0,
        'weight_samples': 3,
        'format': 'plain',
        'command': 'invariants',
        'verbose': False,
    }


@dataclass(frozen=True)
class RunConfig:
    degrees: tuple
    max_degree: int = 9
    seed: int = 0
    weight_samples: int = 3
    format: str = 'plain'
    command: str = 'invariants'
    verbose: bool = False

    def validate(self):
        """
        Check every option before any computation

        Returns:
        Geometry: the validated multi-degree
        """
        try:
            geometry = Geometry(tuple(self.degrees))
        except GeometryError as e:
            raise ConfigError(str(e)) from e
        if self.max_degree < 1 or self.max_degree % 2 == 0:
            raise ConfigError("max degree must be odd and at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}")
        if self.command not in COMMANDS:
            raise ConfigError(f"command must be one of {', '.join(COMMANDS)}")
        if self.command == 'verify' and self.weight_samples < 2:
            raise ConfigError("need ≥ 2 weight samples")
        return geometry


def build_parser():
    defaults = get_default_configuration()
    parser = argparse.ArgumentParser(
        description="One-point disk invariants of odd-dimensional projective Calabi-Yau complete intersections",
    )
    parser.add_argument('command', nargs='?', choices=COMMANDS, default=defaults['command'],
                        help="invariants (default), verify or series")
    parser.add_argument('--degrees', nargs='+', type=int, required=True,
                        help="multi-degree a_1 ... a_l (odd positive integers)")
    parser.add_argument('--max-degree', type=int, default=defaults['max_degree'],
                        help="largest odd disk degree d (default 9)")
    parser.add_argument('--seed', type=int, default=defaults['seed'],
                        help="seed for torus weight sampling (default 0)")
    parser.add_argument('--weight-samples', type=int, default=defaults['weight_samples'],
                        help="number of weight assignments for verify (default 3)")
    parser.add_argument('--format', choices=FORMATS, default=defaults['format'],
                        help="output format (default plain)")
    parser.add_argument('--verbose', action='store_true', help="debug logging on stderr")
    return parser


def parse_config(argv=None):
    args = build_parser().parse_args(argv)
    return RunConfig(
        degrees=tuple(args.degrees),
        max_degree=args.max_degree,
        seed=args.seed,
        weight_samples=args.weight_samples,
        format=args.format,
        command=args.command,
        verbose=args.verbose,
    )


def _status(message):
    print(message, file=sys.stderr)


def cmd_invariants(cfg, out=None):
    """Print N_(1,d) for odd d <= max_degree"""
    out = out or sys.stdout
    g = cfg.validate()
    dp = guarded_disk_potential(g, cfg.max_degree, GUARD_ORDERS)
    invariants = extract_invariants(dp)
    print(render_invariants(g, cfg.max_degree, invariants, cfg.format), file=out)
    return EXIT_OK


def cmd_verify(cfg, out=None):
    """Run the localization identities with seeded weight samples"""
    out = out or sys.stdout
    g = cfg.validate()
    try:
        samples = sample_weights(g, cfg.max_degree + GUARD_ORDERS, cfg.weight_samples, cfg.seed)
    except WeightCollisionError as e:
        _status(f"❌ {e}")
        return EXIT_INVALID_INPUT

    report = verify_identities(g, samples, cfg.max_degree, guard_orders=GUARD_ORDERS)
    print(render_verification(report, cfg.seed, cfg.format), file=out)

    for row in timing_summary(report).itertuples():
        _status(f"   {row.identity}: {int(row.checks)} checks in {row.total:.3f} s")
    if not report.passed:
        for check in report.failures:
            _status(f"❌ {check.identity} failed: p={check.p} s={check.s} "
                    f"sample={check.sample} first difference at u^{check.first_difference}")
        return EXIT_VERIFICATION_FAILED
    _status(f"✅ all {len(report.checks)} identities hold exactly for X{g.label}")
    return EXIT_OK


def collect_series(g, max_degree):
    """I_0..I_p_max, J, tau_a and q(Q) at the orders the disk pipeline uses"""
    trunc_q = max_degree // 2
    series = {}
    for p, I in enumerate(I_tower(g, trunc_q)):
        series[f"I_{p}"] = I
    series['J'] = J_series(g, trunc_q)
    series['tau'] = tau_series(g, max_degree)
    series['q(Q)'] = mirror_q_of_Q(g, trunc_q + 1)
    return series


def cmd_series(cfg, out=None):
    """Dump the generating series as exact coefficient lists"""
    out = out or sys.stdout
    g = cfg.validate()
    print(render_series(g, cfg.max_degree, collect_series(g, cfg.max_degree), cfg.format), file=out)
    return EXIT_OK


HANDLERS = {
    'invariants': cmd_invariants,
    'verify': cmd_verify,
    'series': cmd_series,
}


def main(argv=None):
    """Main execution function"""
    try:
        cfg = parse_config(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INVALID_INPUT

    logging.basicConfig(
        level=logging.DEBUG if cfg.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return HANDLERS[cfg.command](cfg)
    except ConfigError as e:
        _status(f"error: {e}")
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
