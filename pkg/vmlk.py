#!/usr/bin/env python3
"""
vmlk - Vlasov-Maxwell-Landau Kinetics Workbench
Unified command line: relaxation runs, steady-state checks, the seven-step audit

Exit codes: 0 every check passed, 1 a check failed (reports still written),
2 usage or configuration error.
"""

import argparse
import logging
import os
import sys

import numba
import numpy as np

from kinetics.errors import ConfigError, GridError, ParameterError, VmlkError
from kinetics.landau import benchmark_collision, power_law_psi
from kinetics.maxwell_eq import equilibrium_maxwellian
from kinetics.relax import run_homogeneous, run_vpl
from kinetics.vlasov import steady_state_report
from utils.field_io import OutputWriter, read_distribution, read_field_csv
from utils.fixtures import build_candidate, initial_slice
from utils.scenario_config import parse_config
from verification.hypotheses import build_hypothesis_report
from verification.nonvacuous import nonvacuous
from verification.proof_pipeline import proof_pipeline

SUBCOMMANDS = {
    'relax': "Space-homogeneous Landau relaxation",
    'vpl': "Electrostatic Vlasov-Poisson-Landau run",
    'check': "Steady-state residuals of a candidate",
    'pipeline': "Seven-step audit of a candidate",
    'nonvacuous': "Equilibrium witnesses every hypothesis",
    'bench': "Collision kernel throughput",
}

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

USAGE_ERRORS = (ConfigError, GridError, ParameterError)


class ScenarioRunner:
    def __init__(self, config):
        self.config = config
        self.vgrid = config.velocity_grid()
        self.tgrid = config.torus_grid()
        self.writer = OutputWriter(config.output_dir)

    def run_step(self, step_name, description, action):
        """Run a step with progress reporting"""
        print(f"\n{'='*60}")
        print(f"STEP: {step_name}")
        print(f"DESCRIPTION: {description}")
        print(f"GRID: L={self.vgrid.L:.4g} N={self.vgrid.N} M={self.tgrid.M}")
        print(f"{'='*60}")
        try:
            passed = action()
        except VmlkError as e:
            print(f"FAILED: {e}")
            raise
        print("SUCCESS" if passed else "FAILED: check did not pass")
        return passed

    def load_candidate(self):
        """Candidate (f, E, B) from f_file/E_file/B_file, else the named fixture"""
        c = self.config
        if c.f_file:
            f = read_distribution(c.f_file, self.vgrid, self.tgrid)
            zero = np.zeros((3,) + self.tgrid.shape)
            E = read_field_csv(c.E_file, self.tgrid) if c.E_file else zero
            B = read_field_csv(c.B_file, self.tgrid) if c.B_file else zero + np.reshape(c.B0, (3, 1, 1, 1))
            return f, E, B
        return build_candidate(c.candidate, c, self.vgrid, self.tgrid)

    def run_relax(self):
        c = self.config
        f0 = initial_slice(c.initial or 'bimaxwellian', c, self.vgrid)
        result = run_homogeneous(f0, c.nu, c.dt, c.t_end, c.record_every, self.vgrid,
                                 gamma=power_law_psi(c.kernel_gamma))
        first, last = result.records[0], result.records[-1]
        self.writer.write_diagnostics('relax_diagnostics.csv', result.records)
        self.writer.write_distribution('relax_final.npy', result.f)
        report = {
            'kernel_gamma': c.kernel_gamma,
            'entropy_monotone': result.entropy_monotone,
            'max_dissipation': max(r.D for r in result.records),
            'final_dist_maxw': last.dist_maxw,
            'mass_drift': abs(last.mass - first.mass) / first.mass,
            'momentum_drift': float(np.max(np.abs(np.subtract(last.momentum, first.momentum)))),
            'energy_drift': abs(last.energy - first.energy) / first.energy,
            'pass': result.entropy_monotone,
        }
        self.writer.write_json('relax_report.json', report)
        return report['pass']

    def run_vpl(self):
        c = self.config
        f0, _, _ = build_candidate(c.initial or 'perturbed', c, self.vgrid, self.tgrid)
        result = run_vpl(f0, c.B0, c.nu, c.dt, c.t_end, c.record_every, self.vgrid, self.tgrid,
                         self_consistent=c.self_consistent, gamma=power_law_psi(c.kernel_gamma))
        for step, _, E in result.snapshots:
            self.writer.write_field(f'E_step{step:06d}.csv', E, self.tgrid)
        self.writer.write_diagnostics('vpl_diagnostics.csv', result.records)
        self.writer.write_distribution('vpl_final.npy', result.f)
        first, last = result.records[0], result.records[-1]
        steps = max(1, int(np.ceil(c.t_end / c.dt - 1e-9)))
        mass_drift = abs(last.mass - first.mass) / first.mass
        report = {
            'mass_drift': mass_drift,
            'energy_drift': abs(last.energy - first.energy) / first.energy,
            'final_supE': last.supE,
            'final_dist_maxw': last.dist_maxw,
            'entropy_monotone': result.entropy_monotone,
            'pass': mass_drift <= 1e-8 * steps,
        }
        self.writer.write_json('vpl_report.json', report)
        return report['pass']

    def run_check(self):
        c = self.config
        f, E, B = self.load_candidate()
        report = steady_state_report(f, E, B, c.nu, c.rho_ion, self.vgrid, self.tgrid, c.steady_tolerances())
        self.writer.write_json('check_report.json', report.to_dict())
        return report.passed

    def run_pipeline(self):
        c = self.config
        f, E, B = self.load_candidate()
        hypotheses = build_hypothesis_report(f, E, B, c.nu, c.rho_ion, self.vgrid, self.tgrid,
                                             c.steady_tolerances(), K_max=c.K_max, c_cap=c.c_cap,
                                             decay_orders=c.decay_orders)
        self.writer.write_json('hypotheses_report.json', hypotheses.to_dict())
        report = proof_pipeline(f, E, B, c.nu, c.rho_ion, self.vgrid, self.tgrid, c.pipeline_tolerances())
        self.writer.write_json('pipeline_report.json', report.to_dict())
        print(f"Verdict: {report.verdict}")
        return report.passed

    def run_nonvacuous(self):
        c = self.config
        report = nonvacuous(c.rho_ion, c.T_ref, c.B0, self.vgrid, self.tgrid, nu=c.nu,
                            steady_tolerances=c.steady_tolerances(), pipeline_tolerances=c.pipeline_tolerances(),
                            K_max=c.K_max, c_cap=c.c_cap, decay_orders=c.decay_orders)
        self.writer.write_json('nonvacuous_report.json', report.to_dict())
        return report.passed

    def run_bench(self):
        c = self.config
        f = equilibrium_maxwellian(c.rho_ion, c.T_ref, self.vgrid.points)
        result = benchmark_collision(f, self.vgrid, repeats=c.bench_repeats, gamma=power_law_psi(c.kernel_gamma))
        self.writer.write_json('bench_report.json', result)
        print(f"Pairs/second: {result['pairs_per_second']:.3e}")
        return True

    def run(self, name):
        return self.run_step(name.upper(), SUBCOMMANDS[name], getattr(self, f'run_{name}'))


def set_threads(threads):
    """--threads wins over VMLK_THREADS; neither leaves numba's default"""
    value = threads if threads is not None else os.environ.get('VMLK_THREADS')
    if value is None or value == '':
        return None
    try:
        n = int(value)
    except ValueError as e:
        raise ConfigError(f"thread count must be an integer, got {value!r}") from e
    if n < 1:
        raise ConfigError(f"thread count must be >= 1, got {n}")
    try:
        numba.set_num_threads(n)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return n


def run_subcommand(name, config, threads=None):
    """Run one subcommand on a parsed config and return its exit code"""
    if name not in SUBCOMMANDS:
        print(f"Unknown subcommand: {name}")
        return EXIT_USAGE
    try:
        set_threads(threads)
        runner = ScenarioRunner(config)
    except USAGE_ERRORS + (OSError,) as e:
        print(f"Configuration error: {e}")
        return EXIT_USAGE
    try:
        code = EXIT_PASS if runner.run(name) else EXIT_CHECK_FAILED
    except USAGE_ERRORS as e:
        runner.writer.write_json(f'{name}_error.json', {'error': str(e), 'kind': type(e).__name__})
        code = EXIT_USAGE
    except (VmlkError, OSError) as e:
        runner.writer.write_json(f'{name}_error.json', {'error': str(e), 'kind': type(e).__name__})
        code = EXIT_CHECK_FAILED
    runner.writer.summary(name, code)
    print(f"\nOutputs: {runner.writer.output_dir}  (exit {code})")
    return code


def main(argv=None):
    parser = argparse.ArgumentParser(description="vmlk - Vlasov-Maxwell-Landau kinetics workbench")
    subparsers = parser.add_subparsers(dest="command", required=True, help="Sub-command to run")
    for name, help_text in SUBCOMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument('--config', help="Scenario file (key = value); defaults when omitted")
        sub.add_argument('--out', help="Output directory (overrides output_dir)")
        sub.add_argument('--threads', type=int, help="Worker threads (fallback: VMLK_THREADS)")
        sub.add_argument('--verbose', action='store_true', help="Debug logging")

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = parse_config(args.config)
    except ConfigError as e:
        print(f"Configuration error: {e}")
        return EXIT_USAGE
    if args.out:
        config = config.with_output_dir(args.out)
    return run_subcommand(args.command, config, args.threads)


if __name__ == "__main__":
    sys.exit(main())
