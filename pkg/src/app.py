"""
Benchmark command line: run experiments, verify guarantees, summarize traces.
"""
import argparse
import logging
import signal
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from .core.config import (CHECK_NAMES, EXIT_CONFIG_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILED,
                          VERIFICATION_FILE)
from .core.episode import run_episode
from .core.errors import BanditError, ConfigurationError, InputError, OracleBudgetError, ValidationError
from .core.learners import LearnerSpec
from .core.rng import check_rng
from .data.experiment_config import ExperimentConfig, load_config
from .data.summary import summarize
from .data.trace_store import TraceStore, run_id_for, run_summary_row, trace_frame
from .envs.adversaries import AdversarySpec
from .verify.checks import (Instance, assert_oracle_budget, check_admissibility_step, check_final_condition,
                            check_rademacher_bound, check_regret_bound, check_relaxation_certificate,
                            oracle_budget, oracle_call_histogram)
from .verify.report import CheckReport, write_report

logger = logging.getLogger(__name__)

RunTask = Tuple[LearnerSpec, AdversarySpec, int, ExperimentConfig]


def execute_run(task: RunTask) -> Tuple[pd.DataFrame, dict]:
    """Play one (learner, adversary, seed) run; returns its trace rows and summary row."""
    spec, adversary, seed, config = task
    trace, report = run_episode(spec, config.environment(adversary), config.T, seed, config.master_seed)
    assert_oracle_budget(trace, config.K, spec.kind)
    run_id = run_id_for(spec.name, adversary.name, seed)
    return (trace_frame(run_id, spec.name, adversary.name, seed, trace, report),
            run_summary_row(run_id, spec.name, adversary.name, seed, report))


class BenchApp:
    """Drives the run and verify commands for one configuration."""

    def __init__(self, config: ExperimentConfig, show_progress: Optional[bool] = None):
        self.config = config
        self.show_progress = sys.stderr.isatty() if show_progress is None else show_progress

    def tasks(self) -> List[RunTask]:
        """Cartesian product of learners, adversaries and seeds, in config order."""
        c = self.config
        return [(spec, adv, seed, c) for spec in c.learners for adv in c.adversaries for seed in c.seeds]

    def _map(self, fn, items: Sequence, desc: str) -> list:
        progress = tqdm(total=len(items), desc=desc, disable=not self.show_progress)
        try:
            if self.config.jobs > 1 and len(items) > 1:
                with ProcessPoolExecutor(max_workers=self.config.jobs) as executor:
                    results = []
                    for result in executor.map(fn, items):
                        results.append(result)
                        progress.update()
                    return results
            results = []
            for item in items:
                results.append(fn(item))
                progress.update()
            return results
        finally:
            progress.close()

    def run(self) -> int:
        c = self.config
        logger.info("Running %d learners x %d adversaries x %d seeds (T=%d, K=%d, |Pi|=%d, jobs=%d)",
                    len(c.learners), len(c.adversaries), len(c.seeds), c.T, c.K, c.policy_class.size, c.jobs)
        try:
            results = self._map(execute_run, self.tasks(), 'runs')
        except OracleBudgetError as e:
            logger.error("Oracle budget violated: %s", e)
            return EXIT_VERIFICATION_FAILED

        store = TraceStore(c.output_dir)
        files = [store.trace_path(str(frame['run_id'].iloc[0])).name for frame, _ in results]
        if len(set(files)) != len(files):
            raise ConfigurationError("two runs map to the same trace file; learner and adversary names must differ")
        for frame, _ in results:
            store.write_trace(frame)
        store.write_summary([row for _, row in results])
        store.write_manifest(files, c.master_seed, c.digest())
        logger.info("Wrote %d trace files to %s", len(files), c.output_dir)
        return EXIT_OK

    def instance(self) -> Instance:
        c = self.config
        return Instance(c.policy_class, c.context_dist, c.T, gamma=c.verification.params['gamma'])

    def _oracle_calls_check(self) -> CheckReport:
        c = self.config
        traces, worst_ratio, failure = [], 0.0, None
        for spec in c.learners:
            for adversary in c.adversaries:
                seed = c.seeds[0]
                trace, _ = run_episode(spec, c.environment(adversary), c.T, seed, c.master_seed)
                traces.append((spec.name, trace))
                budget, _ = oracle_budget(spec.kind, c.K)
                try:
                    assert_oracle_budget(trace, c.K, spec.kind)
                except OracleBudgetError as e:
                    failure = failure or {'learner': spec.name, 'adversary': adversary.name,
                                          'round': e.round_index, 'calls': e.calls, 'budget': e.budget}
                peak = max(r.oracle_calls for r in trace)
                worst_ratio = max(worst_ratio, peak / budget if budget else float(peak))
        details = {'histogram': oracle_call_histogram(traces)}
        if failure:
            details['violation'] = failure
        rounds = sum(len(t) for _, t in traces)
        return CheckReport('oracle_calls', worst_ratio, 1.0, 0.0, rounds, failure is None, '<=', True, details)

    def verify(self) -> int:
        c = self.config
        params = c.verification.params
        instance = self.instance()
        gamma = instance.resolved_gamma
        reports: List[CheckReport] = []
        for name in c.verification.checks:
            rng = check_rng(c.master_seed, CHECK_NAMES.index(name))
            logger.info("Check %s", name)
            if name == 'admissibility_step':
                rounds = params['rounds'] or range(1, c.T + 1)
                for t in rounds:
                    reports.append(check_admissibility_step(instance, t, params['n_outer'], params['n_inner'],
                                                            rng, jobs=c.jobs))
            elif name == 'final_condition':
                reports.append(check_final_condition(instance, params['n_samples'], rng, jobs=c.jobs))
            elif name == 'rademacher_bound':
                reports.append(check_rademacher_bound(c.T, c.K, c.policy_class, gamma, params['n_samples'], rng,
                                                      c.context_dist, jobs=c.jobs))
            elif name == 'regret_bound':
                reports.append(check_regret_bound(instance, gamma, params['n_seeds'], c.master_seed, jobs=c.jobs))
            elif name == 'oracle_calls':
                reports.append(self._oracle_calls_check())
            elif name == 'relaxation_certificate':
                reports.append(check_relaxation_certificate(instance, params['n_seeds'], params['n_samples'], rng,
                                                            c.master_seed, jobs=c.jobs))
        doc = write_report(reports, c.output_dir / VERIFICATION_FILE,
                           master_seed=c.master_seed, config_sha256=c.digest())
        for report in reports:
            logger.info("  %-24s %s  lhs=%.6g rhs=%.6g se=%.3g", report.name,
                        "PASS" if report.passed else "FAIL", report.lhs, report.rhs, report.se)
        return EXIT_OK if doc['passed'] else EXIT_VERIFICATION_FAILED


def _check_list(value: str) -> List[str]:
    return [part.strip() for part in value.split(',') if part.strip()]


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, help='experiment YAML file')
    common.add_argument('--out', type=Path, help='output directory (overrides output_dir)')
    common.add_argument('--seed', type=int, help='master seed (overrides master_seed)')
    common.add_argument('--jobs', type=int, help='worker processes (overrides jobs)')
    common.add_argument('--checks', type=_check_list, help=f"comma-separated subset of {','.join(CHECK_NAMES)}")
    common.add_argument('-v', '--verbose', action='store_true', help='debug logging')

    parser = argparse.ArgumentParser(prog='bandit-bench', description=__doc__.strip())
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('run', parents=[common], help='run every learner x adversary x seed')
    sub.add_parser('verify', parents=[common], help='run the numerical checks')
    summarize_parser = sub.add_parser('summarize', parents=[common], help='aggregate a trace directory')
    summarize_parser.add_argument('trace_dir', nargs='?', type=Path, help='trace directory (default: --out)')
    return parser.parse_args(argv)


def configure_logging(verbose: bool):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format='%(asctime)s %(levelname)-7s %(name)s: %(message)s')


def create_signal_handler():
    """Exit quietly with status 130 on Ctrl-C."""
    def signal_handler(sig, frame):
        logger.warning("Interrupted")
        sys.exit(130)

    signal.signal(signal.SIGINT, signal_handler)
    return signal_handler


def _load(args) -> ExperimentConfig:
    if args.config is None:
        raise ConfigurationError(f"the {args.command} command needs --config")
    config = load_config(args.config)
    return config.with_overrides(output_dir=args.out, master_seed=args.seed, jobs=args.jobs, checks=args.checks)


def _summarize(args) -> int:
    trace_dir = args.trace_dir or args.out
    if trace_dir is None and args.config is not None:
        trace_dir = load_config(args.config).output_dir
    if trace_dir is None:
        raise ConfigurationError("summarize needs a trace directory, --out or --config")
    summarize(trace_dir)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = parse_arguments(argv)
    configure_logging(args.verbose)
    try:
        if args.command == 'summarize':
            return _summarize(args)
        app = BenchApp(_load(args))
        return app.run() if args.command == 'run' else app.verify()
    except (ConfigurationError, InputError, ValidationError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG_ERROR
    except BanditError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_CONFIG_ERROR
    except Exception:
        logger.exception("Unexpected failure")
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    create_signal_handler()
    sys.exit(main())
