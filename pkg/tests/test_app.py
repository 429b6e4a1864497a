import json

import pytest
import yaml

from src.app import BenchApp, main, parse_arguments
from src.core.config import MANIFEST_FILE, SUMMARY_FILE, VERIFICATION_FILE
from src.data.experiment_config import load_config
from src.verify.report import load_report

EXPERIMENT = {
    'T': 6, 'K': 2, 'X': 2,
    'policy_class': {'tables': [[0, 0], [0, 1], [1, 0], [1, 1]]},
    'learners': [
        {'name': 'relax', 'kind': 'relax', 'params': {'gamma': 0.5}},
        {'name': 'exp4', 'kind': 'exp4', 'params': {'gamma': 0.5}},
    ],
    'adversaries': [{'name': 'mode', 'kind': 'adaptive', 'rule': 'punish_the_mode'}],
    'seeds': 3,
    'master_seed': 42,
    'output_dir': 'out',
}


def write_config(tmp_path, **changes):
    data = dict(EXPERIMENT)
    data.update(changes)
    path = tmp_path / 'experiment.yaml'
    path.write_text(yaml.safe_dump(data))
    return path


def trace_bytes(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.glob('*.csv'))}


def test_run_writes_one_trace_per_run(tmp_path):
    path = write_config(tmp_path)
    assert main(['run', '--config', str(path)]) == 0
    out = tmp_path / 'out'
    assert len(trace_bytes(out)) == 6
    manifest = json.loads((out / MANIFEST_FILE).read_text())
    assert manifest['master_seed'] == 42
    assert len(manifest['files']) == 6
    summary = json.loads((out / SUMMARY_FILE).read_text())
    assert {run['learner'] for run in summary['runs']} == {'relax', 'exp4'}


def test_runs_are_byte_identical(tmp_path):
    path = write_config(tmp_path)
    assert main(['run', '--config', str(path), '--out', str(tmp_path / 'a')]) == 0
    assert main(['run', '--config', str(path), '--out', str(tmp_path / 'b')]) == 0
    assert trace_bytes(tmp_path / 'a') == trace_bytes(tmp_path / 'b')


def test_parallel_matches_serial(tmp_path):
    path = write_config(tmp_path)
    assert main(['run', '--config', str(path), '--out', str(tmp_path / 'serial')]) == 0
    assert main(['run', '--config', str(path), '--out', str(tmp_path / 'parallel'), '--jobs', '2']) == 0
    assert trace_bytes(tmp_path / 'serial') == trace_bytes(tmp_path / 'parallel')


def test_seed_override_changes_traces(tmp_path):
    path = write_config(tmp_path)
    main(['run', '--config', str(path), '--out', str(tmp_path / 'a')])
    main(['run', '--config', str(path), '--out', str(tmp_path / 'b'), '--seed', '7'])
    assert trace_bytes(tmp_path / 'a') != trace_bytes(tmp_path / 'b')


def test_empty_learner_list_exits_with_config_error(tmp_path):
    path = write_config(tmp_path, learners=[])
    assert main(['run', '--config', str(path)]) == 1


def test_missing_config_flag(tmp_path):
    assert main(['run']) == 1


def test_summarize_after_run(tmp_path):
    path = write_config(tmp_path)
    main(['run', '--config', str(path)])
    assert main(['summarize', str(tmp_path / 'out')]) == 0
    assert (tmp_path / 'out' / 'regret_table.csv').exists()
    assert main(['summarize', '--config', str(path)]) == 0


def test_rademacher_hypothesis_violation_exits_with_config_error(tmp_path):
    path = write_config(tmp_path, verification={'gamma': 0.01})
    assert main(['verify', '--config', str(path), '--checks', 'rademacher_bound']) == 1


def test_verify_tiny_suite_passes(tmp_path):
    path = write_config(tmp_path, T=3, verification={'gamma': 0.5, 'n_samples': 500, 'n_seeds': 3})
    assert main(['verify', '--config', str(path)]) == 0
    report = load_report(tmp_path / 'out' / VERIFICATION_FILE)
    assert report['passed']
    names = [check['name'] for check in report['checks']]
    assert names.count('admissibility_step') == 3
    assert {'final_condition', 'rademacher_bound', 'regret_bound', 'oracle_calls'} <= set(names)


def test_oracle_calls_check_reports_histogram(tmp_path):
    app = BenchApp(load_config(write_config(tmp_path)), show_progress=False)
    report = app._oracle_calls_check()
    assert report.passed
    assert report.details['histogram'] == {'relax': {3: 6}, 'exp4': {0: 6}}


def test_argument_parsing():
    args = parse_arguments(['verify', '--config', 'x.yaml', '--checks', 'oracle_calls, final_condition',
                            '--jobs', '3'])
    assert args.command == 'verify'
    assert args.checks == ['oracle_calls', 'final_condition']
    assert args.jobs == 3
    with pytest.raises(SystemExit):
        parse_arguments(['dance'])
