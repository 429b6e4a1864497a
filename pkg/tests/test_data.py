import json

import numpy as np
import pandas as pd
import pytest

from src.core.config import MANIFEST_FILE, TRACE_COLUMNS
from src.core.errors import ConfigurationError, SchemaMismatchError, ValidationError
from src.data.experiment_config import load_config, parse_config
from src.data.policy_generator import complete_policy_class, policy_class_from_tables, random_policy_class
from src.data.summary import regret_table, summarize
from src.data.trace_store import TraceStore, run_id_for

BASE = {
    'T': 4, 'K': 2, 'X': 2,
    'policy_class': {'tables': [[0, 1], [1, 0]]},
    'learners': [{'name': 'relax', 'kind': 'relax', 'params': {'gamma': 0.5}}],
    'adversaries': [{'name': 'mode', 'kind': 'adaptive', 'rule': 'punish_the_mode'}],
    'seeds': 2,
}


def config(**changes):
    data = dict(BASE)
    data.update(changes)
    return data


# -- policy classes --

def test_random_policy_class_is_stable_per_seed():
    a = random_policy_class(6, 3, 4, seed=7)
    b = random_policy_class(6, 3, 4, seed=7)
    np.testing.assert_array_equal(a.tables, b.tables)
    assert (a.size, a.X, a.K) == (6, 3, 4)
    assert not np.array_equal(a.tables, random_policy_class(6, 3, 4, seed=8).tables)


def test_unknown_generator_version():
    with pytest.raises(ConfigurationError):
        random_policy_class(2, 2, 2, seed=0, version=2)


def test_complete_policy_class():
    pc = complete_policy_class(2, 3)
    assert pc.size == 9
    assert len({tuple(row) for row in pc.tables.tolist()}) == 9


def test_invalid_tables_are_configuration_errors():
    with pytest.raises(ConfigurationError):
        policy_class_from_tables([[0, 3]], 2)


# -- config --

def test_parse_minimal_config(tmp_path):
    cfg = parse_config(config(), base_dir=tmp_path)
    assert cfg.seeds == (0, 1)
    assert cfg.run_count == 2
    assert cfg.output_dir == tmp_path / 'results'
    assert cfg.context_dist.probs.tolist() == [0.5, 0.5]
    assert cfg.verification.checks[0] == 'admissibility_step'


def test_empty_learner_list():
    with pytest.raises(ConfigurationError, match='learner list is empty'):
        parse_config(config(learners=[]))


def test_empty_adversary_list():
    with pytest.raises(ConfigurationError, match='adversary list is empty'):
        parse_config(config(adversaries=[]))


@pytest.mark.parametrize('changes', [
    {'T': 0},
    {'extra': 1},
    {'seeds': [1, 1]},
    {'seeds': -1},
    {'jobs': 0},
    {'master_seed': 2 ** 64},
    {'contexts': {'probs': [1.0]}},
    {'learners': [{'kind': 'relax', 'params': {'gamma': 1.5}}]},
    {'learners': [{'kind': 'epsilon_greedy', 'params': {'epsilon': 2}}]},
    {'learners': [{'kind': 'relax'}, {'kind': 'relax'}]},
    {'adversaries': [{'kind': 'adaptive', 'rule': 'nope'}]},
    {'adversaries': [{'kind': 'fixed_sequence', 'costs': [[0.1, 0.2]]}]},
    {'adversaries': [{'kind': 'stochastic', 'means': [[0.1, 0.2]]}]},
    {'policy_class': {'tables': [[0, 1, 1]]}},
    {'verification': {'checks': ['bogus']}},
    {'verification': {'n_bogus': 3}},
])
def test_invalid_configs(changes):
    with pytest.raises(ConfigurationError):
        parse_config(config(**changes))


def test_fixed_sequence_from_csv(tmp_path):
    (tmp_path / 'costs.csv').write_text("0,1\n1,0\n0,1\n1,0\n")
    cfg = parse_config(config(adversaries=[{'kind': 'fixed_sequence', 'path': 'costs.csv'}]), base_dir=tmp_path)
    assert cfg.adversaries[0].name == 'costs'
    assert cfg.adversaries[0].costs.shape == (4, 2)


def test_load_config_from_yaml(tmp_path):
    path = tmp_path / 'exp.yaml'
    path.write_text(
        "T: 4\nK: 2\nX: 2\n"
        "policy_class: {random: {size: 3, seed: 5}}\n"
        "learners: [{name: e, kind: exp4}]\n"
        "adversaries: [{kind: stochastic, means: [[0.1, 0.9], [0.5, 0.5]], noise: none}]\n"
        "seeds: [4, 9]\n"
        "master_seed: 11\n"
    )
    cfg = load_config(path)
    assert cfg.seeds == (4, 9)
    assert cfg.master_seed == 11
    assert cfg.policy_class.size == 3


def test_load_config_reports_bad_yaml(tmp_path):
    path = tmp_path / 'bad.yaml'
    path.write_text("T: [1, 2\n")
    with pytest.raises(ConfigurationError):
        load_config(path)


def test_overrides_change_the_digest(tmp_path):
    cfg = parse_config(config(), base_dir=tmp_path)
    other = cfg.with_overrides(master_seed=5, jobs=2, checks=['oracle_calls'])
    assert other.master_seed == 5
    assert other.jobs == 2
    assert other.verification.checks == ('oracle_calls',)
    assert other.digest() != cfg.digest()
    assert cfg.with_overrides().digest() == cfg.digest()


# -- traces and summaries --

def synthetic_store(directory, finals, learner='relax', adversary='mode', T=3):
    """One trace per final regret value, with a straight-line cumulative regret."""
    store = TraceStore(directory)
    files = []
    for seed, final in enumerate(finals):
        run_id = run_id_for(learner, adversary, seed)
        frame = pd.DataFrame({
            'run_id': run_id, 'learner': learner, 'adversary': adversary, 'seed': seed,
            't': np.arange(1, T + 1), 'context': 0, 'action': 0,
            'observed_cost': 0.0, 'expected_round_cost': 0.0,
            'cum_expected_regret': np.linspace(final / T, final, T), 'oracle_calls': 3,
        }, columns=TRACE_COLUMNS)
        files.append(store.write_trace(frame).name)
    store.write_manifest(files, master_seed=0, config_digest='0' * 64)
    return store


def test_summary_mean_and_sample_sd(tmp_path):
    synthetic_store(tmp_path, [1.0, 2.0, 3.0])
    table, curve = summarize(tmp_path)
    row = table.iloc[0]
    assert row['n'] == 3
    assert row['mean'] == pytest.approx(2.0)
    assert row['sd'] == pytest.approx(1.0)
    assert row['ci_low'] < 2.0 < row['ci_high']
    assert not row['single_seed']
    assert (tmp_path / 'regret_table.csv').exists()
    assert (tmp_path / 'cumulative_regret.csv').exists()
    assert curve['t'].tolist() == [1, 2, 3]


def test_single_seed_is_flagged(tmp_path):
    synthetic_store(tmp_path, [4.0])
    table, _ = summarize(tmp_path)
    row = table.iloc[0]
    assert row['single_seed']
    assert row['ci_low'] == row['ci_high'] == row['mean'] == pytest.approx(4.0)


def test_zero_regret_runs_have_zero_width(tmp_path):
    store = synthetic_store(tmp_path, [0.0] * 50)
    table = regret_table(store.read_traces())
    assert table.iloc[0]['mean'] == 0.0
    assert (table.iloc[0]['ci_low'], table.iloc[0]['ci_high']) == (0.0, 0.0)


def test_schema_mismatch_names_both_versions(tmp_path):
    synthetic_store(tmp_path, [1.0])
    manifest_path = tmp_path / MANIFEST_FILE
    manifest = json.loads(manifest_path.read_text())
    manifest['schema_version'] = 99
    manifest_path.write_text(json.dumps(manifest))
    with pytest.raises(SchemaMismatchError, match='99') as info:
        summarize(tmp_path)
    assert info.value.expected == 1


def test_trace_writer_enforces_the_header(tmp_path):
    frame = pd.DataFrame({'run_id': ['a'], 't': [1]})
    with pytest.raises(ValidationError):
        TraceStore(tmp_path).write_trace(frame)


def test_missing_manifest(tmp_path):
    with pytest.raises(ConfigurationError):
        TraceStore(tmp_path).read_traces()


def test_run_summary_is_schema_checked(tmp_path):
    store = TraceStore(tmp_path)
    with pytest.raises(ValidationError):
        store.write_summary([{'run_id': 'x'}])
