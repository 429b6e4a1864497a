"""
Aggregate trace directories into regret tables and cumulative-regret curves.
"""
import logging
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.stats import norm

from ..core.config import CONFIDENCE_LEVEL, CUMULATIVE_REGRET_FILE, REGRET_TABLE_FILE, TRACE_FLOAT_FORMAT
from .trace_store import TraceStore

logger = logging.getLogger(__name__)

GROUP_KEYS = ['learner', 'adversary']


def _z_value(level: float = CONFIDENCE_LEVEL) -> float:
    return float(norm.ppf(0.5 + level / 2.0))


def _interval(grouped, column: str, level: float) -> pd.DataFrame:
    stats = grouped[column].agg(n='count', mean='mean', sd='std').reset_index()
    stats['sd'] = stats['sd'].fillna(0.0)
    half = _z_value(level) * stats['sd'] / np.sqrt(stats['n'])
    stats['ci_low'] = stats['mean'] - half
    stats['ci_high'] = stats['mean'] + half
    return stats


def final_regrets(traces: pd.DataFrame) -> pd.DataFrame:
    """Expected regret at the last round of every run."""
    last = traces.sort_values(['run_id', 't']).groupby('run_id', sort=True).tail(1)
    return last[['run_id', 'learner', 'adversary', 'seed', 'cum_expected_regret']] \
        .rename(columns={'cum_expected_regret': 'expected_regret'}).reset_index(drop=True)


def regret_table(traces: pd.DataFrame, level: float = CONFIDENCE_LEVEL) -> pd.DataFrame:
    """Mean expected regret per (learner, adversary) with a normal-approximation CI over seeds.

    A group with a single seed gets zero CI width and `single_seed` set.
    """
    finals = final_regrets(traces)
    table = _interval(finals.groupby(GROUP_KEYS, sort=True), 'expected_regret', level)
    table['single_seed'] = table['n'] == 1
    return table[GROUP_KEYS + ['n', 'mean', 'sd', 'ci_low', 'ci_high', 'single_seed']]


def cumulative_regret_curve(traces: pd.DataFrame, level: float = CONFIDENCE_LEVEL) -> pd.DataFrame:
    """Mean cumulative expected regret against t, one row per (learner, adversary, t)."""
    curve = _interval(traces.groupby(GROUP_KEYS + ['t'], sort=True), 'cum_expected_regret', level)
    return curve[GROUP_KEYS + ['t', 'n', 'mean', 'ci_low', 'ci_high']]


def summarize(trace_dir, out_dir: Optional[Path] = None,
              level: float = CONFIDENCE_LEVEL) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """Read a trace directory and write the regret table and the curve CSV.

    Raises:
        SchemaMismatchError: the traces were written under another schema version.
    """
    store = TraceStore(trace_dir)
    traces = store.read_traces()
    table = regret_table(traces, level)
    curve = cumulative_regret_curve(traces, level)
    out_dir = Path(out_dir) if out_dir is not None else store.directory
    out_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(out_dir / REGRET_TABLE_FILE, index=False, float_format=TRACE_FLOAT_FORMAT, lineterminator='\n')
    curve.to_csv(out_dir / CUMULATIVE_REGRET_FILE, index=False, float_format=TRACE_FLOAT_FORMAT, lineterminator='\n')
    for row in table.itertuples(index=False):
        logger.info("%-20s %-22s n=%-3d mean %.3f  CI [%.3f, %.3f]%s", row.learner, row.adversary, row.n,
                    row.mean, row.ci_low, row.ci_high, "  (single seed)" if row.single_seed else "")
    return table, curve
