"""
Trace storage: one CSV per run plus a manifest and a run summary.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from jsonschema import Draft202012Validator

from ..core.config import (MANIFEST_FILE, SUMMARY_FILE, TRACE_COLUMNS, TRACE_FLOAT_FORMAT,
                           TRACE_SCHEMA_VERSION)
from ..core.episode import RegretReport
from ..core.errors import ConfigurationError, SchemaMismatchError, ValidationError
from ..core.types import RoundRecord

logger = logging.getLogger(__name__)

RUN_SUMMARY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "runs"],
    "properties": {
        "schema_version": {"const": TRACE_SCHEMA_VERSION},
        "runs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["run_id", "learner", "adversary", "seed", "expected_regret",
                             "realized_regret", "benchmark", "best_policy", "oracle_calls"],
                "properties": {
                    "run_id": {"type": "string"},
                    "learner": {"type": "string"},
                    "adversary": {"type": "string"},
                    "seed": {"type": "integer", "minimum": 0},
                    "expected_regret": {"type": "number"},
                    "realized_regret": {"type": "number"},
                    "benchmark": {"type": "number"},
                    "best_policy": {"type": "integer", "minimum": 0},
                    "oracle_calls": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}


def run_id_for(learner: str, adversary: str, seed: int) -> str:
    return f"{learner}__{adversary}__seed{seed}"


def trace_frame(run_id: str, learner: str, adversary: str, seed: int,
                trace: Sequence[RoundRecord], report: RegretReport) -> pd.DataFrame:
    """Per-round rows in the fixed column order."""
    return pd.DataFrame({
        'run_id': [run_id] * len(trace),
        'learner': [learner] * len(trace),
        'adversary': [adversary] * len(trace),
        'seed': [seed] * len(trace),
        't': [r.t for r in trace],
        'context': [r.context.id for r in trace],
        'action': [r.action for r in trace],
        'observed_cost': [r.observed_cost for r in trace],
        'expected_round_cost': [r.expected_cost for r in trace],
        'cum_expected_regret': report.cum_expected_regret.tolist(),
        'oracle_calls': [r.oracle_calls for r in trace],
    }, columns=TRACE_COLUMNS)


def run_summary_row(run_id: str, learner: str, adversary: str, seed: int, report: RegretReport) -> Dict[str, Any]:
    return {
        'run_id': run_id,
        'learner': learner,
        'adversary': adversary,
        'seed': int(seed),
        'expected_regret': float(report.expected_regret),
        'realized_regret': float(report.realized_regret),
        'benchmark': float(report.benchmark),
        'best_policy': int(report.best_policy),
        'oracle_calls': int(report.oracle_calls),
    }


def _write_json(path: Path, payload: Dict[str, Any]):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write('\n')


class TraceStore:
    """Reads and writes one trace directory."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def trace_path(self, run_id: str) -> Path:
        return self.directory / f"{run_id}.csv"

    def write_trace(self, frame: pd.DataFrame) -> Path:
        """Write one run's rows; the header is exactly TRACE_COLUMNS."""
        if list(frame.columns) != TRACE_COLUMNS:
            raise ValidationError(f"trace columns {list(frame.columns)} differ from {TRACE_COLUMNS}")
        run_ids = frame['run_id'].unique()
        if len(run_ids) != 1:
            raise ValidationError(f"a trace file holds exactly one run, got {len(run_ids)}")
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.trace_path(str(run_ids[0]))
        frame.to_csv(path, index=False, float_format=TRACE_FLOAT_FORMAT, lineterminator='\n')
        return path

    def write_manifest(self, files: Sequence[str], master_seed: int, config_digest: str) -> Path:
        path = self.directory / MANIFEST_FILE
        _write_json(path, {
            'schema_version': TRACE_SCHEMA_VERSION,
            'header': TRACE_COLUMNS,
            'master_seed': int(master_seed),
            'config_sha256': config_digest,
            'files': sorted(files),
        })
        return path

    def write_summary(self, rows: List[Dict[str, Any]]) -> Path:
        payload = {'schema_version': TRACE_SCHEMA_VERSION,
                   'runs': sorted(rows, key=lambda r: r['run_id'])}
        errors = list(Draft202012Validator(RUN_SUMMARY_SCHEMA).iter_errors(payload))
        if errors:
            raise ValidationError(f"run summary invalid: {errors[0].message}")
        path = self.directory / SUMMARY_FILE
        _write_json(path, payload)
        return path

    def load_manifest(self) -> Dict[str, Any]:
        """Read the manifest and refuse any other schema version."""
        path = self.directory / MANIFEST_FILE
        if not path.exists():
            raise ConfigurationError(f"{self.directory} has no {MANIFEST_FILE}; not a trace directory")
        with open(path, 'r', encoding='utf-8') as f:
            manifest = json.load(f)
        found = manifest.get('schema_version')
        if found != TRACE_SCHEMA_VERSION:
            raise SchemaMismatchError(found, TRACE_SCHEMA_VERSION)
        return manifest

    def read_traces(self, files: Optional[Sequence[str]] = None) -> pd.DataFrame:
        """Concatenate the listed trace files (default: those in the manifest)."""
        if files is None:
            files = self.load_manifest()['files']
        frames = []
        for name in files:
            frame = pd.read_csv(self.directory / name)
            if list(frame.columns) != TRACE_COLUMNS:
                raise SchemaMismatchError(f"header {list(frame.columns)} in {name}", f"header {TRACE_COLUMNS}")
            frames.append(frame)
        if not frames:
            raise ConfigurationError(f"{self.directory} lists no trace files")
        logger.debug("Read %d trace files from %s", len(frames), self.directory)
        return pd.concat(frames, ignore_index=True)
