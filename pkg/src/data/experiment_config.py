"""
Experiment configuration: one YAML file describes one experiment.

Example:

    T: 200
    K: 2
    X: 2
    contexts: {uniform: true}          # or {probs: [0.3, 0.7]}
    policy_class:
      random: {size: 4, seed: 7}       # or tables: [[0, 1], [1, 0]] / complete: true
    learners:
      - {name: relax, kind: relax, params: {gamma: 0.5}}
      - {name: exp4, kind: exp4}
    adversaries:
      - {name: mode, kind: adaptive, rule: punish_the_mode}
      - {name: fixed, kind: fixed_sequence, path: costs.csv}
      - {name: noisy, kind: stochastic, means: [[0.2, 0.8], [0.5, 0.5]]}
    seeds: 3                           # or an explicit list
    master_seed: 0
    output_dir: results
    jobs: 1
    verification:
      checks: [admissibility_step, final_condition]
      n_inner: 20000
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import yaml

from ..core.config import CHECK_NAMES, DEFAULT_CHECKS, VERIFICATION_DEFAULTS
from ..core.errors import ConfigurationError
from ..core.learners import LearnerSpec
from ..core.types import PolicyClass
from ..envs.adversaries import ADAPTIVE_RULES, AdversaryKind, AdversarySpec, load_cost_sequence
from ..envs.contexts import ContextDistribution
from ..envs.environment import EnvironmentSpec
from .policy_generator import complete_policy_class, policy_class_from_tables, random_policy_class

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = {'T', 'K', 'X', 'contexts', 'policy_class', 'learners', 'adversaries', 'seeds',
                  'master_seed', 'output_dir', 'jobs', 'verification'}
U64_MAX = 2 ** 64 - 1


@dataclass(frozen=True)
class VerificationConfig:
    checks: Tuple[str, ...] = DEFAULT_CHECKS
    params: Dict[str, Any] = field(default_factory=lambda: dict(VERIFICATION_DEFAULTS))

    def __getitem__(self, key: str):
        return self.params[key]


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Validated experiment description."""
    T: int
    K: int
    X: int
    context_dist: ContextDistribution
    policy_class: PolicyClass
    learners: Tuple[LearnerSpec, ...]
    adversaries: Tuple[AdversarySpec, ...]
    seeds: Tuple[int, ...]
    master_seed: int = 0
    output_dir: Path = Path('results')
    jobs: int = 1
    verification: VerificationConfig = field(default_factory=VerificationConfig)
    raw: Dict[str, Any] = field(default_factory=dict)

    def environment(self, adversary: AdversarySpec) -> EnvironmentSpec:
        return EnvironmentSpec(self.context_dist, adversary, self.policy_class)

    @property
    def run_count(self) -> int:
        return len(self.learners) * len(self.adversaries) * len(self.seeds)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON of the effective configuration."""
        canonical = json.dumps(self.raw, sort_keys=True, separators=(',', ':'), default=str)
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def with_overrides(self, output_dir=None, master_seed: Optional[int] = None, jobs: Optional[int] = None,
                       checks: Optional[Sequence[str]] = None) -> 'ExperimentConfig':
        """Apply command-line overrides, keeping `raw` in step for the digest."""
        raw = dict(self.raw)
        changes: Dict[str, Any] = {}
        if output_dir is not None:
            changes['output_dir'] = Path(output_dir)
            raw['output_dir'] = str(output_dir)
        if master_seed is not None:
            changes['master_seed'] = _check_u64(master_seed, 'master_seed')
            raw['master_seed'] = master_seed
        if jobs is not None:
            changes['jobs'] = _check_jobs(jobs)
            raw['jobs'] = jobs
        if checks is not None:
            checks = _check_names(checks)
            changes['verification'] = replace(self.verification, checks=checks)
            raw['verification'] = dict(raw.get('verification') or {}, checks=list(checks))
        return replace(self, raw=raw, **changes)


def _require(mapping: Mapping, key: str, where: str = 'config'):
    if key not in mapping:
        raise ConfigurationError(f"{where} is missing required key {key!r}")
    return mapping[key]


def _positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
    return value


def _check_u64(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= U64_MAX:
        raise ConfigurationError(f"{name} must be an unsigned 64-bit integer, got {value!r}")
    return value


def _check_jobs(value) -> int:
    return _positive_int(value, 'jobs')


def _check_names(checks: Sequence[str]) -> Tuple[str, ...]:
    checks = tuple(checks)
    unknown = [c for c in checks if c not in CHECK_NAMES]
    if unknown:
        raise ConfigurationError(f"unknown checks {unknown}; expected some of {list(CHECK_NAMES)}")
    if not checks:
        raise ConfigurationError("the check list is empty")
    return checks


def _parse_contexts(section, X: int) -> ContextDistribution:
    if section is None or section.get('uniform'):
        return ContextDistribution.uniform(X)
    probs = _require(section, 'probs', 'contexts')
    if len(probs) != X:
        raise ConfigurationError(f"contexts.probs has {len(probs)} entries, expected X={X}")
    try:
        return ContextDistribution(probs)
    except ValueError as e:
        raise ConfigurationError(f"contexts: {e}") from e


def _parse_policy_class(section, X: int, K: int) -> PolicyClass:
    if not isinstance(section, Mapping):
        raise ConfigurationError("policy_class must be a mapping with 'tables', 'random' or 'complete'")
    if 'tables' in section:
        pc = policy_class_from_tables(section['tables'], K)
    elif 'random' in section:
        spec = section['random']
        pc = random_policy_class(_positive_int(_require(spec, 'size', 'policy_class.random'), 'policy_class.random.size'),
                                 X, K, _check_u64(_require(spec, 'seed', 'policy_class.random'), 'policy_class.random.seed'),
                                 spec.get('version', 1))
    elif section.get('complete'):
        pc = complete_policy_class(X, K)
    else:
        raise ConfigurationError("policy_class needs one of 'tables', 'random' or 'complete'")
    if pc.X != X:
        raise ConfigurationError(f"policy tables cover {pc.X} contexts, expected X={X}")
    return pc


def _parse_learner(entry: Mapping) -> LearnerSpec:
    kind = _require(entry, 'kind', 'learner')
    spec = LearnerSpec(str(entry.get('name', kind)), kind, dict(entry.get('params') or {}))
    params = spec.resolved_params()
    gamma = params.get('gamma')
    if gamma is not None and not (isinstance(gamma, (int, float)) and 0.0 < gamma <= 1.0):
        raise ConfigurationError(f"learner {spec.name!r}: gamma must lie in (0, 1], got {gamma!r}")
    if 'epsilon' in params and not 0.0 <= params['epsilon'] <= 1.0:
        raise ConfigurationError(f"learner {spec.name!r}: epsilon must lie in [0, 1], got {params['epsilon']!r}")
    if 'warm_start' in params and (not isinstance(params['warm_start'], int) or params['warm_start'] < 0):
        raise ConfigurationError(f"learner {spec.name!r}: warm_start must be a non-negative integer")
    rate = params.get('learning_rate')
    if rate is not None and rate < 0:
        raise ConfigurationError(f"learner {spec.name!r}: learning_rate must be non-negative")
    return spec


def _parse_adversary(entry: Mapping, K: int, base_dir: Path) -> AdversarySpec:
    kind = _require(entry, 'kind', 'adversary')
    name = entry.get('name')
    try:
        kind = AdversaryKind(kind)
    except ValueError:
        raise ConfigurationError(f"unknown adversary kind {kind!r}; expected one of {[k.value for k in AdversaryKind]}")
    try:
        if kind is AdversaryKind.FIXED_SEQUENCE:
            if 'path' in entry:
                path = Path(entry['path'])
                return load_cost_sequence(path if path.is_absolute() else base_dir / path, K, name=name)
            return AdversarySpec.fixed_sequence(_require(entry, 'costs', 'fixed_sequence adversary'),
                                                name=name or 'fixed_sequence')
        if kind is AdversaryKind.STOCHASTIC:
            return AdversarySpec.stochastic(_require(entry, 'means', 'stochastic adversary'),
                                            noise=entry.get('noise', 'bernoulli'), name=name or 'stochastic')
        rule = _require(entry, 'rule', 'adaptive adversary')
        if rule not in ADAPTIVE_RULES:
            raise ConfigurationError(f"unknown adaptive rule {rule!r}; expected one of {sorted(ADAPTIVE_RULES)}")
        return AdversarySpec.adaptive(rule, name=name)
    except ValueError as e:
        raise ConfigurationError(f"adversary {name or kind.value!r}: {e}") from e


def _parse_seeds(value) -> Tuple[int, ...]:
    if isinstance(value, int) and not isinstance(value, bool):
        return tuple(range(_positive_int(value, 'seeds')))
    if not isinstance(value, list) or not value:
        raise ConfigurationError(f"seeds must be a positive count or a non-empty list, got {value!r}")
    seeds = tuple(_check_u64(s, 'seed') for s in value)
    if len(set(seeds)) != len(seeds):
        raise ConfigurationError("seeds must be distinct")
    return seeds


def _parse_verification(section) -> VerificationConfig:
    section = dict(section or {})
    checks = _check_names(section.pop('checks', DEFAULT_CHECKS))
    unknown = set(section) - set(VERIFICATION_DEFAULTS)
    if unknown:
        raise ConfigurationError(f"unknown verification parameters {sorted(unknown)}")
    params = dict(VERIFICATION_DEFAULTS)
    params.update(section)
    return VerificationConfig(checks, params)


def _unique_names(items, what: str):
    names = [item.name for item in items]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ConfigurationError(f"duplicate {what} names {duplicates}")


def parse_config(data: Mapping[str, Any], base_dir: Path = Path('.')) -> ExperimentConfig:
    """Build and cross-validate an ExperimentConfig from a parsed mapping."""
    if not isinstance(data, Mapping):
        raise ConfigurationError("config must be a mapping at the top level")
    unknown = set(data) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys {sorted(unknown)}")
    T = _positive_int(_require(data, 'T'), 'T')
    K = _positive_int(_require(data, 'K'), 'K')
    X = _positive_int(_require(data, 'X'), 'X')

    learners = tuple(_parse_learner(e) for e in (data.get('learners') or []))
    if not learners:
        raise ConfigurationError("the learner list is empty")
    adversaries = tuple(_parse_adversary(e, K, base_dir) for e in (data.get('adversaries') or []))
    if not adversaries:
        raise ConfigurationError("the adversary list is empty")
    _unique_names(learners, 'learner')
    _unique_names(adversaries, 'adversary')
    for adversary in adversaries:
        adversary.check_dimensions(T, K, X)

    output_dir = Path(data.get('output_dir', 'results'))
    if not output_dir.is_absolute():
        output_dir = base_dir / output_dir
    config = ExperimentConfig(
        T=T, K=K, X=X,
        context_dist=_parse_contexts(data.get('contexts'), X),
        policy_class=_parse_policy_class(_require(data, 'policy_class'), X, K),
        learners=learners,
        adversaries=adversaries,
        seeds=_parse_seeds(_require(data, 'seeds')),
        master_seed=_check_u64(data.get('master_seed', 0), 'master_seed'),
        output_dir=output_dir,
        jobs=_check_jobs(data.get('jobs', 1)),
        verification=_parse_verification(data.get('verification')),
        raw=dict(data),
    )
    logger.debug("Config: T=%d K=%d X=%d |Pi|=%d, %d runs", T, K, X, config.policy_class.size, config.run_count)
    return config


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"config {path} is not valid YAML: {e}") from e
    logger.info("Loaded config %s", path)
    return parse_config(data, base_dir=path.parent)
