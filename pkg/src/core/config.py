"""
Configuration constants for the relaxation bandit simulator.
"""

# Numerical tolerances
PROB_TOLERANCE = 1e-9       # |sum(q) - 1| accepted before renormalisation
FLOOR_TOLERANCE = 1e-12     # slack on the gamma/K exploration floor
ORACLE_TOLERANCE = 1e-9     # ERM answer vs. recomputed policy cost

# Statistical pass criterion (one-sided)
SIGMA_MARGIN = 3.0
EXACT_ATOM_LIMIT = 10 ** 6  # switch to exact enumeration below this many atoms
MC_BATCH_SIZE = 2_000

# Tiny-instance guard for the admissibility checker
TINY_LIMITS = {
    'K': 3,
    'T': 4,
    'policies': 8,
    'X': 3,
}

# PRNG stream ids; learner streams are shared by nothing else
STREAM_IDS = {
    'context': 0,
    'adversary': 1,
    'rollout': 2,
    'action': 3,
    'estimator': 4,
}

# Learner kinds and their default hyperparameters
LEARNER_DEFAULTS = {
    'relax': {
        'gamma': None,            # None -> default_gamma(T, K, |Pi|)
    },
    'full_rademacher': {
        'gamma': None,
    },
    'exp4': {
        'gamma': None,
        'learning_rate': None,    # None -> sqrt(ln|Pi| / (T K))
    },
    'epsilon_greedy': {
        'epsilon': 0.1,
        'warm_start': 0,          # rounds of uniform play before following ERM
    },
}

# Learners that spend exactly K + 1 oracle calls per round
RELAXATION_LEARNERS = ('relax', 'full_rademacher')

# Built-in adaptive adversaries
BUILTIN_ADVERSARIES = ('punish_the_mode', 'punish_above_uniform', 'best_policy_chaser')

# Verification suite
CHECK_NAMES = (
    'admissibility_step', 'final_condition', 'rademacher_bound', 'regret_bound',
    'oracle_calls', 'relaxation_certificate',
)
DEFAULT_CHECKS = CHECK_NAMES[:5]
VERIFICATION_DEFAULTS = {
    'gamma': None,          # None -> default_gamma(T, K, |Pi|)
    'rounds': None,         # admissibility rounds; None -> every t in 1..T
    'n_outer': 20_000,
    'n_inner': 20_000,
    'n_samples': 10_000,
    'n_seeds': 50,
}

# Trace files
TRACE_SCHEMA_VERSION = 1
TRACE_COLUMNS = [
    'run_id', 'learner', 'adversary', 'seed', 't', 'context', 'action',
    'observed_cost', 'expected_round_cost', 'cum_expected_regret', 'oracle_calls',
]
TRACE_FLOAT_FORMAT = '%.17g'
MANIFEST_FILE = 'manifest.json'
SUMMARY_FILE = 'summary.json'
VERIFICATION_FILE = 'verification.json'
REGRET_TABLE_FILE = 'regret_table.csv'
CUMULATIVE_REGRET_FILE = 'cumulative_regret.csv'

# Random policy classes are generated from (seed, version) so they stay stable
POLICY_GENERATOR_VERSION = 1

# Confidence level for the summary tables
CONFIDENCE_LEVEL = 0.95

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_VERIFICATION_FAILED = 2
