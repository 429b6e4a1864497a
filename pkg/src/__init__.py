"""
Relaxation Bandit Bench
Simulation and verification of oracle-efficient adversarial contextual bandits.
"""

__version__ = "1.0.0"
__author__ = "Relaxation Bench Team"
