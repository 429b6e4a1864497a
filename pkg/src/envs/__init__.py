"""
Context distributions, adversaries and the per-run environment.
"""
