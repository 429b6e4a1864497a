"""
Numerical verification of the relaxation's admissibility and regret guarantees.
"""
