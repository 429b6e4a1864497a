"""
Experiment configuration, policy classes and trace persistence.
"""
