"""
Core algorithms: oracle, relaxation, water-filling strategy and learners.
"""
