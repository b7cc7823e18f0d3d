"""
Experiment running, sweeps, model comparison and evaluation metrics.
"""
