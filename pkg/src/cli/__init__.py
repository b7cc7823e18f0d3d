"""
Command-line interface for the preprocessing, graph, training and sweep stages.
"""
