"""
Class prediction for trained GCN or logistic-regression parameters.
"""
from typing import Optional, Union

import numpy as np

from src.classifiers.gcn import GcnParams, gcn_probabilities
from src.classifiers.logreg import FeatureMatrix, LogRegParams, logreg_probabilities
from src.graph.adjacency import HeteroGraph
from src.graph.node_features import NodeFeatures


def argmax_classes(probabilities: np.ndarray) -> np.ndarray:
    """Most probable class per row; ties go to the lowest class index."""
    return np.argmax(probabilities, axis=1)


def predict(
    params: Union[GcnParams, LogRegParams],
    features: Union[NodeFeatures, FeatureMatrix],
    graph: Optional[HeteroGraph] = None,
) -> np.ndarray:
    """
    Predict classes.

    Args:
        params: Trained parameters
        features: NodeFeatures for a GCN, a sample x feature matrix otherwise
        graph: Required for GCN parameters

    Returns:
        Class index per node (GCN) or per row (logistic regression)
    """
    if isinstance(params, GcnParams):
        if graph is None:
            raise ValueError("GCN prediction needs the graph")
        return argmax_classes(gcn_probabilities(graph, features, params))
    return argmax_classes(logreg_probabilities(params, features))
