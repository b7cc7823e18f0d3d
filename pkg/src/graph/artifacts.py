"""
Graph artifact persistence: COO adjacency plus a JSON sidecar.
"""
import json
import logging
from pathlib import Path

from src.constants import NODE_ORDER
from src.graph.adjacency import HeteroGraph
from src.numerics.matrices import load_sparse, save_sparse

logger = logging.getLogger(__name__)

ADJACENCY_FILE = "adjacency.coo"
SIDECAR_FILE = "graph.json"


def save_graph(directory: Path, graph: HeteroGraph) -> Path:
    """
    Write `adjacency.coo` and `graph.json` into a directory.

    The sidecar is written with sorted keys, so equal graphs produce
    byte-identical files.

    Returns:
        The directory the artifact was written to
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    save_sparse(directory / ADJACENCY_FILE, graph.adjacency)
    sidecar = {
        "n_docs": graph.n_docs,
        "n_words": graph.n_words,
        "normalized": graph.normalized,
        "window_size": graph.window_size,
        "ppmi": graph.include_ppmi,
        "node_order": NODE_ORDER,
    }
    (directory / SIDECAR_FILE).write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    logger.info(f"💾 Graph saved to {directory}")
    return directory


def load_graph(directory: Path) -> HeteroGraph:
    """
    Read a graph written by save_graph.

    Raises:
        FileNotFoundError: Naming whichever of the two files is missing
        ValueError: If the sidecar disagrees with the adjacency shape
    """
    directory = Path(directory)
    for name in (SIDECAR_FILE, ADJACENCY_FILE):
        if not (directory / name).exists():
            raise FileNotFoundError(f"Graph artifact missing: {directory / name}")

    try:
        sidecar = json.loads((directory / SIDECAR_FILE).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{directory / SIDECAR_FILE}: invalid JSON ({e})") from e

    if sidecar.get("node_order") != NODE_ORDER:
        raise ValueError(f"Unsupported node order: {sidecar.get('node_order')}")

    adjacency = load_sparse(directory / ADJACENCY_FILE)
    n_nodes = sidecar["n_docs"] + sidecar["n_words"]
    if adjacency.shape != (n_nodes, n_nodes):
        raise ValueError(
            f"Adjacency shape {adjacency.shape} does not match sidecar node count {n_nodes}"
        )

    return HeteroGraph(
        n_docs=sidecar["n_docs"],
        n_words=sidecar["n_words"],
        adjacency=adjacency,
        normalized=sidecar["normalized"],
        window_size=sidecar.get("window_size"),
        include_ppmi=sidecar.get("ppmi", True),
    )
