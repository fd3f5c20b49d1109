"""GNN expressivity lab: WL hierarchy, folklore GNNs and a graph-alignment benchmark."""

__version__ = "0.1.0"
