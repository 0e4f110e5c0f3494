"""Desk-scale Gaussian boson sampling simulator and graph-problem benchmark
toolkit: device simulation, graph encoding, exact threshold-detector sampling,
Max-Haf / dense-subgraph solvers, and benchmark analytics."""

__version__ = "0.1.0"
