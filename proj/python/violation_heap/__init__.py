"""Violation heap priority queue (C++ core)."""

from ._core import HeapError, Heap, Node, Pool, dijkstra, fuzz, gen_graph, heapsort

__all__ = ["HeapError", "Heap", "Node", "Pool", "dijkstra", "fuzz", "gen_graph", "heapsort"]
