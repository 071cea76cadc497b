"""Orient the undirected edges of a skeleton with pairwise scores.

Edges are scored independently, ranked by confidence and inserted one at a
time in their preferred direction.  An insertion that would close a cycle is
tried in the reverse direction instead, and dropped if that fails too.
"""

import csv
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .scoring import DEFAULT_M, aggregate_score


@dataclass
class Skeleton:
    nodes: list
    undirected: list = field(default_factory=list)
    oriented: list = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        names = set(self.nodes)
        if len(names) != len(self.nodes):
            raise ValueError("duplicate node names")
        for a, b in list(self.undirected) + list(self.oriented):
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in names or b not in names:
                raise ValueError(f"edge {a!r}-{b!r} refers to an unknown node")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"duplicate edge between {a!r} and {b!r}")
            seen.add(key)
        idx = {n: i for i, n in enumerate(self.nodes)}
        if not is_acyclic([(idx[a], idx[b]) for a, b in self.oriented], len(self.nodes)):
            raise ValueError("pre-oriented edges contain a cycle")


def parse_skeleton(text):
    """Read ``A -- B`` (undirected) and ``A -> B`` (oriented) lines."""
    nodes, undirected, oriented = [], [], []

    def add(n):
        if n not in nodes:
            nodes.append(n)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for sep, bucket in (("--", undirected), ("->", oriented)):
            if sep in line:
                a, b = (s.strip() for s in line.split(sep, 1))
                if not a or not b:
                    raise ValueError(f"line {lineno}: malformed edge {raw!r}")
                add(a)
                add(b)
                bucket.append((a, b))
                break
        else:
            add(line)
    return Skeleton(nodes, undirected, oriented)


def load_data_csv(path):
    """CSV with a header row of column names; returns a name -> column dict."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return {name: data[:, j] for j, name in enumerate(header)}


def is_acyclic(edges, node_count):
    """Kahn's algorithm on integer-labelled nodes ``0 .. node_count-1``."""
    indeg = [0] * node_count
    children = [[] for _ in range(node_count)]
    for a, b in edges:
        children[a].append(b)
        indeg[b] += 1
    queue = deque(i for i in range(node_count) if indeg[i] == 0)
    visited = 0
    while queue:
        i = queue.popleft()
        visited += 1
        for j in children[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    return visited == node_count


@dataclass(frozen=True)
class OrientedEdge:
    source: str
    target: str
    score: float | None
    confidence: float | None
    status: str  # "preferred", "reversed" or "given"


@dataclass
class OrientedGraph:
    nodes: list
    edges: list
    dropped: list = field(default_factory=list)
    v_structures_created: list = field(default_factory=list)
    v_structures_destroyed: list = field(default_factory=list)

    def edge_list(self):
        return [(e.source, e.target) for e in self.edges]


def _reaches(children, start, goal):
    stack, seen = [start], {start}
    while stack:
        n = stack.pop()
        if n == goal:
            return True
        for c in children[n]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return False


def v_structures(nodes, directed, adjacent):
    """Unshielded colliders ``(a, c, b)`` with ``a < b`` not adjacent."""
    parents = {n: sorted(a for a, b in directed if b == n) for n in nodes}
    found = []
    for c in nodes:
        for a, b in combinations(parents[c], 2):
            if frozenset((a, b)) not in adjacent:
                found.append((a, c, b))
    return sorted(found)


def orient_scored(skeleton, scores):
    """Insertion phase given a score per undirected edge.

    ``scores`` maps each ``(a, b)`` tuple from ``skeleton.undirected`` to
    ``S_{a->b}``.  Ties in confidence are broken by the edge name.
    """
    children = {n: set() for n in skeleton.nodes}
    edges = []
    for a, b in skeleton.oriented:
        children[a].add(b)
        edges.append(OrientedEdge(a, b, None, None, "given"))

    ranked = []
    for a, b in skeleton.undirected:
        s = float(scores[(a, b)])
        ranked.append((-max(s, 1.0 - s), f"{a} -- {b}", a, b, s))
    ranked.sort()

    dropped = []
    for neg_conf, _, a, b, s in ranked:
        src, dst = (a, b) if s >= 0.5 else (b, a)
        if not _reaches(children, dst, src):
            children[src].add(dst)
            edges.append(OrientedEdge(src, dst, s, -neg_conf, "preferred"))
        elif not _reaches(children, src, dst):
            children[dst].add(src)
            edges.append(OrientedEdge(dst, src, s, -neg_conf, "reversed"))
        else:
            dropped.append((a, b, s))

    adjacent = {frozenset(e) for e in list(skeleton.undirected) + list(skeleton.oriented)}
    before = v_structures(skeleton.nodes, skeleton.oriented, adjacent)
    after = v_structures(skeleton.nodes, [(e.source, e.target) for e in edges], adjacent)
    return OrientedGraph(list(skeleton.nodes), edges, dropped,
                         [v for v in after if v not in before],
                         [v for v in before if v not in after])


def score_edges(skeleton, data, m=DEFAULT_M, seed=0):
    missing = [n for e in skeleton.undirected for n in e if n not in data]
    if missing:
        raise KeyError(f"no data column for node(s): {', '.join(sorted(set(missing)))}")
    return {(a, b): aggregate_score(data[a], data[b], m=m, seed=seed) for a, b in skeleton.undirected}


def orient(skeleton, data, m=DEFAULT_M, seed=0):
    """Score every undirected edge of ``skeleton`` on ``data`` (name -> column)
    and orient it, keeping the graph acyclic."""
    return orient_scored(skeleton, score_edges(skeleton, data, m=m, seed=seed))
