"""Independent reference implementations used to derive expected values.

Everything here works on plain edge tuples and python containers, never on
the library's packed structures, so these stay valid oracles for them.
"""

from __future__ import annotations

import heapq
from collections import Counter, deque

UNREACHED = 1 << 62


def pull_vectors(edges, width):
    """Brute-force destination grouping: [(dst, [srcs...]), ...] in canonical order."""
    by_dst: dict[int, list[int]] = {}
    for s, d, *_ in sorted(edges, key=lambda e: (e[1], e[0])):
        by_dst.setdefault(d, []).append(s)
    vectors = []
    for d in sorted(by_dst):
        srcs = by_dst[d]
        for i in range(0, len(srcs), width):
            vectors.append((d, srcs[i : i + width]))
    return vectors


def edge_index(vectors, vertex_count):
    """Brute-force scan of all lanes: vertex -> ascending deduped vector positions."""
    index = {v: [] for v in range(vertex_count)}
    for pos, (_, srcs) in enumerate(vectors):
        for s in srcs:
            if not index[s] or index[s][-1] != pos:
                index[s].append(pos)
    return index


def csr(edges, vertex_count):
    succ = [[] for _ in range(vertex_count)]
    for s, d, *_ in edges:
        succ[s].append(d)
    offsets, neighbors = [0], []
    for v in range(vertex_count):
        neighbors.extend(sorted(succ[v]))
        offsets.append(len(neighbors))
    return offsets, neighbors


def out_degrees(edges, vertex_count):
    deg = [0] * vertex_count
    for s, *_ in edges:
        deg[s] += 1
    return deg


def bfs_depths(edges, vertex_count, root):
    """Textbook queue BFS."""
    succ = [[] for _ in range(vertex_count)]
    for s, d, *_ in edges:
        succ[s].append(d)
    depth = [UNREACHED] * vertex_count
    depth[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if depth[v] == UNREACHED:
                depth[v] = depth[u] + 1
                queue.append(v)
    return depth


def dijkstra(edges, vertex_count, root):
    """Heap Dijkstra over positive integer weights."""
    succ = [[] for _ in range(vertex_count)]
    for s, d, w in edges:
        succ[s].append((d, w))
    dist = [UNREACHED] * vertex_count
    dist[root] = 0
    heap = [(0, root)]
    while heap:
        du, u = heapq.heappop(heap)
        if du != dist[u]:
            continue
        for v, w in succ[u]:
            nd = du + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def min_label_components(edges, vertex_count):
    """Union-find components over the symmetrized edge set; label = min member id."""
    parent = list(range(vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, d, *_ in edges:
        rs, rd = find(s), find(d)
        if rs != rd:
            parent[max(rs, rd)] = min(rs, rd)
    return [find(v) for v in range(vertex_count)]


def restricted_step(edges, vertex_count, prev, frontier, program):
    """One synchronous iteration restricted to the frontier's out-edges.

    Push-style brute force over the raw edge list with the program's own
    callables: the semantic reference both engines must match.
    """
    members = set(frontier)
    agg: dict[int, object] = {}
    for edge in edges:
        s, d = edge[0], edge[1]
        w = edge[2] if len(edge) > 2 else None
        if s not in members:
            continue
        msg = program.gather(prev[s], w)
        agg[d] = msg if d not in agg else program.combine(agg[d], msg)
    nxt = list(prev)
    activated = []
    for d in sorted(agg):
        if not program.should_process(prev[d]):
            continue
        new, activate = program.apply(prev[d], agg[d])
        nxt[d] = new
        if activate:
            activated.append(d)
    return nxt, activated


def converge_restricted(edges, vertex_count, program, max_iterations=100_000):
    """Drive restricted_step with the engine's loop discipline."""
    deg = out_degrees(edges, vertex_count)
    values = [program.initial_value(v) for v in range(vertex_count)]
    frontier = sorted(set(program.initial_frontier(vertex_count)))
    frontiers = []
    iterations = 0
    while iterations < max_iterations:
        values, frontier = restricted_step(edges, vertex_count, values, frontier, program)
        iterations += 1
        frontiers.append(list(frontier))
        if sum(deg[v] for v in frontier) == 0:
            break
    return values, frontiers


def active_edge_multiset(edges, frontier):
    """Multiset of out-edges of the frontier members."""
    members = set(frontier)
    return Counter((s, d, (e[2] if len(e) > 2 else None)) for e in edges for s, d in [(e[0], e[1])] if s in members)


def covered_edge_multiset(topology, covered_positions):
    """Multiset of edges whose lane lies in a covered vector."""
    counter: Counter = Counter()
    covered = set(int(p) for p in covered_positions)
    for pos, src, dst, w in topology.lanes():
        if pos in covered:
            counter[(src, dst, w)] += 1
    return counter
