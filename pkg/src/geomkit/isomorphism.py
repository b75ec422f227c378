"""Colored-graph isomorphism by iterated refinement with backtracking.

Used for geometries (vertex colors = types, unlabeled edges) and chamber
systems (edge labels = type sets).  Initial colors plus per-type degrees
refine until stable; stable non-discrete partitions are split by
individualization with backtracking.  A refinement certificate gives a
sound fast path for inequality.
"""

from __future__ import annotations

from collections import Counter


class ColoredGraph:
    """Finite graph with hashable vertex colors and hashable edge labels."""

    __slots__ = ("vertices", "adj", "colors", "_order")

    def __init__(self, vertices, adj, colors):
        self.vertices = list(vertices)
        self.adj = adj  # v -> dict(w -> edge label)
        self.colors = colors  # v -> hashable initial color
        self._order = {v: i for i, v in enumerate(self.vertices)}

    @classmethod
    def from_geometry(cls, G):
        adj = {v: {w: 0 for w in G.neighbors(v)} for v in G.objects()}
        colors = {v: ("t", G.type_of(v)) for v in G.objects()}
        return cls(list(G.objects()), adj, colors)

    @classmethod
    def from_chamber_system(cls, C):
        adj = {c: {} for c in C.chambers}
        for (a, b), labels in C.edges.items():
            lab = tuple(sorted(labels))
            adj[a][b] = lab
            adj[b][a] = lab
        colors = {c: ("c",) for c in C.chambers}
        return cls(list(C.chambers), adj, colors)


def _refine(graphs, colorings):
    """Simultaneously refine colorings of several graphs to joint stability.

    Color names are canonical (assigned by sorted signature), so histograms
    are directly comparable across the graphs.
    """
    # normalize initial colors to canonical ints
    init = sorted({c for col in colorings for c in col.values()}, key=repr)
    index = {c: i for i, c in enumerate(init)}
    cols = [{v: index[col[v]] for v in col} for col in colorings]
    while True:
        sigs = []
        for g, col in zip(graphs, cols):
            sig = {}
            for v in g.vertices:
                nbr = Counter()
                for w, lab in g.adj[v].items():
                    nbr[(lab, col[w])] += 1
                sig[v] = (col[v], tuple(sorted(nbr.items())))
            sigs.append(sig)
        names = sorted({s for sig in sigs for s in sig.values()})
        rename = {s: i for i, s in enumerate(names)}
        new_cols = [{v: rename[sig[v]] for v in sig} for sig in sigs]
        if new_cols == cols:
            return cols
        cols = new_cols


def _histogram(col):
    return tuple(sorted(Counter(col.values()).items()))


def certificate(graph: ColoredGraph):
    """Refinement-stable signature; equal for isomorphic graphs (sound)."""
    (col,) = _refine([graph], [graph.colors])
    return _histogram(col)


def find_isomorphism(g1: ColoredGraph, g2: ColoredGraph, pinned=None):
    """Color- and label-preserving bijection g1 -> g2, or None.

    `pinned` maps g1 vertices to g2 vertices that must correspond.
    """
    if len(g1.vertices) != len(g2.vertices):
        return None
    c1 = dict(g1.colors)
    c2 = dict(g2.colors)
    if pinned:
        for i, (v, w) in enumerate(sorted(pinned.items(), key=lambda p: g1._order[p[0]])):
            c1[v] = ("pin", i)
            c2[w] = ("pin", i)
    mapping = _search(g1, g2, c1, c2)
    if mapping is None:
        return None
    return mapping


def _search(g1, g2, c1, c2):
    col1, col2 = _refine([g1, g2], [c1, c2])
    if _histogram(col1) != _histogram(col2):
        return None
    cells1 = {}
    for v, c in col1.items():
        cells1.setdefault(c, []).append(v)
    cells2 = {}
    for v, c in col2.items():
        cells2.setdefault(c, []).append(v)
    target = None
    for c, vs in sorted(cells1.items(), key=lambda kv: (len(kv[1]), kv[0])):
        if len(vs) > 1:
            target = c
            break
    if target is None:
        mapping = {}
        for c, vs in cells1.items():
            mapping[vs[0]] = cells2[c][0]
        return mapping if _verify(g1, g2, mapping) else None
    v = min(cells1[target], key=lambda x: g1._order[x])
    for w in sorted(cells2[target], key=lambda x: g2._order[x]):
        n1 = dict(col1)
        n2 = dict(col2)
        n1[v] = ("i", -1)
        n2[w] = ("i", -1)
        found = _search(g1, g2, n1, n2)
        if found is not None:
            return found
    return None


def _verify(g1, g2, mapping):
    if len(set(mapping.values())) != len(mapping):
        return False
    for v in g1.vertices:
        w = mapping[v]
        if g1.colors[v] != g2.colors[w]:
            return False
        img = {mapping[u]: lab for u, lab in g1.adj[v].items()}
        if img != g2.adj[w]:
            return False
    return True


def is_isomorphism(g1: ColoredGraph, g2: ColoredGraph, mapping) -> bool:
    """Check an explicit map (useful for natural identity verifications)."""
    if set(mapping.keys()) != set(g1.vertices):
        return False
    if set(mapping.values()) != set(g2.vertices):
        return False
    return _verify(g1, g2, mapping)
