"""Finite typed incidence geometries: flags, residues, truncations, direct
sums, residual connectedness, isomorphism, and the JSON interchange format.

A geometry is a set of objects with a type function into a finite typeset
and a symmetric incidence relation between objects of distinct types.
Reflexive incidence is implicit and never stored.  Instances are immutable
after construction; all queries are read-only.
"""

from __future__ import annotations

import json
from collections import deque

from .gflinear import GF, SubspaceBasis, rref
from .isomorphism import ColoredGraph, certificate, find_isomorphism


class InputError(ValueError):
    pass


class StructureError(ValueError):
    """Violation of a geometry invariant (e.g. same-type incidence)."""


def idkey(x):
    """Deterministic total order over the id universe (ints, tuples, frozensets)."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(idkey(e) for e in x))
    if isinstance(x, frozenset):
        return (3, tuple(sorted(idkey(e) for e in x)))
    raise InputError(f"unsupported object id {x!r}")


class Geometry:
    __slots__ = ("typeset", "_types", "_adj", "_by_type", "_payload", "_nbr_cache")

    def __init__(self, typeset, types, adj, payload=None, _trusted=False):
        if not _trusted:
            raise InputError("use build_geometry() to construct a Geometry")
        self.typeset = tuple(sorted(typeset))
        self._types = types            # id -> type
        self._adj = adj                # id -> tuple of incident ids (sorted by idkey)
        self._payload = payload or {}  # id -> SubspaceBasis (optional)
        by_type: dict[int, list] = {t: [] for t in self.typeset}
        for x, t in types.items():
            by_type[t].append(x)
        for t in by_type:
            by_type[t].sort(key=idkey)
        self._by_type = {t: tuple(v) for t, v in by_type.items()}
        self._nbr_cache: dict = {}

    # -- basic queries ------------------------------------------------------

    def objects(self):
        for t in self.typeset:
            yield from self._by_type[t]

    def __len__(self):
        return len(self._types)

    @property
    def rank(self) -> int:
        return len(self.typeset)

    def type_of(self, x):
        return self._types[x]

    def has_object(self, x) -> bool:
        return x in self._types

    def objects_of_type(self, t):
        return self._by_type.get(t, ())

    def neighbors(self, x):
        return self._adj[x]

    def neighbor_set(self, x) -> frozenset:
        s = self._nbr_cache.get(x)
        if s is None:
            s = frozenset(self._adj[x])
            self._nbr_cache[x] = s
        return s

    def incident(self, a, b) -> bool:
        return b in self.neighbor_set(a)

    def payload(self, x):
        return self._payload.get(x)

    def is_flag(self, ids) -> bool:
        ids = list(ids)
        seen_types = set()
        for x in ids:
            if x not in self._types:
                return False
            t = self._types[x]
            if t in seen_types:
                return False
            seen_types.add(t)
        for i, a in enumerate(ids):
            sa = self.neighbor_set(a)
            for b in ids[i + 1:]:
                if b not in sa:
                    return False
        return True

    # -- derived geometries --------------------------------------------------

    def residue(self, flag):
        flag = list(flag)
        if not self.is_flag(flag):
            raise InputError(f"not a flag: {flag!r}")
        if not flag:
            return self
        common = set(self.neighbor_set(flag[0]))
        for x in flag[1:]:
            common &= self.neighbor_set(x)
        common -= set(flag)
        cotype = tuple(t for t in self.typeset if t not in {self._types[x] for x in flag})
        types = {x: self._types[x] for x in common}
        adj = {x: tuple(w for w in self._adj[x] if w in common) for x in common}
        payload = {x: self._payload[x] for x in common if x in self._payload}
        return Geometry(cotype, types, adj, payload, _trusted=True)

    def truncate(self, keep_types):
        keep = tuple(sorted(keep_types))
        if not set(keep) <= set(self.typeset):
            raise InputError(f"truncation types {keep} not within {self.typeset}")
        keepset = set(keep)
        kept = {x for x, t in self._types.items() if t in keepset}
        types = {x: self._types[x] for x in kept}
        adj = {x: tuple(w for w in self._adj[x] if w in kept) for x in kept}
        payload = {x: self._payload[x] for x in kept if x in self._payload}
        return Geometry(keep, types, adj, payload, _trusted=True)

    # -- flags ----------------------------------------------------------------

    def flags_of_type(self, wanted_types):
        """Every flag of exactly the given type, each once.

        Deterministic order: lexicographic by (type, object id).
        """
        wanted = sorted(set(wanted_types))
        if not set(wanted) <= set(self.typeset):
            raise InputError(f"flag types {wanted} not within {self.typeset}")

        def rec(i, chosen, candidates):
            if i == len(wanted):
                yield tuple(chosen)
                return
            t = wanted[i]
            pool = self.objects_of_type(t) if candidates is None else [
                x for x in candidates if self._types[x] == t
            ]
            for x in sorted(pool, key=idkey):
                nxt = self.neighbor_set(x) if candidates is None else candidates & self.neighbor_set(x)
                chosen.append(x)
                yield from rec(i + 1, chosen, nxt)
                chosen.pop()

        yield from rec(0, [], None)

    def chambers(self):
        return self.flags_of_type(self.typeset)

    def all_flags(self, include_empty=True, max_rank=None):
        """All flags, grouped implicitly by increasing (type,id) order."""
        if include_empty:
            yield ()
        order = [(t, x) for t in self.typeset for x in self._by_type[t]]

        def rec(start, chosen, candidates, used_types):
            for i in range(start, len(order)):
                t, x = order[i]
                if t in used_types:
                    continue
                if candidates is not None and x not in candidates:
                    continue
                chosen.append(x)
                yield tuple(chosen)
                if max_rank is None or len(chosen) < max_rank:
                    nxt = self.neighbor_set(x) if candidates is None else candidates & self.neighbor_set(x)
                    used_types.add(t)
                    yield from rec(i + 1, chosen, nxt, used_types)
                    used_types.discard(t)
                chosen.pop()

        yield from rec(0, [], None, set())

    # -- global checks ---------------------------------------------------------

    def incidence_graph_connected(self) -> bool:
        objs = list(self.objects())
        if len(objs) <= 1:
            return True
        seen = {objs[0]}
        queue = deque([objs[0]])
        while queue:
            x = queue.popleft()
            for w in self._adj[x]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(objs)


def build_geometry(objects, incidences, typeset=None, payload=None) -> Geometry:
    """Validated immutable geometry.

    objects: mapping id -> type (or iterable of (id, type) pairs).
    incidences: iterable of id pairs between objects of distinct types.
    """
    types = dict(objects)
    if typeset is None:
        typeset = sorted(set(types.values()))
    else:
        typeset = sorted(typeset)
        missing = set(types.values()) - set(typeset)
        if missing:
            raise InputError(f"objects with types {missing} outside typeset {typeset}")
    adj_sets: dict = {x: set() for x in types}
    for a, b in incidences:
        if a not in types or b not in types:
            raise InputError(f"incidence ({a!r},{b!r}) references unknown object")
        if a == b:
            continue
        if types[a] == types[b]:
            raise StructureError(
                f"same-type incidence between {a!r} and {b!r} (type {types[a]})"
            )
        adj_sets[a].add(b)
        adj_sets[b].add(a)
    adj = {x: tuple(sorted(s, key=idkey)) for x, s in adj_sets.items()}
    return Geometry(typeset, types, adj, payload, _trusted=True)


def direct_sum(parts) -> Geometry:
    """Direct sum: disjoint typesets, all cross-part pairs incident."""
    parts = list(parts)
    typeset: list[int] = []
    for p in parts:
        if set(p.typeset) & set(typeset):
            raise InputError("direct_sum requires pairwise disjoint typesets")
        typeset.extend(p.typeset)
    all_ids: set = set()
    for p in parts:
        ids = set(p.objects())
        if ids & all_ids:
            raise InputError("direct_sum requires disjoint object ids")
        all_ids |= ids
    types: dict = {}
    payload: dict = {}
    for p in parts:
        for x in p.objects():
            types[x] = p.type_of(x)
            pl = p.payload(x)
            if pl is not None:
                payload[x] = pl
    adj: dict = {}
    for i, p in enumerate(parts):
        others = sorted(
            (x for j, q in enumerate(parts) if j != i for x in q.objects()), key=idkey
        )
        for x in p.objects():
            adj[x] = tuple(sorted(list(p.neighbors(x)) + others, key=idkey))
    return Geometry(typeset, types, adj, payload, _trusted=True)


def is_residually_connected(G: Geometry):
    """(verdict, witness_flag).  Checks every flag including the empty one:
    corank >= 1 residues nonempty, corank >= 2 residues connected.

    Works on raw neighbor sets (no residue Geometry is materialized).
    """

    def residue_objects(flag):
        if not flag:
            return set(G.objects())
        it = iter(flag)
        common = set(G.neighbor_set(next(it)))
        for x in it:
            common &= G.neighbor_set(x)
        return common - set(flag)

    def connected(objs):
        if len(objs) <= 1:
            return True
        it = iter(objs)
        start = next(it)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for w in G.neighbor_set(x) & objs:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(objs)

    for flag in G.all_flags(include_empty=True):
        corank = G.rank - len(flag)
        if corank < 1:
            continue
        objs = residue_objects(flag)
        if not objs:
            return False, flag
        if corank >= 2 and not connected(objs):
            return False, flag
    return True, None


def are_isomorphic(G1: Geometry, G2: Geometry):
    """Type-preserving incidence-preserving bijection, or None.

    Types must match literally (no type relabeling is attempted).
    """
    if G1.typeset != G2.typeset:
        return None
    if len(G1) != len(G2):
        return None
    for t in G1.typeset:
        if len(G1.objects_of_type(t)) != len(G2.objects_of_type(t)):
            return None
    return find_isomorphism(ColoredGraph.from_geometry(G1), ColoredGraph.from_geometry(G2))


def geometry_certificate(G: Geometry):
    """Canonical hash-like invariant: equal for isomorphic geometries."""
    return certificate(ColoredGraph.from_geometry(G))


# -- interchange format -------------------------------------------------------


def to_interchange(G: Geometry) -> dict:
    objs = []
    for x in sorted(G.objects(), key=idkey):
        if not isinstance(x, int):
            raise InputError("interchange format requires integer ids")
        entry = {"id": x, "type": G.type_of(x)}
        pl = G.payload(x)
        if pl is not None:
            entry["payload"] = {
                "n": pl.n,
                "q": pl.field.q,
                "rows": pl.to_hex().split("\n") if pl.dim else [],
            }
        objs.append(entry)
    pairs = sorted(
        {(min(a, b), max(a, b)) for a in G.objects() for b in G.neighbors(a)}
    )
    return {
        "version": 1,
        "typeset": list(G.typeset),
        "objects": objs,
        "incidence": [list(p) for p in pairs],
    }


def from_interchange(doc: dict) -> Geometry:
    if doc.get("version") != 1:
        raise InputError(f"unsupported interchange version {doc.get('version')!r}")
    types = {o["id"]: o["type"] for o in doc["objects"]}
    payload = {}
    for o in doc["objects"]:
        if "payload" in o:
            p = o["payload"]
            f = GF(p["q"])
            if f.q == 2:
                payload[o["id"]] = rref(f, p["n"], [int(r, 16) for r in p["rows"]])
            else:
                payload[o["id"]] = rref(
                    f, p["n"], [[int(ch) for ch in r] for r in p["rows"]]
                )
    return build_geometry(types, [tuple(p) for p in doc["incidence"]],
                          typeset=doc["typeset"], payload=payload)


def dump_interchange(G: Geometry) -> str:
    return json.dumps(to_interchange(G), sort_keys=True, separators=(",", ":"))
