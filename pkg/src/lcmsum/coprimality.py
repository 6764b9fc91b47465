"""Coprimality graphs and their local-factor polynomials.

The graph for k inputs lives on 2**k - 1 vertices labeled by the nonzero
k-bit strings.  Vertex j stands for the part of an input tuple shared by
exactly the inputs whose bit is set in j, so constraint set i collects every
vertex whose i-th bit is 1, and two vertices must carry coprime values
whenever an edge joins them.  Everything here is exact integer
combinatorics: independent-set counts, the inclusion-exclusion polynomial
over edge subsets, and the valuation-interval decomposition of an input
tuple into its 2**k - 1 coprime parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import ResourceLimitError
from .exactmath import stirling2

#: subset enumeration of independent sets is refused above this many vertices
MAX_ISM_VERTICES = 24

#: direct 2**|E| edge-subset expansion is refused above this many edges
MAX_EDGE_SUBSET_EDGES = 22

#: graphs on 2**k - 1 vertices are built for 2 <= k <= MAX_GRAPH_K
MAX_GRAPH_K = 5


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 1..v with unordered edges."""

    v: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for i, j in self.edges:
            if not (1 <= i < j <= self.v):
                raise ValueError(f"bad edge ({i},{j}) for v={self.v}")

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Bitmask neighbors per vertex; bit j of adjacency[i] marks edge (i,j)."""
        adj = [0] * (self.v + 1)
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return tuple(adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class CoprimalityGraph(Graph):
    """Graph on the nonzero k-bit labels, plus its hyperbolic constraint family.

    constraints[i] is the set of labels whose (i+1)-th bit from the right is
    set; the product of the parts over constraints[i] reconstructs input i.
    """

    k: int = 0
    constraints: tuple[frozenset[int], ...] = field(default=())

    def __post_init__(self):
        super().__post_init__()
        if self.v != 2**self.k - 1:
            raise ValueError("vertex count must be 2**k - 1")

    def isolated_top_removed(self) -> Graph:
        """The same edge set on vertices 1..v-1 (the all-ones label is isolated)."""
        if any(self.v in e for e in self.edges):
            raise ValueError("top label is not isolated")
        return Graph(self.v - 1, self.edges)


def constraint_family(k: int) -> tuple[frozenset[int], ...]:
    return tuple(
        frozenset(j for j in range(1, 2**k) if j >> i & 1) for i in range(k)
    )


def build_coprimality_graph(k: int) -> CoprimalityGraph:
    """Inductive construction of the coprimality graph for k inputs.

    Base: k=2 on labels {1,2,3} with the single edge (1,2).  Step k -> k+1:
    every existing edge (j,l) is replicated across the four combinations of
    {j, j + 2**k} x {l, l + 2**k}, and the fresh coprimality requirements
    between the old block and the new top-bit block contribute the complete
    bipartite families (A_i \\ top) x (top \\ A_i) for each old constraint i.
    """
    if not (2 <= k <= MAX_GRAPH_K):
        raise ValueError(f"k must be between 2 and {MAX_GRAPH_K}")
    edges = {(1, 2)}
    for kk in range(2, k):
        top = 1 << kk
        grown = set()
        for j, l in edges:
            for a in (j, j + top):
                for b in (l, l + top):
                    grown.add((min(a, b), max(a, b)))
        family = constraint_family(kk + 1)
        top_set = family[kk]
        for i in range(kk):
            left = [j for j in family[i] if j not in top_set]
            right = [j for j in top_set if j not in family[i]]
            for a in left:
                for b in right:
                    grown.add((min(a, b), max(a, b)))
        edges = grown
    return CoprimalityGraph(
        v=2**k - 1, edges=frozenset(edges), k=k, constraints=constraint_family(k)
    )


def edge_count_formula(k: int) -> int:
    """Closed form 2**(k-1) * (2**k + 1) - 3**k for the edge count."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return 2 ** (k - 1) * (2**k + 1) - 3**k


# ---------------------------------------------------------------------------
# Independent sets and local-factor polynomials
# ---------------------------------------------------------------------------

def independent_set_counts(g: Graph) -> tuple[int, ...]:
    """(i_0, ..., i_v) where i_m counts independent vertex sets of size m.

    Exhaustive over all 2**v subsets with bitmask adjacency pruning, so the
    counts are exact by construction.
    """
    if g.v > MAX_ISM_VERTICES:
        raise ResourceLimitError(
            f"{g.v} vertices exceed the 2**{MAX_ISM_VERTICES} subset budget")
    adj = g.adjacency
    counts = [0] * (g.v + 1)
    counts[0] = 1
    n = 1 << (g.v + 1)
    # ok[mask] == 1 iff mask (over bits 1..v; bit 0 unused) is independent
    ok = bytearray(n)
    ok[0] = 1
    for mask in range(2, n, 2):
        low = mask & -mask
        rest = mask ^ low
        if ok[rest] and not (adj[low.bit_length() - 1] & rest):
            ok[mask] = 1
            counts[mask.bit_count()] += 1
    return tuple(counts)


def stirling_ism_counts(k: int) -> tuple[int, ...]:
    """Independent-set counts of the k-input graph from the Stirling closed form.

    i_m = S(k,m) m! + S(k,m+1) (m+1)!, vanishing for m > k; an independent
    route around the subset enumeration.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    v = 2**k - 1
    out = []
    for m in range(v + 1):
        out.append(
            stirling2(k, m) * math.factorial(m)
            + stirling2(k, m + 1) * math.factorial(m + 1)
        )
    return tuple(out)


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _one_minus_x_power(n: int) -> list[int]:
    return [(-1) ** i * math.comb(n, i) for i in range(n + 1)]


def local_factor_poly(g: Graph) -> tuple[int, ...]:
    """Coefficients (c_0..c_v) of the graph's local Euler-factor polynomial.

    Production route: expand sum_m i_m (1-x)^(v-m) x^m from the
    independent-set counts.  The value at 1/p is the density correction the
    graph imposes at the prime p; c_0 = 1, c_1 = 0, c_2 = -|E| always hold
    and are asserted.
    """
    ism = independent_set_counts(g)
    v = g.v
    acc = [0] * (v + 1)
    for m, im in enumerate(ism):
        if im == 0:
            continue
        term = _one_minus_x_power(v - m)
        for i, t in enumerate(term):
            acc[m + i] += im * t
    _check_local_poly(acc, g.edge_count)
    return tuple(acc)


def local_factor_poly_by_edge_subsets(g: Graph) -> tuple[int, ...]:
    """Same polynomial by signed inclusion-exclusion over edge subsets.

    sum over F subseteq E of (-1)^|F| x^(number of vertices F touches);
    exponential in |E|, kept as an independent verification route.
    """
    return _edge_subset_poly(g, signed=True)


def unsigned_edge_subset_poly(g: Graph) -> tuple[int, ...]:
    """Unsigned variant: coefficient a counts edge subsets touching a vertices."""
    return _edge_subset_poly(g, signed=False)


def _edge_subset_poly(g: Graph, signed: bool) -> tuple[int, ...]:
    e = g.edge_count
    if e > MAX_EDGE_SUBSET_EDGES:
        raise ResourceLimitError(
            f"{e} edges exceed the 2**{MAX_EDGE_SUBSET_EDGES} subset budget; "
            "use local_factor_poly instead")
    masks = [(1 << i) | (1 << j) for i, j in g.sorted_edges()]
    coeffs = [0] * (g.v + 1)
    coeffs[0] = 1
    cover = [0] * (1 << e)
    for s in range(1, 1 << e):
        low = s & -s
        cover[s] = cover[s ^ low] | masks[low.bit_length() - 1]
        sign = -1 if (signed and s.bit_count() & 1) else 1
        coeffs[cover[s].bit_count()] += sign
    if signed:
        _check_local_poly(coeffs, e)
    return tuple(coeffs)


def _check_local_poly(coeffs: Sequence[int], edge_count: int) -> None:
    assert coeffs[0] == 1
    if len(coeffs) > 1:
        assert coeffs[1] == 0
    if len(coeffs) > 2:
        assert coeffs[2] == -edge_count
    elif edge_count:
        raise AssertionError("nonzero edge count needs degree >= 2")


# ---------------------------------------------------------------------------
# Tuple decomposition
# ---------------------------------------------------------------------------

def decompose_tuple(k: int, n: Sequence[int]) -> tuple[int, ...]:
    """Split (n_1..n_k) into the 2**k - 1 coprime parts indexed by bit labels.

    For label j the exponent of p in part j is the length of the interval
    intersection of [0, v_p(n_i)] over set bits with the complements over
    clear bits: max(0, min over set bits - max over clear bits).  The parts
    reconstruct each n_i as the product over the matching constraint set,
    multiply to lcm(n), and share no prime across any edge of the graph.
    """
    if len(n) != k:
        raise ValueError(f"expected a {k}-tuple")
    if any(x < 1 for x in n):
        raise ValueError("entries must be positive")
    factored = [_factor_small(x) for x in n]
    primes = sorted(set().union(*[set(f) for f in factored]))
    parts = [1] * (2**k - 1)
    for p in primes:
        vals = [f.get(p, 0) for f in factored]
        for j in range(1, 2**k):
            lo = min(vals[i] for i in range(k) if j >> i & 1)
            clear = [vals[i] for i in range(k) if not (j >> i & 1)]
            hi = max(clear) if clear else 0
            if lo > hi:
                parts[j - 1] *= p ** (lo - hi)
    return tuple(parts)


def _factor_small(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_gwise_coprime(g: Graph, a: Sequence[int]) -> bool:
    """True iff gcd(a_i, a_j) == 1 for every edge (i, j) of g."""
    if len(a) != g.v:
        raise ValueError(f"tuple length {len(a)} != vertex count {g.v}")
    return all(math.gcd(a[i - 1], a[j - 1]) == 1 for i, j in g.edges)


# ---------------------------------------------------------------------------
# Text dump (CLI-facing, byte-deterministic)
# ---------------------------------------------------------------------------

def graph_dump(g: CoprimalityGraph) -> str:
    lines = [f"k={g.k}", f"v={g.v}"]
    lines.append("edges=" + ",".join(f"{i}-{j}" for i, j in g.sorted_edges()))
    for i, a in enumerate(g.constraints, start=1):
        lines.append(f"A_{i}=" + ",".join(str(j) for j in sorted(a)))
    return "\n".join(lines) + "\n"
