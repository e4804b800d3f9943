"""Deterministic graph families: controls, random regular graphs, Margulis tori."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .graph import MAX_VERTICES, Graph, emit

MASK64 = (1 << 64) - 1
REGULAR_ATTEMPTS = 10_000

KINDS = ("cycle", "path", "complete", "hypercube", "grid", "tree", "random-tree",
         "random-regular", "margulis")


class GenerationError(RuntimeError):
    pass


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


class Xoshiro256:
    """xoshiro256** seeded from a 64-bit integer through splitmix64."""

    def __init__(self, seed: int):
        sm = seed & MASK64
        s = []
        for _ in range(4):
            sm, out = splitmix64(sm)
            s.append(out)
        self.s = s

    def next_u64(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection on the top of the 64-bit range."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, walking from the back."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def label(self) -> str:
        return ";".join(f"{k}={self.params[k]}" for k in sorted(self.params))


def _check_size(n: int) -> None:
    if n > MAX_VERTICES:
        raise ValueError(f"family would have {n} vertices, above the {MAX_VERTICES} cap")


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def hypercube(k: int) -> Graph:
    if not 0 <= k <= 16:
        raise ValueError("hypercube dimension must be in 0..16")
    n = 1 << k
    return Graph.from_edges(n, [(v, v ^ (1 << b)) for v in range(n) for b in range(k)
                                if v < v ^ (1 << b)])


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise ValueError("grid needs rows, cols >= 1")
    _check_size(rows * cols)
    edges = []
    for r, c in product(range(rows), range(cols)):
        v = r * cols + c
        if c + 1 < cols:
            edges.append((v, v + 1))
        if r + 1 < rows:
            edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def tree(b: int, depth: int) -> Graph:
    """Balanced b-ary tree of the given depth, vertices in BFS order."""
    if b < 1 or depth < 0:
        raise ValueError("tree needs b >= 1 and depth >= 0")
    n = sum(b**i for i in range(depth + 1))
    _check_size(n)
    return Graph.from_edges(n, [((v - 1) // b, v) for v in range(1, n)])


def random_tree(n: int, seed: int) -> Graph:
    """Random recursive tree: vertex v attaches to a uniform earlier vertex."""
    if n < 1:
        raise ValueError("random tree needs n >= 1")
    rng = Xoshiro256(seed)
    return Graph.from_edges(n, [(rng.below(v), v) for v in range(1, n)])


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Simple d-regular graph from the pairing model, rejecting non-simple matchings."""
    if n < 1 or d < 0:
        raise ValueError("random-regular needs n >= 1, d >= 0")
    if (n * d) % 2:
        raise ValueError(f"n*d = {n * d} is odd")
    if d >= n:
        raise ValueError(f"degree d={d} must be below n={n}")
    rng = Xoshiro256(seed)
    base = [v for v in range(n) for _ in range(d)]
    for _ in range(REGULAR_ATTEMPTS):
        stubs = base.copy()
        rng.shuffle(stubs)
        seen = set()
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                break
            e = (u, v) if u < v else (v, u)
            if e in seen:
                break
            seen.add(e)
        else:
            return Graph.from_edges(n, sorted(seen))
    raise GenerationError(f"no simple matching after {REGULAR_ATTEMPTS} attempts")


def margulis(m: int) -> Graph:
    """8-regular multigraph on Z_m x Z_m; vertex (x, y) has id x*m + y.

    Each vertex lists the images of the eight maps (x±y, y), (x, y±x),
    (x±1, y), (x, y±1).  The maps come in inverse pairs, so the lists are
    symmetric; a fixed point contributes a loop entry per map.
    """
    if m < 2:
        raise ValueError("margulis needs m >= 2")
    _check_size(m * m)
    adj = []
    for x, y in product(range(m), range(m)):
        images = [
            ((x + y) % m, y), ((x - y) % m, y),
            (x, (y + x) % m), (x, (y - x) % m),
            ((x + 1) % m, y), ((x - 1) % m, y),
            (x, (y + 1) % m), (x, (y - 1) % m),
        ]
        adj.append([a * m + b for a, b in images])
    return Graph.from_adjacency(adj)


def _need(params: dict, *names: str) -> list[int]:
    missing = [k for k in names if params.get(k) is None]
    if missing:
        raise ValueError(f"missing parameter(s): {', '.join(missing)}")
    return [int(params[k]) for k in names]


def generate(spec: FamilySpec) -> Graph:
    p = spec.params
    if "n" in p and spec.kind not in ("hypercube",):
        _check_size(int(p["n"]))
    kind = spec.kind
    if kind == "cycle":
        return cycle(*_need(p, "n"))
    if kind == "path":
        return path(*_need(p, "n"))
    if kind == "complete":
        return complete(*_need(p, "n"))
    if kind == "hypercube":
        return hypercube(*_need(p, "n"))
    if kind == "grid":
        return grid(*_need(p, "rows", "cols"))
    if kind == "tree":
        return tree(*_need(p, "b", "depth"))
    if kind == "random-tree":
        return random_tree(*_need(p, "n"), spec.seed)
    if kind == "random-regular":
        n, d = _need(p, "n", "d")
        return random_regular(n, d, spec.seed)
    if kind == "margulis":
        return margulis(*_need(p, "m"))
    raise ValueError(f"unknown family {kind!r}")


def generate_document(spec: FamilySpec) -> str:
    return emit(generate(spec))
