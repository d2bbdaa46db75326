"""
Matching complexes of complete graphs.

A cell of M_n is a matching of K_n: a set of pairwise-disjoint vertex
pairs.  Cells are stored as tuples of ``VertexPair`` in sorted order, so
plain tuple comparison gives the canonical (lexicographic) cell order.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, NamedTuple

MIN_ORDER = 2
MAX_ORDER = 12


class ComplexError(ValueError):
    """Invalid cell, complex order or complex file."""


class CellNotFound(KeyError):
    pass


class VertexPair(NamedTuple):
    a: int
    b: int

    def __str__(self):
        return f"{self.a}-{self.b}"


Matching = tuple  # tuple[VertexPair, ...], sorted and vertex-disjoint


def make_matching(pairs: Iterable) -> Matching:
    """Canonicalize an iterable of vertex pairs into a Matching.

    Each pair may be given in either orientation; the result is sorted.
    Raises ComplexError on loops, repeated pairs or shared vertices.
    """
    out = []
    seen = set()
    for a, b in pairs:
        a, b = int(a), int(b)
        if a == b:
            raise ComplexError(f"loop {a}-{b} is not an edge")
        if a > b:
            a, b = b, a
        if a < 1:
            raise ComplexError(f"vertex ids are 1-based, got {a}-{b}")
        if a in seen or b in seen:
            raise ComplexError(f"pair {a}-{b} shares a vertex with another pair")
        seen.update((a, b))
        out.append(VertexPair(a, b))
    if not out:
        raise ComplexError("a cell needs at least one pair")
    return tuple(sorted(out))


def parse_cell(text: str) -> Matching:
    """Parse the text form ``a-b,c-d,...`` into a canonical Matching."""
    text = text.strip()
    if not text:
        raise ComplexError("empty cell text")
    pairs = []
    for chunk in text.split(","):
        parts = chunk.strip().split("-")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise ComplexError(f"malformed pair {chunk.strip()!r} in cell {text!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    return make_matching(pairs)


def format_cell(cell: Matching) -> str:
    return ",".join(f"{a}-{b}" for a, b in cell)


def dim(cell: Matching) -> int:
    return len(cell) - 1


def cell_facets(cell: Matching) -> list[Matching]:
    """Codimension-one faces of a cell in canonical order.

    Deleting a later pair leaves a lexicographically smaller tuple, so the
    j-th face omits pair ``len(cell) - 1 - j``.
    """
    if len(cell) < 2:
        return []
    return [cell[:i] + cell[i + 1:] for i in reversed(range(len(cell)))]


def all_matchings(n: int) -> list[list[Matching]]:
    """Brute-force list of every matching of K_n, grouped by size - 1."""
    edges = [VertexPair(a, b) for a, b in combinations(range(1, n + 1), 2)]
    by_dim: list[list[Matching]] = []
    k = 1
    while 2 * k <= n:
        level = []
        for combo in combinations(edges, k):
            used = [v for e in combo for v in e]
            if len(set(used)) == len(used):
                level.append(tuple(combo))
        by_dim.append(level)
        k += 1
    return by_dim


class SimplicialComplex:
    """A downward-closed family of matchings of K_n.

    ``cells[d]`` is the sorted tuple of d-cells.  Adjacency is kept as
    index lists: ``facet_index[d][i]`` indexes into ``cells[d - 1]`` and
    ``cofacet_index[d][i]`` into ``cells[d + 1]``.  Instances are not
    mutated after construction.
    """

    def __init__(self, n: int, cells_by_dim: list[list[Matching]]):
        self.n = n
        self.cells: tuple[tuple[Matching, ...], ...] = tuple(
            tuple(sorted(set(level))) for level in cells_by_dim if level
        )
        self._index: dict[Matching, tuple[int, int]] = {}
        for d, level in enumerate(self.cells):
            for i, c in enumerate(level):
                if len(c) != d + 1:
                    raise ComplexError(f"cell {format_cell(c)} filed under dimension {d}")
                self._index[c] = (d, i)

        self.facet_index: list[list[list[int]]] = [[[] for _ in lvl] for lvl in self.cells]
        self.cofacet_index: list[list[list[int]]] = [[[] for _ in lvl] for lvl in self.cells]
        for d in range(1, len(self.cells)):
            for i, c in enumerate(self.cells[d]):
                for f in cell_facets(c):
                    fd, fi = self._index[f]
                    self.facet_index[d][i].append(fi)
                    self.cofacet_index[d - 1][fi].append(i)
        for level in self.cofacet_index:
            for lst in level:
                lst.sort()

    @classmethod
    def from_cells(cls, n: int, cells: Iterable[Matching]) -> "SimplicialComplex":
        """Subcomplex of M_n generated by ``cells`` (closed downward)."""
        closure: dict[int, set] = {}
        stack = list(cells)
        while stack:
            c = stack.pop()
            if max(v for p in c for v in p) > n:
                raise ComplexError(f"cell {format_cell(c)} uses a vertex above n={n}")
            level = closure.setdefault(dim(c), set())
            if c in level:
                continue
            level.add(c)
            stack.extend(cell_facets(c))
        top = max(closure, default=-1)
        return cls(n, [sorted(closure.get(d, ())) for d in range(top + 1)])

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.cells)

    def __len__(self):
        return len(self._index)

    def __contains__(self, cell) -> bool:
        return cell in self._index

    def __iter__(self):
        for level in self.cells:
            yield from level

    def index_of(self, cell: Matching) -> tuple[int, int]:
        try:
            return self._index[cell]
        except KeyError:
            raise CellNotFound(f"cell {format_cell(cell)} is not in the complex") from None

    def facets(self, cell: Matching) -> list[Matching]:
        d, i = self.index_of(cell)
        if d == 0:
            return []
        lower = self.cells[d - 1]
        return [lower[j] for j in self.facet_index[d][i]]

    def cofacets(self, cell: Matching) -> list[Matching]:
        d, i = self.index_of(cell)
        if d + 1 >= len(self.cells):
            return []
        upper = self.cells[d + 1]
        return [upper[j] for j in self.cofacet_index[d][i]]

    def maximal_cells(self) -> list[Matching]:
        out = []
        for d, level in enumerate(self.cells):
            for i, c in enumerate(level):
                if not self.cofacet_index[d][i]:
                    out.append(c)
        return out

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.n == other.n and self.cells == other.cells

    def __hash__(self):
        return hash((self.n, self.cells))

    def __repr__(self):
        return f"SimplicialComplex(n={self.n}, f={self.f_vector()})"


def build_matching_complex(n: int) -> SimplicialComplex:
    """The full matching complex M_n of the complete graph K_n."""
    if not isinstance(n, int) or not MIN_ORDER <= n <= MAX_ORDER:
        raise ComplexError(f"n must be an integer in [{MIN_ORDER}, {MAX_ORDER}], got {n!r}")
    levels = [[VertexPair(a, b) for a, b in combinations(range(1, n + 1), 2)]]
    levels[0] = [(e,) for e in levels[0]]
    while True:
        nxt = []
        for c in levels[-1]:
            last = c[-1]
            used = {v for p in c for v in p}
            # append pairs greater than the last one, so each matching is built once
            for a in range(last.a, n + 1):
                if a in used:
                    continue
                for b in range(a + 1, n + 1):
                    if b in used or (a, b) <= last:
                        continue
                    nxt.append(c + (VertexPair(a, b),))
        if not nxt:
            break
        levels.append(nxt)
    return SimplicialComplex(n, levels)


def facets(cplx: SimplicialComplex, cell: Matching) -> list[Matching]:
    return cplx.facets(cell)


def cofacets(cplx: SimplicialComplex, cell: Matching) -> list[Matching]:
    return cplx.cofacets(cell)


def euler_characteristic(cplx: SimplicialComplex) -> int:
    return sum((-1) ** d * k for d, k in enumerate(cplx.f_vector()))


# -- complex files -----------------------------------------------------------

def dumps_complex(cplx: SimplicialComplex) -> str:
    """Serialize as a header plus the maximal cells; faces are implied."""
    lines = [f"matching-complex n={cplx.n}"]
    lines += [format_cell(c) for c in sorted(cplx.maximal_cells(), key=lambda c: (len(c), c))]
    return "\n".join(lines) + "\n"


def loads_complex(text: str) -> SimplicialComplex:
    lines = text.splitlines()
    if not lines:
        raise ComplexError("line 1: empty complex file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "matching-complex" or not header[1].startswith("n="):
        raise ComplexError(f"line 1: expected 'matching-complex n=<n>', got {lines[0]!r}")
    try:
        n = int(header[1][2:])
    except ValueError:
        raise ComplexError(f"line 1: bad order {header[1]!r}") from None
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise ComplexError(f"line 1: n={n} out of range")
    cells = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            cell = parse_cell(line)
        except ComplexError as exc:
            raise ComplexError(f"line {lineno}: {exc}") from None
        if max(p.b for p in cell) > n:
            raise ComplexError(f"line {lineno}: cell {line.strip()!r} uses a vertex above n={n}")
        cells.append(cell)
    return SimplicialComplex.from_cells(n, cells)


def write_complex(cplx: SimplicialComplex, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_complex(cplx))


def read_complex(path) -> SimplicialComplex:
    with open(path) as fh:
        return loads_complex(fh.read())
