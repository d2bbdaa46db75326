"""
Exact integer homology: boundary matrices, Smith normal form, Morse complexes.

Everything here works over Python ints; there is no floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from math import gcd

from .complex import Matching, SimplicialComplex
from .gvf import GradientVectorField, is_acyclic, iter_paths


class HomologyError(ValueError):
    pass


class IntegerMatrix:
    """Sparse integer matrix stored as ``{(row, col): value}`` with no zeros."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    @classmethod
    def from_dense(cls, data) -> "IntegerMatrix":
        data = [list(map(int, r)) for r in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise HomologyError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def incidence(sigma: Matching, tau: Matching) -> int:
    """Sign of the facet ``tau`` in the boundary of ``sigma``.

    (-1)**i where ``tau`` omits the i-th pair of ``sigma``.
    """
    if len(tau) + 1 == len(sigma):
        for i, p in enumerate(sigma):
            if i == len(tau) or tau[i] != p:
                if sigma[:i] + sigma[i + 1:] == tau:
                    return -1 if i % 2 else 1
                break
    raise HomologyError("not a facet")


def simplicial_boundary(cplx: SimplicialComplex, k: int) -> IntegerMatrix:
    """Boundary map from k-cells to (k-1)-cells in canonical bases."""
    if not 1 <= k <= cplx.dimension:
        raise HomologyError(f"k={k} outside 1..{cplx.dimension}")
    upper, lower = cplx.cells[k], cplx.cells[k - 1]
    entries = {}
    for j, sigma in enumerate(upper):
        for i in cplx.facet_index[k][j]:
            entries[i, j] = incidence(sigma, lower[i])
    return IntegerMatrix(len(lower), len(upper), entries)


def _normalize_diagonal(diag: list[int]) -> list[int]:
    """Turn a list of positive diagonal entries into a divisibility chain."""
    d = sorted(x for x in diag if x != 1)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    ones = len(diag) - len(d)
    return [1] * ones + sorted(d)


def smith_normal_form(m: IntegerMatrix) -> tuple[list[int], int]:
    """Invariant factors d_1 | d_2 | ... | d_r and the rank r of ``m``.

    Sparse elimination; the pivot is always a nonzero entry of least
    absolute value.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set] = {}
    for (i, j), v in m.entries.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)

    def set_entry(i, j, v):
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
        else:
            rows[i].pop(j, None)
            cols[j].discard(i)

    def smallest():
        best = None
        for i in sorted(rows):
            for j, v in rows[i].items():
                if best is None or abs(v) < best[2]:
                    best = (i, j, abs(v))
                    if best[2] == 1:
                        return best
        return best

    diag = []
    while True:
        best = smallest()
        if best is None:
            break
        r, c, _ = best
        while True:
            p = rows[r][c]
            # clear column c with row operations
            for i in sorted(cols[c] - {r}):
                q = rows[i][c] // p
                for j, v in list(rows[r].items()):
                    set_entry(i, j, rows[i].get(j, 0) - q * v)
            rest = [i for i in cols[c] if i != r]
            if rest:
                r = min(rest, key=lambda i: (abs(rows[i][c]), i))
                continue
            # column c now holds only the pivot, so column ops touch row r alone
            bad = [(j, v % p) for j, v in rows[r].items() if j != c and v % p]
            if bad:
                for j, v in list(rows[r].items()):
                    if j != c:
                        set_entry(r, j, v - (v // p) * p)
                c = min((j for j in rows[r] if j != c), key=lambda j: (abs(rows[r][j]), j))
                continue
            diag.append(abs(p))
            for j in list(rows[r]):
                cols[j].discard(r)
            del rows[r]
            cols.pop(c, None)
            break
        for i in [i for i, row in rows.items() if not row]:
            del rows[i]

    factors = _normalize_diagonal(diag)
    return factors, len(factors)


def smith_decomposition(m: IntegerMatrix):
    """Dense Smith form with transforms: returns (U, D, V) with U @ m @ V == D.

    U and V are unimodular.  Quadratic memory; intended for small inputs.
    """
    a = m.to_dense()
    nr, nc = m.rows, m.cols
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(dst, src, q):  # row dst -= q * row src
        for M in (a, u):
            M[dst] = [x - q * y for x, y in zip(M[dst], M[src])]

    def col_op(dst, src, q):  # col dst -= q * col src
        for M in (a, v):
            for r in M:
                r[dst] -= q * r[src]

    def swap_rows(i, j):
        for M in (a, u):
            M[i], M[j] = M[j], M[i]

    def swap_cols(i, j):
        for M in (a, v):
            for r in M:
                r[i], r[j] = r[j], r[i]

    t = 0
    while t < min(nr, nc):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_op(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_op(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # the pivot must divide the whole remaining block
            bad = next(
                ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            row_op(t, bad[0], -1)
        if a[t][t] < 0:
            for M in (a, u):
                M[t] = [-x for x in M[t]]
        t += 1
    return (
        IntegerMatrix.from_dense(u) if nr else IntegerMatrix(0, 0),
        IntegerMatrix.from_dense(a) if nr and nc else IntegerMatrix(nr, nc),
        IntegerMatrix.from_dense(v) if nc else IntegerMatrix(0, 0),
    )


@dataclass
class ChainComplexZ:
    """Bases per dimension and boundaries ``boundary[k]``: C_k -> C_{k-1}."""

    bases: list
    boundary: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        for k, mat in self.boundary.items():
            if mat.shape != (len(self.bases[k - 1]), len(self.bases[k])):
                raise HomologyError(f"boundary {k} has shape {mat.shape}")
        for k in self.boundary:
            if k + 1 in self.boundary and not (self.boundary[k] @ self.boundary[k + 1]).is_zero():
                raise HomologyError(f"boundary {k} o boundary {k + 1} is not zero")


def simplicial_chain_complex(cplx: SimplicialComplex) -> ChainComplexZ:
    bases = [list(level) for level in cplx.cells]
    return ChainComplexZ(bases, {k: simplicial_boundary(cplx, k) for k in range(1, len(bases))})


@dataclass(frozen=True)
class HomologySummary:
    betti: tuple
    torsion: tuple  # per dimension, tuple of invariant factors > 1

    def report_lines(self) -> list[str]:
        return [f"H_{k} = {group_text(b, t)}" for k, (b, t) in enumerate(zip(self.betti, self.torsion))]

    def compact(self) -> str:
        return ", ".join(f"H_{k}={group_text(b, t, sep='+')}" for k, (b, t) in enumerate(zip(self.betti, self.torsion)))

    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


def group_text(b: int, torsion, sep: str = " + ") -> str:
    parts = []
    if b:
        parts.append("Z" if b == 1 else f"Z^{b}")
    parts += [f"Z/{d}" for d in torsion]
    return sep.join(parts) if parts else "0"


_GROUP_RE = re.compile(r"^H_(\d+)\s*=\s*(.+)$")


def parse_report_line(line: str) -> tuple[int, int, tuple]:
    """Inverse of one ``H_k = ...`` report line: (k, betti, torsion)."""
    m = _GROUP_RE.match(line.strip())
    if not m:
        raise HomologyError(f"bad homology line {line!r}")
    k, body = int(m.group(1)), m.group(2).strip()
    b, tors = 0, []
    if body != "0":
        for part in body.split("+"):
            part = part.strip()
            if part == "Z":
                b += 1
            elif part.startswith("Z^"):
                b += int(part[2:])
            elif part.startswith("Z/"):
                tors.append(int(part[2:]))
            else:
                raise HomologyError(f"bad group term {part!r}")
    return k, b, tuple(tors)


def homology_of(cc: ChainComplexZ) -> HomologySummary:
    """Betti numbers and torsion coefficients of an integer chain complex."""
    top = len(cc.bases)
    snf = {}
    for k, mat in cc.boundary.items():
        if k + 1 in cc.boundary and not (mat @ cc.boundary[k + 1]).is_zero():
            raise HomologyError(f"boundary {k} o boundary {k + 1} is not zero")
        snf[k] = smith_normal_form(mat)
    betti, torsion = [], []
    for k in range(top):
        rank_k = snf[k][1] if k in snf else 0
        factors_up, rank_up = snf.get(k + 1, ([], 0))
        betti.append(len(cc.bases[k]) - rank_k - rank_up)
        torsion.append(tuple(d for d in factors_up if d > 1))
    return HomologySummary(tuple(betti), tuple(torsion))


def simplicial_homology(cplx: SimplicialComplex) -> HomologySummary:
    return homology_of(simplicial_chain_complex(cplx))


def path_weight(path) -> int:
    """Signed weight of a gradient path in the Morse boundary."""
    c = path.cells
    w = incidence(path.source, c[0])
    for i in range(1, len(c) - 1, 2):
        w *= -incidence(c[i], c[i - 1]) * incidence(c[i], c[i + 1])
    return w


def morse_boundary(field: GradientVectorField) -> ChainComplexZ:
    """The Morse chain complex on the critical cells of an acyclic field."""
    if not is_acyclic(field):
        raise HomologyError("Morse complex needs an acyclic field")
    bases = [[c for c in level if field.is_critical(c)] for level in field.cplx.cells]
    boundary = {}
    for k in range(1, len(bases)):
        index = {c: i for i, c in enumerate(bases[k - 1])}
        entries: dict = {}
        for j, eta in enumerate(bases[k]):
            for path in iter_paths(field, eta):
                key = (index[path.end], j)
                entries[key] = entries.get(key, 0) + path_weight(path)
        boundary[k] = IntegerMatrix(len(bases[k - 1]), len(bases[k]), entries)
    return ChainComplexZ(bases, boundary)


def morse_lower_bounds(h: HomologySummary) -> tuple[int, ...]:
    """Least critical counts allowed by the strong Morse inequalities with torsion.

    c_k >= b_k + t_k + t_{k-1}, t_k being the number of torsion factors of H_k.
    """
    t = [len(x) for x in h.torsion]
    return tuple(b + t[k] + (t[k - 1] if k else 0) for k, b in enumerate(h.betti))
