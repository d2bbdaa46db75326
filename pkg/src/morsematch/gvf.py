"""
Gradient vector fields on a matching complex.

A field is a partial matching of the Hasse diagram: each pair joins a
p-cell ``tau`` to a (p+1)-cell ``sigma`` having ``tau`` as a facet.
Unpaired cells are critical.  Fields are immutable; every modifying
operation returns a new field.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .complex import (
    CellNotFound,
    ComplexError,
    Matching,
    SimplicialComplex,
    format_cell,
    parse_cell,
)

UP = "up"
DOWN = "down"
CRITICAL = "critical"


class PairingError(ValueError):
    """A pair violates the facet relation or reuses an already paired cell."""


class NotCriticalError(ValueError):
    pass


class GradientVectorField:
    """Partial matching on the Hasse diagram of ``cplx``.

    ``partner`` maps each paired cell to its partner; the dimension of the
    partner tells whether the cell is paired up or down.
    """

    __slots__ = ("cplx", "_partner", "_fingerprint")

    def __init__(self, cplx: SimplicialComplex, partner: dict | None = None):
        self.cplx = cplx
        self._partner: dict[Matching, Matching] = dict(partner or {})
        self._fingerprint = None

    def partner(self, cell: Matching) -> Matching | None:
        return self._partner.get(cell)

    def role(self, cell: Matching) -> str:
        other = self._partner.get(cell)
        if other is None:
            return CRITICAL
        return UP if len(other) > len(cell) else DOWN

    def is_critical(self, cell: Matching) -> bool:
        return cell not in self._partner

    def up(self, cell: Matching) -> Matching | None:
        """The cofacet ``cell`` is paired with, if it is paired upward."""
        other = self._partner.get(cell)
        if other is not None and len(other) > len(cell):
            return other
        return None

    @property
    def pairs(self) -> list[tuple[Matching, Matching]]:
        """All (tau, sigma) pairs, sorted by dimension then tau."""
        out = [(t, s) for t, s in self._partner.items() if len(s) > len(t)]
        out.sort(key=lambda ts: (len(ts[0]), ts[0]))
        return out

    def __len__(self):
        return len(self._partner) // 2

    def critical_vector(self) -> tuple[int, ...]:
        return tuple(
            sum(1 for c in level if c not in self._partner) for level in self.cplx.cells
        )

    def fingerprint(self) -> str:
        """Content hash of the complex order and the pair listing."""
        if self._fingerprint is None:
            self._fingerprint = hashlib.sha256(dumps_gvf(self).encode()).hexdigest()
        return self._fingerprint

    def __eq__(self, other):
        if not isinstance(other, GradientVectorField):
            return NotImplemented
        return self.cplx == other.cplx and self._partner == other._partner

    def __hash__(self):
        return hash(self.fingerprint())

    def __repr__(self):
        return f"GradientVectorField(n={self.cplx.n}, pairs={len(self)}, critical={self.critical_vector()})"

    def with_pairs(self, remove=(), add=()) -> "GradientVectorField":
        """Copy of this field with ``remove`` pairs dropped and ``add`` pairs set.

        No validation is done; callers own the contract.
        """
        partner = dict(self._partner)
        for tau, sigma in remove:
            del partner[tau]
            del partner[sigma]
        for tau, sigma in add:
            partner[tau] = sigma
            partner[sigma] = tau
        return GradientVectorField(self.cplx, partner)


@dataclass(frozen=True)
class GradientPath:
    """V-path ``tau_0, sigma_0, tau_1, ..., tau_k`` leaving ``source``.

    ``cells[0]`` is a facet of the critical cell ``source`` and
    ``cells[-1]`` is a critical cell one dimension below ``source``.
    """

    source: Matching
    cells: tuple

    @property
    def start(self) -> Matching:
        return self.cells[0]

    @property
    def end(self) -> Matching:
        return self.cells[-1]

    def __len__(self):
        # number of (tau, sigma) pairs traversed
        return len(self.cells) // 2

    def pairs(self) -> list[tuple[Matching, Matching]]:
        c = self.cells
        return [(c[i], c[i + 1]) for i in range(0, len(c) - 1, 2)]

    def __str__(self):
        chain = " > ".join(format_cell(c) for c in self.cells)
        return f"[{format_cell(self.source)}] {chain}"


def empty_field(cplx: SimplicialComplex) -> GradientVectorField:
    return GradientVectorField(cplx)


def add_pair(field: GradientVectorField, tau: Matching, sigma: Matching) -> GradientVectorField:
    """Return ``field`` plus the pair (tau, sigma).

    Acyclicity is not re-checked here.
    """
    cplx = field.cplx
    try:
        cplx.index_of(tau)
        cplx.index_of(sigma)
    except CellNotFound as exc:
        raise PairingError(str(exc.args[0])) from None
    if len(sigma) != len(tau) + 1 or not set(tau) <= set(sigma):
        raise PairingError(f"{format_cell(tau)} is not a facet of {format_cell(sigma)}")
    for c in (tau, sigma):
        if not field.is_critical(c):
            raise PairingError(f"cell {format_cell(c)} is already paired")
    return field.with_pairs(add=[(tau, sigma)])


def _successors(field: GradientVectorField, tau: Matching) -> list[Matching]:
    """Next p-cells along V-paths through ``tau`` (empty unless paired up)."""
    sigma = field.up(tau)
    if sigma is None:
        return []
    return [t for t in field.cplx.facets(sigma) if t != tau]


def is_acyclic(field: GradientVectorField) -> bool:
    """True iff no nontrivial closed V-path exists.

    Runs a colouring DFS on the p-cell digraph tau -> tau' where tau is
    paired with sigma and tau' is another facet of sigma; this digraph has
    a cycle exactly when the modified Hasse diagram does.
    """
    WHITE, GREY, BLACK = 0, 1, 2
    colour: dict[Matching, int] = {}
    for start, sigma in field.pairs:
        if colour.get(start, WHITE) != WHITE:
            continue
        colour[start] = GREY
        stack = [(start, iter(_successors(field, start)))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = BLACK
                stack.pop()
                continue
            c = colour.get(nxt, WHITE)
            if c == GREY:
                return False
            if c == WHITE:
                colour[nxt] = GREY
                stack.append((nxt, iter(_successors(field, nxt))))
    return True


def closes_vpath(field: GradientVectorField, tau: Matching, sigma: Matching) -> bool:
    """Would adding the pair (tau, sigma) to an acyclic field create a cycle?

    It does iff some V-path from another facet of sigma leads back to tau.
    """
    seen = set()
    stack = [t for t in field.cplx.facets(sigma) if t != tau]
    while stack:
        t = stack.pop()
        if t == tau:
            return True
        if t in seen:
            continue
        seen.add(t)
        stack.extend(_successors(field, t))
    return False


def critical_cells(field: GradientVectorField) -> list[list[Matching]]:
    return [[c for c in level if field.is_critical(c)] for level in field.cplx.cells]


def _require_critical(field: GradientVectorField, source: Matching) -> None:
    field.cplx.index_of(source)
    if not field.is_critical(source):
        raise NotCriticalError(f"source {format_cell(source)} is not critical")


def iter_paths(field: GradientVectorField, source: Matching) -> Iterator[GradientPath]:
    """Depth-first generator behind ``enumerate_paths``."""
    _require_critical(field, source)
    facets = field.cplx.facets

    def extend(prefix):
        tau = prefix[-1]
        sigma = field.up(tau)
        for nxt in facets(sigma):
            if nxt == tau:
                continue
            if field.is_critical(nxt):
                yield prefix + (sigma, nxt)
            elif field.up(nxt) is not None:
                yield from extend(prefix + (sigma, nxt))

    for tau0 in facets(source):
        if field.is_critical(tau0):
            yield GradientPath(source, (tau0,))
        elif field.up(tau0) is not None:
            for cells in extend((tau0,)):
                yield GradientPath(source, cells)


def enumerate_paths(field: GradientVectorField, source: Matching) -> list[GradientPath]:
    """All gradient paths from the facets of the critical cell ``source``.

    A critical facet counts as a path of length zero.  Paths that run into
    a cell paired downward are dead ends and are not reported.
    """
    return list(iter_paths(field, source))


def path_endpoints(field: GradientVectorField, source: Matching) -> Counter:
    """Number of gradient paths from ``source`` to each critical cell."""
    return Counter(p.end for p in iter_paths(field, source))


# -- gvf files ---------------------------------------------------------------

def dumps_gvf(field: GradientVectorField) -> str:
    lines = [f"gvf complex={field.cplx.n}"]
    lines += [f"{format_cell(t)} => {format_cell(s)}" for t, s in field.pairs]
    return "\n".join(lines) + "\n"


def loads_gvf(text: str, cplx: SimplicialComplex, validate: bool = True) -> GradientVectorField:
    """Parse a gvf file against ``cplx``.

    Pairs are checked for the facet relation and disjointness; with
    ``validate`` the result must also be acyclic.
    """
    lines = text.splitlines()
    if not lines or lines[0].split() != ["gvf", f"complex={cplx.n}"]:
        head = lines[0] if lines else ""
        raise ComplexError(f"line 1: expected 'gvf complex={cplx.n}', got {head!r}")
    partner: dict = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("=>")
        if len(parts) != 2:
            raise ComplexError(f"line {lineno}: expected '<tau> => <sigma>'")
        try:
            tau, sigma = parse_cell(parts[0]), parse_cell(parts[1])
            if tau not in cplx or sigma not in cplx:
                raise PairingError("cell outside the complex")
            if len(sigma) != len(tau) + 1 or not set(tau) <= set(sigma):
                raise PairingError(f"{format_cell(tau)} is not a facet of {format_cell(sigma)}")
            if tau in partner or sigma in partner:
                raise PairingError("cell paired twice")
        except (ComplexError, PairingError) as exc:
            raise ComplexError(f"line {lineno}: {exc}") from None
        partner[tau] = sigma
        partner[sigma] = tau
    field = GradientVectorField(cplx, partner)
    if validate and not is_acyclic(field):
        raise ComplexError("gradient field contains a closed V-path")
    return field


def write_gvf(field: GradientVectorField, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_gvf(field))


def read_gvf(path, cplx: SimplicialComplex, validate: bool = True) -> GradientVectorField:
    with open(path) as fh:
        return loads_gvf(fh.read(), cplx, validate=validate)
