"""
Cancelling critical pairs by reversing gradient paths.

``cancel_pair`` is the single-pair move: if exactly one gradient path
joins a facet of a critical (p+1)-cell ``eta`` to a critical p-cell
``sigma``, flipping the pairing along that path makes both cells regular
and keeps the field acyclic.  ``check_simultaneous``/``apply_plan`` do
several such reversals at once when the path-existence relation between
the chosen cells admits exactly one bijection and each realizing path is
unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .complex import Matching, format_cell
from .gvf import (
    GradientPath,
    GradientVectorField,
    NotCriticalError,
    is_acyclic,
    iter_paths,
    path_endpoints,
)


class CancellationError(ValueError):
    pass


class NoPathError(CancellationError):
    pass


class NonUniquePathError(CancellationError):
    pass


class InfeasiblePlanError(CancellationError):
    pass


class AmbiguousBijectionError(CancellationError):
    pass


class StalePlanError(CancellationError):
    pass


def _check_critical_pair(field: GradientVectorField, eta: Matching, sigma: Matching) -> None:
    for c in (eta, sigma):
        field.cplx.index_of(c)
        if not field.is_critical(c):
            raise NotCriticalError(f"{format_cell(c)} is not critical")
    if len(eta) != len(sigma) + 1:
        raise CancellationError(
            f"dimensions of {format_cell(eta)} and {format_cell(sigma)} are not adjacent"
        )


def paths_between(field: GradientVectorField, eta: Matching, sigma: Matching) -> list[GradientPath]:
    return [p for p in iter_paths(field, eta) if p.end == sigma]


def reverse_path(field: GradientVectorField, path: GradientPath) -> GradientVectorField:
    """Flip the pairing along ``path`` without any checks.

    The pairs (tau_i, sigma_i) are replaced by (tau_0, source) and
    (tau_{i+1}, sigma_i).  Only cancellation code and tests should call
    this directly.
    """
    c = path.cells
    old = path.pairs()
    new = [(c[0], path.source)] + [(c[i + 2], c[i + 1]) for i in range(0, len(c) - 1, 2)]
    return field.with_pairs(remove=old, add=new)


def cancel_pair(field: GradientVectorField, eta: Matching, sigma: Matching) -> GradientVectorField:
    """Cancel the critical pair (eta, sigma) along its unique gradient path."""
    _check_critical_pair(field, eta, sigma)
    paths = paths_between(field, eta, sigma)
    if not paths:
        raise NoPathError(f"no gradient path from {format_cell(eta)} to {format_cell(sigma)}")
    if len(paths) > 1:
        raise NonUniquePathError(
            f"{len(paths)} gradient paths from {format_cell(eta)} to {format_cell(sigma)}"
        )
    return reverse_path(field, paths[0])


def find_cancellable_pairs(field: GradientVectorField) -> list[tuple[Matching, Matching]]:
    """Critical pairs joined by exactly one gradient path.

    Ordered by the lower dimension, then eta, then sigma.
    """
    out = []
    for level in field.cplx.cells[1:]:
        for eta in level:
            if not field.is_critical(eta):
                continue
            counts = path_endpoints(field, eta)
            out.extend((eta, s) for s in sorted(counts) if counts[s] == 1)
    return out


@dataclass(frozen=True)
class CancellationPlan:
    """Pairs to cancel together, bound to the field they were checked on."""

    entries: tuple  # of (eta, sigma, GradientPath)
    fingerprint: str
    unique: tuple  # per entry: exactly one path from eta to its sigma

    @property
    def bijection(self) -> dict:
        return {eta: sigma for eta, sigma, _ in self.entries}

    def __len__(self):
        return len(self.entries)


def _perfect_matchings(rows: list, cols: list, adj: dict, limit: int = 2) -> list[dict]:
    """Up to ``limit`` perfect matchings of the bipartite graph ``adj``."""
    found: list[dict] = []

    def extend(i, used, current):
        if len(found) >= limit:
            return
        if i == len(rows):
            found.append(dict(current))
            return
        r = rows[i]
        for c in cols:
            if c not in used and c in adj[r]:
                current[r] = c
                used.add(c)
                extend(i + 1, used, current)
                used.discard(c)
                del current[r]

    extend(0, set(), {})
    return found


def check_simultaneous(field: GradientVectorField, etas, sigmas) -> CancellationPlan:
    """Validate a simultaneous cancellation of ``etas`` against ``sigmas``.

    Accepts iff exactly one bijection eta -> sigma is realized by gradient
    paths and each realizing pair is joined by exactly one path.
    """
    etas, sigmas = list(etas), list(sigmas)
    if len(set(etas)) != len(etas) or len(set(sigmas)) != len(sigmas):
        raise CancellationError("cells in a plan must be distinct")
    if len(etas) != len(sigmas):
        raise CancellationError("a plan needs as many etas as sigmas")
    for eta in etas:
        for sigma in sigmas:
            _check_critical_pair(field, eta, sigma)

    sigma_set = set(sigmas)
    paths: dict = {}
    for eta in etas:
        for p in iter_paths(field, eta):
            if p.end in sigma_set:
                paths.setdefault((eta, p.end), []).append(p)
    adj = {eta: {s for s in sigmas if (eta, s) in paths} for eta in etas}

    found = _perfect_matchings(etas, sigmas, adj)
    if not found:
        raise InfeasiblePlanError("no bijection is realized by gradient paths")
    if len(found) > 1:
        raise AmbiguousBijectionError("more than one bijection is realized by gradient paths")
    bij = found[0]
    entries = []
    for eta in etas:
        ps = paths[eta, bij[eta]]
        if len(ps) != 1:
            raise NonUniquePathError(
                f"{len(ps)} gradient paths from {format_cell(eta)} to {format_cell(bij[eta])}"
            )
        entries.append((eta, bij[eta], ps[0]))
    return CancellationPlan(tuple(entries), field.fingerprint(), tuple(True for _ in entries))


def apply_plan(field: GradientVectorField, plan: CancellationPlan) -> GradientVectorField:
    """Reverse every path of ``plan`` at once."""
    if plan.fingerprint != field.fingerprint():
        raise StalePlanError("plan was checked against a different field")
    used: set = set()
    for eta, sigma, path in plan.entries:
        cells = set(path.cells) | {eta}
        if cells & used:
            raise CancellationError("paths of a plan must be cell-disjoint")
        used |= cells
    out = field
    for _, _, path in plan.entries:
        out = reverse_path(out, path)
    if not is_acyclic(out):
        raise CancellationError("simultaneous reversal closed a V-path")
    return out


def search_plans(field: GradientVectorField, max_size: int = 4):
    """Yield acceptable plans of size 2..max_size, smallest first.

    Candidates are restricted to critical cells joined by at least one
    uniquely realized path, which every accepted plan needs anyway.
    """
    for level in field.cplx.cells[1:]:
        etas = [e for e in level if field.is_critical(e)]
        reach = {e: path_endpoints(field, e) for e in etas}
        etas = [e for e in etas if any(v == 1 for v in reach[e].values())]
        sigmas = sorted({s for e in etas for s, v in reach[e].items() if v == 1})
        for k in range(2, max_size + 1):
            for es in combinations(etas, k):
                for ss in combinations(sigmas, k):
                    if any(not any(reach[e][s] for s in ss) for e in es):
                        continue
                    try:
                        yield check_simultaneous(field, es, ss)
                    except CancellationError:
                        continue


def log_line(eta: Matching, sigma: Matching, path: GradientPath) -> str:
    return (
        f"cancel p={len(sigma) - 1} eta={format_cell(eta)} "
        f"sigma={format_cell(sigma)} path_len={len(path)}"
    )
