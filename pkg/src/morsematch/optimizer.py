"""
Search for a gradient vector field whose critical vector meets the Morse
lower bounds, and write a certificate that can be re-checked from scratch.

Each restart builds a greedy initial field and then cancels critical
pairs (lowest dimension first, canonical order) until the field is
optimal, the move budget runs out, or no move is left.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .cancellation import (
    apply_plan,
    cancel_pair,
    find_cancellable_pairs,
    log_line,
    paths_between,
    search_plans,
)
from .complex import ComplexError, SimplicialComplex, format_cell, parse_cell
from .gvf import (
    GradientVectorField,
    PairingError,
    add_pair,
    closes_vpath,
    critical_cells,
    empty_field,
    is_acyclic,
)
from .homology import (
    HomologyError,
    HomologySummary,
    homology_of,
    morse_boundary,
    morse_lower_bounds,
    parse_report_line,
    simplicial_homology,
)

log = logging.getLogger(__name__)

LEX = "lexicographic-greedy"
RANDOM = "random"
STRATEGY_ALIASES = {"lex": LEX, LEX: LEX, "random": RANDOM}

OPTIMAL = "optimal"
EXHAUSTED = "budget-exhausted"


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    strategy: str = RANDOM
    seed: int = 0
    max_restarts: int = 1000
    max_cancellations: int = 10_000
    simultaneous: bool = True
    max_plan_size: int = 4

    def __post_init__(self):
        if self.strategy not in STRATEGY_ALIASES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        object.__setattr__(self, "strategy", STRATEGY_ALIASES[self.strategy])
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.max_restarts < 0 or self.max_cancellations < 0:
            raise ValueError("budgets must be non-negative")
        if not 2 <= self.max_plan_size <= 4:
            raise ValueError("max_plan_size must be between 2 and 4")


def _debug_asserts() -> bool:
    return os.environ.get("MORSE_DEBUG_ASSERT") == "1"


def initial_field(cplx: SimplicialComplex, config: SearchConfig, restart: int = 0) -> GradientVectorField:
    """Greedy acyclic matching, scanning dimensions bottom-up.

    Each still-critical cell is paired with the first critical cofacet
    that does not close a V-path.  The lexicographic strategy scans cells
    and cofacets in canonical order; the random strategy shuffles both
    with a stream seeded by (seed, restart).
    """
    rng = np.random.default_rng([config.seed, restart]) if config.strategy == RANDOM else None
    partner: dict = {}
    field = GradientVectorField(cplx)
    field._partner = partner  # filled in place; no copy per pair
    for d in range(cplx.dimension):
        order = list(cplx.cells[d])
        if rng is not None:
            order = [order[i] for i in rng.permutation(len(order))]
        for cell in order:
            if cell in partner:
                continue
            cofaces = [s for s in cplx.cofacets(cell) if s not in partner]
            if rng is not None:
                cofaces = [cofaces[i] for i in rng.permutation(len(cofaces))]
            for sigma in cofaces:
                if not closes_vpath(field, cell, sigma):
                    partner[cell] = sigma
                    partner[sigma] = cell
                    break
    return GradientVectorField(cplx, partner)


def _vector_key(vector) -> tuple:
    return tuple(vector)


def run_restart(cplx: SimplicialComplex, config: SearchConfig, bounds: tuple, restart: int):
    """One restart; returns (critical vector, field, cancellation log)."""
    field = initial_field(cplx, config, restart)
    lines: list[str] = []
    moves = 0
    debug = _debug_asserts()
    vector = field.critical_vector()
    while moves < config.max_cancellations and vector != bounds:
        pairs = find_cancellable_pairs(field)
        if pairs:
            eta, sigma = pairs[0]
            (path,) = paths_between(field, eta, sigma)
            field = cancel_pair(field, eta, sigma)
            lines.append(log_line(eta, sigma, path))
            moves += 1
        elif config.simultaneous:
            plan = next(search_plans(field, config.max_plan_size), None)
            if plan is None:
                break
            field = apply_plan(field, plan)
            lines += [log_line(e, s, p) for e, s, p in plan.entries]
            moves += len(plan)
        else:
            break
        new_vector = field.critical_vector()
        if debug:
            assert is_acyclic(field), "cancellation produced a closed V-path"
            assert all(a <= b for a, b in zip(new_vector, vector)), "critical count increased"
        vector = new_vector
    return vector, field, lines


def _restart_task(args):
    cplx, config, bounds, restart = args
    vector, field, lines = run_restart(cplx, config, bounds, restart)
    return restart, vector, field.pairs, lines


@dataclass
class OptimalityCertificate:
    n: int
    config: SearchConfig
    restart: int | None
    critical: tuple
    bounds: tuple
    pairs: list
    log: list
    homology: HomologySummary
    verdict: str
    critical_lists: list = dc_field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.verdict == OPTIMAL

    def field(self, cplx: SimplicialComplex) -> GradientVectorField:
        f = empty_field(cplx)
        for tau, sigma in self.pairs:
            f = add_pair(f, tau, sigma)
        return f


def optimize(cplx: SimplicialComplex, config: SearchConfig | None = None, workers: int = 1) -> OptimalityCertificate:
    """Run restarts until one reaches the homological lower bounds.

    The best field seen is kept, comparing critical vectors from
    dimension 0 upward and breaking ties by restart index, so the result
    does not depend on ``workers``.
    """
    config = config or SearchConfig()
    homology = simplicial_homology(cplx)
    bounds = morse_lower_bounds(homology)

    best = None  # (vector, restart, pairs, lines)
    batch = max(1, workers)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        start = 0
        while start < config.max_restarts:
            tasks = [(cplx, config, bounds, r) for r in range(start, min(start + batch, config.max_restarts))]
            results = pool.map(_restart_task, tasks) if pool else map(_restart_task, tasks)
            done = False
            for restart, vector, pairs, lines in results:
                if best is None or (_vector_key(vector), restart) < (_vector_key(best[0]), best[1]):
                    best = (vector, restart, pairs, lines)
                if vector == bounds:
                    done = True
                    break
            log.debug("restarts %d..%d best %s", start, start + len(tasks) - 1, best[0])
            if done:
                break
            start += len(tasks)
    finally:
        if pool:
            pool.shutdown()

    if best is None:
        f = empty_field(cplx)
        best = (f.critical_vector(), None, [], [])
    vector, restart, pairs, lines = best
    field = GradientVectorField(cplx, {**{t: s for t, s in pairs}, **{s: t for t, s in pairs}})
    return OptimalityCertificate(
        n=cplx.n,
        config=config,
        restart=restart,
        critical=tuple(vector),
        bounds=tuple(bounds),
        pairs=list(pairs),
        log=list(lines),
        homology=homology,
        verdict=OPTIMAL if tuple(vector) == tuple(bounds) else EXHAUSTED,
        critical_lists=critical_cells(field),
    )


def verify_certificate(cplx: SimplicialComplex, cert: OptimalityCertificate) -> bool:
    """Re-check a certificate against ``cplx`` without trusting any of it."""
    if cert.n != cplx.n:
        return False
    try:
        field = cert.field(cplx)
    except PairingError:
        return False
    if not is_acyclic(field):
        return False
    if field.critical_vector() != tuple(cert.critical):
        return False
    if cert.critical_lists and critical_cells(field) != [list(c) for c in cert.critical_lists]:
        return False
    homology = simplicial_homology(cplx)
    if homology != cert.homology or morse_lower_bounds(homology) != tuple(cert.bounds):
        return False
    try:
        if homology_of(morse_boundary(field)) != homology:
            return False
    except HomologyError:
        return False
    expected = OPTIMAL if tuple(cert.critical) == tuple(cert.bounds) else EXHAUSTED
    return cert.verdict == expected


# -- certificate files -------------------------------------------------------

def _tuple_text(t) -> str:
    return "(" + ", ".join(str(x) for x in t) + ")"


def _parse_tuple(text: str) -> tuple:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise CertificateError(f"expected a tuple, got {text!r}")
    body = text[1:-1].strip()
    return tuple(int(x) for x in body.split(",") if x.strip()) if body else ()


def dumps_certificate(cert: OptimalityCertificate) -> str:
    c = cert.config
    out = ["[meta]"]
    out += [
        f"n = {cert.n}",
        f"strategy = {c.strategy}",
        f"seed = {c.seed}",
        f"max_restarts = {c.max_restarts}",
        f"max_cancellations = {c.max_cancellations}",
        f"simultaneous = {'on' if c.simultaneous else 'off'}",
        f"restart = {'none' if cert.restart is None else cert.restart}",
        "",
        "[critical]",
        f"vector = {_tuple_text(cert.critical)}",
        f"target = {_tuple_text(cert.bounds)}",
    ]
    for d, cells in enumerate(cert.critical_lists):
        out += [f"{d}: {format_cell(cell)}" for cell in cells]
    out += ["", "[pairs]"]
    out += [f"{format_cell(t)} => {format_cell(s)}" for t, s in cert.pairs]
    out += ["", "[log]"]
    out += list(cert.log)
    out += ["", "[homology]"]
    out += cert.homology.report_lines()
    out += [f"lower_bounds = {_tuple_text(morse_lower_bounds(cert.homology))}"]
    out += ["", "[verdict]", cert.verdict]
    return "\n".join(out) + "\n"


SECTIONS = ("meta", "critical", "pairs", "log", "homology", "verdict")


def loads_certificate(text: str) -> OptimalityCertificate:
    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1]
            if current not in SECTIONS:
                raise CertificateError(f"line {lineno}: unknown section [{current}]")
            sections[current] = []
        elif current is None:
            raise CertificateError(f"line {lineno}: content before the first section")
        else:
            sections[current].append((lineno, s))
    missing = [name for name in SECTIONS if name not in sections]
    if missing:
        raise CertificateError(f"missing sections: {', '.join(missing)}")

    def keyvals(name):
        out = {}
        for lineno, s in sections[name]:
            if "=" not in s:
                raise CertificateError(f"line {lineno}: expected key = value")
            k, v = s.split("=", 1)
            out[k.strip()] = (lineno, v.strip())
        return out

    try:
        meta = keyvals("meta")
        config = SearchConfig(
            strategy=meta["strategy"][1],
            seed=int(meta["seed"][1]),
            max_restarts=int(meta["max_restarts"][1]),
            max_cancellations=int(meta["max_cancellations"][1]),
            simultaneous=meta["simultaneous"][1] == "on",
        )
        n = int(meta["n"][1])
        restart = None if meta["restart"][1] == "none" else int(meta["restart"][1])

        critical = bounds = None
        critical_lists: list = []
        for lineno, s in sections["critical"]:
            if s.startswith("vector"):
                critical = _parse_tuple(s.split("=", 1)[1])
            elif s.startswith("target"):
                bounds = _parse_tuple(s.split("=", 1)[1])
            else:
                d, cell = s.split(":", 1)
                d = int(d)
                while len(critical_lists) <= d:
                    critical_lists.append([])
                critical_lists[d].append(parse_cell(cell))
        if critical is None or bounds is None:
            raise CertificateError("[critical] needs vector and target lines")
        while len(critical_lists) < len(critical):
            critical_lists.append([])

        pairs = []
        for lineno, s in sections["pairs"]:
            parts = s.split("=>")
            if len(parts) != 2:
                raise CertificateError(f"line {lineno}: expected '<tau> => <sigma>'")
            pairs.append((parse_cell(parts[0]), parse_cell(parts[1])))

        betti, torsion = [], []
        for lineno, s in sections["homology"]:
            if s.startswith("lower_bounds"):
                continue
            k, b, t = parse_report_line(s)
            if k != len(betti):
                raise CertificateError(f"line {lineno}: homology lines out of order")
            betti.append(b)
            torsion.append(t)
        verdict_lines = sections["verdict"]
        if len(verdict_lines) != 1 or verdict_lines[0][1] not in (OPTIMAL, EXHAUSTED):
            raise CertificateError("[verdict] must hold 'optimal' or 'budget-exhausted'")
    except KeyError as exc:
        raise CertificateError(f"missing key {exc.args[0]!r}") from None
    except (ValueError, ComplexError, HomologyError) as exc:
        if isinstance(exc, CertificateError):
            raise
        raise CertificateError(str(exc)) from None

    return OptimalityCertificate(
        n=n,
        config=config,
        restart=restart,
        critical=critical,
        bounds=bounds,
        pairs=pairs,
        log=[s for _, s in sections["log"]],
        homology=HomologySummary(tuple(betti), tuple(torsion)),
        verdict=verdict_lines[0][1],
        critical_lists=critical_lists,
    )


def write_certificate(cert: OptimalityCertificate, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_certificate(cert))


def read_certificate(path) -> OptimalityCertificate:
    with open(path) as fh:
        return loads_certificate(fh.read())
