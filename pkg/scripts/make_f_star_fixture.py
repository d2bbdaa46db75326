"""Regenerate src/morsematch/data/f_star_local.gvf.

Development tool; needs ``ortools`` (not a runtime dependency).

The fixture is an acyclic field on M_7 holding the pairs drawn along the
two eta_1 paths and the two eta_2 paths, plus as few extra pairs as a
CP-SAT model can manage so that the gradient paths leaving the three
critical triangles end exactly where the drawings say:

    eta_1 -> sigma_4, sigma_1    eta_2 -> sigma_2, sigma_3
    eta_3 -> sigma_1, sigma_2, sigma_3 (one path each, none to sigma_4)

The eta_3 paths are not drawn, so the solver picks them.
"""

import sys
from pathlib import Path

from ortools.sat.python import cp_model

from morsematch.complex import build_matching_complex, parse_cell as C
from morsematch.gvf import GradientVectorField, dumps_gvf, is_acyclic, path_endpoints

ETA = [C("2-5,3-6,4-7"), C("1-5,2-4,6-7"), C("1-5,2-6,4-7")]
SIGMA = [C("1-2,4-5"), C("1-2,4-6"), C("1-3,4-5"), C("1-3,4-6")]

DRAWN_CHAINS = [
    "2-5,3-6 > 1-7,2-5,3-6 > 1-7,2-5 > 1-7,2-5,4-6 > 2-5,4-6 > 1-3,2-5,4-6 > 1-3,4-6",
    "2-5,3-6 > 1-7,2-5,3-6 > 1-7,3-6 > 1-7,3-6,4-5 > 3-6,4-5 > 1-2,3-6,4-5 > 1-2,4-5",
    "1-5,2-4 > 1-5,2-4,3-7 > 1-5,3-7 > 1-5,3-7,4-6 > 3-7,4-6 > 1-2,3-7,4-6 > 1-2,4-6",
    "2-4,6-7 > 1-3,2-4,6-7 > 1-3,6-7 > 1-3,4-5,6-7 > 1-3,4-5",
]

# path counts from each eta to each sigma
EXPECTED = [
    {SIGMA[3]: 1, SIGMA[0]: 1},
    {SIGMA[1]: 1, SIGMA[2]: 1},
    {SIGMA[0]: 1, SIGMA[1]: 1, SIGMA[2]: 1},
]
BOUND = 3  # cap on path counts through any 1-cell


def drawn_pairs():
    out = set()
    for text in DRAWN_CHAINS:
        ch = [C(c) for c in text.split(">")]
        out |= {(ch[i], ch[i + 1]) for i in range(0, len(ch) - 1, 2)}
    return out


def solve(cplx, seconds=600.0):
    md = cp_model.CpModel()
    inc = [(t, s) for level in cplx.cells[1:] for s in level for t in cplx.facets(s)]
    x = {p: md.NewBoolVar("") for p in inc}
    touching = {}
    for (t, s), v in x.items():
        touching.setdefault(t, []).append(v)
        touching.setdefault(s, []).append(v)
    for vs in touching.values():
        md.Add(sum(vs) <= 1)
    for p in drawn_pairs():
        md.Add(x[p] == 1)
    for c in ETA + SIGMA:
        for v in touching[c]:
            md.Add(v == 0)

    # acyclic iff a potential increases along every arc of the modified Hasse diagram
    h = {c: md.NewIntVar(0, len(cplx), "") for c in cplx}
    for (t, s), v in x.items():
        md.Add(h[s] > h[t]).OnlyEnforceIf(v)
        md.Add(h[t] > h[s]).OnlyEnforceIf(v.Not())

    # count[e][u]: V-paths from a facet of eta e that pass through or end at u
    edges = cplx.cells[1]
    for e, expected in zip(ETA, EXPECTED):
        count = {u: md.NewIntVar(0, BOUND, "") for u in edges}
        inflow = {u: [] for u in edges}
        for (t, s), v in x.items():
            if len(t) != 2:
                continue
            for u in cplx.facets(s):
                if u == t:
                    continue
                y = md.NewIntVar(0, BOUND, "")
                md.Add(y <= count[t])
                md.Add(y <= BOUND * v)
                md.Add(y >= count[t] - BOUND * (1 - v))
                inflow[u].append(y)
        starts = set(cplx.facets(e))
        for u in edges:
            md.Add(count[u] == int(u in starts) + sum(inflow[u]))
            if u in SIGMA:
                md.Add(count[u] == expected.get(u, 0))
            else:
                reached = md.NewBoolVar("")
                md.Add(count[u] >= 1).OnlyEnforceIf(reached)
                md.Add(count[u] == 0).OnlyEnforceIf(reached.Not())
                md.Add(sum(touching[u]) == 1).OnlyEnforceIf(reached)
    md.Minimize(sum(x.values()))

    solver = cp_model.CpSolver()
    solver.parameters.max_time_in_seconds = seconds
    solver.parameters.num_workers = 1
    solver.parameters.random_seed = 0
    status = solver.Solve(md)
    print("solver:", solver.StatusName(status), f"{solver.WallTime():.1f}s")
    if status not in (cp_model.OPTIMAL, cp_model.FEASIBLE):
        return None
    partner = {}
    for (t, s), v in x.items():
        if solver.Value(v):
            partner[t] = s
            partner[s] = t
    return GradientVectorField(cplx, partner)


def main():
    cplx = build_matching_complex(7)
    field = solve(cplx)
    if field is None:
        sys.exit("no completion found")
    ends = [dict(path_endpoints(field, e)) for e in ETA]
    if not is_acyclic(field) or ends != EXPECTED:
        sys.exit(f"solver result fails the checks: {ends}")
    out = Path(__file__).resolve().parents[1] / "src/morsematch/data/f_star_local.gvf"
    out.write_text(dumps_gvf(field))
    print(f"wrote {len(field)} pairs, critical {field.critical_vector()}, to {out}")


if __name__ == "__main__":
    main()
