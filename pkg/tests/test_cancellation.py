import pytest

from morsematch.cancellation import (
    AmbiguousBijectionError,
    CancellationError,
    InfeasiblePlanError,
    NoPathError,
    NonUniquePathError,
    StalePlanError,
    apply_plan,
    cancel_pair,
    check_simultaneous,
    find_cancellable_pairs,
    log_line,
    paths_between,
    reverse_path,
    search_plans,
)
from morsematch.complex import parse_cell
from morsematch.gvf import NotCriticalError, add_pair, empty_field, is_acyclic, path_endpoints

from conftest import complex_of
from oracles import dag_oracle, random_acyclic_field


def check_cancellation(field, eta, sigma):
    (path,) = paths_between(field, eta, sigma)
    out = cancel_pair(field, eta, sigma)
    p = len(sigma) - 1
    before, after = field.critical_vector(), out.critical_vector()
    expected = list(before)
    expected[p] -= 1
    expected[p + 1] -= 1
    assert after == tuple(expected)
    assert is_acyclic(out) and dag_oracle(out)
    touched = set(path.cells) | {eta}
    for cell in field.cplx:
        if cell not in touched:
            assert out.role(cell) == field.role(cell)
            assert out.partner(cell) == field.partner(cell)
    assert not out.is_critical(eta) and not out.is_critical(sigma)
    return path, out


@pytest.mark.parametrize("seed", range(500))
def test_cancellation_bookkeeping_m5(m5, seed):
    field = random_acyclic_field(m5, seed, density=0.5)
    pairs = find_cancellable_pairs(field)
    for eta, sigma in pairs[:5]:
        check_cancellation(field, eta, sigma)
    # run the chain of first cancellations to exhaustion as well
    while pairs:
        _, field = check_cancellation(field, *pairs[0])
        pairs = find_cancellable_pairs(field)


def test_cancellation_chain_on_m6():
    cplx = complex_of(6)
    for seed in range(10):
        field = random_acyclic_field(cplx, seed, density=0.7)
        pairs = find_cancellable_pairs(field)
        while pairs:
            _, field = check_cancellation(field, *pairs[0])
            pairs = find_cancellable_pairs(field)


def test_reversal_is_an_involution(m5):
    for seed in range(50):
        field = random_acyclic_field(m5, seed, density=0.5)
        for eta, sigma in find_cancellable_pairs(field)[:3]:
            (path,) = paths_between(field, eta, sigma)
            out = reverse_path(field, path)
            c = path.cells
            new = [(c[0], eta)] + [(c[i + 2], c[i + 1]) for i in range(0, len(c) - 1, 2)]
            assert set(new) <= set(out.pairs)
            back = out.with_pairs(remove=new, add=path.pairs())
            assert back == field and back.fingerprint() == field.fingerprint()


def test_forced_reversal_of_non_unique_path_can_close_a_cycle(m5):
    cyclic = 0
    for seed in range(300):
        field = random_acyclic_field(m5, seed, density=0.5)
        for eta in m5.cells[1]:
            if not field.is_critical(eta):
                continue
            for sigma, k in path_endpoints(field, eta).items():
                if k >= 2:
                    for path in paths_between(field, eta, sigma):
                        cyclic += not is_acyclic(reverse_path(field, path))
                    with pytest.raises(NonUniquePathError):
                        cancel_pair(field, eta, sigma)
    assert cyclic > 0


def test_cancel_errors(m5):
    eta, sigma = parse_cell("1-2,3-4"), parse_cell("1-5")
    field = empty_field(m5)
    with pytest.raises(NoPathError):
        cancel_pair(field, eta, sigma)
    with pytest.raises(CancellationError):
        cancel_pair(field, parse_cell("1-2"), parse_cell("1-3"))
    paired = add_pair(field, parse_cell("1-5"), parse_cell("1-5,2-3"))
    with pytest.raises(NotCriticalError):
        cancel_pair(paired, eta, parse_cell("1-5"))
    out = cancel_pair(field, eta, parse_cell("1-2"))
    assert out.partner(parse_cell("1-2")) == eta


def test_find_cancellable_pairs_is_sorted(m5):
    for seed in range(30):
        field = random_acyclic_field(m5, seed, density=0.5)
        pairs = find_cancellable_pairs(field)
        assert pairs == sorted(pairs, key=lambda es: (len(es[1]), es[0], es[1]))
        for eta, sigma in pairs:
            assert path_endpoints(field, eta)[sigma] == 1


def test_log_line(m5):
    field = empty_field(m5)
    eta, sigma = parse_cell("1-2,3-4"), parse_cell("3-4")
    (path,) = paths_between(field, eta, sigma)
    assert log_line(eta, sigma, path) == "cancel p=0 eta=1-2,3-4 sigma=3-4 path_len=0"


def test_simultaneous_on_empty_field(m5):
    field = empty_field(m5)
    e1, e2 = parse_cell("1-2,3-4"), parse_cell("1-3,4-5")
    s1, s2 = parse_cell("1-2"), parse_cell("4-5")
    plan = check_simultaneous(field, [e1, e2], [s1, s2])
    assert plan.bijection == {e1: s1, e2: s2}
    out = apply_plan(field, plan)
    assert out.critical_vector() == (8, 13)
    with pytest.raises(StalePlanError):
        apply_plan(out, plan)


def test_cycle_of_trivial_paths_is_ambiguous(m5):
    import networkx as nx

    g = nx.Graph()
    for edge in m5.cells[1]:
        g.add_edge(*m5.facets(edge))
    cycle = nx.cycle_basis(g)[0]
    edges = [tuple(sorted(a + b)) for a, b in zip(cycle, cycle[1:] + cycle[:1])]
    field = empty_field(m5)
    with pytest.raises(AmbiguousBijectionError):
        check_simultaneous(field, edges, cycle)
    # dropping one vertex of the cycle leaves a path, so some sub-plan is unique
    plan = check_simultaneous(field, edges[:-1], cycle[1:])
    assert len(plan) == len(cycle) - 1


def test_infeasible_and_malformed_plans(m5):
    field = empty_field(m5)
    e1, e2 = parse_cell("1-2,3-4"), parse_cell("1-2,3-5")
    with pytest.raises(InfeasiblePlanError):
        check_simultaneous(field, [e1, e2], [parse_cell("1-2"), parse_cell("4-5")])
    with pytest.raises(CancellationError):
        check_simultaneous(field, [e1], [parse_cell("1-2"), parse_cell("3-4")])
    with pytest.raises(CancellationError):
        check_simultaneous(field, [e1, e1], [parse_cell("1-2"), parse_cell("3-4")])


def test_search_plans_yields_valid_plans(m5):
    for seed in range(40):
        field = random_acyclic_field(m5, seed, density=0.5)
        for plan, _ in zip(search_plans(field, 3), range(5)):
            out = apply_plan(field, plan)
            assert is_acyclic(out)
            k = len(plan)
            before, after = field.critical_vector(), out.critical_vector()
            assert before[0] - after[0] == k and before[1] - after[1] == k


def test_empty_plan_is_identity(m5):
    field = random_acyclic_field(m5, 1, density=0.5)
    plan = check_simultaneous(field, [], [])
    assert len(plan) == 0 and apply_plan(field, plan) == field


def test_single_pair_plan_matches_cancel_pair(m5):
    for seed in range(60):
        field = random_acyclic_field(m5, seed, density=0.5)
        for eta, sigma in find_cancellable_pairs(field)[:3]:
            plan = check_simultaneous(field, [eta], [sigma])
            assert apply_plan(field, plan) == cancel_pair(field, eta, sigma)
