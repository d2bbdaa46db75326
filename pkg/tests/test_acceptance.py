"""Acceptance criteria 1-8, one test each."""

import random
import time

import networkx as nx

from morsematch import F_STAR_CELLS as S, f_star_field
from morsematch.cancellation import check_simultaneous, find_cancellable_pairs
from morsematch.cli import main
from morsematch.gvf import is_acyclic, path_endpoints
from morsematch.homology import homology_of, morse_boundary, simplicial_homology
from morsematch.optimizer import (
    OPTIMAL,
    SearchConfig,
    dumps_certificate,
    optimize,
    read_certificate,
    verify_certificate,
)

from conftest import complex_of
from oracles import as_sets, brute_matchings, random_acyclic_field
from test_cancellation import check_cancellation


def test_criterion_1_f_vector(tmp_path, capsys):
    oracle = brute_matchings(7)
    by_size = [sum(len(m) == k for m in oracle) for k in (1, 2, 3)]
    t0 = time.perf_counter()
    assert main(["build", "-n", "7", "--out", str(tmp_path / "M7.complex")]) == 0
    elapsed = time.perf_counter() - t0
    assert capsys.readouterr().out.strip() == "f = (21, 105, 105), chi = 21"
    assert by_size == [21, 105, 105]
    assert {as_sets(c) for c in complex_of(7)} == oracle
    assert elapsed < 1.0


def test_criterion_2_homology(tmp_path, capsys):
    path = tmp_path / "M7.complex"
    main(["build", "-n", "7", "--out", str(path)])
    capsys.readouterr()
    t0 = time.perf_counter()
    assert main(["homology", str(path)]) == 0
    assert time.perf_counter() - t0 < 30.0
    assert capsys.readouterr().out.strip() == "H_0=Z, H_1=Z/3, H_2=Z^20; lower_bounds=(1,1,21)"


def test_criterion_3_theorem(tmp_path, capsys):
    path = tmp_path / "M7.complex"
    cert_path = tmp_path / "M7.cert"
    main(["build", "-n", "7", "--out", str(path)])
    t0 = time.perf_counter()
    code = main(["optimize", str(path), "--out", str(cert_path)])
    assert time.perf_counter() - t0 < 300.0
    assert code == 0
    cert = read_certificate(cert_path)
    assert cert.config.max_restarts == 1000
    assert cert.verdict == OPTIMAL and cert.critical == (1, 1, 21)
    assert verify_certificate(complex_of(7), cert)


def test_criterion_4_topology_preservation():
    for n in (4, 5, 6, 7):
        cplx = complex_of(n)
        field = optimize(cplx).field(cplx)
        assert homology_of(morse_boundary(field)) == simplicial_homology(cplx)
    for n in (4, 5):
        cplx = complex_of(n)
        target = simplicial_homology(cplx)
        for seed in range(100):
            field = random_acyclic_field(cplx, f"{n}-{seed}", density=random.Random(seed).random())
            assert is_acyclic(field)
            assert homology_of(morse_boundary(field)) == target


def test_criterion_5_cancellation_bookkeeping():
    cplx = complex_of(5)
    checked = 0
    for seed in range(500):
        field = random_acyclic_field(cplx, f"bookkeeping-{seed}", density=0.5)
        for eta, sigma in find_cancellable_pairs(field):
            check_cancellation(field, eta, sigma)
            checked += 1
    assert checked > 500


def test_criterion_6_fixture_paths():
    f = f_star_field(complex_of(7))
    assert path_endpoints(f, S["eta1"]) == {S["sigma4"]: 1, S["sigma1"]: 1}
    assert path_endpoints(f, S["eta2"]) == {S["sigma2"]: 1, S["sigma3"]: 1}
    assert path_endpoints(f, S["eta3"])[S["sigma4"]] == 0
    plan = check_simultaneous(
        f, [S["eta1"], S["eta2"], S["eta3"]], [S["sigma4"], S["sigma3"], S["sigma1"]]
    )
    assert plan.bijection == {S["eta1"]: S["sigma4"], S["eta2"]: S["sigma3"], S["eta3"]: S["sigma1"]}


def test_criterion_7_small_instances():
    m3, m4, m5 = complex_of(3), complex_of(4), complex_of(5)
    assert simplicial_homology(m3).compact() == "H_0=Z^3"
    assert optimize(m3).critical == (3,)
    assert simplicial_homology(m4).compact() == "H_0=Z^3, H_1=0"
    assert optimize(m4).critical == (3, 0)
    g = nx.Graph([tuple(m5.facets(e)) for e in m5.cells[1]])
    assert g.number_of_nodes() == 10 and g.number_of_edges() == 15
    assert {d for _, d in g.degree()} == {3}
    assert optimize(m5).critical == (1, 6)


def test_criterion_8_determinism():
    cplx = complex_of(7)
    cfg = SearchConfig(seed=2024)
    runs = [dumps_certificate(optimize(cplx, cfg, workers=w)) for w in (1, 1, 2, 3)]
    assert len(set(runs)) == 1
