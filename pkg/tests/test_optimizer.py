import dataclasses
import functools

import pytest

from morsematch.gvf import is_acyclic
from morsematch.homology import homology_of, morse_boundary, simplicial_homology
from morsematch.optimizer import (
    EXHAUSTED,
    LEX,
    OPTIMAL,
    CertificateError,
    SearchConfig,
    dumps_certificate,
    initial_field,
    loads_certificate,
    optimize,
    read_certificate,
    run_restart,
    verify_certificate,
    write_certificate,
)

from conftest import complex_of


@functools.lru_cache(maxsize=None)
def certificate(n, **kw):
    return optimize(complex_of(n), SearchConfig(**kw))


@pytest.mark.parametrize(
    "n,vector", [(3, (3,)), (4, (3, 0)), (5, (1, 6)), (6, (1, 16, 0)), (7, (1, 1, 21))]
)
def test_optimizer_reaches_bounds(n, vector):
    cert = certificate(n)
    assert cert.verdict == OPTIMAL and cert.optimal
    assert cert.critical == vector == cert.bounds
    assert verify_certificate(complex_of(n), cert)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_optimizer_output_preserves_homology(n):
    cplx = complex_of(n)
    field = certificate(n).field(cplx)
    assert is_acyclic(field)
    assert homology_of(morse_boundary(field)) == simplicial_homology(cplx)


@pytest.mark.parametrize("strategy", ["lex", "random"])
def test_both_strategies_on_m5(strategy):
    cert = certificate(5, strategy=strategy)
    assert cert.critical == (1, 6)
    assert cert.config.strategy in (LEX, "random")


def test_initial_field_is_acyclic_and_seeded():
    cplx = complex_of(6)
    cfg = SearchConfig(seed=7)
    fields = [initial_field(cplx, cfg, r) for r in range(5)]
    assert all(is_acyclic(f) for f in fields)
    assert initial_field(cplx, cfg, 3) == fields[3]
    assert len({f.fingerprint() for f in fields}) > 1
    lex = SearchConfig(strategy="lex")
    assert initial_field(cplx, lex, 0) == initial_field(cplx, lex, 9)


def test_restart_never_increases_critical_counts(monkeypatch):
    monkeypatch.setenv("MORSE_DEBUG_ASSERT", "1")
    cplx = complex_of(6)
    bounds = (1, 16, 0)
    for r in range(5):
        vector, field, log = run_restart(cplx, SearchConfig(seed=3), bounds, r)
        assert field.critical_vector() == vector
        assert all(line.startswith("cancel p=") for line in log)


def test_zero_budget_is_exhausted():
    cplx = complex_of(5)
    cert = optimize(cplx, SearchConfig(max_restarts=0))
    assert cert.verdict == EXHAUSTED and cert.restart is None
    assert cert.critical == (10, 15)
    assert verify_certificate(cplx, cert)


def test_no_cancellations_allowed():
    cplx = complex_of(6)
    cert = optimize(cplx, SearchConfig(max_restarts=3, max_cancellations=0, strategy="lex"))
    assert cert.log == []
    assert verify_certificate(cplx, cert)


@pytest.mark.parametrize("kw", [{"strategy": "best"}, {"seed": -1}, {"max_restarts": -1}, {"max_plan_size": 9}])
def test_bad_config(kw):
    with pytest.raises(ValueError):
        SearchConfig(**kw)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_certificate_round_trip(n, tmp_path):
    cert = certificate(n)
    text = dumps_certificate(cert)
    back = loads_certificate(text)
    assert dumps_certificate(back) == text
    assert verify_certificate(complex_of(n), back)
    write_certificate(cert, tmp_path / "c.cert")
    assert dumps_certificate(read_certificate(tmp_path / "c.cert")) == text


def test_certificate_sections():
    text = dumps_certificate(certificate(7))
    for name in ("[meta]", "[critical]", "[pairs]", "[log]", "[homology]", "[verdict]"):
        assert name in text
    assert "vector = (1, 1, 21)" in text and "target = (1, 1, 21)" in text
    assert "H_1 = Z/3" in text and text.rstrip().endswith("optimal")


def test_tampered_certificate_deleted_pair():
    cplx = complex_of(7)
    cert = certificate(7)
    bad = dataclasses.replace(cert, pairs=cert.pairs[1:])
    assert not verify_certificate(cplx, bad)
    text = dumps_certificate(cert)
    first = next(line for line in text.splitlines() if "=>" in line)
    assert not verify_certificate(cplx, loads_certificate(text.replace(first + "\n", "", 1)))


def swaps(cplx, field, tau, sigma):
    """Pairs that could replace (tau, sigma) using one still-critical cell."""
    for other in cplx.cofacets(tau):
        if other != sigma and field.is_critical(other):
            yield tau, other
    for other in cplx.facets(sigma):
        if other != tau and field.is_critical(other):
            yield other, sigma


@pytest.mark.parametrize("n", [6, 7])
def test_tampered_certificate_closed_vpath(n):
    cplx = complex_of(n)
    cert = certificate(n)
    field = cert.field(cplx)
    for i, (tau, sigma) in enumerate(cert.pairs):
        for new in swaps(cplx, field, tau, sigma):
            if not is_acyclic(field.with_pairs(remove=[(tau, sigma)], add=[new])):
                pairs = list(cert.pairs)
                pairs[i] = new
                assert not verify_certificate(cplx, dataclasses.replace(cert, pairs=pairs))
                return
    pytest.fail("no single pair swap closes a V-path")


def test_tampered_verdict_and_homology():
    cplx = complex_of(7)
    cert = certificate(7)
    assert not verify_certificate(cplx, dataclasses.replace(cert, verdict=EXHAUSTED))
    text = dumps_certificate(cert).replace("H_1 = Z/3", "H_1 = 0")
    assert not verify_certificate(cplx, loads_certificate(text))
    assert not verify_certificate(complex_of(6), cert)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: t.replace("[verdict]", "[verdict-x]"),
        lambda t: t.replace("[log]\n", ""),
        lambda t: "junk\n" + t,
        lambda t: t.replace("seed = 0", "seed = x"),
        lambda t: t.replace("optimal", "maybe"),
        lambda t: t.replace("=>", "->", 1),
        lambda t: t.replace("vector = (1, 1, 21)", "vector = 1, 1, 21"),
    ],
)
def test_malformed_certificate(mutate):
    with pytest.raises(CertificateError):
        loads_certificate(mutate(dumps_certificate(certificate(7))))


def test_determinism_across_runs_and_workers():
    cplx = complex_of(6)
    cfg = SearchConfig(seed=11)
    a = dumps_certificate(optimize(cplx, cfg))
    b = dumps_certificate(optimize(cplx, cfg))
    c = dumps_certificate(optimize(cplx, cfg, workers=2))
    assert a == b == c
    other = dumps_certificate(optimize(cplx, SearchConfig(seed=12)))
    assert "seed = 12" in other
