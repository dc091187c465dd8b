import io

import pytest

from orbitforge.repro import (
    build,
    claim1_rows,
    claim2_closed_form,
    claim2_rows,
    ex52_rows,
    final_z_rows,
    run_experiment,
    write_csv,
)


def test_claim1_rows_within_bounds():
    for r in claim1_rows(range(2, 8), 8):
        assert r["within_bounds"] and r["witness_exact"]


def test_claim2_rows_match_closed_form():
    for r in claim2_rows(range(2, 9), (1.0, 2.0), 8):
        assert r["integral_p"] == pytest.approx(r["closed_form"], rel=1e-12)
        assert r["integral_p"] >= r["lower_bound"]
    assert claim2_closed_form(3, 1) == pytest.approx(0.5625)


def test_ex52_rows():
    rows = {(r["weight"], r["criterion"], r["gamma"]): r for r in ex52_rows()}
    assert rows[("ex52_v1", "salas_hypercyclic", "-")]["verdict"] == "fails_certified"
    assert rows[("ex52_v1", "pointwise_gamma", "all")]["verdict"] == "holds_certified"
    assert rows[("ex52_v2", "pointwise_gamma", "zero_to_one")]["verdict"] == "holds_certified"
    assert rows[("ex52_v1", "greedy_plan", "grid:pow2:40")]["verdict"] == "plan_found"


def test_final_z_rows():
    rows = final_z_rows()
    assert rows[0]["verdict"] == "holds_certified" and rows[1]["verdict"] == "fails_certified"
    m = {r["check"]: r for r in rows[2:]}
    assert m["m_bound(s=-1)"]["value"] == 0.5 and m["m_bound(s=1)"]["verdict"] == "infinite"


def test_csv_is_deterministic():
    cols, rows = run_experiment("final_z")
    a, b = io.StringIO(), io.StringIO()
    write_csv(cols, rows, a)
    write_csv(*run_experiment("final_z"), b)
    assert a.getvalue() == b.getvalue()
    assert a.getvalue().splitlines()[0] == ",".join(cols)


def test_unknown_names():
    with pytest.raises(ValueError):
        build("nope")
    with pytest.raises(ValueError):
        run_experiment("nope")
