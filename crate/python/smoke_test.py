"""Smoke test for the blocking_billiards extension module.

Build it with `maturin develop -m crates/py/Cargo.toml`, or copy
target/debug/libblocking_billiards.so to blocking_billiards.so somewhere on
PYTHONPATH, then run `python python/smoke_test.py`.
"""

import json
import math
from fractions import Fraction

import blocking_billiards as bb


def check_field():
    f = bb.Field(2, 0)
    a = f.alpha()
    assert a * a == 2
    assert (a - 1) * (a + 1) == 1
    assert 1 / (a - 1) == a + 1
    assert a.floor() == 1 and (-a).floor() == -2
    assert abs(float(a) - math.sqrt(2)) < 1e-15
    assert a.to_decimal(5) == "1.41421"
    assert f.element(Fraction(1, 3), "-2/5").s == "-2/5"
    assert f.element(1, 1).norm() == "-1"
    assert 1 < a < 2
    big = f.element(3, 2)
    for _ in range(20):
        big = big * big - big
    assert big.sign() in (-1, 1)
    try:
        bb.Field(4, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("x^2 = 4 must be rejected")
    golden = bb.Field(1, 1).alpha()
    assert golden * golden == golden + 1


def check_table():
    t = bb.Table()
    f = t.field
    a = f.alpha()
    vs = t.vertices
    assert len(vs) == 8
    assert vs[0][0] == -a and vs[0][1] == -1
    assert t.origin[0] == 0 and t.target[1] == 2
    assert t.contains((f.element(0), f.element(1))) == "inside"
    again = bb.Table.from_json(t.to_json())
    assert again.vertices[4][1] == 3
    try:
        bb.Table(l1=1)
    except ValueError:
        pass
    else:
        raise AssertionError("l1 = 1 must be rejected")


def check_family():
    t = bb.Table()
    a = t.field.alpha()
    fam = t.approximants(10)
    assert [(i.p, i.q) for i in fam[:4]] == [(1, 1), (2, 2), (4, 3), (5, 4)]
    assert fam[3].lam == 5 - 4 * a
    reports = t.verify(30)
    assert len(reports) == 31 and all(r.ok for r in reports)
    for r in reports:
        assert r.lower_bounces == r.q and r.upper_bounces == r.p
    g0 = t.gamma(0)
    assert g0.status == "reached_target" and len(g0) == 2
    assert g0.terminal == (t.field.element(0), t.field.element(2))
    assert g0.passes_through((a - 1, t.field.element(1)))
    assert len(g0.unfold()) == 4
    assert json.loads(g0.to_json())["status"] == "reached_target"


def check_trace():
    t = bb.Table()
    f = t.field
    straight = t.trace(t.origin, (f.element(0), f.element(1)))
    assert len(straight) == 0 and straight.status == "reached_target"
    try:
        t.trace(t.origin, (f.alpha(), f.element(1)))
    except bb.CornerHitError:
        pass
    else:
        raise AssertionError("the path to (alpha, 1) ends in a corner")


def check_blocking():
    t = bb.Table()
    f = t.field
    a = f.alpha()
    one = f.element(1)
    assert t.evade([]).witness_n == 0
    blocked = t.evade([(a - 1, one)])
    assert blocked and blocked.witness_n == 1
    assert blocked.trajectory.status == "reached_target"
    crossings = [(a - 1, one), (2 - 2 * a, one), (3 * a - 4, one), (5 - 4 * a, one)]
    exhausted = t.evade(crossings, n_max=3)
    assert not exhausted and exhausted.checked_up_to == 3
    assert exhausted.hit_tallies == [1, 1, 1, 1]
    try:
        t.evade([t.origin])
    except ValueError:
        pass
    else:
        raise AssertionError("O cannot be a blocker")
    assert t.hit_indices((a - 1, one), 10)[0] == 0
    eps, k = t.folding_witness(0, (a - 1, one))
    assert eps in (-1, 1)
    lam0 = t.approximants(0)[0]
    x = eps * (lam0.p + lam0.q * a) + 2 * k * a
    assert x == a - 1
    pts = t.random_blocking_set(6, seed=3)
    assert pts == t.random_blocking_set(6, seed=3)
    assert t.evade(pts, n_max=200)


def check_render():
    t = bb.Table()
    for what in ("table", "gamma", "unfolded"):
        svg = t.render(what, index=2, digits=6)
        assert svg.lstrip().startswith("<?xml") and "</svg>" in svg


def main():
    for check in (check_field, check_table, check_family, check_trace, check_blocking, check_render):
        check()
        print(f"ok  {check.__name__}")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
