"""Nodal domain computation against hand cases, invariants, and the oracle."""

import io
import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from graphnodal import (
    Graph,
    SignedFunction,
    brute_force_domains,
    nodal_summary,
    strong_nodal_domains,
    weak_nodal_domains,
    substream,
)
from graphnodal.nodal import summary_dict, write_domains_csv, write_summary_json


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def sf(values, tau=0.0):
    return SignedFunction.from_values(values, tau)


def test_signed_function_basics():
    f = sf([1.0, -0.5, 0.0])
    assert f.signs.tolist() == [1, -1, 0]
    assert len(f) == 3
    # default tau scales with the sup norm: 1e-9 * 2 here
    g = SignedFunction.from_values([2.0, 1e-10, -1.0])
    assert g.signs.tolist() == [1, 0, -1]
    with pytest.raises(ValueError):
        SignedFunction.from_values([np.inf])
    with pytest.raises(ValueError):
        SignedFunction.from_values([1.0], tau=-1.0)
    with pytest.raises(ValueError):
        SignedFunction.from_values([[1.0, 2.0]])


def test_path_with_interior_zero():
    # (1, 0, -1) on a path: the zero belongs to both weak domains
    g = path(3)
    f = sf([1.0, 0.0, -1.0])
    weak = weak_nodal_domains(g, f)
    assert weak.domains == (((0, 1), 1), ((1, 2), -1))
    strong = strong_nodal_domains(g, f)
    assert strong.domains == (((0,), 1), ((2,), -1))


def test_single_edge_two_domains():
    g = Graph.from_edges(2, [(0, 1)])
    f = sf([1.0, -1.0])
    assert weak_nodal_domains(g, f).count == 2
    assert strong_nodal_domains(g, f).count == 2


def test_constant_sign_one_domain():
    g = cycle(6)
    f = sf([0.5, 1.0, 2.0, 0.25, 1.5, 3.0])
    assert weak_nodal_domains(g, f).domains == (((0, 1, 2, 3, 4, 5), 1),)
    assert strong_nodal_domains(g, f).count == 1


def test_identically_zero_function():
    # f = 0: one weak domain per connected component, sign 0; no strong domains
    g = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    f = sf([0.0] * 5)
    weak = weak_nodal_domains(g, f)
    assert weak.domains == (((0, 1, 2), 0), ((3, 4), 0))
    assert strong_nodal_domains(g, f).count == 0


def test_alternating_cycle():
    # 5-cycle with values (1,-1,1,-1,1): vertices 4,0 are adjacent and both
    # positive, so there are 4 strong domains, not 5
    g = cycle(5)
    f = sf([1.0, -1.0, 1.0, -1.0, 1.0])
    strong = strong_nodal_domains(g, f)
    assert strong.count == 4
    assert weak_nodal_domains(g, f).count == 4


def test_zero_block_absorbed_not_separate():
    # (0, 1) on an edge: {0,1} is connected with no opposite strict signs, so
    # the lone zero vertex is not a maximal set and there is exactly 1 domain
    g = Graph.from_edges(2, [(0, 1)])
    f = sf([0.0, 1.0])
    weak = weak_nodal_domains(g, f)
    assert weak.domains == (((0, 1), 1),)
    # same on a path (0, 0, -1): the zero block joins the negative side
    f2 = sf([0.0, 0.0, -1.0])
    assert weak_nodal_domains(path(3), f2).domains == (((0, 1, 2), -1),)


def test_isolated_zero_component_counted_once():
    # vertex 2 is isolated with f = 0: it is its own weak domain, sign 0
    g = Graph.from_edges(3, [(0, 1)])
    f = sf([1.0, -2.0, 0.0])
    weak = weak_nodal_domains(g, f)
    assert weak.domains == (((0,), 1), ((1,), -1), ((2,), 0))


def test_zero_bridging_same_sign():
    # (1, 0, 1) on a path: one weak domain covering everything
    f = sf([1.0, 0.0, 1.0])
    assert weak_nodal_domains(path(3), f).domains == (((0, 1, 2), 1),)


def test_summary_two_sided_path():
    g = path(5)
    f = sf([1.0, 0.0, -1.0, 1.0, 1.0])
    s = nodal_summary(g, f)
    # weak domains: {0,1}+, {1,2}-, {3,4}+; the positive part is the larger
    # positive domain {3,4}, the negative part {1,2}, leaving 0 exceptional
    assert s.positive_part == (3, 4)
    assert s.negative_part == (1, 2)
    assert s.exceptional == (0,)
    assert s.zeros == (1,)
    assert s.weak_count == 3 and s.strong_count == 3
    assert s.exceptional_zeros == 0
    d = summary_dict(s)
    assert d == {
        "P_size": 2, "N_size": 2, "E_size": 1, "Z_size": 1,
        "weak_count": 3, "strong_count": 3, "E_cap_Z": 0,
    }


def test_summary_clean_two_domain_case():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    f = sf([1.0, 1.0, -1.0, -1.0])
    s = nodal_summary(g, f)
    assert s.positive_part == (0, 1)
    assert s.negative_part == (2, 3)
    assert s.exceptional == () and s.zeros == ()
    assert s.weak_count == 2 and s.strong_count == 2


def test_summary_tie_breaks_prefer_strict_then_smallest():
    # two positive domains of equal size: {0,1} has 2 strict vertices,
    # {3,4} has 2 as well, so the smallest-vertex rule picks {0,1}
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    f = sf([1.0, 1.0, -1.0, 1.0, 1.0])
    s = nodal_summary(g, f)
    assert s.positive_part == (0, 1)
    assert s.negative_part == (2,)


def test_summary_all_zero():
    g = path(3)
    s = nodal_summary(g, sf([0.0, 0.0, 0.0]))
    # the single sign-0 domain qualifies for both parts
    assert s.positive_part == (0, 1, 2)
    assert s.negative_part == (0, 1, 2)
    assert s.exceptional == ()
    assert s.exceptional_zeros == 0


def test_function_length_mismatch():
    with pytest.raises(ValueError):
        weak_nodal_domains(path(3), sf([1.0, 2.0]))


def test_brute_force_guards():
    g = path(3)
    with pytest.raises(ValueError):
        brute_force_domains(g, sf([1.0, 0.0, -1.0]), "medium")
    with pytest.raises(ValueError):
        brute_force_domains(path(21), sf([1.0] * 21), "weak")


def random_instance(gen, max_n=8):
    n = int(gen.integers(1, max_n + 1))
    pairs = list(itertools.combinations(range(n), 2))
    edges = [e for e in pairs if gen.random() < 0.45]
    g = Graph.from_edges(n, edges)
    # rational values with a heavy atom at zero to exercise tau=0 sign logic
    values = [float(Fraction(int(gen.integers(-2, 3)), int(gen.integers(1, 4)))) for _ in range(n)]
    return g, sf(values)


def test_matches_brute_force_oracle():
    gen = substream(2718, "oracle").generator()
    for _ in range(50):
        g, f = random_instance(gen)
        for kind, fast in (("weak", weak_nodal_domains), ("strong", strong_nodal_domains)):
            assert fast(g, f).domains == brute_force_domains(g, f, kind).domains


def test_randomized_invariants():
    gen = substream(99, "inv").generator()
    for _ in range(60):
        g, f = random_instance(gen, max_n=10)
        weak = weak_nodal_domains(g, f)
        strong = strong_nodal_domains(g, f)
        n_strict = int(np.count_nonzero(f.signs))

        # weak domains cover every vertex; strong cover exactly the strict ones
        covered = set().union(*(set(v) for v, _ in weak.domains)) if weak.domains else set()
        assert covered == set(range(g.n))
        strong_cover = set().union(*(set(v) for v, _ in strong.domains)) if strong.domains else set()
        assert strong_cover == {v for v in range(g.n) if f.signs[v] != 0}
        assert sum(len(v) for v, _ in strong.domains) == n_strict

        # every strong domain grows into exactly one weak domain of the same
        # sign when the zero vertices are added back
        for verts, sign in strong.domains:
            assert any(set(verts) <= set(wv) and sign == ws for wv, ws in weak.domains)

        # sign-0 weak domains only arise as fully zero components: no
        # neighbor of such a domain carries a strict sign
        for verts, sign in weak.domains:
            if sign == 0:
                for v in verts:
                    assert all(f.signs[w] == 0 for w in g.adjacency[v])

        # flipping f negates domain signs but keeps the vertex sets
        flipped = sf((-f.values).tolist())
        wflip = weak_nodal_domains(g, flipped)
        assert {(v, -s) for v, s in weak.domains} == set(wflip.domains)

        # no zeros: weak and strong coincide
        if (f.signs != 0).all():
            assert weak.domains == strong.domains


def test_domains_csv_format():
    g = path(3)
    buf = io.StringIO()
    write_domains_csv(weak_nodal_domains(g, sf([1.0, 0.0, -1.0])), buf)
    assert buf.getvalue() == "weak,+,2,0;1\nweak,-,2,1;2\n"


def test_summary_json_format():
    g = path(3)
    buf = io.StringIO()
    write_summary_json(nodal_summary(g, sf([1.0, 0.0, -1.0])), buf)
    parsed = json.loads(buf.getvalue())
    assert parsed == {
        "P_size": 2, "N_size": 2, "E_size": 0, "Z_size": 1,
        "weak_count": 2, "strong_count": 2, "E_cap_Z": 0,
    }
    # keys come out sorted for byte-stable files
    body = buf.getvalue()
    assert body.index('"E_cap_Z"') < body.index('"E_size"') < body.index('"N_size"')
