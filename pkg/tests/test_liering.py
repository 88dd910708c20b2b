"""Ring construction, validation, series, and the bundled catalog."""

import json

import pytest

from rfgrowth.errors import DomainError
from rfgrowth.lattice import Lattice
from rfgrowth.liering import (
    LieRing,
    catalog,
    catalog_names,
    heisenberg_lr,
    load_ring,
    ring_from_dict,
)


def test_catalog_all_valid():
    for name in catalog_names():
        concrete = "abelian_3" if name == "abelian_k" else name
        ring = catalog(concrete)
        assert ring.name == concrete
        ring.validate()


def test_catalog_unknown():
    with pytest.raises(DomainError) as exc:
        catalog("borel_7")
    assert exc.value.reason == "unknown-ring"


def test_bracket_bilinear_antisymmetric():
    L = catalog("heisenberg_3")
    assert L.bracket([1, 0, 0], [0, 1, 0]) == [0, 0, 1]
    assert L.bracket([0, 1, 0], [1, 0, 0]) == [0, 0, -1]
    assert L.bracket([2, 3, 0], [4, 5, 0]) == [0, 0, 2 * 5 - 3 * 4]
    assert L.bracket([1, 0, 0], [1, 0, 0]) == [0, 0, 0]


def test_jacobi_violation_rejected():
    with pytest.raises(DomainError) as exc:
        LieRing.build(3, {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]})
    assert exc.value.reason == "jacobi"


def test_non_nilpotent_rejected():
    # [e1, e2] = e2 makes the series stall at span{e2}
    with pytest.raises(DomainError) as exc:
        LieRing.build(2, {(0, 1): [0, 1]})
    assert exc.value.reason == "not-nilpotent"


def test_lcs_heisenberg():
    L = catalog("heisenberg_3")
    lcs = L.lower_central_series()
    assert lcs.nclass == 2
    assert lcs.layer(1) == Lattice.full(3)
    assert lcs.layer(2).basis == ((0, 0, 1),)
    assert lcs.layer(3).rank == 0
    assert L.nilpotency_class == 2


def test_lcs_filiform_depth():
    L = catalog("filiform_4")
    lcs = L.lower_central_series()
    assert lcs.nclass == 3
    assert lcs.layer(2).basis == ((0, 0, 1, 0), (0, 0, 0, 1))
    assert lcs.layer(3).basis == ((0, 0, 0, 1),)


def test_saturated_layer_fills_scaling():
    # derived subring is 2*span{e3}; its saturation is span{e3}
    L = heisenberg_lr()
    lcs = L.lower_central_series()
    assert lcs.layer(2).basis == ((0, 0, 2),)
    assert lcs.saturated_layer(2).basis == ((0, 0, 1),)


def test_derived_and_ideal_checks():
    L = catalog("heisenberg_3")
    der = L.derived()
    assert der.basis == ((0, 0, 1),)
    assert L.is_ideal(Lattice.full(3).scale(2))
    assert L.is_ideal(der)
    assert not L.is_ideal(Lattice.from_rows([[1, 0, 0]], 3))
    assert L.is_subring(Lattice.from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]], 3))
    assert not L.is_subring(Lattice.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 2]], 3))


def test_coordinate_triangular():
    assert catalog("heisenberg_3").is_coordinate_triangular()
    assert catalog("filiform_4").is_coordinate_triangular()
    assert catalog("free_nilp_2_3").is_coordinate_triangular()
    sideways = LieRing.build(3, {(0, 2): [0, 2, 0]})
    assert not sideways.is_coordinate_triangular()


def test_reduce_mod():
    L = catalog("heisenberg_3")
    A = L.reduce_mod(4)
    assert (A.prime, A.exponent, A.modulus) == (2, 2, 4)
    assert A.bracket_mod([1, 0, 0], [0, 3, 0]) == [0, 0, 3]
    with pytest.raises(DomainError):
        L.reduce_mod(6)
    with pytest.raises(DomainError):
        L.reduce_mod(1)


def test_ring_from_dict_roundtrip(tmp_path):
    doc = {
        "name": "h3-file",
        "rank": 3,
        "brackets": [[1, 2, [0, 0, 1]]],
    }
    ring = ring_from_dict(doc)
    assert ring.rank == 3
    assert ring.basis_bracket(0, 1) == (0, 0, 1)
    path = tmp_path / "ring.json"
    path.write_text(json.dumps(doc))
    loaded = load_ring(str(path))
    assert loaded.name == "h3-file"
    assert loaded.nilpotency_class == 2


def test_ring_from_dict_errors():
    with pytest.raises(DomainError):
        ring_from_dict({"rank": 2, "brackets": [[2, 1, [0, 0]]]})
    with pytest.raises(DomainError):
        ring_from_dict({"rank": 2, "brackets": [[1, 2, [0]]]})
    with pytest.raises(DomainError):
        ring_from_dict({"brackets": []})


def test_load_ring_sources(tmp_path):
    assert load_ring("heisenberg_5").rank == 5
    assert load_ring("heisenberg_lr").basis_bracket(0, 1) == (0, 0, 2)
    with pytest.raises(DomainError) as exc:
        load_ring("definitely_missing")
    assert exc.value.reason == "unknown-ring"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(DomainError) as exc:
        load_ring(str(bad))
    assert exc.value.reason == "bad-format"


def test_ring_hashable_and_equal():
    a = catalog("heisenberg_3")
    b = catalog("heisenberg_3")
    assert a == b
    assert hash(a) == hash(b)
    assert a != heisenberg_lr()
