import pytest

from infhecke.classification import lambda_ref_predicate, lambda_ref_shapes, lie_dim
from infhecke.groups import GroupParams
from infhecke.representations import Multipartition, orbit_representatives

from conftest import classification, group_data

MP = Multipartition.parse
GROUPS = [(1, 1, 3), (1, 1, 4), (1, 1, 5), (2, 1, 2), (2, 1, 3), (1, 2, 3), (1, 2, 4), (1, 3, 3),
          (1, 4, 3), (1, 3, 2), (1, 4, 2), (1, 6, 2), (2, 3, 2)]


def rec(res, label):
    return next(r for r in res.records if r.label == label)


@pytest.mark.parametrize("d,e,r,count", [(1, 3, 3, 2), (1, 4, 2, 4), (1, 1, 4, 2), (2, 1, 3, 4)])
def test_linear_character_count(d, e, r, count):
    data = group_data(d, e, r)
    assert len(data.linear) == count == 2 ** data.refl.num_classes
    assert data.linear_labels[0] == "1"
    assert "eps" in data.linear_labels


def test_reflection_rep_examples():
    s4 = classification(1, 1, 4)
    assert rec(s4, "([3,1])").is_reflection_rep
    assert rec(s4, "([2,2])").is_reflection_rep
    assert not rec(s4, "([2,1,1])").is_reflection_rep
    d4 = classification(1, 2, 4)
    assert rec(d4, "([3],[1])").is_reflection_rep
    g333 = classification(1, 3, 3)
    assert rec(g333, "([2],[1],[])").is_reflection_rep


def test_s4_approx_and_total():
    s4 = classification(1, 1, 4)
    assert rec(s4, "([3,1])").approx_class_id == rec(s4, "([2,1,1])").approx_class_id
    assert s4.prediction.total_dim == 12
    assert s4.prediction.center_dim == 1


@pytest.mark.parametrize("d,e,r", GROUPS)
def test_small_dims_in_qref(d, e, r):
    for x in classification(d, e, r).records:
        if x.dim in (2, 3):
            assert x.in_QRef, x.label


@pytest.mark.parametrize("d,e,r", [g for g in GROUPS if g[2] >= 3 and g[0] == 1])
def test_single_class_x_group(d, e, r):
    res = classification(d, e, r)
    for x in res.records:
        if x.dim > 1:
            assert x.X_group == [0]


@pytest.mark.parametrize("d,e,r", GROUPS)
def test_structural_invariants(d, e, r):
    res = classification(d, e, r)
    recs = res.records
    for x in recs:
        if x.in_QRef:
            assert x.in_LambdaRef
        if x.L_type == "orthogonal":
            assert x.dim % 2 == 0
    for block in res.classes:
        assert len({recs[i].in_LambdaRef for i in block}) == 1
        assert len({tuple(recs[i].X_group) for i in block}) == 1


def test_lambda_ref_examples():
    g225 = classification(1, 2, 5)
    assert rec(g225, "([3],[1,1])").in_LambdaRef
    for x in g225.records:
        if x.multipartition is not None and x.multipartition.support == 3:
            assert not x.in_LambdaRef
    s5 = classification(1, 1, 5)
    assert rec(s5, "([3,1,1])").in_LambdaRef
    assert lambda_ref_predicate(MP("([3],[1,1])"))
    assert not lambda_ref_predicate(MP("([2],[2],[1])"))


@pytest.mark.parametrize("d,e,r", [(1, 1, 5), (1, 2, 4), (1, 2, 5), (1, 3, 3), (1, 3, 4), (1, 4, 3)])
def test_lambda_ref_shapes(d, e, r):
    out = lambda_ref_shapes(classification(d, e, r))
    assert out["agree"], out


@pytest.mark.parametrize("e,r", [(2, 5), (3, 5), (2, 6), (4, 5)])
def test_no_dims_two_three_in_high_rank(e, r):
    for lam, A in orbit_representatives(GroupParams(1, e, r)):
        assert lam.dimension() // A not in (2, 3)


def test_lie_dim_formulas():
    assert lie_dim("linear", 3) == 8
    assert lie_dim("orthogonal", 4) == 6
    assert lie_dim("symplectic", 6) == 21
    with pytest.raises(ValueError):
        lie_dim("affine", 2)


def test_g443_symplectic():
    res = classification(1, 4, 3)
    x = rec(res, "([1],[1],[1],[])")
    assert (x.dim, x.L_type, x.predicted_dim) == (6, "symplectic", 21)
    assert res.prediction.total_dim == 49


def test_report_is_deterministic():
    import json

    a = json.dumps(classification(1, 2, 4).to_json())
    b = json.dumps(classification.__wrapped__(1, 2, 4).to_json())
    assert a == b
