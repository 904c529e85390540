"""Workloads: reference-op semantics, property health on reference ops,
mutant sanity (every bug observably changes behavior), generator shapes."""

import pytest

from stagegen.baseline import b_run
from stagegen.lower import c_run
from stagegen.rand import seed_of_u64
from stagegen.workloads import (
    MUTANTS,
    PROPERTIES,
    WORKLOADS,
    all_tasks,
    bst,
    get_workload,
    make_ops,
    property_input_gen,
)
from stagegen.workloads import stlc
from stagegen.workloads.registry import compiled_for, cons_to_list


def gen_values(workload, size, n, start_seed=0):
    g = get_workload(workload).make_baseline()
    return [b_run(g, size, seed_of_u64(start_seed + i)) for i in range(n)]


# ---------------------------------------------------------------------------
# BST reference ops


def test_insert_into_leaf():
    assert bst.insert(5, 9, bst.LEAF) == ("node", bst.LEAF, 5, 9, bst.LEAF)


def test_insert_replaces_value_on_equal_key():
    t = bst.insert(5, 1, bst.insert(5, 0, bst.LEAF))
    assert t == ("node", bst.LEAF, 5, 1, bst.LEAF)


def test_insert_preserves_validity_and_find():
    t = bst.LEAF
    import random
    rng = random.Random(42)
    model = {}
    for _ in range(300):
        k, v = rng.randrange(100), rng.randrange(100)
        t = bst.insert(k, v, t)
        model[k] = v
        assert bst.is_bst(t)
    for k, v in model.items():
        assert bst.find(k, t) == v
    assert bst.tree_size(t) == len(model)


def test_delete_removes_and_preserves_validity():
    t = bst.LEAF
    for k in (50, 20, 80, 10, 30, 70, 90, 25, 35):
        t = bst.insert(k, k, t)
    for k in (50, 10, 90, 25, 99):
        t2 = bst.delete(k, t)
        assert bst.is_bst(t2)
        assert bst.find(k, t2) is None
    assert bst.delete(7, bst.LEAF) == bst.LEAF


def test_union_prefers_left_values():
    t1 = bst.insert(5, 1, bst.insert(2, 1, bst.LEAF))
    t2 = bst.insert(5, 2, bst.insert(9, 2, bst.LEAF))
    u = bst.union(t1, t2)
    assert bst.is_bst(u)
    assert bst.find(5, u) == 1
    assert bst.find(2, u) == 1
    assert bst.find(9, u) == 2


def test_is_bst_rejects_disorder_and_duplicates():
    assert not bst.is_bst(("node", ("node", bst.LEAF, 9, 0, bst.LEAF), 5, 0, bst.LEAF))
    assert not bst.is_bst(("node", bst.LEAF, 5, 0, ("node", bst.LEAF, 5, 0, bst.LEAF)))


# ---------------------------------------------------------------------------
# STLC reference semantics


def test_typecheck_basics():
    ident = ("lam", stlc.TBASE, ("var", 0))
    assert stlc.typecheck([], ident) == ("tarrow", stlc.TBASE, stlc.TBASE)
    assert stlc.typecheck([], ("app", ident, ("const", 3))) == stlc.TBASE
    assert stlc.typecheck([], ("var", 0)) is None
    assert stlc.typecheck([], ("app", ("const", 1), ("const", 2))) is None


def test_step_beta_reduces():
    ident = ("lam", stlc.TBASE, ("var", 0))
    assert stlc.step(("app", ident, ("const", 3))) == ("const", 3)
    # reduce inside the function position first
    t = ("app", ("app", ("lam", stlc.TBASE, ("lam", stlc.TBASE, ("var", 1))),
                 ("const", 1)), ("const", 2))
    t1 = stlc.step(t)
    assert stlc.typecheck([], t1) == stlc.TBASE
    assert stlc.step(("const", 1)) is None
    assert stlc.step(ident) is None


def test_subst_shifting_under_binders():
    # (lam x. lam y. x) v  -->  lam y. v
    body = ("lam", stlc.TBASE, ("var", 1))
    v = ("const", 7)
    assert stlc.subst(body, 0, v) == ("lam", stlc.TBASE, ("const", 7))
    # inner variable untouched
    body2 = ("lam", stlc.TBASE, ("var", 0))
    assert stlc.subst(body2, 0, v) == body2


def test_preservation_holds_for_reference_ops():
    ops = make_ops()
    t = ("app", ("lam", ("tarrow", stlc.TBASE, stlc.TBASE), ("var", 0)),
         ("lam", stlc.TBASE, ("var", 0)))
    ty = stlc.typecheck([], t)
    stepped = ops["step"](t)
    assert stlc.typecheck([], stepped) == ty


# ---------------------------------------------------------------------------
# generator shapes


def test_bool_list_size_zero_empty_and_elements_boolean():
    for seed_val in range(30):
        assert cons_to_list(gen_values("bool_list", 0, 1, seed_val)[0]) == []
    for v in gen_values("bool_list", 12, 40):
        for x in cons_to_list(v):
            assert isinstance(x, bool)


def test_bool_list_bind_count_is_analytic():
    # three binds per element (size read, coin, tail) plus the final size read
    g = get_workload("bool_list").make_baseline()
    for seed_val in range(20):
        s = seed_of_u64(seed_val, instrument=True)
        v = b_run(g, 30, s)
        n = len(cons_to_list(v))
        assert s.bind_count == 3 * n + 1


def test_insert_based_trees_always_valid_and_size_zero_leaf():
    assert gen_values("bst_insert", 0, 1)[0] == bst.LEAF
    for t in gen_values("bst_insert", 25, 40):
        assert bst.is_bst(t)


def test_single_pass_size_zero_always_leaf():
    for t in gen_values("bst_single_pass", 0, 30):
        assert t == bst.LEAF


def test_single_pass_both_backends_same_tree_at_size_100():
    wl = get_workload("bst_single_pass")
    gb, cg = wl.make_baseline(), compiled_for(wl)
    vb = b_run(gb, 100, seed_of_u64(0))
    vs = c_run(cg, 100, seed_of_u64(0))
    assert vb == vs
    assert bst.tree_size(vb) > 10


def test_welltyped_terms_all_typecheck():
    for size in (0, 3, 20, 50):
        for t in gen_values("stlc_welltyped", size, 25, start_seed=size):
            assert stlc.typecheck([], t) is not None


def test_welltyped_size_zero_base_goal_is_const_or_var():
    # at size 0 a base-typed goal must close immediately
    for t in gen_values("stlc_welltyped", 0, 50):
        while t[0] == "lam":  # arrow goals force lambdas first
            t = t[2]
        assert t[0] in ("const", "var")


def test_derived_stlc_mostly_ill_typed_but_not_always():
    terms = gen_values("stlc_derived", 20, 300)
    typed = sum(1 for t in terms if stlc.typecheck([], t) is not None)
    assert 0 < typed < len(terms)


# ---------------------------------------------------------------------------
# properties against reference ops: no false alarms


@pytest.mark.parametrize("workload,prop_name,n", [
    ("bst_insert", "InsertValid", 2000),
    ("bst_insert", "InsertPost", 2000),
    ("bst_insert", "DeleteValid", 2000),
    ("bst_insert", "UnionValid", 500),
    ("bst_single_pass", "InsertValid", 1000),
    ("bst_derived", "DeleteValid", 1000),
    ("stlc_welltyped", "Preservation", 1000),
    ("stlc_welltyped", "Progress", 1000),
    ("stlc_derived", "Preservation", 1000),
])
def test_reference_ops_satisfy_properties(workload, prop_name, n):
    # >= 10^4 generated inputs across the matrix; no false alarms allowed
    prop = PROPERTIES[prop_name]
    gen = property_input_gen(prop, workload, "baseline")
    ops = make_ops()
    checked = 0
    for i in range(n):
        args = b_run(gen, i % 30, seed_of_u64(i))
        r = prop.check(ops, args)
        assert r is not False, (workload, prop_name, i, args)
        checked += r is True
    assert checked > 0  # the property must actually fire, not just discard


def test_property_discards_invalid_inputs():
    prop = PROPERTIES["InsertValid"]
    bad_tree = ("node", ("node", bst.LEAF, 9, 0, bst.LEAF), 5, 0, bst.LEAF)
    assert prop.check(make_ops(), (bad_tree, 1, 1)) is None


# ---------------------------------------------------------------------------
# mutants


def test_every_mutant_changes_behavior_on_its_witness():
    refs = {"insert": bst.insert, "delete": bst.delete, "union": bst.union,
            "subst": stlc.subst, "step": stlc.step}
    for m in MUTANTS.values():
        assert m.fn(*m.witness) != refs[m.target](*m.witness), m.id


def test_every_mutant_killable_by_paired_property():
    """Quick calibration: the paired property finds each bug within a small
    value budget under the insert-based / well-typed strategies."""
    budget = 30000
    for m in MUTANTS.values():
        workload = "bst_insert" if m.suite == "bst" else "stlc_welltyped"
        prop = PROPERTIES[m.paired_property]
        gen = property_input_gen(prop, workload, "baseline")
        ops = make_ops(m)
        master = seed_of_u64(424242)
        killed = False
        for i in range(budget):
            args = b_run(gen, i % 30, master.split())
            if prop.check(ops, args) is False:
                killed = True
                break
        assert killed, m.id


def test_mutant_registry_pairings_are_applicable():
    for m in MUTANTS.values():
        prop = PROPERTIES[m.paired_property]
        assert m.target in prop.targets
        assert m.suite == prop.suite


def test_task_enumeration():
    tasks = all_tasks()
    assert len(tasks) == 37  # 3 BST strategies x 9 + 2 STLC strategies x 5
    ids = {t.id for t in tasks}
    assert "bst_insert:insert_dup_left:InsertValid" in ids
    assert "stlc_welltyped:step_stuck_app:Progress" in ids
    suites = {get_workload(t.workload).suite for t in tasks}
    assert suites == {"bst", "stlc"}


def test_registry_consistency():
    for wl in WORKLOADS.values():
        assert wl.suite in ("bst", "stlc", "list", "misc")
        assert callable(wl.make_baseline) and callable(wl.make_staged)
