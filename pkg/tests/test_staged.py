"""Staging backend: emitted program shape, effect linearity, scoping,
constant folding, recursion handles, and lowering behavior."""

import pytest

from stagegen.baseline import b_bind, b_int, b_return, b_run
from stagegen.errors import ContractError, EmptyDistributionError, StagingError
from stagegen.ir import (
    Block,
    Call,
    Choose,
    Const,
    Construct,
    FnDef,
    IRProgram,
    Prim,
    Pure,
    Sample,
    Tup,
    Var,
    alpha_equal,
    count_rhs,
    format_program,
    iter_lets,
    lint_program,
)
from stagegen.lower import CompiledGen, c_run, compile_gen, lower_program
from stagegen.rand import end_state, seed_of_u64
from stagegen.staged import (
    s_bind,
    s_fixed_point,
    s_fixed_point_param,
    s_int,
    s_let,
    s_recurse,
    s_return,
    s_size,
    s_weighted_union,
    s_with_size,
    stage_program,
)


def int_pair_staged():
    return s_bind(s_int(0, 100), lambda x:
           s_bind(s_int(0, x), lambda y:
           s_return(Tup((x, y)))))


def int_pair_baseline():
    return b_bind(b_int(0, 100), lambda x:
           b_bind(b_int(0, x), lambda y:
           b_return((x, y))))


INT_PAIR_IR = """\
def d0(v0)
  let v1 = sample(0, 100)
  let v2 = sample(0, v1)
  -> (v1, v2)
entry d0
"""

GRADES_IR = """\
def d0(v0)
  let v1 = check_weight_sum(((v0 + 2) + 1))
  let v2 = sample(0, (v1 - 1))
  let v3 = choose v2 {
    w v0:
      -> 0
    w 2:
      -> 1
    w 1:
      -> 2
  }
  -> v3
entry d0
"""


def grades_staged():
    return s_bind(s_size(), lambda n: s_weighted_union([
        (n, s_return(0)), (2, s_return(1)), (1, s_return(2))]))


def test_int_pair_ir_golden():
    prog = stage_program(int_pair_staged())
    assert format_program(prog) == INT_PAIR_IR
    # the inlined shape: exactly two sample lets, then a tuple result
    assert count_rhs(prog, Sample) == 2
    assert isinstance(prog.entry_def().body.result, Tup)


def test_grades_ir_golden_and_chain_shape():
    prog = stage_program(grades_staged())
    assert format_program(prog) == GRADES_IR
    assert count_rhs(prog, Sample) == 1  # one draw, no choice table
    (choose,) = [rhs for _, rhs in iter_lets(prog) if isinstance(rhs, Choose)]
    assert len(choose.arms) == 3


def test_constant_return_emits_nothing():
    prog = stage_program(s_return(7))
    assert count_rhs(prog, Sample) == 0
    assert prog.entry_def().body.lets == ()
    cg = compile_gen(s_return(7))
    for seed_val in range(5):
        assert c_run(cg, 11, seed_of_u64(seed_val)) == 7


def test_bound_value_reused_without_resampling():
    # the effect-duplication hazard: x used twice must mean ONE sample
    g = s_bind(s_int(0, 1), lambda x: s_return(Tup((x, x))))
    prog = stage_program(g)
    assert count_rhs(prog, Sample) == 1
    cg = compile_gen(g)
    for seed_val in range(30):
        a, b = c_run(cg, 0, seed_of_u64(seed_val))
        assert a == b


def test_bind_of_return_adds_no_bindings():
    base = stage_program(s_return(3))
    bound = stage_program(s_bind(s_return(3), lambda c: s_return(c)))
    assert alpha_equal(base, bound)


def test_compiling_twice_is_alpha_equivalent():
    g = grades_staged()
    assert alpha_equal(stage_program(g), stage_program(g))
    g2 = int_pair_staged()
    assert format_program(stage_program(g2)) == format_program(stage_program(g2))


def test_pointwise_equal_to_baseline_int_pair():
    cg = compile_gen(int_pair_staged())
    gb = int_pair_baseline()
    for seed_val in range(1000):
        s1 = seed_of_u64(seed_val, instrument=True)
        s2 = seed_of_u64(seed_val, instrument=True)
        assert b_run(gb, 10, s1) == c_run(cg, 10, s2)
        assert end_state(s1) == end_state(s2)
        assert s1.sample_count == s2.sample_count


def test_size_and_with_size():
    assert c_run(compile_gen(s_size()), 17, seed_of_u64(0)) == 17
    assert c_run(compile_gen(s_with_size(3, s_size())), 17, seed_of_u64(0)) == 3
    with pytest.raises(ContractError):
        c_run(compile_gen(s_size()), -1, seed_of_u64(0))


def test_singleton_range_and_dependent_bounds():
    cg = compile_gen(s_int(5, 5))
    for seed_val in range(10):
        assert c_run(cg, 0, seed_of_u64(seed_val)) == 5
    dep = compile_gen(s_bind(s_int(0, 100), lambda x:
                      s_bind(s_int(0, x), lambda y: s_return(Tup((x, y))))))
    for seed_val in range(100):
        x, y = c_run(dep, 0, seed_of_u64(seed_val))
        assert 0 <= y <= x <= 100


def test_with_size_negative_is_run_time_contract_error():
    g = s_bind(s_size(), lambda n:
        s_with_size(Prim("sub", (n, Const(5))), s_size()))
    cg = compile_gen(g)
    assert c_run(cg, 9, seed_of_u64(0)) == 4
    with pytest.raises(ContractError):
        c_run(cg, 2, seed_of_u64(0))


def test_constant_weights_fold_sum():
    g = s_weighted_union([(2, s_return(0)), (1, s_return(1))])
    prog = stage_program(g)
    # no sum binding remains; the draw's bound is the folded constant 2
    assert count_rhs(prog, Pure) == 0
    (sample,) = [rhs for _, rhs in iter_lets(prog) if isinstance(rhs, Sample)]
    assert sample.lo == Const(0)
    assert sample.hi == Const(2)


def test_folding_disabled_keeps_sum_and_agrees():
    g = s_weighted_union([(2, s_return(0)), (1, s_return(1))])
    folded = compile_gen(g, fold_constants=True)
    unfolded = compile_gen(g, fold_constants=False)
    assert count_rhs(unfolded.program, Pure) == 1
    for seed_val in range(500):
        assert (c_run(folded, 0, seed_of_u64(seed_val))
                == c_run(unfolded, 0, seed_of_u64(seed_val)))


def test_union_zero_total_and_empty_list():
    cg = compile_gen(s_weighted_union([(0, s_return(0)), (0, s_return(1))]))
    with pytest.raises(EmptyDistributionError):
        c_run(cg, 0, seed_of_u64(0))
    with pytest.raises(StagingError):
        s_weighted_union([])


def test_union_matches_baseline_selection_with_fuzzed_weights():
    import random
    rng = random.Random(1234)
    from stagegen.baseline import b_weighted_union
    for _ in range(50):
        weights = [rng.randrange(0, 6) for _ in range(rng.randrange(1, 6))]
        if sum(weights) == 0:
            weights[0] = 1
        gs = s_weighted_union([(w, s_return(i)) for i, w in enumerate(weights)])
        gb = b_weighted_union([(w, b_return(i)) for i, w in enumerate(weights)])
        cg = compile_gen(gs)
        for seed_val in range(40):
            assert (b_run(gb, 0, seed_of_u64(seed_val))
                    == c_run(cg, 0, seed_of_u64(seed_val)))


def test_fixed_point_non_recursive_single_def():
    prog = stage_program(s_fixed_point(lambda h: s_return(1)))
    assert len(prog.defs) == 2  # the emitted def plus the entry wrapper
    assert count_rhs(prog, Call) == 1  # only the entry call, no recursion


def test_single_pass_tree_emits_one_def_with_two_call_sites():
    def tree():
        return s_fixed_point(lambda h:
            s_bind(s_size(), lambda m:
                s_weighted_union([
                    (1, s_return(Construct("leaf", ()))),
                    (m, s_bind(s_with_size(Prim("div", (m, Const(2))), s_recurse(h)), lambda l:
                         s_bind(s_int(0, 100), lambda x:
                         s_bind(s_with_size(Prim("div", (m, Const(2))), s_recurse(h)), lambda r:
                         s_return(Construct("node", (l, x, r))))))),
                ])))
    prog = stage_program(tree())
    non_entry = [d for d in prog.defs if d.name != prog.entry]
    assert len(non_entry) == 1

    def calls_in(block):
        n = 0
        for _, rhs in block.lets:
            if isinstance(rhs, Call):
                n += 1
            if isinstance(rhs, Choose):
                n += sum(calls_in(arm) for _, arm in rhs.arms)
        return n

    assert calls_in(non_entry[0].body) == 2
    assert calls_in(prog.entry_def().body) == 1


def test_escaped_handle_rejected():
    leaked = []
    g = s_fixed_point(lambda h: (leaked.append(h), s_return(1))[1])
    compile_gen(g)  # legitimate use first
    bad = s_bind(g, lambda _v: s_recurse(leaked[0]))
    with pytest.raises(StagingError, match="escaped handle"):
        compile_gen(bad)


def test_recurse_arity_mismatch_rejected():
    def body(h, p):
        return s_bind(s_size(), lambda m: s_weighted_union([
            (1, s_return(p)),
            (m, s_with_size(Prim("sub", (m, Const(1))), s_recurse(h))),  # missing arg
        ]))
    with pytest.raises(StagingError, match="recurse"):
        compile_gen(s_fixed_point_param(body, 0))


def test_parameterized_recursion_threads_values():
    def body(h, acc):
        return s_bind(s_size(), lambda m: s_weighted_union([
            (Prim("izero", (m,)), s_return(acc)),
            (m, s_with_size(Prim("sub", (m, Const(1))),
                            s_recurse(h, Prim("add", (acc, Const(1)))))),
        ]))
    cg = compile_gen(s_fixed_point_param(body, 0))
    for size in (0, 1, 5, 30):
        assert c_run(cg, size, seed_of_u64(3)) == size


def test_s_let_names_expression_once():
    g = s_bind(s_int(0, 9), lambda x:
        s_bind(s_let(Prim("add", (x, Const(1)))), lambda y:
        s_return(Tup((y, y)))))
    prog = stage_program(g)
    pures = [rhs for _, rhs in iter_lets(prog) if isinstance(rhs, Pure)]
    assert len(pures) == 1
    cg = compile_gen(g)
    a, b = c_run(cg, 0, seed_of_u64(4))
    assert a == b


def test_compiled_gen_holds_no_staged_values():
    cg = compile_gen(int_pair_staged())
    assert set(cg.__slots__) == {"program", "source", "_entry"}
    assert callable(cg._entry)
    assert "def d0" in cg.source


def test_effect_linearity_every_sample_is_a_distinct_let():
    prog = stage_program(int_pair_staged())
    lint_program(prog)
    rhs_ids = [id(rhs) for _, rhs in iter_lets(prog)]
    assert len(rhs_ids) == len(set(rhs_ids))


def test_lint_rejects_unbound_variable():
    bad = IRProgram((FnDef("d0", (0,), Block((), Var(42))),), "d0")
    with pytest.raises(StagingError, match="unbound"):
        lint_program(bad)


def test_lint_rejects_double_binding_and_bad_calls():
    dup = IRProgram((FnDef("d0", (0,), Block(
        ((1, Sample(Const(0), Const(1))), (1, Sample(Const(0), Const(1)))),
        Var(1))),), "d0")
    with pytest.raises(StagingError, match="bound twice"):
        lint_program(dup)
    badcall = IRProgram((FnDef("d0", (0,), Block(
        ((1, Call("nope", Var(0), ())),), Var(1))),), "d0")
    with pytest.raises(StagingError, match="unknown def"):
        lint_program(badcall)
    badarity = IRProgram((
        FnDef("d0", (0,), Block(((1, Call("d1", Var(0), ())),), Var(1))),
        FnDef("d1", (2, 3), Block((), Var(3))),
    ), "d0")
    with pytest.raises(StagingError, match="args"):
        lint_program(badarity)


def test_lint_rejects_missing_entry():
    prog = IRProgram((FnDef("d0", (0,), Block((), Const(1))),), "dX")
    with pytest.raises(StagingError, match="entry"):
        lint_program(prog)


def broken_int_pair_compiled():
    """The program a bind without let-insertion would emit: the first draw's
    effect is duplicated at its second use site."""
    body = Block(
        ((1, Sample(Const(0), Const(100))),
         (2, Sample(Const(0), Var(1))),
         (3, Sample(Const(0), Const(100)))),
        Tup((Var(3), Var(2))))
    prog = lint_program(IRProgram((FnDef("d0", (0,), body),), "d0"))
    source, entry = lower_program(prog)
    return CompiledGen(prog, source, entry)


def test_broken_bind_diverges_from_baseline_quickly():
    cg = broken_int_pair_compiled()
    gb = int_pair_baseline()
    diverged_at = None
    for seed_val in range(10):
        s1, s2 = seed_of_u64(seed_val), seed_of_u64(seed_val)
        if b_run(gb, 10, s1) != c_run(cg, 10, s2):
            diverged_at = seed_val
            break
    assert diverged_at is not None


def test_dump_ir_is_the_program_text():
    cg = compile_gen(int_pair_staged())
    assert cg.dump_ir() == INT_PAIR_IR
