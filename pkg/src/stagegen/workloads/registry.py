"""Workload registry: every benchmark generator in both backends, the
correctness properties, the injected bugs, and the (workload, bug, property)
task set.

Backend parity is the load-bearing invariant here: for each workload the
baseline and staged definitions are written in lockstep -- same choice
structure, same weights, same draw order -- so that equal seeds produce
equal values.  The differential suite enforces this; edit both or neither.

Size meaning is workload-specific: list length budget for bool_list, node
budget under halving for the tree shapes, recursion budget for the lambda
terms (types are capped small).
"""

from dataclasses import dataclass

from .. import baseline as B
from .. import derive as D
from .. import staged as S
from ..ir import Const, Construct, Prim, Tup
from ..lower import compile_gen, register_prim
from ..staged import as_code
from . import bst, stlc

# ---------------------------------------------------------------------------
# code-value helpers for staged definitions


def _add(a, b):
    return Prim("add", (as_code(a), as_code(b)))


def _sub(a, b):
    return Prim("sub", (as_code(a), as_code(b)))


def _mul(a, b):
    return Prim("mul", (as_code(a), as_code(b)))


def _div(a, b):
    return Prim("div", (as_code(a), as_code(b)))


def _eq(a, b):
    return Prim("eq", (as_code(a), as_code(b)))


def _izero(a):
    return Prim("izero", (as_code(a),))


def _imin(a, b):
    return Prim("imin", (as_code(a), as_code(b)))


def _p(name, *args):
    return Prim(name, tuple(as_code(a) for a in args))


register_prim("bst_insert", bst.insert)

NIL = ("nil",)
NILC = Construct("nil", ())


# ---------------------------------------------------------------------------
# int pair: the running two-draw example


def int_pair_baseline():
    return B.b_bind(B.b_int(0, 100), lambda x:
           B.b_bind(B.b_int(0, x), lambda y:
           B.b_return((x, y))))


def int_pair_staged():
    return S.s_bind(S.s_int(0, 100), lambda x:
           S.s_bind(S.s_int(0, x), lambda y:
           S.s_return(Tup((x, y)))))


# ---------------------------------------------------------------------------
# boolean lists: one coin per element, length governed by size


def bool_list_baseline():
    return B.b_fixed_point(lambda h:
        B.b_bind(B.b_size(), lambda m:
            B.b_weighted_union([
                (1, B.b_return(NIL)),
                (m, B.b_bind(B.b_int(0, 1), lambda c:
                     B.b_bind(B.b_with_size(m - 1, h), lambda t:
                     B.b_return(("cons", c == 1, t))))),
            ])))


def bool_list_staged():
    return S.s_fixed_point(lambda h:
        S.s_bind(S.s_size(), lambda m:
            S.s_weighted_union([
                (1, S.s_return(NILC)),
                (m, S.s_bind(S.s_int(0, 1), lambda c:
                     S.s_bind(S.s_with_size(_sub(m, 1), S.s_recurse(h)), lambda t:
                     S.s_return(Construct("cons", (_eq(c, 1), t)))))),
            ])))


def cons_to_list(v):
    out = []
    while v[0] == "cons":
        out.append(v[1])
        v = v[2]
    return out


# ---------------------------------------------------------------------------
# single-pass BST: whole tree in one recursive walk, halving the budget


def bst_single_pass_baseline():
    return B.b_fixed_point(lambda h:
        B.b_bind(B.b_size(), lambda m:
            B.b_weighted_union([
                (1, B.b_return(bst.LEAF)),
                (m, B.b_bind(B.b_with_size(m // 2, h), lambda l:
                     B.b_bind(B.b_int(0, 100), lambda k:
                     B.b_bind(B.b_int(0, 100), lambda v:
                     B.b_bind(B.b_with_size(m // 2, h), lambda r:
                     B.b_return(("node", l, k, v, r))))))),
            ])))


def bst_single_pass_staged():
    return S.s_fixed_point(lambda h:
        S.s_bind(S.s_size(), lambda m:
            S.s_weighted_union([
                (1, S.s_return(Construct("leaf", ()))),
                (m, S.s_bind(S.s_with_size(_div(m, 2), S.s_recurse(h)), lambda l:
                     S.s_bind(S.s_int(0, 100), lambda k:
                     S.s_bind(S.s_int(0, 100), lambda v:
                     S.s_bind(S.s_with_size(_div(m, 2), S.s_recurse(h)), lambda r:
                     S.s_return(Construct("node", (l, k, v, r)))))))),
            ])))


# ---------------------------------------------------------------------------
# insert-based BST: size-many inserts into an accumulator (always valid)


def bst_insert_baseline():
    def go(acc):
        return B.b_bind(B.b_size(), lambda m:
            B.b_weighted_union([
                (1 if m == 0 else 0, B.b_return(acc)),
                (m, B.b_bind(B.b_int(0, 100), lambda k:
                     B.b_bind(B.b_int(0, 100), lambda v:
                     B.b_with_size(m - 1, go(bst.insert(k, v, acc)))))),
            ]))
    return go(bst.LEAF)


def bst_insert_staged():
    def body(h, acc):
        return S.s_bind(S.s_size(), lambda m:
            S.s_weighted_union([
                (_izero(m), S.s_return(acc)),
                (m, S.s_bind(S.s_int(0, 100), lambda k:
                     S.s_bind(S.s_int(0, 100), lambda v:
                     S.s_with_size(_sub(m, 1),
                                   S.s_recurse(h, _p("bst_insert", k, v, acc)))))),
            ]))
    return S.s_fixed_point_param(body, Construct("leaf", ()))


# ---------------------------------------------------------------------------
# schema-derived shapes


BST_SCHEMA = D.Rec(D.Sum((
    D.Variant("leaf", 1, D.Product(())),
    D.Variant("node", D.CURRENT_SIZE, D.Product((
        D.RecRef(), D.IntRange(0, 100), D.IntRange(0, 100), D.RecRef()))),
)))

TY_SCHEMA = D.Rec(D.Sum((
    D.Variant("tbase", 1, D.Product(())),
    D.Variant("tarrow", D.CURRENT_SIZE, D.Product((D.RecRef(), D.RecRef()))),
)))

TERM_SCHEMA = D.Rec(D.Sum((
    D.Variant("const", 1, D.Product((D.IntRange(0, 3),))),
    D.Variant("var", 1, D.Product((D.IntRange(0, 3),))),
    D.Variant("lam", D.CURRENT_SIZE, D.Product((TY_SCHEMA, D.RecRef()))),
    D.Variant("app", D.CURRENT_SIZE, D.Product((D.RecRef(), D.RecRef()))),
)))

PAIR_SCHEMA = D.Product((D.BoolBase(), D.IntRange(0, 9)))


# ---------------------------------------------------------------------------
# well-typed STLC terms, correct by construction
#
# Per node the goal type and context steer a four-way choice: a matching
# variable (weight = number of matches), a lambda (only when the goal is an
# arrow; weight size+1 so arrows stay productive at size 0), an application
# (weight size; children at a third of the budget), or a constant (only at
# base type).  Types are generated small: the type budget is capped.


def _stlc_ty_baseline():
    return B.b_fixed_point(lambda h:
        B.b_bind(B.b_size(), lambda m:
            B.b_weighted_union([
                (1, B.b_return(stlc.TBASE)),
                (m, B.b_bind(B.b_with_size(m // 2, h), lambda a:
                     B.b_bind(B.b_with_size(m // 2, h), lambda b:
                     B.b_return(("tarrow", a, b))))),
            ])))


def stlc_welltyped_baseline():
    ty_top = _stlc_ty_baseline()
    ty_arg = _stlc_ty_baseline()

    def go(ty, ctx):
        def at_size(m):
            nv = stlc.ctx_count(ctx, ty)
            if stlc.ty_is_arrow(ty):
                src = stlc.ty_src(ty)
                lam_gen = B.b_bind(go(stlc.ty_dst(ty), ("cons", src, ctx)),
                                   lambda body: B.b_return(("lam", src, body)))
            else:
                lam_gen = B.b_return(None)  # dead arm, weight 0 below
            app_gen = B.b_bind(B.b_with_size(min(m // 3, 4), ty_arg), lambda a:
                      B.b_bind(B.b_with_size(m // 3, go(("tarrow", a, ty), ctx)), lambda f:
                      B.b_bind(B.b_with_size(m // 3, go(a, ctx)), lambda x:
                      B.b_return(("app", f, x)))))
            return B.b_weighted_union([
                (nv, B.b_bind(B.b_int(0, nv - 1), lambda j:
                      B.b_return(("var", stlc.ctx_nth(ctx, ty, j))))),
                (stlc.ty_is_arrow(ty) * (m + 1), lam_gen),
                (m, app_gen),
                (stlc.ty_is_base(ty), B.b_bind(B.b_int(0, 3), lambda k:
                      B.b_return(("const", k)))),
            ])
        return B.b_bind(B.b_size(), at_size)

    return B.b_bind(B.b_size(), lambda n:
           B.b_bind(B.b_with_size(min(n, 6), ty_top), lambda ty:
           go(ty, NIL)))


def _stlc_ty_staged():
    return S.s_fixed_point(lambda h:
        S.s_bind(S.s_size(), lambda m:
            S.s_weighted_union([
                (1, S.s_return(Construct("tbase", ()))),
                (m, S.s_bind(S.s_with_size(_div(m, 2), S.s_recurse(h)), lambda a:
                     S.s_bind(S.s_with_size(_div(m, 2), S.s_recurse(h)), lambda b:
                     S.s_return(Construct("tarrow", (a, b)))))),
            ])))


def stlc_welltyped_staged():
    def term_body(h, ty, ctx):
        def at_size(m):
            return S.s_bind(S.s_let(_p("ctx_count", ctx, ty)), lambda nv:
                S.s_weighted_union([
                    (nv, S.s_bind(S.s_int(0, _sub(nv, 1)), lambda j:
                          S.s_return(Construct("var", (_p("ctx_nth", ctx, ty, j),))))),
                    (_mul(_p("ty_is_arrow", ty), _add(m, 1)),
                         S.s_bind(S.s_let(_p("ty_src", ty)), lambda src:
                         S.s_bind(S.s_recurse(h, _p("ty_dst", ty),
                                              Construct("cons", (src, ctx))), lambda body:
                         S.s_return(Construct("lam", (src, body)))))),
                    (m, S.s_bind(S.s_with_size(_imin(_div(m, 3), 4), _stlc_ty_staged()), lambda a:
                         S.s_bind(S.s_with_size(_div(m, 3),
                                                S.s_recurse(h, Construct("tarrow", (a, ty)), ctx)), lambda f:
                         S.s_bind(S.s_with_size(_div(m, 3), S.s_recurse(h, a, ctx)), lambda x:
                         S.s_return(Construct("app", (f, x))))))),
                    (_p("ty_is_base", ty), S.s_bind(S.s_int(0, 3), lambda k:
                          S.s_return(Construct("const", (k,))))),
                ]))
        return S.s_bind(S.s_size(), at_size)

    return S.s_bind(S.s_size(), lambda n:
           S.s_bind(S.s_with_size(_imin(n, 6), _stlc_ty_staged()), lambda ty:
           S.s_fixed_point_param(term_body, ty, NILC)))


# ---------------------------------------------------------------------------
# registry


@dataclass
class Workload:
    name: str
    suite: str
    make_baseline: object
    make_staged: object
    note: str = ""
    bench: bool = True
    tasks: bool = False


_COMPILED = {}


def compiled_for(wl, fold_constants=True):
    key = (wl.name, fold_constants)
    if key not in _COMPILED:
        _COMPILED[key] = compile_gen(wl.make_staged(), fold_constants=fold_constants)
    return _COMPILED[key]


WORKLOADS = {}


def _register(wl):
    WORKLOADS[wl.name] = wl
    return wl


_register(Workload("int_pair", "misc", int_pair_baseline, int_pair_staged,
                   note="size ignored; two dependent draws", bench=True))
_register(Workload("bool_list", "list", bool_list_baseline, bool_list_staged,
                   note="size = length budget (decrement per element)",
                   bench=True))
_register(Workload("bst_single_pass", "bst",
                   bst_single_pass_baseline, bst_single_pass_staged,
                   note="size = node budget, halved per subtree",
                   bench=True, tasks=True))
_register(Workload("bst_insert", "bst", bst_insert_baseline, bst_insert_staged,
                   note="size = number of inserts; always a valid tree",
                   bench=True, tasks=True))
_register(Workload("bst_derived", "bst",
                   lambda: D.derive_baseline(BST_SCHEMA),
                   lambda: D.derive_staged(BST_SCHEMA),
                   note="schema-derived arbitrary tree",
                   bench=True, tasks=True))
_register(Workload("stlc_derived", "stlc",
                   lambda: D.derive_baseline(TERM_SCHEMA),
                   lambda: D.derive_staged(TERM_SCHEMA),
                   note="schema-derived arbitrary term (mostly ill-typed)",
                   bench=True, tasks=True))
_register(Workload("stlc_welltyped", "stlc",
                   stlc_welltyped_baseline, stlc_welltyped_staged,
                   note="size = recursion budget; output always typechecks",
                   bench=True, tasks=True))
_register(Workload("pair_derived", "misc",
                   lambda: D.derive_baseline(PAIR_SCHEMA),
                   lambda: D.derive_staged(PAIR_SCHEMA),
                   note="tiny product schema", bench=False))


def get_workload(name):
    try:
        return WORKLOADS[name]
    except KeyError:
        raise KeyError("unknown workload %r; registered: %s"
                       % (name, ", ".join(sorted(WORKLOADS)))) from None


# ---------------------------------------------------------------------------
# properties


@dataclass(frozen=True)
class Property:
    name: str
    suite: str
    targets: frozenset
    shape: str  # input shape: tkv | tk | tt | term
    check: object  # (ops, args) -> True | False | None (discard)


def _chk_insert_valid(ops, args):
    t, k, v = args
    if not bst.is_bst(t):
        return None
    return bst.is_bst(ops["insert"](k, v, t))


def _chk_insert_post(ops, args):
    t, k, v = args
    if not bst.is_bst(t):
        return None
    return bst.find(k, ops["insert"](k, v, t)) == v


def _chk_delete_valid(ops, args):
    t, k = args
    if not bst.is_bst(t):
        return None
    return bst.is_bst(ops["delete"](k, t))


def _chk_union_valid(ops, args):
    t1, t2 = args
    if not (bst.is_bst(t1) and bst.is_bst(t2)):
        return None
    return bst.is_bst(ops["union"](t1, t2))


def _chk_preservation(ops, args):
    (t,) = args
    wt = stlc.typecheck([], t)
    if wt is None:
        return None
    t2 = ops["step"](t)
    if t2 is None:
        return True
    return stlc.typecheck([], t2) == wt


def _chk_progress(ops, args):
    (t,) = args
    if stlc.typecheck([], t) is None:
        return None
    return stlc.is_value(t) or ops["step"](t) is not None


PROPERTIES = {p.name: p for p in [
    Property("InsertValid", "bst", frozenset(["insert"]), "tkv", _chk_insert_valid),
    Property("InsertPost", "bst", frozenset(["insert"]), "tkv", _chk_insert_post),
    Property("DeleteValid", "bst", frozenset(["delete"]), "tk", _chk_delete_valid),
    Property("UnionValid", "bst", frozenset(["union"]), "tt", _chk_union_valid),
    Property("Preservation", "stlc", frozenset(["subst", "step"]), "term", _chk_preservation),
    Property("Progress", "stlc", frozenset(["step"]), "term", _chk_progress),
]}


def get_property(name):
    try:
        return PROPERTIES[name]
    except KeyError:
        raise KeyError("unknown property %r; registered: %s"
                       % (name, ", ".join(sorted(PROPERTIES)))) from None


# ---------------------------------------------------------------------------
# mutants


@dataclass(frozen=True)
class Mutant:
    id: str
    suite: str
    target: str
    fn: object
    paired_property: str
    description: str
    witness: tuple  # args on which fn differs from the reference op


_N = bst.node
_L = bst.LEAF

MUTANTS = {m.id: m for m in [
    Mutant("insert_dup_left", "bst", "insert", bst.insert_dup_left,
           "InsertValid", "equal keys descend left, duplicating",
           (5, 1, _N(_L, 5, 0, _L))),
    Mutant("insert_no_replace", "bst", "insert", bst.insert_no_replace,
           "InsertValid", "equal keys descend right instead of replacing",
           (5, 1, _N(_L, 5, 0, _L))),
    Mutant("insert_wrong_subtree", "bst", "insert", bst.insert_wrong_subtree,
           "InsertValid", "comparison inverted, wrong child taken",
           (1, 0, _N(_L, 5, 0, _L))),
    Mutant("insert_swap_kv", "bst", "insert", bst.insert_swap_kv,
           "InsertPost", "fresh leaves built with key and value swapped",
           (1, 2, _L)),
    Mutant("delete_skip_fixup", "bst", "delete", bst.delete_skip_fixup,
           "DeleteValid", "successor copied up but not removed",
           (5, _N(_N(_L, 1, 0, _L), 5, 0, _N(_L, 9, 0, _L)))),
    Mutant("delete_swap_children", "bst", "delete", bst.delete_swap_children,
           "DeleteValid", "children swapped while descending left",
           (1, _N(_N(_L, 1, 0, _L), 5, 0, _N(_L, 9, 0, _L)))),
    Mutant("delete_wrong_successor", "bst", "delete", bst.delete_wrong_successor,
           "DeleteValid", "right child's root promoted instead of its min",
           (5, _N(_N(_L, 1, 0, _L), 5, 0, _N(_N(_L, 7, 0, _L), 8, 0, _L)))),
    Mutant("union_graft_right", "bst", "union", bst.union_graft_right,
           "UnionValid", "second tree grafted at the rightmost position",
           (_N(_L, 5, 0, _L), _N(_L, 1, 0, _L))),
    Mutant("union_keep_duplicates", "bst", "union", bst.union_keep_duplicates,
           "UnionValid", "shared keys inserted again instead of replaced",
           (_N(_L, 5, 1, _L), _N(_L, 5, 2, _L))),
    Mutant("subst_wrong_cutoff", "stlc", "subst", stlc.subst_wrong_cutoff,
           "Preservation", "binder descent does not adjust the target index",
           (("lam", stlc.TBASE, ("var", 1)), 0, ("const", 7))),
    Mutant("subst_off_by_one", "stlc", "subst", stlc.subst_off_by_one,
           "Preservation", "replaces the variable one binder too far out",
           (("var", 0), 0, ("const", 7))),
    Mutant("subst_replace_all", "stlc", "subst", stlc.subst_replace_all,
           "Preservation", "every variable treated as the target",
           (("var", 1), 0, ("const", 7))),
    Mutant("step_no_subst", "stlc", "step", stlc.step_no_subst,
           "Preservation", "beta reduction drops the argument",
           (("app", ("lam", stlc.TBASE, ("var", 0)), ("const", 3)),)),
    Mutant("step_stuck_app", "stlc", "step", stlc.step_stuck_app,
           "Progress", "constant-argument redexes refuse to reduce",
           (("app", ("lam", stlc.TBASE, ("var", 0)), ("const", 3)),)),
]}


def get_mutant(mid):
    try:
        return MUTANTS[mid]
    except KeyError:
        raise KeyError("unknown mutant %r; registered: %s"
                       % (mid, ", ".join(sorted(MUTANTS)))) from None


REFERENCE_OPS = {
    "insert": bst.insert,
    "delete": bst.delete,
    "union": bst.union,
    "subst": stlc.subst,
    "step": None,  # wired below: step routes through the table's subst
}


def make_ops(mutant=None):
    """Operation table for property checks; `mutant` overrides one entry.
    step always routes through the table's subst so substitution bugs
    surface during reduction."""
    ops = dict(REFERENCE_OPS)
    step_impl = stlc.step
    if mutant is not None:
        if mutant.target == "step":
            step_impl = mutant.fn
        else:
            ops[mutant.target] = mutant.fn
    ops["step"] = lambda t: step_impl(t, ops["subst"])
    return ops


# ---------------------------------------------------------------------------
# property input generators (workload value + auxiliary draws)


def property_input_gen(prop, workload, backend):
    """Composite generator producing the property's argument tuple."""
    wl = get_workload(workload) if isinstance(workload, str) else workload
    if backend == "baseline":
        g = wl.make_baseline()
        if prop.shape == "tkv":
            return B.b_bind(g, lambda t:
                   B.b_bind(B.b_int(0, 100), lambda k:
                   B.b_bind(B.b_int(0, 100), lambda v:
                   B.b_return((t, k, v)))))
        if prop.shape == "tk":
            return B.b_bind(g, lambda t:
                   B.b_bind(B.b_int(0, 100), lambda k:
                   B.b_return((t, k))))
        if prop.shape == "tt":
            return B.b_bind(g, lambda t1:
                   B.b_bind(g, lambda t2:
                   B.b_return((t1, t2))))
        if prop.shape == "term":
            return B.b_bind(g, lambda t: B.b_return((t,)))
    elif backend == "staged":
        g = wl.make_staged()
        if prop.shape == "tkv":
            return S.s_bind(g, lambda t:
                   S.s_bind(S.s_int(0, 100), lambda k:
                   S.s_bind(S.s_int(0, 100), lambda v:
                   S.s_return(Tup((t, k, v))))))
        if prop.shape == "tk":
            return S.s_bind(g, lambda t:
                   S.s_bind(S.s_int(0, 100), lambda k:
                   S.s_return(Tup((t, k)))))
        if prop.shape == "tt":
            return S.s_bind(g, lambda t1:
                   S.s_bind(g, lambda t2:
                   S.s_return(Tup((t1, t2)))))
        if prop.shape == "term":
            return S.s_bind(g, lambda t: S.s_return(Tup((t,))))
    raise ValueError("bad backend %r or shape %r" % (backend, prop.shape))


# ---------------------------------------------------------------------------
# tasks


@dataclass(frozen=True)
class Task:
    workload: str
    mutant: str
    prop: str

    @property
    def id(self):
        return "%s:%s:%s" % (self.workload, self.mutant, self.prop)


def all_tasks():
    """The default task set: every strategy workload crossed with its
    suite's mutants, each paired with the property built to expose it."""
    tasks = []
    for wl in WORKLOADS.values():
        if not wl.tasks:
            continue
        for m in MUTANTS.values():
            if m.suite == wl.suite:
                tasks.append(Task(wl.name, m.id, m.paired_property))
    return tasks
