"""Flat A-normal-form intermediate programs emitted by the staging backend.

Structure
---------
A program is a list of named definitions plus an entry name.  Each definition
takes a size parameter, the (implicit) seed, and optionally extra value
parameters; its body is a block: a sequence of lets followed by a result
expression.

Pure expressions (CodeVal in the staging API) are Const / Var / Tup /
Construct / Prim trees.  Effectful operations -- Sample (a range draw),
Call (recursive invocation) and Choose (weighted branch) -- can appear only
on the right-hand side of a let, so splicing a value can never duplicate an
effect.  Choose carries its branches in source order together with their
weight expressions; lowering turns it into an inline comparison chain.
"""

from dataclasses import dataclass

from .errors import StagingError

# ---------------------------------------------------------------------------
# value expressions


@dataclass(frozen=True)
class Const:
    value: object  # int or bool


@dataclass(frozen=True)
class Var:
    id: int


@dataclass(frozen=True)
class Tup:
    items: tuple


@dataclass(frozen=True)
class Construct:
    tag: str
    items: tuple


@dataclass(frozen=True)
class Prim:
    op: str
    args: tuple


VALUE_NODES = (Const, Var, Tup, Construct, Prim)

# Prims lowered to inline operators; anything else must be a registered
# host function (see stagegen.lower).
INFIX_PRIMS = {"add": "+", "sub": "-", "mul": "*", "div": "//", "eq": "=="}
SPECIAL_PRIMS = ("izero", "imin", "check_size", "check_weight_sum")


# ---------------------------------------------------------------------------
# let-bound (effectful or named) operations


@dataclass(frozen=True)
class Sample:
    lo: object
    hi: object


@dataclass(frozen=True)
class Call:
    target: str
    size: object
    args: tuple


@dataclass(frozen=True)
class Choose:
    scrutinee: Var
    arms: tuple  # of (weight expr, Block)


@dataclass(frozen=True)
class Pure:
    expr: object


@dataclass(frozen=True)
class Block:
    lets: tuple  # of (var id, rhs)
    result: object


@dataclass(frozen=True)
class FnDef:
    name: str
    params: tuple  # var ids; params[0] is the size parameter
    body: Block


@dataclass(frozen=True)
class IRProgram:
    defs: tuple
    entry: str

    def entry_def(self):
        return next(d for d in self.defs if d.name == self.entry)


# ---------------------------------------------------------------------------
# pretty printer (stable text format; golden-tested)


def _fmt_expr(e):
    if isinstance(e, Const):
        if e.value is True:
            return "true"
        if e.value is False:
            return "false"
        return str(e.value)
    if isinstance(e, Var):
        return "v%d" % e.id
    if isinstance(e, Tup):
        return "(%s)" % ", ".join(_fmt_expr(x) for x in e.items)
    if isinstance(e, Construct):
        return "'%s'(%s)" % (e.tag, ", ".join(_fmt_expr(x) for x in e.items))
    if isinstance(e, Prim):
        if e.op in INFIX_PRIMS:
            a, b = e.args
            return "(%s %s %s)" % (_fmt_expr(a), INFIX_PRIMS[e.op], _fmt_expr(b))
        return "%s(%s)" % (e.op, ", ".join(_fmt_expr(x) for x in e.args))
    raise TypeError("not a value expression: %r" % (e,))


def _fmt_block(block, indent, out):
    pad = "  " * indent
    for var, rhs in block.lets:
        if isinstance(rhs, Sample):
            out.append("%slet v%d = sample(%s, %s)"
                       % (pad, var, _fmt_expr(rhs.lo), _fmt_expr(rhs.hi)))
        elif isinstance(rhs, Call):
            args = [_fmt_expr(rhs.size)] + [_fmt_expr(a) for a in rhs.args]
            out.append("%slet v%d = call %s(%s)"
                       % (pad, var, rhs.target, ", ".join(args)))
        elif isinstance(rhs, Choose):
            out.append("%slet v%d = choose %s {"
                       % (pad, var, _fmt_expr(rhs.scrutinee)))
            for weight, arm in rhs.arms:
                out.append("%s  w %s:" % (pad, _fmt_expr(weight)))
                _fmt_block(arm, indent + 2, out)
            out.append("%s}" % pad)
        elif isinstance(rhs, Pure):
            out.append("%slet v%d = %s" % (pad, var, _fmt_expr(rhs.expr)))
        else:
            raise TypeError("not a let rhs: %r" % (rhs,))
    out.append("%s-> %s" % (pad, _fmt_expr(block.result)))


def format_program(prog):
    out = []
    for d in prog.defs:
        out.append("def %s(%s)" % (d.name, ", ".join("v%d" % p for p in d.params)))
        _fmt_block(d.body, 1, out)
    out.append("entry %s" % prog.entry)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# lint: scope and structure checks run on every compiled program


def _lint_expr(e, scope):
    if isinstance(e, Const):
        if not isinstance(e.value, (bool, int)):
            raise StagingError("constant of unsupported type: %r" % (e.value,))
        return
    if isinstance(e, Var):
        if e.id not in scope:
            raise StagingError("use of unbound variable v%d" % e.id)
        return
    if isinstance(e, (Tup, Construct)):
        for x in e.items:
            _lint_expr(x, scope)
        return
    if isinstance(e, Prim):
        for x in e.args:
            _lint_expr(x, scope)
        return
    raise StagingError("effectful node used as a value: %r" % (e,))


def _lint_block(block, scope, bound_once, defs):
    scope = set(scope)
    for var, rhs in block.lets:
        if var in bound_once:
            raise StagingError("variable v%d bound twice" % var)
        if isinstance(rhs, Sample):
            _lint_expr(rhs.lo, scope)
            _lint_expr(rhs.hi, scope)
        elif isinstance(rhs, Call):
            if rhs.target not in defs:
                raise StagingError("call to unknown def %r" % rhs.target)
            want = len(defs[rhs.target].params)
            got = 1 + len(rhs.args)
            if want != got:
                raise StagingError("call to %s: %d args, def takes %d"
                                   % (rhs.target, got, want))
            _lint_expr(rhs.size, scope)
            for a in rhs.args:
                _lint_expr(a, scope)
        elif isinstance(rhs, Choose):
            _lint_expr(rhs.scrutinee, scope)
            if not rhs.arms:
                raise StagingError("choose with no arms")
            for weight, arm in rhs.arms:
                _lint_expr(weight, scope)
                _lint_block(arm, scope, bound_once, defs)
        elif isinstance(rhs, Pure):
            _lint_expr(rhs.expr, scope)
        else:
            raise StagingError("invalid let rhs: %r" % (rhs,))
        bound_once.add(var)
        scope.add(var)
    _lint_expr(block.result, scope)


def lint_program(prog):
    """Raise StagingError unless the program is well-formed: unique def
    names, every variable bound exactly once and used in scope, calls
    arity-correct, effects only in let position (the node types already
    force that last one; this re-walks to catch hand-built programs)."""
    defs = {}
    for d in prog.defs:
        if d.name in defs:
            raise StagingError("duplicate def name %r" % d.name)
        defs[d.name] = d
    if prog.entry not in defs:
        raise StagingError("entry %r is not defined" % prog.entry)
    bound_once = set()
    for d in prog.defs:
        for p in d.params:
            if p in bound_once:
                raise StagingError("parameter v%d bound twice" % p)
            bound_once.add(p)
    for d in prog.defs:
        _lint_block(d.body, set(d.params), bound_once, defs)
    return prog


# ---------------------------------------------------------------------------
# alpha-equivalence and structure queries (test support)


def _alpha_expr(e, vmap, dmap):
    if isinstance(e, Const):
        return ("c", e.value)
    if isinstance(e, Var):
        return ("v", vmap[e.id])
    if isinstance(e, Tup):
        return ("t",) + tuple(_alpha_expr(x, vmap, dmap) for x in e.items)
    if isinstance(e, Construct):
        return ("k", e.tag) + tuple(_alpha_expr(x, vmap, dmap) for x in e.items)
    if isinstance(e, Prim):
        return ("p", e.op) + tuple(_alpha_expr(x, vmap, dmap) for x in e.args)
    raise TypeError(repr(e))


def _alpha_block(block, vmap, dmap):
    rows = []
    for var, rhs in block.lets:
        vmap[var] = len(vmap)
        if isinstance(rhs, Sample):
            row = ("sample", _alpha_expr(rhs.lo, vmap, dmap),
                   _alpha_expr(rhs.hi, vmap, dmap))
        elif isinstance(rhs, Call):
            row = ("call", dmap[rhs.target],
                   _alpha_expr(rhs.size, vmap, dmap),
                   tuple(_alpha_expr(a, vmap, dmap) for a in rhs.args))
        elif isinstance(rhs, Choose):
            row = ("choose", _alpha_expr(rhs.scrutinee, vmap, dmap),
                   tuple((_alpha_expr(w, vmap, dmap), _alpha_block(a, vmap, dmap))
                         for w, a in rhs.arms))
        elif isinstance(rhs, Pure):
            row = ("pure", _alpha_expr(rhs.expr, vmap, dmap))
        else:
            raise TypeError(repr(rhs))
        rows.append((vmap[var], row))
    return (tuple(rows), _alpha_expr(block.result, vmap, dmap))


def alpha_key(prog):
    """Canonical structure under renaming of variables and def names."""
    dmap = {d.name: i for i, d in enumerate(prog.defs)}
    vmap = {}
    keys = []
    for d in prog.defs:
        for p in d.params:
            vmap[p] = len(vmap)
        keys.append((dmap[d.name], len(d.params), _alpha_block(d.body, vmap, dmap)))
    return (tuple(keys), dmap[prog.entry])


def alpha_equal(p1, p2):
    return alpha_key(p1) == alpha_key(p2)


def iter_lets(prog):
    """Yield every (var, rhs) let in the program, including choose arms."""
    def walk(block):
        for var, rhs in block.lets:
            yield var, rhs
            if isinstance(rhs, Choose):
                for _, arm in rhs.arms:
                    yield from walk(arm)
    for d in prog.defs:
        yield from walk(d.body)


def count_rhs(prog, kind):
    return sum(1 for _, rhs in iter_lets(prog) if isinstance(rhs, kind))
