"""The staging backend, stage one: combinators that emit flat programs.

A staged generator is a stage-one function

    gen(size_code, seed_handle, builder) -> code value

where size_code is the value expression standing for the run-time size, the
seed handle is an opaque marker for the run-time seed (never inspected at
stage one), and the builder accumulates let bindings, definitions and fresh
variable ids.  Calling a staged generator emits code; no randomness is drawn
until the emitted program is compiled (stagegen.lower) and executed.

Binding-time split: generator structure is static, size and seed dynamic.
Effect ordering is preserved by let-insertion at effect sites -- s_int,
s_recurse and s_weighted_union name their results immediately, so a bound
value can be used many times without re-sampling.  s_bind itself is plain
composition: pure values flow through it without bindings.

Stage-one purity: running the same generator on two fresh builders yields
alpha-equivalent programs, so compiling twice is deterministic.
"""

import itertools

from .errors import StagingError
from .ir import (
    VALUE_NODES,
    Block,
    Call,
    Choose,
    Const,
    FnDef,
    IRProgram,
    Prim,
    Pure,
    Sample,
    Var,
    lint_program,
)


class _SeedHandle:
    """Opaque stand-in for the run-time seed parameter."""

    __slots__ = ()

    def __repr__(self):
        return "<seed>"


SEED = _SeedHandle()


def as_code(x):
    """Coerce host ints/bools to constants; pass code values through."""
    if isinstance(x, VALUE_NODES):
        return x
    if isinstance(x, (bool, int)):
        return Const(x)
    raise StagingError("not a code value: %r" % (x,))


class RecHandle:
    """Names the definition a fixed point is emitting; valid for recursion
    only while that fixed point's body is being staged."""

    __slots__ = ("target", "arity")

    def __init__(self, target, arity):
        self.target = target
        self.arity = arity


class Builder:
    """Accumulator for pending lets, finished defs and fresh names."""

    def __init__(self, fold_constants=True):
        self.fold_constants = fold_constants
        self._vars = itertools.count()
        self._def_names = itertools.count()
        self._frames = []
        self.defs = []
        self._handles = []

    # -- fresh names --------------------------------------------------------

    def fresh_var(self):
        return next(self._vars)

    def fresh_def_name(self):
        return "d%d" % next(self._def_names)

    # -- let insertion ------------------------------------------------------

    def let(self, rhs):
        """Bind rhs to a fresh variable in the current block; effects are
        named immediately, so this always returns a Var."""
        if not self._frames:
            raise StagingError("let outside a block (combinator run outside compile?)")
        v = self.fresh_var()
        self._frames[-1].append((v, rhs))
        return Var(v)

    def block(self, thunk):
        """Run thunk with a fresh binding frame; returns its Block."""
        self._frames.append([])
        try:
            result = thunk()
        finally:
            lets = self._frames.pop()
        return Block(tuple(lets), result)

    # -- constant-folding prim helpers ---------------------------------------

    def prim2(self, op, a, b):
        a = as_code(a)
        b = as_code(b)
        if self.fold_constants and isinstance(a, Const) and isinstance(b, Const):
            x, y = a.value, b.value
            if op == "add":
                return Const(x + y)
            if op == "sub":
                return Const(x - y)
            if op == "mul":
                return Const(x * y)
            if op == "div":
                return Const(x // y)
            if op == "eq":
                return Const(x == y)
        return Prim(op, (a, b))

    # -- recursion handles ----------------------------------------------------

    def handle_active(self, h):
        return any(h is x for x in self._handles)

    def push_handle(self, h):
        self._handles.append(h)

    def pop_handle(self, h):
        assert self._handles and self._handles[-1] is h
        self._handles.pop()


# ---------------------------------------------------------------------------
# combinators


def s_return(x):
    """Constant generator: no bindings, no samples; yields x."""
    cx = as_code(x)
    def run(size, seedh, b):
        return cx
    return run


def s_bind(g, k):
    """Sequence two staged generators.  Plain stage-one composition: the
    value g yields is already a named variable when g had an effect."""
    def run(size, seedh, b):
        a = g(size, seedh, b)
        return k(a)(size, seedh, b)
    return run


def s_let(x):
    """Name a pure expression, so a value used several times is computed
    once in the emitted program.  Constants and variables pass through."""
    cx = as_code(x)
    def run(size, seedh, b):
        if isinstance(cx, (Const, Var)):
            return cx
        return b.let(Pure(cx))
    return run


def s_int(lo, hi):
    """Range draw; performs its own let-insertion."""
    lo_c = as_code(lo)
    hi_c = as_code(hi)
    def run(size, seedh, b):
        return b.let(Sample(lo_c, hi_c))
    return run


def s_size():
    """Yield the current size code value; no bindings."""
    def run(size, seedh, b):
        return size
    return run


def s_with_size(n, g):
    """Run g's stage-one function with the size expression replaced by n.
    A run-time nonnegativity check is emitted unless n is a provably
    nonnegative constant."""
    n_c = as_code(n)
    def run(size, seedh, b):
        if isinstance(n_c, Const) and n_c.value >= 0:
            new_size = n_c
        else:
            new_size = b.let(Pure(Prim("check_size", (n_c,))))
        return g(new_size, seedh, b)
    return run


def s_weighted_union(choices):
    """Weighted choice specialized at stage one.

    Emits: the weight sum (constant-folded when every weight is a constant,
    let-bound with a run-time zero check otherwise), one draw over
    [0, sum-1], and a Choose node whose arms hold each branch's code in
    source order.  Lowering renders the Choose as a comparison chain; no
    run-time table of choices exists anywhere in the program.  Selection
    semantics are the canonical half-open scan shared with the naive
    backend (stagegen.selection).
    """
    entries = [(as_code(w), g) for w, g in choices]
    if not entries:
        raise StagingError("weighted_union: empty choice list")

    def run(size, seedh, b):
        weights = [w for w, _ in entries]
        if b.fold_constants and all(isinstance(w, Const) for w in weights):
            total = sum(w.value for w in weights)
            if total >= 1:
                sum_c = Const(total)
            else:  # folds to a guaranteed run-time error; keep the check
                sum_c = b.let(Pure(Prim("check_weight_sum", (Const(total),))))
        else:
            acc = weights[0]
            for w in weights[1:]:
                acc = b.prim2("add", acc, w)
            sum_c = b.let(Pure(Prim("check_weight_sum", (acc,))))
        r = b.let(Sample(Const(0), b.prim2("sub", sum_c, Const(1))))
        arms = []
        for w, g in entries:
            arm = b.block(lambda g=g: g(size, seedh, b))
            arms.append((w, arm))
        return b.let(Choose(r, tuple(arms)))
    return run


def s_fixed_point(f):
    """Recursive generator: f is staged exactly once, emitting one named
    recursive definition; the handle it receives is how the body recurses."""
    return s_fixed_point_param(f)


def s_fixed_point_param(f, *inits):
    """Parameterized recursion: the emitted definition threads extra value
    parameters alongside size; inits are their values at the entry call."""
    init_cs = tuple(as_code(i) for i in inits)

    def run(size, seedh, b):
        name = b.fresh_def_name()
        size_param = b.fresh_var()
        params = tuple(b.fresh_var() for _ in init_cs)
        h = RecHandle(name, len(init_cs))
        b.push_handle(h)
        try:
            body = b.block(
                lambda: f(h, *(Var(p) for p in params))(Var(size_param), seedh, b))
        finally:
            b.pop_handle(h)
        b.defs.append(FnDef(name, (size_param,) + params, body))
        return b.let(Call(name, size, init_cs))
    return run


def s_recurse(h, *args):
    """Recursive call through a handle; let-inserted like any effect."""
    def run(size, seedh, b):
        if not b.handle_active(h):
            raise StagingError(
                "escaped handle: recurse(%s) outside its fixed_point" % h.target)
        if len(args) != h.arity:
            raise StagingError(
                "recurse(%s): %d args, definition takes %d"
                % (h.target, len(args), h.arity))
        return b.let(Call(h.target, size, tuple(as_code(a) for a in args)))
    return run


def stage_program(g, fold_constants=True):
    """Run stage one with symbolic size and seed; returns the linted
    IRProgram.  The staged structure is fully evaluated here -- nothing
    of it survives into the program."""
    b = Builder(fold_constants=fold_constants)
    size_param = b.fresh_var()
    body = b.block(lambda: g(Var(size_param), SEED, b))
    entry = FnDef(b.fresh_def_name(), (size_param,), body)
    prog = IRProgram(tuple(b.defs) + (entry,), entry.name)
    return lint_program(prog)
