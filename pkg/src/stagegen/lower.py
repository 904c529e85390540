"""Stage two: lower a flat program to an executable form.

Each definition becomes one host function of (size, seed, *params).  Lets
become straight-line local assignments, Choose becomes an inline
subtract-and-compare chain over its weights (same half-open selection as the
naive backend), Call becomes a direct function call.  The result executes
with no combinator dispatch, no continuation allocation and no per-choice
tables: per-value work is the program text, plus the seed's own draws.

Host functions usable from emitted code ("prims") are registered in
PRIM_FUNCS; they must be pure and must not touch the seed.
"""

import itertools

from .errors import ContractError, EmptyDistributionError, StagingError
from .ir import (
    INFIX_PRIMS,
    SPECIAL_PRIMS,
    Call,
    Choose,
    Const,
    Construct,
    Prim,
    Pure,
    Sample,
    Tup,
    Var,
    format_program,
)
from .staged import stage_program

PRIM_FUNCS = {}


def register_prim(name, fn):
    """Expose a pure host function to emitted programs under `name`."""
    if name in INFIX_PRIMS or name in SPECIAL_PRIMS:
        raise StagingError("prim name %r is reserved" % name)
    existing = PRIM_FUNCS.get(name)
    if existing is not None and existing is not fn:
        raise StagingError("prim %r already registered" % name)
    PRIM_FUNCS[name] = fn
    return fn


def _expr(e):
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return "v%d" % e.id
    if isinstance(e, Tup):
        inner = ", ".join(_expr(x) for x in e.items)
        return "(%s,)" % inner if len(e.items) == 1 else "(%s)" % inner
    if isinstance(e, Construct):
        parts = [repr(e.tag)] + [_expr(x) for x in e.items]
        return "(%s,)" % ", ".join(parts)
    if isinstance(e, Prim):
        if e.op in INFIX_PRIMS:
            a, b = e.args
            return "(%s %s %s)" % (_expr(a), INFIX_PRIMS[e.op], _expr(b))
        if e.op == "izero":
            return "(1 if %s == 0 else 0)" % _expr(e.args[0])
        if e.op == "imin":
            return "min(%s, %s)" % (_expr(e.args[0]), _expr(e.args[1]))
        if e.op in PRIM_FUNCS:
            return "_p_%s(%s)" % (e.op, ", ".join(_expr(a) for a in e.args))
        raise StagingError("unknown prim %r" % e.op)
    raise StagingError("cannot lower expression %r" % (e,))


class _Emitter:
    def __init__(self):
        self.lines = []
        self._tmp = itertools.count()

    def line(self, indent, text):
        self.lines.append("    " * indent + text)

    def block(self, block, indent, target):
        """Emit a block; assign its result to `target`, or return it when
        target is None (definition body)."""
        for var, rhs in block.lets:
            name = "v%d" % var
            if isinstance(rhs, Sample):
                self.line(indent, "%s = seed.int_in_range(%s, %s)"
                          % (name, _expr(rhs.lo), _expr(rhs.hi)))
            elif isinstance(rhs, Call):
                args = ", ".join([_expr(rhs.size), "seed"]
                                 + [_expr(a) for a in rhs.args])
                self.line(indent, "%s = %s(%s)" % (name, rhs.target, args))
            elif isinstance(rhs, Pure):
                e = rhs.expr
                if isinstance(e, Prim) and e.op == "check_size":
                    self.line(indent, "%s = %s" % (name, _expr(e.args[0])))
                    self.line(indent, "if %s < 0:" % name)
                    self.line(indent + 1,
                              "raise ContractError('with_size: negative size %d' % "
                              + name + ")")
                elif isinstance(e, Prim) and e.op == "check_weight_sum":
                    self.line(indent, "%s = %s" % (name, _expr(e.args[0])))
                    self.line(indent, "if %s <= 0:" % name)
                    self.line(indent + 1,
                              "raise EmptyDistributionError("
                              "'weighted choice: total weight is zero')")
                else:
                    self.line(indent, "%s = %s" % (name, _expr(e)))
            elif isinstance(rhs, Choose):
                self.choose(rhs, indent, name)
            else:
                raise StagingError("cannot lower %r" % (rhs,))
        if target is None:
            self.line(indent, "return %s" % _expr(block.result))
        else:
            self.line(indent, "%s = %s" % (target, _expr(block.result)))

    def choose(self, rhs, indent, target):
        rest = "r%d" % next(self._tmp)
        self.line(indent, "%s = %s" % (rest, _expr(rhs.scrutinee)))
        n = len(rhs.arms)
        for i, (weight, arm) in enumerate(rhs.arms):
            last = i == n - 1
            self.line(indent, "if %s < %s:" % (rest, _expr(weight)))
            self.block(arm, indent + 1, target)
            self.line(indent, "else:")
            if last:
                self.line(indent + 1,
                          "raise EmptyDistributionError("
                          "'weighted choice: draw not covered')")
            else:
                self.line(indent + 1, "%s -= %s" % (rest, _expr(weight)))
                indent += 1


def lower_program(prog):
    """Generate host source for the program and compile it; returns
    (source text, entry callable)."""
    em = _Emitter()
    for d in prog.defs:
        params = ["v%d" % d.params[0], "seed"] + ["v%d" % p for p in d.params[1:]]
        em.line(0, "def %s(%s):" % (d.name, ", ".join(params)))
        em.block(d.body, 1, None)
        em.line(0, "")
    source = "\n".join(em.lines)
    namespace = {
        "ContractError": ContractError,
        "EmptyDistributionError": EmptyDistributionError,
        "min": min,
    }
    for name, fn in PRIM_FUNCS.items():
        namespace["_p_%s" % name] = fn
    code = compile(source, "<staged:%s>" % prog.entry, "exec")
    exec(code, namespace)
    return source, namespace[prog.entry]


class CompiledGen:
    """Executable form of a staged generator.  Holds the program, its
    lowered source and the entry function -- no staged combinator values."""

    __slots__ = ("program", "source", "_entry")

    def __init__(self, program, source, entry):
        self.program = program
        self.source = source
        self._entry = entry

    def run(self, size, seed):
        return self._entry(size, seed)

    def dump_ir(self):
        return format_program(self.program)


def compile_gen(g, fold_constants=True):
    """Stage a generator and lower it: the whole pipeline."""
    prog = stage_program(g, fold_constants=fold_constants)
    source, entry = lower_program(prog)
    return CompiledGen(prog, source, entry)


def c_run(g, size, seed):
    """Execute a compiled generator, mutating the seed."""
    if size < 0:
        raise ContractError("run: negative size %d" % size)
    return g.run(size, seed)
