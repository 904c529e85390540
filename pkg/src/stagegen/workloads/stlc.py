"""Simply typed lambda calculus: terms, types, reference semantics, bugs.

Types:  ("tbase",) | ("tarrow", t1, t2)
Terms:  ("var", i)          de Bruijn index, nonnegative
        ("lam", ty, body)
        ("app", f, a)
        ("const", k)        base-typed literal

Substitution and small-step reduction are the mutation targets.  Reduction
is call-by-value, leftmost at the top level (never under binders), so every
substituted argument is closed; the injected substitution bugs are chosen to
be observable in that setting.

The helpers at the bottom are registered as staging prims: pure functions on
type/context values that emitted programs call directly.  Contexts built by
generators are cons-lists ("nil",) / ("cons", ty, rest).
"""

from ..lower import register_prim

TBASE = ("tbase",)


def tarrow(a, b):
    return ("tarrow", a, b)


def typecheck(ctx, t):
    """Type of t under ctx (a python list, innermost first), or None."""
    tag = t[0]
    if tag == "var":
        i = t[1]
        return ctx[i] if 0 <= i < len(ctx) else None
    if tag == "lam":
        body_ty = typecheck([t[1]] + ctx, t[2])
        return ("tarrow", t[1], body_ty) if body_ty is not None else None
    if tag == "app":
        fty = typecheck(ctx, t[1])
        aty = typecheck(ctx, t[2])
        if fty is not None and fty[0] == "tarrow" and fty[1] == aty:
            return fty[2]
        return None
    if tag == "const":
        return TBASE
    return None


def shift(t, d, cutoff=0):
    """Add d to every free variable index >= cutoff."""
    tag = t[0]
    if tag == "var":
        return ("var", t[1] + d) if t[1] >= cutoff else t
    if tag == "lam":
        return ("lam", t[1], shift(t[2], d, cutoff + 1))
    if tag == "app":
        return ("app", shift(t[1], d, cutoff), shift(t[2], d, cutoff))
    return t


def subst(t, j, s, c=0):
    """Replace var j+c by s (shifted by c); decrement indices above it."""
    tag = t[0]
    if tag == "var":
        i = t[1]
        if i == j + c:
            return shift(s, c)
        if i > j + c:
            return ("var", i - 1)
        return t
    if tag == "lam":
        return ("lam", t[1], subst(t[2], j, s, c + 1))
    if tag == "app":
        return ("app", subst(t[1], j, s, c), subst(t[2], j, s, c))
    return t


def is_value(t):
    return t[0] in ("lam", "const")


def step(t, subst_fn=subst):
    """One CBV step at the top level, or None when stuck / a value."""
    if t[0] != "app":
        return None
    f, a = t[1], t[2]
    if not is_value(f):
        f2 = step(f, subst_fn)
        return ("app", f2, a) if f2 is not None else None
    if not is_value(a):
        a2 = step(a, subst_fn)
        return ("app", f, a2) if a2 is not None else None
    if f[0] == "lam":
        return subst_fn(f[2], 0, a)
    return None


# ---------------------------------------------------------------------------
# mutants


def subst_wrong_cutoff(t, j, s, c=0):
    # bug: descending under a binder does not adjust the target index
    tag = t[0]
    if tag == "var":
        i = t[1]
        if i == j + c:
            return shift(s, c)
        if i > j + c:
            return ("var", i - 1)
        return t
    if tag == "lam":
        return ("lam", t[1], subst_wrong_cutoff(t[2], j, s, c))
    if tag == "app":
        return ("app", subst_wrong_cutoff(t[1], j, s, c),
                subst_wrong_cutoff(t[2], j, s, c))
    return t


def subst_off_by_one(t, j, s, c=0):
    # bug: replaces the variable one binder too far out
    tag = t[0]
    if tag == "var":
        i = t[1]
        if i == j + c + 1:
            return shift(s, c)
        if i > j + c + 1:
            return ("var", i - 1)
        return t
    if tag == "lam":
        return ("lam", t[1], subst_off_by_one(t[2], j, s, c + 1))
    if tag == "app":
        return ("app", subst_off_by_one(t[1], j, s, c),
                subst_off_by_one(t[2], j, s, c))
    return t


def subst_replace_all(t, j, s, c=0):
    # bug: every variable is treated as the substitution target
    tag = t[0]
    if tag == "var":
        return shift(s, c)
    if tag == "lam":
        return ("lam", t[1], subst_replace_all(t[2], j, s, c + 1))
    if tag == "app":
        return ("app", subst_replace_all(t[1], j, s, c),
                subst_replace_all(t[2], j, s, c))
    return t


def step_no_subst(t, subst_fn=subst):
    # bug: beta reduction drops the argument without substituting
    if t[0] != "app":
        return None
    f, a = t[1], t[2]
    if not is_value(f):
        f2 = step_no_subst(f, subst_fn)
        return ("app", f2, a) if f2 is not None else None
    if not is_value(a):
        a2 = step_no_subst(a, subst_fn)
        return ("app", f, a2) if a2 is not None else None
    if f[0] == "lam":
        return f[2]
    return None


def step_stuck_app(t, subst_fn=subst):
    # bug: refuses to reduce a beta redex whose argument is a constant
    if t[0] != "app":
        return None
    f, a = t[1], t[2]
    if not is_value(f):
        f2 = step_stuck_app(f, subst_fn)
        return ("app", f2, a) if f2 is not None else None
    if not is_value(a):
        a2 = step_stuck_app(a, subst_fn)
        return ("app", f, a2) if a2 is not None else None
    if f[0] == "lam" and a[0] != "const":
        return subst_fn(f[2], 0, a)
    return None


# ---------------------------------------------------------------------------
# staging prims over type and context values


def ty_is_arrow(t):
    return 1 if t[0] == "tarrow" else 0


def ty_is_base(t):
    return 1 if t[0] == "tbase" else 0


def ty_src(t):
    return t[1]


def ty_dst(t):
    return t[2]


def ctx_count(ctx, ty):
    """How many context entries (a cons-list of types) equal ty."""
    n = 0
    while ctx[0] == "cons":
        if ctx[1] == ty:
            n += 1
        ctx = ctx[2]
    return n


def ctx_nth(ctx, ty, j):
    """De Bruijn index of the j-th entry equal to ty, innermost first."""
    i = 0
    while ctx[0] == "cons":
        if ctx[1] == ty:
            if j == 0:
                return i
            j -= 1
        i += 1
        ctx = ctx[2]
    raise IndexError("ctx_nth: fewer than j matches")


register_prim("ty_is_arrow", ty_is_arrow)
register_prim("ty_is_base", ty_is_base)
register_prim("ty_src", ty_src)
register_prim("ty_dst", ty_dst)
register_prim("ctx_count", ctx_count)
register_prim("ctx_nth", ctx_nth)
