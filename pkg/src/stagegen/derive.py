"""Schema-driven generator derivation.

A schema describes a datatype: base ints/bools, products, weighted sums of
tagged variants, and recursion.  One schema derives a generator for either
backend through the same compositional walk -- base nodes map to primitive
generators, product fields are sampled left to right, sums become a weighted
choice over their variants, recursion becomes a fixed point with recursive
occurrences run at half the current size.  The two derivations are
seed-pointwise equivalent.

Generated values are tagged tuples: a Sum variant with product fields
becomes (tag, field0, field1, ...), a bare product becomes a plain tuple,
base nodes are ints/bools.

Schemas also load from a small JSON format (see load_schema)::

    {"kind": "int", "lo": 0, "hi": 100}
    {"kind": "bool"}
    {"kind": "product", "fields": [ ... ]}
    {"kind": "sum", "variants": [
        {"tag": "leaf", "weight": 1, "schema": {"kind": "product", "fields": []}},
        {"tag": "node", "weight": "size", "schema": ... }]}
    {"kind": "rec", "body": ... }
    {"kind": "recref"}

A weight is a nonnegative integer or the string "size" (the current size,
read at each choice).
"""

import json
from dataclasses import dataclass

from . import baseline as B
from . import staged as S
from .errors import DerivationError
from .ir import Const, Construct, Prim, Tup

CURRENT_SIZE = "size"


@dataclass(frozen=True)
class IntRange:
    lo: int
    hi: int


@dataclass(frozen=True)
class BoolBase:
    pass


@dataclass(frozen=True)
class Product:
    fields: tuple


@dataclass(frozen=True)
class Variant:
    tag: str
    weight: object  # int or CURRENT_SIZE
    schema: object


@dataclass(frozen=True)
class Sum:
    variants: tuple


@dataclass(frozen=True)
class Rec:
    body: object


@dataclass(frozen=True)
class RecRef:
    pass


# ---------------------------------------------------------------------------
# validation


def _has_recref(s):
    if isinstance(s, RecRef):
        return True
    if isinstance(s, Product):
        return any(_has_recref(f) for f in s.fields)
    if isinstance(s, Sum):
        return any(_has_recref(v.schema) for v in s.variants)
    # a nested Rec rebinds its own RecRefs
    return False


def validate_schema(schema):
    """Raise DerivationError unless the schema is well-formed: RecRef only
    under Rec, sums nonempty with nonnegative weights, and every recursive
    sum offering a recursion-free variant with constant weight >= 1 (the
    variant still reachable at size 0, which is what guarantees termination
    under size halving)."""

    def walk(s, in_rec):
        if isinstance(s, (IntRange, BoolBase)):
            if isinstance(s, IntRange) and s.lo > s.hi:
                raise DerivationError("int schema with lo > hi")
            return
        if isinstance(s, RecRef):
            if not in_rec:
                raise DerivationError("recref outside any rec")
            return
        if isinstance(s, Product):
            for f in s.fields:
                walk(f, in_rec)
            return
        if isinstance(s, Sum):
            if not s.variants:
                raise DerivationError("sum with no variants")
            for v in s.variants:
                if v.weight != CURRENT_SIZE:
                    if not isinstance(v.weight, int) or v.weight < 0:
                        raise DerivationError(
                            "variant %r: weight must be a nonnegative int "
                            "or 'size'" % v.tag)
                walk(v.schema, in_rec)
            if any(_has_recref(v.schema) for v in s.variants):
                ok = any(not _has_recref(v.schema)
                         and isinstance(v.weight, int) and v.weight >= 1
                         for v in s.variants)
                if not ok:
                    raise DerivationError(
                        "recursive sum has no recursion-free variant with "
                        "constant weight >= 1")
            return
        if isinstance(s, Rec):
            walk(s.body, True)
            return
        raise DerivationError("not a schema node: %r" % (s,))

    walk(schema, False)
    return schema


# ---------------------------------------------------------------------------
# baseline derivation


def derive_baseline(schema):
    validate_schema(schema)
    return _db(schema, None)


def _db_product(fields, rec, mk):
    """Bind each field generator left to right, then mk(values)."""
    gens = [_db(f, rec) for f in fields]

    def chain(i, acc):
        if i == len(gens):
            return B.b_return(mk(acc))
        return B.b_bind(gens[i],
                        lambda v, i=i, acc=acc: chain(i + 1, acc + (v,)))
    return chain(0, ())


def _db(s, rec):
    if isinstance(s, IntRange):
        return B.b_int(s.lo, s.hi)
    if isinstance(s, BoolBase):
        return B.b_bind(B.b_int(0, 1), lambda v: B.b_return(v == 1))
    if isinstance(s, Product):
        return _db_product(s.fields, rec, lambda vs: vs)
    if isinstance(s, Sum):
        def variant_gen(v):
            if isinstance(v.schema, Product):
                return _db_product(v.schema.fields, rec,
                                   lambda vs, tag=v.tag: (tag,) + vs)
            inner = _db(v.schema, rec)
            return B.b_bind(inner,
                            lambda x, tag=v.tag: B.b_return((tag, x)))
        arms = [(v.weight, variant_gen(v)) for v in s.variants]
        if any(w == CURRENT_SIZE for w, _ in arms):
            return B.b_bind(B.b_size(), lambda n: B.b_weighted_union(
                [(n if w == CURRENT_SIZE else w, g) for w, g in arms]))
        return B.b_weighted_union(arms)
    if isinstance(s, Rec):
        return B.b_fixed_point(lambda h: _db(s.body, h))
    if isinstance(s, RecRef):
        return B.b_bind(B.b_size(),
                        lambda n: B.b_with_size(n // 2, rec))
    raise DerivationError("not a schema node: %r" % (s,))


# ---------------------------------------------------------------------------
# staged derivation (same walk, staged combinators)


def derive_staged(schema):
    validate_schema(schema)
    return _ds(schema, None)


def _ds_product(fields, rec, mk):
    gens = [_ds(f, rec) for f in fields]

    def chain(i, acc):
        if i == len(gens):
            return S.s_return(mk(acc))
        return S.s_bind(gens[i],
                        lambda v, i=i, acc=acc: chain(i + 1, acc + (v,)))
    return chain(0, ())


def _ds(s, rec):
    if isinstance(s, IntRange):
        return S.s_int(s.lo, s.hi)
    if isinstance(s, BoolBase):
        return S.s_bind(S.s_int(0, 1),
                        lambda v: S.s_return(Prim("eq", (v, Const(1)))))
    if isinstance(s, Product):
        return _ds_product(s.fields, rec, lambda vs: Tup(vs))
    if isinstance(s, Sum):
        def variant_gen(v):
            if isinstance(v.schema, Product):
                return _ds_product(v.schema.fields, rec,
                                   lambda vs, tag=v.tag: Construct(tag, vs))
            inner = _ds(v.schema, rec)
            return S.s_bind(inner,
                            lambda x, tag=v.tag:
                            S.s_return(Construct(tag, (x,))))
        variants = list(s.variants)
        if any(v.weight == CURRENT_SIZE for v in variants):
            return S.s_bind(S.s_size(), lambda n: S.s_weighted_union(
                [(n if v.weight == CURRENT_SIZE else v.weight,
                  variant_gen(v)) for v in variants]))
        return S.s_weighted_union(
            [(v.weight, variant_gen(v)) for v in variants])
    if isinstance(s, Rec):
        return S.s_fixed_point(lambda h: _ds(s.body, h))
    if isinstance(s, RecRef):
        return S.s_bind(S.s_size(), lambda n: S.s_with_size(
            Prim("div", (n, Const(2))), S.s_recurse(rec)))
    raise DerivationError("not a schema node: %r" % (s,))


# ---------------------------------------------------------------------------
# JSON form


def load_schema(doc):
    """Parse the JSON schema format (dict, or a JSON string)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    return _parse(doc)


def _parse(d):
    if not isinstance(d, dict) or "kind" not in d:
        raise DerivationError("schema node must be an object with 'kind'")
    kind = d["kind"]
    if kind == "int":
        return IntRange(int(d["lo"]), int(d["hi"]))
    if kind == "bool":
        return BoolBase()
    if kind == "product":
        return Product(tuple(_parse(f) for f in d.get("fields", [])))
    if kind == "sum":
        variants = []
        for v in d["variants"]:
            w = v["weight"]
            if w != CURRENT_SIZE:
                w = int(w)
            variants.append(Variant(str(v["tag"]), w, _parse(v["schema"])))
        return Sum(tuple(variants))
    if kind == "rec":
        return Rec(_parse(d["body"]))
    if kind == "recref":
        return RecRef()
    raise DerivationError("unknown schema kind %r" % kind)
