"""Binary search trees: reference operations and injected bugs.

Trees are tagged tuples: ("leaf",) or ("node", left, key, value, right).
Valid trees have strictly ordered keys (left < key < right, no duplicates).
Each mutant below differs from the reference in exactly one localized
change, and each breaks an invariant its paired property can observe.
"""

LEAF = ("leaf",)


def node(left, key, value, right):
    return ("node", left, key, value, right)


def is_leaf(t):
    return t[0] == "leaf"


def is_bst(t, lo=None, hi=None):
    """Strict key order with exclusive bounds."""
    if is_leaf(t):
        return True
    _, left, key, _, right = t
    if lo is not None and key <= lo:
        return False
    if hi is not None and key >= hi:
        return False
    return is_bst(left, lo, key) and is_bst(right, key, hi)


def insert(k, v, t):
    """Insert or replace binding k -> v."""
    if is_leaf(t):
        return ("node", LEAF, k, v, LEAF)
    _, left, key, val, right = t
    if k < key:
        return ("node", insert(k, v, left), key, val, right)
    if k > key:
        return ("node", left, key, val, insert(k, v, right))
    return ("node", left, key, v, right)


def find(k, t):
    while not is_leaf(t):
        _, left, key, val, right = t
        if k < key:
            t = left
        elif k > key:
            t = right
        else:
            return val
    return None


def _min_binding(t):
    while not is_leaf(t[1]):
        t = t[1]
    return t[2], t[3]


def delete(k, t):
    """Remove k if present; two-child case promotes the successor."""
    if is_leaf(t):
        return t
    _, left, key, val, right = t
    if k < key:
        return ("node", delete(k, left), key, val, right)
    if k > key:
        return ("node", left, key, val, delete(k, right))
    if is_leaf(left):
        return right
    if is_leaf(right):
        return left
    sk, sv = _min_binding(right)
    return ("node", left, sk, sv, delete(sk, right))


def bindings(t, out=None):
    """Inorder (key, value) list."""
    if out is None:
        out = []
    if not is_leaf(t):
        _, left, key, val, right = t
        bindings(left, out)
        out.append((key, val))
        bindings(right, out)
    return out


def union(t1, t2):
    """Keys of both trees; t1's value wins on shared keys."""
    acc = t2
    for k, v in bindings(t1):
        acc = insert(k, v, acc)
    return acc


def tree_size(t):
    return 0 if is_leaf(t) else 1 + tree_size(t[1]) + tree_size(t[4])


# ---------------------------------------------------------------------------
# mutants


def insert_dup_left(k, v, t):
    # bug: <= sends equal keys left, inserting a duplicate
    if is_leaf(t):
        return ("node", LEAF, k, v, LEAF)
    _, left, key, val, right = t
    if k <= key:
        return ("node", insert_dup_left(k, v, left), key, val, right)
    return ("node", left, key, val, insert_dup_left(k, v, right))


def insert_no_replace(k, v, t):
    # bug: equal key descends right instead of replacing
    if is_leaf(t):
        return ("node", LEAF, k, v, LEAF)
    _, left, key, val, right = t
    if k < key:
        return ("node", insert_no_replace(k, v, left), key, val, right)
    return ("node", left, key, val, insert_no_replace(k, v, right))


def insert_wrong_subtree(k, v, t):
    # bug: comparison inverted, descends into the wrong child
    if is_leaf(t):
        return ("node", LEAF, k, v, LEAF)
    _, left, key, val, right = t
    if k < key:
        return ("node", left, key, val, insert_wrong_subtree(k, v, right))
    if k > key:
        return ("node", insert_wrong_subtree(k, v, left), key, val, right)
    return ("node", left, key, v, right)


def insert_swap_kv(k, v, t):
    # bug: fresh leaves are built with key and value swapped
    if is_leaf(t):
        return ("node", LEAF, v, k, LEAF)
    _, left, key, val, right = t
    if k < key:
        return ("node", insert_swap_kv(k, v, left), key, val, right)
    if k > key:
        return ("node", left, key, val, insert_swap_kv(k, v, right))
    return ("node", left, key, v, right)


def delete_skip_fixup(k, t):
    # bug: two-child case copies the successor up without removing it
    if is_leaf(t):
        return t
    _, left, key, val, right = t
    if k < key:
        return ("node", delete_skip_fixup(k, left), key, val, right)
    if k > key:
        return ("node", left, key, val, delete_skip_fixup(k, right))
    if is_leaf(left):
        return right
    if is_leaf(right):
        return left
    sk, sv = _min_binding(right)
    return ("node", left, sk, sv, right)


def delete_swap_children(k, t):
    # bug: rebuilds the node with children swapped on the search path
    if is_leaf(t):
        return t
    _, left, key, val, right = t
    if k < key:
        return ("node", right, key, val, delete_swap_children(k, left))
    if k > key:
        return ("node", left, key, val, delete_swap_children(k, right))
    if is_leaf(left):
        return right
    if is_leaf(right):
        return left
    sk, sv = _min_binding(right)
    return ("node", left, sk, sv, delete(sk, right))


def delete_wrong_successor(k, t):
    # bug: promotes the right child's root instead of its minimum
    if is_leaf(t):
        return t
    _, left, key, val, right = t
    if k < key:
        return ("node", delete_wrong_successor(k, left), key, val, right)
    if k > key:
        return ("node", left, key, val, delete_wrong_successor(k, right))
    if is_leaf(left):
        return right
    if is_leaf(right):
        return left
    sk, sv = right[2], right[3]
    return ("node", left, sk, sv, delete(sk, right))


def union_graft_right(t1, t2):
    # bug: grafts the whole second tree at the rightmost position
    if is_leaf(t1):
        return t2
    _, left, key, val, right = t1
    return ("node", left, key, val, union_graft_right(right, t2))


def _insert_dup(k, v, t):
    if is_leaf(t):
        return ("node", LEAF, k, v, LEAF)
    _, left, key, val, right = t
    if k < key:
        return ("node", _insert_dup(k, v, left), key, val, right)
    return ("node", left, key, val, _insert_dup(k, v, right))


def union_keep_duplicates(t1, t2):
    # bug: shared keys are inserted again instead of replaced
    acc = t2
    for k, v in bindings(t1):
        acc = _insert_dup(k, v, acc)
    return acc
