"""Independent checking tools: a textbook AVL tree and shape catalogs.

Nothing here shares code with the ranked kernels.  The classic tree
stores heights and rebalances on balance factors, the way an
introductory text would write it, so it can sit on the other side of
differential tests.  It promises the same key sets and height balance
as :class:`avlrot.core.Tree`, not the same shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from avlrot.core import Tree
from avlrot.errors import BoundExceededError, DuplicateKeyError, KeyNotFoundError

NIL = -1

ENUMERATION_BOUND = 14


def is_height_balanced(tree: Tree) -> bool:
    """Height balance from scratch: ranks are ignored entirely.

    Recomputes every subtree height and checks the children differ by
    at most one.  The empty tree is balanced.
    """
    keys, _, lefts, rights, root = tree._k.snapshot()
    if root == NIL:
        return True
    heights = [0] * len(keys)
    stack = [root]
    while stack:
        i = stack.pop()
        if i >= 0:
            stack.append(~i)
            if lefts[i] != NIL:
                stack.append(lefts[i])
            if rights[i] != NIL:
                stack.append(rights[i])
            continue
        i = ~i
        hl = heights[lefts[i]] if lefts[i] != NIL else -1
        hr = heights[rights[i]] if rights[i] != NIL else -1
        if hl - hr > 1 or hr - hl > 1:
            return False
        heights[i] = 1 + (hl if hl > hr else hr)
    return True


# -- exhaustive shape catalogs ------------------------------------------


@dataclass(frozen=True)
class ShapeCatalog:
    """Every height-balanced shape on ``node_count`` nodes.

    Shapes carry keys 1..n by in-order position and ranks equal to
    recomputed heights, so each one is a valid tree on its own.
    """

    node_count: int
    shapes: tuple[Tree, ...]


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    """Balanced shapes as nested (height, left, right) tuples."""
    if n == 0:
        return (None,)
    out = []
    for left_n in range(n):
        for ls in _shapes(left_n):
            for rs in _shapes(n - 1 - left_n):
                hl = -1 if ls is None else ls[0]
                hr = -1 if rs is None else rs[0]
                if hl - hr > 1 or hr - hl > 1:
                    continue
                out.append((1 + max(hl, hr), ls, rs))
    return tuple(out)


def _shape_to_tree(shape) -> Tree:
    ranks: list[int] = []
    lefts: list[int] = []
    rights: list[int] = []

    def build(s) -> int:
        if s is None:
            return NIL
        h, ls, rs = s
        li = build(ls)
        i = len(ranks)
        ranks.append(h)
        lefts.append(li)
        rights.append(NIL)
        ri = build(rs)
        rights[i] = ri
        return i

    root = build(shape)
    keys = list(range(1, len(ranks) + 1))
    return Tree.from_arrays(ranks, lefts, rights, root, keys=keys)


def enumerate_avl_shapes(n: int) -> ShapeCatalog:
    """Exhaustive catalog for 0 <= n <= 14.

    Built by recursive composition over every (left size, right size)
    split, keeping only splits whose subtree heights differ by at most
    one.  Raises BoundExceededError above n = 14: the counts grow fast
    enough that a larger exhaustive catalog stops being a test fixture.
    """
    if n < 0:
        raise ValueError("node count must be non-negative")
    if n > ENUMERATION_BOUND:
        raise BoundExceededError(
            f"shape enumeration is bounded at n <= {ENUMERATION_BOUND}, got {n}"
        )
    shapes = tuple(_shape_to_tree(s) for s in _shapes(n))
    return ShapeCatalog(node_count=n, shapes=shapes)


# -- classic height-based AVL tree ---------------------------------------


class _Node:
    __slots__ = ("key", "left", "right", "height")

    def __init__(self, key: int):
        self.key = key
        self.left: _Node | None = None
        self.right: _Node | None = None
        self.height = 0


def _h(node: _Node | None) -> int:
    return -1 if node is None else node.height


def _refresh(node: _Node) -> None:
    node.height = 1 + max(_h(node.left), _h(node.right))


def _rot_right(node: _Node) -> _Node:
    pivot = node.left
    node.left = pivot.right
    pivot.right = node
    _refresh(node)
    _refresh(pivot)
    return pivot


def _rot_left(node: _Node) -> _Node:
    pivot = node.right
    node.right = pivot.left
    pivot.left = node
    _refresh(node)
    _refresh(pivot)
    return pivot


def _settle(node: _Node) -> _Node:
    _refresh(node)
    bf = _h(node.left) - _h(node.right)
    if bf > 1:
        if _h(node.left.left) < _h(node.left.right):
            node.left = _rot_left(node.left)
        return _rot_right(node)
    if bf < -1:
        if _h(node.right.right) < _h(node.right.left):
            node.right = _rot_right(node.right)
        return _rot_left(node)
    return node


class ClassicAvlTree:
    """Plain height/balance-factor AVL tree, recursion and all."""

    def __init__(self):
        self._root: _Node | None = None
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def __contains__(self, key: int) -> bool:
        node = self._root
        while node is not None:
            if key == node.key:
                return True
            node = node.left if key < node.key else node.right
        return False

    def insert(self, key: int) -> None:
        def go(node: _Node | None) -> _Node:
            if node is None:
                return _Node(key)
            if key == node.key:
                raise DuplicateKeyError(f"key {key} is already present")
            if key < node.key:
                node.left = go(node.left)
            else:
                node.right = go(node.right)
            return _settle(node)

        self._root = go(self._root)
        self._size += 1

    def delete(self, key: int) -> None:
        def go(node: _Node | None, key: int) -> _Node | None:
            if node is None:
                raise KeyNotFoundError(f"key {key} is not present")
            if key < node.key:
                node.left = go(node.left, key)
            elif key > node.key:
                node.right = go(node.right, key)
            else:
                if node.left is None:
                    return node.right
                if node.right is None:
                    return node.left
                succ = node.right
                while succ.left is not None:
                    succ = succ.left
                node.key = succ.key
                node.right = go(node.right, succ.key)
            return _settle(node)

        self._root = go(self._root, key)
        self._size -= 1

    def keys(self) -> list[int]:
        out: list[int] = []
        stack: list[_Node] = []
        node = self._root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            out.append(node.key)
            node = node.right
        return out

    def is_height_balanced(self) -> bool:
        """From-scratch recheck; ignores the stored heights."""

        def go(node: _Node | None) -> tuple[bool, int]:
            if node is None:
                return True, -1
            okl, hl = go(node.left)
            okr, hr = go(node.right)
            return okl and okr and abs(hl - hr) <= 1, 1 + max(hl, hr)

        return go(self._root)[0]
