"""Pure-Python ranked-AVL kernel.

Storage is an arena of parallel lists indexed by integer handles, with
-1 as the nil sentinel.  Every node keeps a rank; the tree maintains
rank differences of 1 or 2 to each child (missing children count as
rank -1), which pins rank == height everywhere.

This module is the behavioural twin of ``avlrot._speedups``; the two
must stay in lockstep.  Both report rebalancing steps as lists of the
int codes from :mod:`avlrot.cases`.
"""

from __future__ import annotations

from avlrot.cases import (
    BST_ORDER,
    DEL_DEMOTE,
    DEL_DOUBLE,
    DEL_SINGLE_REPEAT,
    DEL_SINGLE_STOP,
    INS_DOUBLE,
    INS_PROMOTE,
    INS_SINGLE,
    RANK_DIFF,
    RANK_HEIGHT,
)
from avlrot.errors import DuplicateKeyError, KeyNotFoundError, MissingChildError

NIL = -1


class TreeKernel:
    """Arena-backed ranked AVL tree over int keys."""

    backend_name = "pure"

    __slots__ = ("_key", "_rank", "_left", "_right", "_parent", "_free", "root", "size")

    def __init__(self):
        self._key: list[int] = []
        self._rank: list[int] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._parent: list[int] = []
        self._free: list[int] = []
        self.root = NIL
        self.size = 0

    # -- accessors ----------------------------------------------------

    def key_at(self, i: int) -> int:
        return self._key[i]

    def rank_at(self, i: int) -> int:
        return self._rank[i]

    def left_at(self, i: int) -> int:
        return self._left[i]

    def right_at(self, i: int) -> int:
        return self._right[i]

    def parent_at(self, i: int) -> int:
        return self._parent[i]

    def find(self, key: int) -> int:
        """Index of ``key``, or -1 if absent."""
        i = self.root
        keys = self._key
        while i != NIL:
            k = keys[i]
            if key == k:
                return i
            i = self._left[i] if key < k else self._right[i]
        return NIL

    def inorder_keys(self) -> list[int]:
        out = []
        stack = []
        cur = self.root
        left, right, keys = self._left, self._right, self._key
        while stack or cur != NIL:
            while cur != NIL:
                stack.append(cur)
                cur = left[cur]
            cur = stack.pop()
            out.append(keys[cur])
            cur = right[cur]
        return out

    def snapshot(self):
        """Copies of the arena arrays plus the root index.

        Free slots keep stale values; consumers must walk from the root.
        """
        return (
            list(self._key),
            list(self._rank),
            list(self._left),
            list(self._right),
            self.root,
        )

    def clone(self) -> "TreeKernel":
        other = TreeKernel()
        other._key = list(self._key)
        other._rank = list(self._rank)
        other._left = list(self._left)
        other._right = list(self._right)
        other._parent = list(self._parent)
        other._free = list(self._free)
        other.root = self.root
        other.size = self.size
        return other

    # -- mutation -----------------------------------------------------

    def _alloc(self, key: int, parent: int) -> int:
        if self._free:
            i = self._free.pop()
            self._key[i] = key
            self._rank[i] = 0
            self._left[i] = NIL
            self._right[i] = NIL
            self._parent[i] = parent
        else:
            i = len(self._key)
            self._key.append(key)
            self._rank.append(0)
            self._left.append(NIL)
            self._right.append(NIL)
            self._parent.append(parent)
        self.size += 1
        return i

    def _release(self, i: int) -> None:
        self._parent[i] = NIL
        self._left[i] = NIL
        self._right[i] = NIL
        self._free.append(i)
        self.size -= 1

    def _rotate(self, i: int, rotate_right: bool) -> int:
        """Hoist a child of ``i`` one level; returns the new subtree root.

        Ranks are left untouched: callers own the rank bookkeeping.
        """
        left, right, parent = self._left, self._right, self._parent
        if rotate_right:
            c = left[i]
            if c == NIL:
                raise MissingChildError(
                    f"right rotation at key {self._key[i]} needs a left child"
                )
            left[i] = right[c]
            if right[c] != NIL:
                parent[right[c]] = i
            right[c] = i
        else:
            c = right[i]
            if c == NIL:
                raise MissingChildError(
                    f"left rotation at key {self._key[i]} needs a right child"
                )
            right[i] = left[c]
            if left[c] != NIL:
                parent[left[c]] = i
            left[c] = i
        g = parent[i]
        parent[c] = g
        parent[i] = c
        if g == NIL:
            self.root = c
        elif left[g] == i:
            left[g] = c
        else:
            right[g] = c
        return c

    def rotate(self, i: int, rotate_right: bool) -> int:
        return self._rotate(i, rotate_right)

    def insert(self, key: int) -> list[int]:
        """Add ``key``; returns the rebalancing trace as int codes."""
        p = NIL
        cur = self.root
        keys, left, right = self._key, self._left, self._right
        went_left = False
        while cur != NIL:
            k = keys[cur]
            if key == k:
                raise DuplicateKeyError(f"key {key} is already present")
            p = cur
            if key < k:
                cur = left[cur]
                went_left = True
            else:
                cur = right[cur]
                went_left = False
        z = self._alloc(key, p)
        if p == NIL:
            self.root = z
            return []
        if went_left:
            left[p] = z
        else:
            right[p] = z
        return self._rebalance_insert(z, p)

    def _rebalance_insert(self, x: int, p: int) -> list[int]:
        trace: list[int] = []
        rank, left, right, parent = self._rank, self._left, self._right, self._parent
        while p != NIL and rank[x] == rank[p]:
            sib = right[p] if left[p] == x else left[p]
            srank = rank[sib] if sib != NIL else -1
            if rank[p] - srank == 1:
                rank[p] += 1
                trace.append(INS_PROMOTE)
                x = p
                p = parent[x]
                continue
            # p holds differences 0 and 2; a rotation restores the rule
            # and stops the loop.  The freshly promoted x is always 1,2.
            assert rank[p] - srank == 2
            x_is_left = left[p] == x
            c_out = left[x] if x_is_left else right[x]
            c_in = right[x] if x_is_left else left[x]
            d_out = rank[x] - (rank[c_out] if c_out != NIL else -1)
            if d_out == 1:
                self._rotate(p, x_is_left)
                rank[p] -= 1
                trace.append(INS_SINGLE)
            else:
                w = c_in
                self._rotate(x, not x_is_left)
                self._rotate(p, x_is_left)
                rank[w] += 1
                rank[x] -= 1
                rank[p] -= 1
                trace.append(INS_DOUBLE)
            break
        return trace

    def delete(self, key: int) -> list[int]:
        """Remove ``key``; returns the rebalancing trace as int codes."""
        i = self.find(key)
        if i == NIL:
            raise KeyNotFoundError(f"key {key} is not present")
        keys, left, right, parent = self._key, self._left, self._right, self._parent
        if left[i] != NIL and right[i] != NIL:
            # Binary node: swap with the symmetric-order successor, then
            # remove at the successor's (leaf or unary) position.
            s = right[i]
            while left[s] != NIL:
                s = left[s]
            keys[i], keys[s] = keys[s], keys[i]
            i = s
        c = left[i] if left[i] != NIL else right[i]
        p = parent[i]
        if c != NIL:
            parent[c] = p
        if p == NIL:
            self.root = c
        elif left[p] == i:
            left[p] = c
        else:
            right[p] = c
        self._release(i)
        if p == NIL:
            return []
        return self._rebalance_delete(p)

    def _rebalance_delete(self, p: int) -> list[int]:
        trace: list[int] = []
        rank, left, right, parent = self._rank, self._left, self._right, self._parent
        while p != NIL:
            l, r = left[p], right[p]
            dl = rank[p] - (rank[l] if l != NIL else -1)
            dr = rank[p] - (rank[r] if r != NIL else -1)
            if dl <= 2 and dr <= 2:
                if dl == 2 and dr == 2:
                    rank[p] -= 1
                    trace.append(DEL_DEMOTE)
                    p = parent[p]
                    continue
                break
            # p holds differences 1 and 3; the sibling y on the 1 side is
            # itself 1,1 or 1,2 (a 2,2 sibling cannot survive to this
            # point, hence the assertions).
            assert (dl == 3 and dr == 1) or (dl == 1 and dr == 3)
            y_is_right = dl == 3
            y = r if y_is_right else l
            y_out = right[y] if y_is_right else left[y]
            y_in = left[y] if y_is_right else right[y]
            d_out = rank[y] - (rank[y_out] if y_out != NIL else -1)
            d_in = rank[y] - (rank[y_in] if y_in != NIL else -1)
            if d_out == 1 and d_in == 1:
                self._rotate(p, not y_is_right)
                rank[y] += 1
                rank[p] -= 1
                trace.append(DEL_SINGLE_STOP)
                break
            if d_out == 1:
                self._rotate(p, not y_is_right)
                rank[p] -= 2
                trace.append(DEL_SINGLE_REPEAT)
                p = parent[y]
                continue
            assert d_in == 1
            w = y_in
            self._rotate(y, y_is_right)
            self._rotate(p, not y_is_right)
            rank[w] += 1
            rank[y] -= 1
            rank[p] -= 2
            trace.append(DEL_DOUBLE)
            p = parent[w]
        return trace

    # -- bulk load and checking ----------------------------------------

    def load(self, keys, ranks, lefts, rights, root: int) -> None:
        """Replace the contents with explicit arrays.

        Checks that the arrays describe a single rooted tree (every
        non-root node has exactly one parent, everything reachable).
        AVL validity is *not* checked here; see :meth:`violations`.
        """
        keys = keys.tolist() if hasattr(keys, "tolist") else list(keys)
        ranks = ranks.tolist() if hasattr(ranks, "tolist") else list(ranks)
        lefts = lefts.tolist() if hasattr(lefts, "tolist") else list(lefts)
        rights = rights.tolist() if hasattr(rights, "tolist") else list(rights)
        n = len(keys)
        if not (len(ranks) == len(lefts) == len(rights) == n):
            raise ValueError("array lengths differ")
        if n == 0:
            if root != NIL:
                raise ValueError("root index out of range")
            self.__init__()
            return
        if not 0 <= root < n:
            raise ValueError("root index out of range")
        parent = [NIL] * n
        for i in range(n):
            for c in (lefts[i], rights[i]):
                if c == NIL:
                    continue
                if not 0 <= c < n:
                    raise ValueError(f"child index {c} out of range")
                if parent[c] != NIL or c == root:
                    raise ValueError("arrays do not form a tree")
                parent[c] = i
        reached = 0
        stack = [root]
        while stack:
            i = stack.pop()
            reached += 1
            if lefts[i] != NIL:
                stack.append(lefts[i])
            if rights[i] != NIL:
                stack.append(rights[i])
        if reached != n:
            raise ValueError("arrays do not form a tree")
        self._key = keys
        self._rank = ranks
        self._left = lefts
        self._right = rights
        self._parent = parent
        self._free = []
        self.root = root
        self.size = n

    def violations(self) -> list[tuple[int, int, int, int]]:
        """Scan for invariant breaks; empty list means the tree is valid.

        Tuples are (code, key, a, b): BST_ORDER carries the previous
        key, RANK_DIFF the offending difference and side, RANK_HEIGHT
        the stored rank and recomputed height.
        """
        out: list[tuple[int, int, int, int]] = []
        root = self.root
        if root == NIL:
            return out
        keys, rank, left, right = self._key, self._rank, self._left, self._right
        stack: list[int] = []
        cur = root
        prev = None
        while stack or cur != NIL:
            while cur != NIL:
                stack.append(cur)
                cur = left[cur]
            cur = stack.pop()
            if prev is not None and keys[cur] <= prev:
                out.append((BST_ORDER, keys[cur], prev, 0))
            prev = keys[cur]
            cur = right[cur]
        heights = [0] * len(keys)
        post = [root]
        while post:
            i = post.pop()
            if i >= 0:
                post.append(~i)
                if left[i] != NIL:
                    post.append(left[i])
                if right[i] != NIL:
                    post.append(right[i])
                continue
            i = ~i
            l, r = left[i], right[i]
            hl = heights[l] if l != NIL else -1
            hr = heights[r] if r != NIL else -1
            heights[i] = 1 + (hl if hl > hr else hr)
            dl = rank[i] - (rank[l] if l != NIL else -1)
            dr = rank[i] - (rank[r] if r != NIL else -1)
            if dl < 1 or dl > 2:
                out.append((RANK_DIFF, keys[i], dl, 0))
            if dr < 1 or dr > 2:
                out.append((RANK_DIFF, keys[i], dr, 1))
            if rank[i] != heights[i]:
                out.append((RANK_HEIGHT, keys[i], rank[i], heights[i]))
        return out
