# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled ranked-AVL kernel.

Behavioural twin of ``avlrot._pykernel``: same API, same traces, same
violation tuples.  Keep the two in lockstep.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc, PyMem_Realloc
from libc.string cimport memcpy

import numpy as np

from avlrot.cases import (
    BST_ORDER as _BST_ORDER,
    DEL_DEMOTE as _DEL_DEMOTE,
    DEL_DOUBLE as _DEL_DOUBLE,
    DEL_SINGLE_REPEAT as _DEL_SINGLE_REPEAT,
    DEL_SINGLE_STOP as _DEL_SINGLE_STOP,
    INS_DOUBLE as _INS_DOUBLE,
    INS_PROMOTE as _INS_PROMOTE,
    INS_SINGLE as _INS_SINGLE,
    RANK_DIFF as _RANK_DIFF,
    RANK_HEIGHT as _RANK_HEIGHT,
)
from avlrot.errors import DuplicateKeyError, KeyNotFoundError, MissingChildError

ctypedef long long i64

cdef i64 NIL = -1

cdef int INS_PROMOTE = _INS_PROMOTE
cdef int INS_SINGLE = _INS_SINGLE
cdef int INS_DOUBLE = _INS_DOUBLE
cdef int DEL_DEMOTE = _DEL_DEMOTE
cdef int DEL_SINGLE_STOP = _DEL_SINGLE_STOP
cdef int DEL_SINGLE_REPEAT = _DEL_SINGLE_REPEAT
cdef int DEL_DOUBLE = _DEL_DOUBLE
cdef int BST_ORDER = _BST_ORDER
cdef int RANK_DIFF = _RANK_DIFF
cdef int RANK_HEIGHT = _RANK_HEIGHT


cdef i64* _alloc_buf(Py_ssize_t n) except NULL:
    cdef i64* buf = <i64*> PyMem_Malloc(n * sizeof(i64))
    if buf == NULL:
        raise MemoryError()
    return buf


cdef class TreeKernel:
    """Arena-backed ranked AVL tree over int keys (compiled)."""

    cdef i64* _key
    cdef i64* _rank
    cdef i64* _left
    cdef i64* _right
    cdef i64* _parent
    cdef i64* _free
    cdef Py_ssize_t _cap
    cdef Py_ssize_t _used      # arena slots handed out so far
    cdef Py_ssize_t _nfree
    cdef Py_ssize_t _size
    cdef i64 _root

    backend_name = "compiled"

    def __cinit__(self):
        self._key = NULL
        self._rank = NULL
        self._left = NULL
        self._right = NULL
        self._parent = NULL
        self._free = NULL
        self._cap = 0
        self._used = 0
        self._nfree = 0
        self._size = 0
        self._root = NIL

    def __dealloc__(self):
        PyMem_Free(self._key)
        PyMem_Free(self._rank)
        PyMem_Free(self._left)
        PyMem_Free(self._right)
        PyMem_Free(self._parent)
        PyMem_Free(self._free)

    cdef int _grow(self, Py_ssize_t want) except -1:
        cdef Py_ssize_t cap = self._cap if self._cap else 16
        while cap < want:
            cap *= 2
        self._key = <i64*> PyMem_Realloc(self._key, cap * sizeof(i64))
        self._rank = <i64*> PyMem_Realloc(self._rank, cap * sizeof(i64))
        self._left = <i64*> PyMem_Realloc(self._left, cap * sizeof(i64))
        self._right = <i64*> PyMem_Realloc(self._right, cap * sizeof(i64))
        self._parent = <i64*> PyMem_Realloc(self._parent, cap * sizeof(i64))
        self._free = <i64*> PyMem_Realloc(self._free, cap * sizeof(i64))
        if (self._key == NULL or self._rank == NULL or self._left == NULL
                or self._right == NULL or self._parent == NULL or self._free == NULL):
            raise MemoryError()
        self._cap = cap
        return 0

    # -- accessors ----------------------------------------------------

    @property
    def root(self):
        return self._root

    @property
    def size(self):
        return self._size

    def key_at(self, Py_ssize_t i):
        return self._key[i]

    def rank_at(self, Py_ssize_t i):
        return self._rank[i]

    def left_at(self, Py_ssize_t i):
        return self._left[i]

    def right_at(self, Py_ssize_t i):
        return self._right[i]

    def parent_at(self, Py_ssize_t i):
        return self._parent[i]

    cdef i64 _find(self, i64 key) nogil:
        cdef i64 i = self._root
        cdef i64 k
        while i != NIL:
            k = self._key[i]
            if key == k:
                return i
            i = self._left[i] if key < k else self._right[i]
        return NIL

    def find(self, key):
        return self._find(key)

    def inorder_keys(self):
        cdef list out = []
        if self._root == NIL:
            return out
        cdef i64* stack = _alloc_buf(self._size + 1)
        cdef Py_ssize_t top = 0
        cdef i64 cur = self._root
        try:
            while top or cur != NIL:
                while cur != NIL:
                    stack[top] = cur
                    top += 1
                    cur = self._left[cur]
                top -= 1
                cur = stack[top]
                out.append(self._key[cur])
                cur = self._right[cur]
            return out
        finally:
            PyMem_Free(stack)

    def snapshot(self):
        cdef Py_ssize_t n = self._used
        cdef Py_ssize_t i
        return (
            [self._key[i] for i in range(n)],
            [self._rank[i] for i in range(n)],
            [self._left[i] for i in range(n)],
            [self._right[i] for i in range(n)],
            self._root,
        )

    def clone(self):
        cdef TreeKernel other = TreeKernel.__new__(TreeKernel)
        if self._cap:
            other._grow(self._cap)
            memcpy(other._key, self._key, self._used * sizeof(i64))
            memcpy(other._rank, self._rank, self._used * sizeof(i64))
            memcpy(other._left, self._left, self._used * sizeof(i64))
            memcpy(other._right, self._right, self._used * sizeof(i64))
            memcpy(other._parent, self._parent, self._used * sizeof(i64))
            memcpy(other._free, self._free, self._nfree * sizeof(i64))
        other._used = self._used
        other._nfree = self._nfree
        other._size = self._size
        other._root = self._root
        return other

    # -- mutation -----------------------------------------------------

    cdef i64 _node_alloc(self, i64 key, i64 parent) except -2:
        cdef i64 i
        if self._nfree:
            self._nfree -= 1
            i = self._free[self._nfree]
        else:
            if self._used == self._cap:
                self._grow(self._used + 1)
            i = self._used
            self._used += 1
        self._key[i] = key
        self._rank[i] = 0
        self._left[i] = NIL
        self._right[i] = NIL
        self._parent[i] = parent
        self._size += 1
        return i

    cdef void _release(self, i64 i) nogil:
        self._parent[i] = NIL
        self._left[i] = NIL
        self._right[i] = NIL
        self._free[self._nfree] = i
        self._nfree += 1
        self._size -= 1

    cdef i64 _rotate(self, i64 i, bint rotate_right) except -2:
        cdef i64* left = self._left
        cdef i64* right = self._right
        cdef i64* parent = self._parent
        cdef i64 c, g
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
            self._root = c
        elif left[g] == i:
            left[g] = c
        else:
            right[g] = c
        return c

    def rotate(self, i, rotate_right):
        return self._rotate(i, rotate_right)

    def insert(self, i64 key):
        """Add ``key``; returns the rebalancing trace as int codes."""
        cdef i64 p = NIL
        cdef i64 cur = self._root
        cdef i64 k, z
        cdef bint went_left = False
        while cur != NIL:
            k = self._key[cur]
            if key == k:
                raise DuplicateKeyError(f"key {key} is already present")
            p = cur
            if key < k:
                cur = self._left[cur]
                went_left = True
            else:
                cur = self._right[cur]
                went_left = False
        z = self._node_alloc(key, p)
        if p == NIL:
            self._root = z
            return []
        if went_left:
            self._left[p] = z
        else:
            self._right[p] = z
        return self._rebalance_insert(z, p)

    cdef list _rebalance_insert(self, i64 x, i64 p):
        cdef list trace = []
        cdef i64* rank = self._rank
        cdef i64* left = self._left
        cdef i64* right = self._right
        cdef i64 sib, c_out, c_in, w
        cdef i64 srank, d_out
        cdef bint x_is_left
        while p != NIL and rank[x] == rank[p]:
            sib = right[p] if left[p] == x else left[p]
            srank = rank[sib] if sib != NIL else -1
            if rank[p] - srank == 1:
                rank[p] += 1
                trace.append(INS_PROMOTE)
                x = p
                p = self._parent[x]
                continue
            # p holds differences 0 and 2; x was just promoted and is 1,2.
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

    def delete(self, i64 key):
        """Remove ``key``; returns the rebalancing trace as int codes."""
        cdef i64 i = self._find(key)
        if i == NIL:
            raise KeyNotFoundError(f"key {key} is not present")
        cdef i64* left = self._left
        cdef i64* right = self._right
        cdef i64* parent = self._parent
        cdef i64 s, c, p, tmp
        if left[i] != NIL and right[i] != NIL:
            # Binary node: swap with the symmetric-order successor.
            s = right[i]
            while left[s] != NIL:
                s = left[s]
            tmp = self._key[i]
            self._key[i] = self._key[s]
            self._key[s] = tmp
            i = s
        c = left[i] if left[i] != NIL else right[i]
        p = parent[i]
        if c != NIL:
            parent[c] = p
        if p == NIL:
            self._root = c
        elif left[p] == i:
            left[p] = c
        else:
            right[p] = c
        self._release(i)
        if p == NIL:
            return []
        return self._rebalance_delete(p)

    cdef list _rebalance_delete(self, i64 p):
        cdef list trace = []
        cdef i64* rank = self._rank
        cdef i64* left = self._left
        cdef i64* right = self._right
        cdef i64 l, r, y, y_out, y_in, w
        cdef i64 dl, dr, d_out, d_in
        cdef bint y_is_right
        while p != NIL:
            l = left[p]
            r = right[p]
            dl = rank[p] - (rank[l] if l != NIL else -1)
            dr = rank[p] - (rank[r] if r != NIL else -1)
            if dl <= 2 and dr <= 2:
                if dl == 2 and dr == 2:
                    rank[p] -= 1
                    trace.append(DEL_DEMOTE)
                    p = self._parent[p]
                    continue
                break
            # p holds differences 1 and 3; the 1-side sibling y is 1,1
            # or 1,2 (a 2,2 sibling cannot survive to this point).
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
                p = self._parent[y]
                continue
            assert d_in == 1
            w = y_in
            self._rotate(y, y_is_right)
            self._rotate(p, not y_is_right)
            rank[w] += 1
            rank[y] -= 1
            rank[p] -= 2
            trace.append(DEL_DOUBLE)
            p = self._parent[w]
        return trace

    # -- bulk load and checking ----------------------------------------

    def load(self, keys, ranks, lefts, rights, root):
        """Replace the contents with explicit arrays (tree-ness checked)."""
        cdef i64[::1] kv = np.ascontiguousarray(keys, dtype=np.int64)
        cdef i64[::1] rv = np.ascontiguousarray(ranks, dtype=np.int64)
        cdef i64[::1] lv = np.ascontiguousarray(lefts, dtype=np.int64)
        cdef i64[::1] Rv = np.ascontiguousarray(rights, dtype=np.int64)
        cdef Py_ssize_t n = kv.shape[0]
        cdef i64 rt = root
        if rv.shape[0] != n or lv.shape[0] != n or Rv.shape[0] != n:
            raise ValueError("array lengths differ")
        if n == 0:
            if rt != NIL:
                raise ValueError("root index out of range")
            self._used = 0
            self._nfree = 0
            self._size = 0
            self._root = NIL
            return
        if rt < 0 or rt >= n:
            raise ValueError("root index out of range")
        self._grow(n)
        cdef i64* parent = self._parent
        cdef Py_ssize_t i
        cdef i64 c
        cdef int side
        for i in range(n):
            parent[i] = NIL
        for i in range(n):
            for side in range(2):
                c = lv[i] if side == 0 else Rv[i]
                if c == NIL:
                    continue
                if c < 0 or c >= n:
                    raise ValueError(f"child index {c} out of range")
                if parent[c] != NIL or c == rt:
                    raise ValueError("arrays do not form a tree")
                parent[c] = i
        # reachability from the root (cycles never reach full count)
        cdef i64* stack = _alloc_buf(n + 1)
        cdef Py_ssize_t top = 0
        cdef Py_ssize_t reached = 0
        cdef i64 j
        try:
            stack[top] = rt
            top += 1
            while top:
                top -= 1
                j = stack[top]
                reached += 1
                if lv[j] != NIL:
                    stack[top] = lv[j]
                    top += 1
                if Rv[j] != NIL:
                    stack[top] = Rv[j]
                    top += 1
        finally:
            PyMem_Free(stack)
        if reached != n:
            raise ValueError("arrays do not form a tree")
        for i in range(n):
            self._key[i] = kv[i]
            self._rank[i] = rv[i]
            self._left[i] = lv[i]
            self._right[i] = Rv[i]
        self._used = n
        self._nfree = 0
        self._size = n
        self._root = rt

    def violations(self):
        """Invariant breaks as (code, key, a, b) tuples; empty == valid."""
        cdef list out = []
        cdef i64 root = self._root
        if root == NIL:
            return out
        cdef i64* keys = self._key
        cdef i64* rank = self._rank
        cdef i64* left = self._left
        cdef i64* right = self._right
        cdef Py_ssize_t n = self._size
        cdef i64* stack = _alloc_buf(2 * n + 2)
        cdef i64* heights = _alloc_buf(self._used if self._used else 1)
        cdef Py_ssize_t top = 0
        cdef i64 cur, i, l, r, hl, hr, dl, dr, prev
        cdef bint have_prev = False
        try:
            # pass 1: symmetric order
            cur = root
            prev = 0
            while top or cur != NIL:
                while cur != NIL:
                    stack[top] = cur
                    top += 1
                    cur = left[cur]
                top -= 1
                cur = stack[top]
                if have_prev and keys[cur] <= prev:
                    out.append((BST_ORDER, keys[cur], prev, 0))
                prev = keys[cur]
                have_prev = True
                cur = right[cur]
            # pass 2: rank differences and rank == height, post-order
            top = 0
            stack[top] = root
            top += 1
            while top:
                top -= 1
                i = stack[top]
                if i >= 0:
                    stack[top] = ~i
                    top += 1
                    if left[i] != NIL:
                        stack[top] = left[i]
                        top += 1
                    if right[i] != NIL:
                        stack[top] = right[i]
                        top += 1
                    continue
                i = ~i
                l = left[i]
                r = right[i]
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
        finally:
            PyMem_Free(stack)
            PyMem_Free(heights)
