"""Rank-balanced AVL tree with exact rebalancing-case instrumentation.

Every node carries a rank equal to its height; rank differences to
children are 1 or 2 (missing children have rank -1).  Each insert or
delete reports a :class:`RebalanceCounters` plus the ordered tuple of
:class:`~avlrot.cases.Case` labels it fired, so rebalancing cost can be
measured exactly rather than asymptotically.

Counter semantics: ``promotions`` and ``demotions`` count only the
loop-advancing promote/demote steps.  Rank adjustments folded into a
rotation case are part of that rotation, not separate promotions or
demotions.  Duplicate inserts and misses are errors, never silent
no-ops.

Trees are single-writer: no internal locking, one mutator at a time.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from avlrot import cases
from avlrot._backend import DEFAULT_KERNEL, kernel_class
from avlrot.cases import Case
from avlrot.errors import (
    EmptyTreeError,
    KeyNotFoundError,
    ParseError,
    ValidationError,
)

NIL = -1

_SINGLES = (cases.INS_SINGLE, cases.DEL_SINGLE_STOP, cases.DEL_SINGLE_REPEAT)
_DOUBLES = (cases.INS_DOUBLE, cases.DEL_DOUBLE)


@dataclass(frozen=True)
class RebalanceCounters:
    """Exact step counts for one operation (or a sum of operations)."""

    promotions: int = 0
    demotions: int = 0
    single_rotations: int = 0
    double_rotations: int = 0
    steps: int = 0

    @property
    def rotations_total(self) -> int:
        """Individual rotations: a double rotation contributes two."""
        return self.single_rotations + 2 * self.double_rotations

    def __add__(self, other: "RebalanceCounters") -> "RebalanceCounters":
        return RebalanceCounters(
            self.promotions + other.promotions,
            self.demotions + other.demotions,
            self.single_rotations + other.single_rotations,
            self.double_rotations + other.double_rotations,
            self.steps + other.steps,
        )


def _counters_from_codes(codes: list[int]) -> RebalanceCounters:
    return RebalanceCounters(
        promotions=codes.count(cases.INS_PROMOTE),
        demotions=codes.count(cases.DEL_DEMOTE),
        single_rotations=sum(codes.count(c) for c in _SINGLES),
        double_rotations=sum(codes.count(c) for c in _DOUBLES),
        steps=len(codes),
    )


@dataclass(frozen=True)
class Violation:
    kind: str  # "bst-order" | "rank-diff" | "rank-height"
    key: int
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at key {self.key}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


def _report_from_raw(raw) -> ValidationReport:
    out = []
    for code, key, a, b in raw:
        if code == cases.BST_ORDER:
            out.append(
                Violation("bst-order", key, f"key {key} follows key {a} in order")
            )
        elif code == cases.RANK_DIFF:
            side = "left" if b == 0 else "right"
            out.append(
                Violation("rank-diff", key, f"{side} child rank difference is {a}")
            )
        else:
            out.append(Violation("rank-height", key, f"rank {a} but height {b}"))
    return ValidationReport(tuple(out))


def _check_key(key) -> int:
    key = operator.index(key)
    if key < 0:
        raise ValueError(f"keys are non-negative integers, got {key}")
    return key


class Tree:
    """Ranked AVL tree over non-negative int keys.

    ``backend`` picks the kernel ("compiled" or "pure"); the default is
    whatever :mod:`avlrot._backend` selected at import.
    """

    __slots__ = ("_k",)

    def __init__(self, backend: Optional[str] = None):
        cls = DEFAULT_KERNEL if backend is None else kernel_class(backend)
        self._k = cls()

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_keys(cls, keys: Iterable[int], backend: Optional[str] = None) -> "Tree":
        """Build by inserting ``keys`` in the given order."""
        t = cls(backend)
        for k in keys:
            t.insert(k)
        return t

    @classmethod
    def from_arrays(
        cls,
        ranks,
        lefts,
        rights,
        root: int,
        keys=None,
        backend: Optional[str] = None,
    ) -> "Tree":
        """Build from explicit node arrays (no AVL validation).

        ``keys=None`` assigns 1..n by in-order position.  The arrays
        must describe a single rooted tree; AVL validity is the
        caller's business (or :meth:`validate`'s).
        """
        t = cls(backend)
        n = len(ranks)
        if keys is None:
            keys = [0] * n
            stack: list[int] = []
            cur = root
            nxt = 1
            while stack or cur != NIL:
                while cur != NIL:
                    stack.append(cur)
                    cur = lefts[cur]
                cur = stack.pop()
                keys[cur] = nxt
                nxt += 1
                cur = rights[cur]
        t._k.load(keys, ranks, lefts, rights, root)
        return t

    @classmethod
    def from_text(cls, text: str, backend: Optional[str] = None, validate: bool = True) -> "Tree":
        """Parse the canonical text form; see :func:`deserialize`.

        ``validate=False`` skips the AVL check so broken inputs can
        still be loaded for diagnosis.
        """
        keys, ranks, lefts, rights, root = _parse(text)
        t = cls.from_arrays(ranks, lefts, rights, root, keys=keys, backend=backend)
        if validate:
            report = t.validate()
            if not report.ok:
                raise ValidationError(report)
        return t

    # -- basic queries ----------------------------------------------------

    @property
    def backend(self) -> str:
        return self._k.backend_name

    @property
    def rank(self) -> int:
        """Rank of the root; -1 for the empty tree."""
        r = self._k.root
        return -1 if r == NIL else self._k.rank_at(r)

    @property
    def root_key(self) -> Optional[int]:
        r = self._k.root
        return None if r == NIL else self._k.key_at(r)

    def __len__(self) -> int:
        return self._k.size

    def __contains__(self, key) -> bool:
        return self._k.find(operator.index(key)) != NIL

    def __iter__(self) -> Iterator[int]:
        return iter(self._k.inorder_keys())

    def __repr__(self) -> str:
        return f"Tree(n={len(self)}, rank={self.rank}, backend={self.backend!r})"

    def keys(self) -> list[int]:
        """Keys in increasing order."""
        return self._k.inorder_keys()

    def clone(self) -> "Tree":
        t = Tree.__new__(Tree)
        t._k = self._k.clone()
        return t

    # -- mutation ---------------------------------------------------------

    def insert(self, key) -> tuple[RebalanceCounters, tuple[Case, ...]]:
        """Insert ``key``; raises DuplicateKeyError if present."""
        codes = self._k.insert(_check_key(key))
        return _counters_from_codes(codes), tuple(map(Case, codes))

    def delete(self, key) -> tuple[RebalanceCounters, tuple[Case, ...]]:
        """Delete ``key``; raises KeyNotFoundError if absent."""
        codes = self._k.delete(_check_key(key))
        return _counters_from_codes(codes), tuple(map(Case, codes))

    def rotate(self, key, direction: str) -> None:
        """Single rotation at the node holding ``key``.

        ``"right"`` hoists the left child, ``"left"`` the right child.
        Ranks are not adjusted, so the result may fail :meth:`validate`;
        this is the raw restructuring primitive.
        """
        if direction not in ("left", "right"):
            raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
        i = self._k.find(_check_key(key))
        if i == NIL:
            raise KeyNotFoundError(f"key {key} is not present")
        self._k.rotate(i, direction == "right")

    # -- structure --------------------------------------------------------

    def validate(self) -> ValidationReport:
        """Check BST order, rank differences, and rank == height."""
        return _report_from_raw(self._k.violations())

    def structurally_equal(self, other: "Tree") -> bool:
        """Same shape, same keys, same ranks."""
        a, b = self._k, other._k
        if a.size != b.size:
            return False
        ka, ra, la, rra, roota = a.snapshot()
        kb, rb, lb, rrb, rootb = b.snapshot()
        stack = [(roota, rootb)]
        while stack:
            i, j = stack.pop()
            if (i == NIL) != (j == NIL):
                return False
            if i == NIL:
                continue
            if ka[i] != kb[j] or ra[i] != rb[j]:
                return False
            stack.append((la[i], lb[j]))
            stack.append((rra[i], rrb[j]))
        return True

    def truncate(self) -> "Tree":
        """New tree holding only the nodes of rank >= 1, ranks reduced by 1.

        The input (which must be valid and non-empty) is unchanged.  In a
        valid tree the rank-0 nodes are exactly the leaves, so this strips
        the bottom level.  A single-node tree truncates to the empty tree.
        """
        k = self._k
        if k.root == NIL:
            raise EmptyTreeError("cannot truncate an empty tree")
        keys, ranks, lefts, rights, root = k.snapshot()
        if ranks[root] == 0:
            return Tree(backend=self.backend)
        remap = {}
        order: list[int] = []
        stack = [root]
        while stack:
            i = stack.pop()
            if i == NIL or ranks[i] < 1:
                continue
            remap[i] = len(order)
            order.append(i)
            stack.append(lefts[i])
            stack.append(rights[i])
        nk = [keys[i] for i in order]
        nr = [ranks[i] - 1 for i in order]
        nl = [remap.get(lefts[i], NIL) if lefts[i] != NIL and ranks[lefts[i]] >= 1 else NIL for i in order]
        nrt = [remap.get(rights[i], NIL) if rights[i] != NIL and ranks[rights[i]] >= 1 else NIL for i in order]
        return Tree.from_arrays(nr, nl, nrt, remap[root], keys=nk, backend=self.backend)

    # -- text forms ---------------------------------------------------------

    def to_text(self) -> str:
        """Canonical one-line form; see :func:`serialize`."""
        keys, ranks, lefts, rights, root = self._k.snapshot()
        if root == NIL:
            return "-"
        parts: list[str] = []
        stack: list = [root]
        while stack:
            item = stack.pop()
            if isinstance(item, str):
                parts.append(item)
                continue
            if item == NIL:
                parts.append("-")
                continue
            parts.append(f"({keys[item]};{ranks[item]}")
            stack.extend((")", rights[item], " ", lefts[item], " "))
        return "".join(parts)

    def to_dot(self) -> str:
        """Graphviz form: nodes labelled ``key:rank``, edges labelled
        with the rank difference they span."""
        keys, ranks, lefts, rights, root = self._k.snapshot()
        lines = ["digraph avl {"]
        order: list[int] = []
        stack: list[int] = []
        cur = root
        while stack or cur != NIL:
            while cur != NIL:
                stack.append(cur)
                cur = lefts[cur]
            cur = stack.pop()
            order.append(cur)
            cur = rights[cur]
        for i in order:
            lines.append(f'  n{keys[i]} [label="{keys[i]}:{ranks[i]}"];')
        for i in order:
            for c in (lefts[i], rights[i]):
                if c != NIL:
                    diff = ranks[i] - ranks[c]
                    lines.append(f'  n{keys[i]} -> n{keys[c]} [label="{diff}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def serialize(tree: Tree) -> str:
    """Canonical text: ``-`` or ``(key;rank <left> <right>)``, single
    spaces, no trailing whitespace.  Bit-exact for equal trees."""
    return tree.to_text()


def deserialize(text: str, backend: Optional[str] = None) -> Tree:
    """Inverse of :func:`serialize`; validates and rejects non-AVL input."""
    return Tree.from_text(text, backend=backend, validate=True)


def structural_equal(a: Tree, b: Tree) -> bool:
    return a.structurally_equal(b)


def _parse(text: str):
    """Strict recursive-descent parse of the canonical grammar.

    Iterative so hostile deep nesting cannot blow the Python stack.
    """
    n = len(text)
    pos = 0

    def expect(ch: str):
        nonlocal pos
        if pos >= n or text[pos] != ch:
            raise ParseError(f"expected {ch!r}", pos)
        pos += 1

    def read_int(signed: bool) -> int:
        nonlocal pos
        start = pos
        if signed and pos < n and text[pos] == "-":
            pos += 1
        while pos < n and text[pos].isdigit():
            pos += 1
        if pos == start or (signed and text[start] == "-" and pos == start + 1):
            raise ParseError("expected an integer", start)
        return int(text[start:pos])

    keys: list[int] = []
    ranks: list[int] = []
    lefts: list[int] = []
    rights: list[int] = []
    # stack entries: [node index, child slot filled so far]
    stack: list[list[int]] = []
    while True:
        if pos >= n:
            raise ParseError("unexpected end of input", pos)
        c = text[pos]
        if c == "-":
            node = NIL
            pos += 1
        elif c == "(":
            pos += 1
            key = read_int(signed=False)
            expect(";")
            rank = read_int(signed=True)
            expect(" ")
            idx = len(keys)
            keys.append(key)
            ranks.append(rank)
            lefts.append(NIL)
            rights.append(NIL)
            stack.append([idx, 0])
            continue
        else:
            raise ParseError(f"expected '(' or '-', got {c!r}", pos)
        # a finished subtree in hand: attach and close parents
        while True:
            if not stack:
                if pos != n:
                    raise ParseError("trailing characters", pos)
                return keys, ranks, lefts, rights, node
            top = stack[-1]
            if top[1] == 0:
                lefts[top[0]] = node
                top[1] = 1
                expect(" ")
                break
            rights[top[0]] = node
            expect(")")
            stack.pop()
            node = top[0]
