"""R-tree over spatiotemporal boxes with overlap search.

Nodes hold their children's bounds in preallocated numpy arrays so that
choose-subtree and split decisions are vectorized.  Overflow is resolved
with Guttman's quadratic split.  Leaf hits are re-checked against the
stored boxes with exact overlap semantics, so interior pruning can stay
conservative (closed float intervals).

The index is append-only and supports one writer or many concurrent
readers, never both.  Bulk construction runs three phases: parallel
collection into worker-local buffers, a lock-serialized combine, and
single-threaded insertion of every collected entry.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Set as PySet, Tuple

import numpy as np

from .boxes import STBox, overlaps
from .geom import SridMismatch


@dataclass(frozen=True)
class ColumnRef:
    """A table column mentioned in a filter predicate."""

    name: str


@dataclass(frozen=True)
class IndexScanBinding:
    """An overlap predicate the index can answer: column && constant box."""

    column: ColumnRef
    query: STBox


def scan_plan(predicate: str, lhs, rhs) -> Optional[IndexScanBinding]:
    """Match a filter predicate against the indexable pattern.

    Only the overlap operator with one column operand and one constant
    STBox operand binds; anything else falls back to a sequential scan.
    """
    if predicate != "&&":
        return None
    if isinstance(lhs, ColumnRef) and isinstance(rhs, STBox):
        return IndexScanBinding(lhs, rhs)
    if isinstance(rhs, ColumnRef) and isinstance(lhs, STBox):
        return IndexScanBinding(rhs, lhs)
    return None


class _Node:
    __slots__ = ("leaf", "count", "mins", "maxs", "children", "rows", "entry_boxes")

    def __init__(self, leaf: bool, capacity: int, ndims: int):
        self.leaf = leaf
        self.count = 0
        self.mins = np.empty((capacity + 1, ndims))
        self.maxs = np.empty((capacity + 1, ndims))
        self.children: List[_Node] = [] if not leaf else None
        self.rows: List[int] = [] if leaf else None
        self.entry_boxes: List[STBox] = [] if leaf else None

    def mbr(self) -> Tuple[np.ndarray, np.ndarray]:
        n = self.count
        return self.mins[:n].min(axis=0), self.maxs[:n].max(axis=0)


class RTree:
    """Overlap-searchable index from STBox entries to row identifiers."""

    def __init__(self, max_entries: int = 64, min_fill: float = 0.4):
        if max_entries < 4:
            raise ValueError("max_entries must be at least 4")
        self.max_entries = max_entries
        self.min_entries = int(np.ceil(min_fill * max_entries))
        self.root: Optional[_Node] = None
        self.srid: Optional[int] = None
        self.ndims: Optional[int] = None
        self._count = 0

    def __len__(self) -> int:
        return self._count

    @property
    def height(self) -> int:
        h, node = 0, self.root
        while node is not None:
            h += 1
            node = None if node.leaf else node.children[0]
        return h

    def _vectors(self, box: STBox):
        if self.ndims == 3:
            lo = (box.x[0], box.y[0], float(box.t.lower))
            hi = (box.x[1], box.y[1], float(box.t.upper))
        else:
            lo = (box.x[0], box.y[0])
            hi = (box.x[1], box.y[1])
        return np.array(lo), np.array(hi)

    def insert(self, box: STBox, row_id: int) -> None:
        if not box.has_xy:
            raise ValueError("index entries need spatial dimensions")
        if self.root is None:
            self.srid = box.srid
            self.ndims = 3 if box.t is not None else 2
            self.root = _Node(True, self.max_entries, self.ndims)
        else:
            if box.srid != self.srid:
                raise SridMismatch(f"srid mismatch: {box.srid} vs index {self.srid}")
            if (box.t is not None) != (self.ndims == 3):
                raise ValueError("entry dimensionality differs from the index")
        lo, hi = self._vectors(box)

        node = self.root
        path = []
        while not node.leaf:
            n = node.count
            new_mins = np.minimum(node.mins[:n], lo)
            new_maxs = np.maximum(node.maxs[:n], hi)
            enlarged = np.prod(new_maxs[:, :2] - new_mins[:, :2], axis=1)
            current = np.prod(node.maxs[:n, :2] - node.mins[:n, :2], axis=1)
            growth = enlarged - current
            best = np.flatnonzero(growth == growth.min())
            if len(best) > 1:
                i = best[np.argmin(current[best])]
            else:
                i = best[0]
            node.mins[i] = new_mins[i]
            node.maxs[i] = new_maxs[i]
            path.append(node)
            node = node.children[i]

        c = node.count
        node.mins[c] = lo
        node.maxs[c] = hi
        node.rows.append(row_id)
        node.entry_boxes.append(box)
        node.count = c + 1
        self._count += 1

        if node.count > self.max_entries:
            self._split_up(path, node)

    def _split_up(self, path: List[_Node], node: _Node) -> None:
        while node.count > self.max_entries:
            sibling = self._quadratic_split(node)
            if path:
                parent = path.pop()
                i = parent.children.index(node)
                parent.mins[i], parent.maxs[i] = node.mbr()
                j = parent.count
                parent.mins[j], parent.maxs[j] = sibling.mbr()
                parent.children.append(sibling)
                parent.count = j + 1
                node = parent
            else:
                root = _Node(False, self.max_entries, self.ndims)
                root.mins[0], root.maxs[0] = node.mbr()
                root.mins[1], root.maxs[1] = sibling.mbr()
                root.children = [node, sibling]
                root.count = 2
                self.root = root
                return

    def _quadratic_split(self, node: _Node) -> _Node:
        n = node.count
        mins = node.mins[:n].copy()
        maxs = node.maxs[:n].copy()
        areas = np.prod(maxs[:, :2] - mins[:, :2], axis=1)
        pair_mins = np.minimum(mins[:, None, :2], mins[None, :, :2])
        pair_maxs = np.maximum(maxs[:, None, :2], maxs[None, :, :2])
        waste = np.prod(pair_maxs - pair_mins, axis=2) - areas[:, None] - areas[None, :]
        np.fill_diagonal(waste, -np.inf)
        s1, s2 = np.unravel_index(np.argmax(waste), waste.shape)

        groups = ([s1], [s2])
        g_mins = [mins[s1].copy(), mins[s2].copy()]
        g_maxs = [maxs[s1].copy(), maxs[s2].copy()]
        remaining = [i for i in range(n) if i != s1 and i != s2]
        min_fill = self.min_entries
        while remaining:
            need0 = min_fill - len(groups[0])
            need1 = min_fill - len(groups[1])
            if need0 >= len(remaining):
                chosen_idx, g = 0, 0
            elif need1 >= len(remaining):
                chosen_idx, g = 0, 1
            else:
                rem = np.array(remaining)
                d = []
                for k in (0, 1):
                    u_min = np.minimum(mins[rem, :2], g_mins[k][:2])
                    u_max = np.maximum(maxs[rem, :2], g_maxs[k][:2])
                    grown = np.prod(u_max - u_min, axis=1)
                    cur = np.prod(g_maxs[k][:2] - g_mins[k][:2])
                    d.append(grown - cur)
                pref = np.abs(d[0] - d[1])
                chosen_idx = int(np.argmax(pref))
                g = 0 if d[0][chosen_idx] <= d[1][chosen_idx] else 1
            i = remaining.pop(chosen_idx)
            groups[g].append(i)
            np.minimum(g_mins[g], mins[i], out=g_mins[g])
            np.maximum(g_maxs[g], maxs[i], out=g_maxs[g])

        sibling = _Node(node.leaf, self.max_entries, self.ndims)
        keep, move = groups
        src_children = node.children
        src_rows = node.rows
        src_boxes = node.entry_boxes
        for dest, idxs in ((sibling, move),):
            dest.count = len(idxs)
            dest.mins[: len(idxs)] = mins[idxs]
            dest.maxs[: len(idxs)] = maxs[idxs]
            if node.leaf:
                dest.rows = [src_rows[i] for i in idxs]
                dest.entry_boxes = [src_boxes[i] for i in idxs]
            else:
                dest.children = [src_children[i] for i in idxs]
        node.count = len(keep)
        node.mins[: len(keep)] = mins[keep]
        node.maxs[: len(keep)] = maxs[keep]
        if node.leaf:
            node.rows = [src_rows[i] for i in keep]
            node.entry_boxes = [src_boxes[i] for i in keep]
        else:
            node.children = [src_children[i] for i in keep]
        return sibling

    def search(self, query: STBox) -> PySet[int]:
        """Row ids of all stored boxes overlapping the query box."""
        if not query.has_xy:
            raise ValueError("query box needs spatial dimensions")
        if self.root is None:
            return set()
        if query.srid != self.srid:
            raise SridMismatch(f"srid mismatch: {query.srid} vs index {self.srid}")
        if self.ndims == 3 and query.t is not None:
            q_lo = np.array((query.x[0], query.y[0], float(query.t.lower)))
            q_hi = np.array((query.x[1], query.y[1], float(query.t.upper)))
        else:
            q_lo = np.array((query.x[0], query.y[0]))
            q_hi = np.array((query.x[1], query.y[1]))
        nd = len(q_lo)
        out: PySet[int] = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            n = node.count
            mask = np.all(node.mins[:n, :nd] <= q_hi, axis=1) & np.all(
                node.maxs[:n, :nd] >= q_lo, axis=1
            )
            if node.leaf:
                for i in np.flatnonzero(mask):
                    if overlaps(node.entry_boxes[i], query):
                        out.add(node.rows[i])
            else:
                for i in np.flatnonzero(mask):
                    stack.append(node.children[i])
        return out

    def audit(self) -> None:
        """Verify fill bounds, MBR tightness and uniform leaf depth."""
        if self.root is None:
            return
        leaf_depths = []

        def visit(node: _Node, depth: int, is_root: bool):
            if not is_root and not (self.min_entries <= node.count <= self.max_entries):
                raise AssertionError(
                    f"node fill {node.count} outside [{self.min_entries}, {self.max_entries}]"
                )
            if node.leaf:
                leaf_depths.append(depth)
                return
            for i, child in enumerate(node.children[: node.count]):
                c_min, c_max = child.mbr()
                if not (
                    np.array_equal(node.mins[i], c_min)
                    and np.array_equal(node.maxs[i], c_max)
                ):
                    raise AssertionError("internal entry box is not the child hull")
                visit(child, depth + 1, False)

        if self.root.count < 1 and self._count > 0:
            raise AssertionError("non-empty tree with empty root")
        visit(self.root, 0, True)
        if len(set(leaf_depths)) > 1:
            raise AssertionError(f"leaves at mixed depths: {sorted(set(leaf_depths))}")

    def dump(self) -> str:
        """Indented text rendering of the tree structure (test hook)."""
        if self.root is None:
            return "(empty)\n"
        lines = []

        def visit(node: _Node, depth: int):
            lo, hi = node.mbr()
            tag = "leaf" if node.leaf else "node"
            lines.append(
                "  " * depth
                + f"{tag} n={node.count} mbr=[{', '.join(f'{v:g}' for v in lo)}]"
                + f"..[{', '.join(f'{v:g}' for v in hi)}]"
            )
            if not node.leaf:
                for child in node.children[: node.count]:
                    visit(child, depth + 1)

        visit(self.root, 0)
        return "\n".join(lines) + "\n"


class BulkBuilder:
    """Collects entries into worker-local buffers before construction."""

    def __init__(self, workers: int):
        self.buffers: List[List[Tuple[STBox, int]]] = [[] for _ in range(max(1, workers))]
        self._merge_lock = threading.Lock()
        self.merged: List[Tuple[STBox, int]] = []

    def sink(self, worker: int, entries: Iterable[Tuple[STBox, int]]) -> None:
        self.buffers[worker].extend(entries)

    def combine(self) -> None:
        for buf in self.buffers:
            with self._merge_lock:
                self.merged.extend(buf)


def bulk_build(
    entries: Iterable[Tuple[STBox, int]],
    workers: int = 1,
    max_entries: int = 64,
    min_fill: float = 0.4,
) -> RTree:
    """Three-phase construction: parallel collection, serialized combine,
    then insertion of every collected entry."""
    entries = list(entries)
    workers = max(1, workers)
    builder = BulkBuilder(workers)
    if entries:
        chunk = (len(entries) + workers - 1) // workers
        parts = [entries[i * chunk : (i + 1) * chunk] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(builder.sink, w, part) for w, part in enumerate(parts)
            ]
            for f in futures:
                f.result()
    builder.combine()
    tree = RTree(max_entries=max_entries, min_fill=min_fill)
    for box, row_id in builder.merged:
        tree.insert(box, row_id)
    return tree
