from typing import Dict, List, Tuple

from spr.errors import PreconditionViolated


class AddressableHeap:
    """Binary min-heap over integer items with decrease-key.

    Entries are ordered by (key, item), so equal keys come out by ascending
    item id. Each item's heap position is tracked in ``_index`` which is what
    makes decrease-key O(log h) instead of a scan.

    The counters feed the benchmark tables: they are never reset by ``clear``.
    """

    def __init__(self):
        self._heap: List[Tuple[float, int]] = []
        self._index: Dict[int, int] = {}
        self.inserts = 0
        self.decreases = 0
        self.extractions = 0

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def __contains__(self, item: int) -> bool:
        return item in self._index

    def key(self, item: int) -> float:
        return self._heap[self._index[item]][0]

    def peek(self) -> Tuple[int, float]:
        key, item = self._heap[0]
        return item, key

    def clear(self) -> None:
        self._heap.clear()
        self._index.clear()

    def push(self, item: int, key: float) -> None:
        if item in self._index:
            raise PreconditionViolated("item already queued", item=item)
        self.inserts += 1
        pos = len(self._heap)
        self._heap.append((key, item))
        self._index[item] = pos
        self._siftup(pos)

    def decrease_key(self, item: int, key: float) -> None:
        pos = self._index[item]
        if key > self._heap[pos][0]:
            raise PreconditionViolated("decrease_key would increase the key", item=item, key=key)
        self.decreases += 1
        self._heap[pos] = (key, item)
        self._siftup(pos)

    def pop(self) -> Tuple[int, float]:
        """Remove and return (item, key) with the smallest key."""
        heap = self._heap
        key, item = heap[0]
        del self._index[item]
        tail = heap.pop()
        if heap:
            heap[0] = tail
            self._index[tail[1]] = 0
            self._siftdown(0)
        self.extractions += 1
        return item, key

    def _siftup(self, pos: int) -> None:
        """Moves the entry at pos toward the root until the parent is smaller."""
        heap, index = self._heap, self._index
        entry = heap[pos]
        while pos > 0:
            parent_pos = (pos - 1) // 2
            parent = heap[parent_pos]
            if not entry < parent:
                break
            heap[pos] = parent
            index[parent[1]] = pos
            pos = parent_pos
        heap[pos] = entry
        index[entry[1]] = pos

    def _siftdown(self, pos: int) -> None:
        """Walks the entry at pos down to the bottom along smaller children,
        then sifts it back up (the same trick heapq uses: fewer comparisons
        because entries moved to the root tend to be large)."""
        heap, index = self._heap, self._index
        entry = heap[pos]
        size = len(heap)
        left = 2 * pos + 1
        while left < size:
            right = left + 1
            child = right if right < size and heap[right] < heap[left] else left
            heap[pos] = heap[child]
            index[heap[pos][1]] = pos
            pos = child
            left = 2 * pos + 1
        heap[pos] = entry
        index[entry[1]] = pos
        self._siftup(pos)
