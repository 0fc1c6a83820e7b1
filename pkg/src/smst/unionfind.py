from typing import Hashable, Iterable


class DisjointSets:
    """Union-find with union by rank and path compression.

    Unknown elements are added lazily as singletons by :meth:`find`.
    """

    def __init__(self, elements: Iterable[Hashable] = ()):
        self.parent: dict = {}
        self.rank: dict = {}
        self.count = 0
        for x in elements:
            self.add(x)

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0
            self.count += 1

    def find(self, x):
        parent = self.parent
        if x not in parent:
            self.add(x)
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def connected(self, x, y) -> bool:
        return self.find(x) == self.find(y)

    def union(self, x, y) -> bool:
        """Merge the sets of x and y; False if they were already one set."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        self.count -= 1
        return True

    def copy(self) -> "DisjointSets":
        other = DisjointSets()
        other.parent = dict(self.parent)
        other.rank = dict(self.rank)
        other.count = self.count
        return other

    def groups(self) -> frozenset[frozenset]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return frozenset(frozenset(g) for g in out.values())

    def __contains__(self, x) -> bool:
        return x in self.parent
