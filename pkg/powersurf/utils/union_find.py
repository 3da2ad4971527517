from typing import List


class DisjointSet:
    """Union-find over the integers 0..n-1 with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, i: int) -> int:
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        if self.size[ri] < self.size[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        self.size[ri] += self.size[rj]
        return True

    def component_sizes(self) -> List[int]:
        """Sizes of all components, largest first."""
        return sorted((self.size[i] for i in range(len(self.parent)) if self.parent[i] == i),
                      reverse=True)
