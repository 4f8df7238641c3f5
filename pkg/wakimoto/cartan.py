from dataclasses import dataclass, field

from .errors import IndexRangeError


@dataclass(frozen=True)
class CartanMatrix:
    """Affine Cartan matrix of type A_n^{(1)}, indices 0..n taken mod n+1."""

    n: int
    entries: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise IndexRangeError(f"type A_n^(1) needs n >= 2, got {self.n}")
        size = self.n + 1
        rows = []
        for i in range(size):
            row = []
            for j in range(size):
                if i == j:
                    row.append(2)
                elif (i - j) % size in (1, size - 1):
                    row.append(-1)
                else:
                    row.append(0)
            rows.append(tuple(row))
        object.__setattr__(self, "entries", tuple(rows))

    @property
    def size(self):
        return self.n + 1

    def entry(self, i, j):
        if not (0 <= i <= self.n and 0 <= j <= self.n):
            raise IndexRangeError(f"Cartan index ({i}, {j}) outside 0..{self.n}")
        return self.entries[i][j]

    def adjacent_pairs(self):
        return [(i, j) for i in range(self.size) for j in range(self.size) if self.entries[i][j] == -1]

    def orthogonal_pairs(self):
        return [(i, j) for i in range(self.size) for j in range(self.size) if i != j and self.entries[i][j] == 0]


def cartan_entry(n, i, j):
    return CartanMatrix(n).entry(i, j)
