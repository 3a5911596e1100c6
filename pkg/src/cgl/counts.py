"""Numbers N_d of rational plane curves of degree d through 3d - 1 general points."""

from __future__ import annotations

import threading


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    k = min(k, n - k)
    out = 1
    for i in range(1, k + 1):
        out = out * (n - k + i) // i
    return out


class CurveCountTable:
    """Memo table ``d -> N_d``; seeded with N_1 = 1 (lines through 2 points).

    The recursion's sum is empty for d = 1, so N_1 cannot come out of it.
    Writers take a lock; readers only ever see completed entries.
    """

    def __init__(self):
        self.entries: dict[int, int] = {1: 1}
        self._lock = threading.Lock()

    def __getitem__(self, d: int) -> int:
        return self.entries[d]

    def __contains__(self, d: int) -> bool:
        return d in self.entries

    def summands(self, d: int) -> list[int]:
        """Terms of the recursion for N_d; all smaller degrees must be present."""
        top = 3 * d - 4
        out = []
        for da in range(1, d):
            db = d - da
            na, nb = self.entries[da], self.entries[db]
            out.append(
                na * nb * da * da * db
                * (db * binomial(top, 3 * da - 2) - da * binomial(top, 3 * da - 1))
            )
        return out

    def fill(self, d: int) -> int:
        if d < 1:
            raise ValueError(f"degree must be positive, got {d}")
        if d in self.entries:
            return self.entries[d]
        with self._lock:
            for k in range(2, d + 1):
                if k not in self.entries:
                    self.entries[k] = sum(self.summands(k))
        return self.entries[d]


_TABLE = CurveCountTable()


def km_count(d: int, table: CurveCountTable | None = None) -> int:
    """N_d by the Kontsevich-Manin recursion (exact integer)."""
    if not isinstance(d, int) or isinstance(d, bool):
        raise TypeError("degree must be an int")
    return (table or _TABLE).fill(d)
