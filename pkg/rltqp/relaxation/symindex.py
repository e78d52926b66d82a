import numpy as np


class SymIndex:
    """
    Flat coordinates for symmetric n×n matrices: X_ij (i ≤ j) in row-major
    upper-triangle order (0,0), (0,1), …, (0,n-1), (1,1), …
    """

    def __init__(self, n: int):
        self.n = n
        self.rows, self.cols = np.triu_indices(n)
        self.dim = self.rows.size
        self._flat = np.full((n, n), -1, dtype=int)
        self._flat[self.rows, self.cols] = np.arange(self.dim)
        self._flat[self.cols, self.rows] = np.arange(self.dim)

    def flat(self, i: int, j: int) -> int:
        return int(self._flat[i, j])

    def pair(self, k: int):
        return int(self.rows[k]), int(self.cols[k])

    def to_flat(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float)[self.rows, self.cols]

    def from_flat(self, v: np.ndarray) -> np.ndarray:
        X = np.zeros((self.n, self.n))
        X[self.rows, self.cols] = v
        X[self.cols, self.rows] = v
        return X

    def inner_coefficients(self, M: np.ndarray) -> np.ndarray:
        """Coefficients a with ⟨M, X⟩ = aᵀ to_flat(X) for every symmetric X."""
        M = np.asarray(M, dtype=float)
        coeff = M[self.rows, self.cols] + M[self.cols, self.rows]
        diagonal = self.rows == self.cols
        coeff[diagonal] = M[self.rows[diagonal], self.cols[diagonal]]
        return coeff
