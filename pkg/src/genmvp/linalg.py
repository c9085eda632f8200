from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class SingularSystemError(ArithmeticError):
    pass


def solve_exact(A: Sequence[Sequence], b: Sequence) -> tuple[list[Fraction], Fraction]:
    """Solve ``A x = b`` over the rationals by Gaussian elimination.

    Returns ``(x, det(A))``. Raises ``SingularSystemError`` if ``A`` is singular.
    """
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("square system expected")
    M = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularSystemError(f"matrix is singular (column {col})")
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        p = M[col][col]
        det *= p
        for r in range(col + 1, n):
            factor = M[r][col] / p
            if factor:
                row_r, row_c = M[r], M[col]
                for j in range(col, n + 1):
                    row_r[j] -= factor * row_c[j]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = M[r][n] - sum(M[r][j] * x[j] for j in range(r + 1, n))
        x[r] = acc / M[r][r]
    return x, det
