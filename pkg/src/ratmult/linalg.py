"""Dense determinant by LU with partial pivoting.

Written over plain Python lists so the same code runs on binary64 complex and
on mpmath scalars.
"""


def det(matrix):
    """Determinant of a square matrix given as a sequence of rows."""
    a = [list(row) for row in matrix]
    k = len(a)
    if any(len(row) != k for row in a):
        raise ValueError("matrix must be square")
    if k == 0:
        return 1
    if k == 1:
        return a[0][0]
    sign = 1
    result = 1
    for col in range(k):
        pivot = max(range(col, k), key=lambda r: abs(a[r][col]))
        if a[pivot][col] == 0:
            return 0 * a[0][0]
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result = result * p
        for r in range(col + 1, k):
            factor = a[r][col] / p
            if factor == 0:
                continue
            row_r, row_c = a[r], a[col]
            for c in range(col + 1, k):
                row_r[c] = row_r[c] - factor * row_c[c]
    return result * sign


def cofactor_det(matrix):
    """Laplace expansion along the first row. Exponential; reference use only."""
    a = [list(row) for row in matrix]
    k = len(a)
    if k == 0:
        return 1
    if k == 1:
        return a[0][0]
    total = 0
    for c in range(k):
        if a[0][c] == 0:
            continue
        sub = [row[:c] + row[c + 1:] for row in a[1:]]
        term = a[0][c] * cofactor_det(sub)
        total = total + term if c % 2 == 0 else total - term
    return total
