"""Pure-Python kernels; same signatures as the compiled ``_ckernels`` module.

``kind`` is 0 for Randers, 1 for Matsumoto.
"""

import math

from .errors import DomainError
from .taylor import Taylor2, seed

RANDERS = 0
MATSUMOTO = 1


def _dot(G, X, Y):
    return sum(G[i][j] * X[i] * Y[j] for i in range(3) for j in range(3))


def norm_value(kind, G, X, y):
    alpha = math.sqrt(_dot(G, y, y))
    beta = _dot(G, X, y)
    if kind == RANDERS:
        return alpha + beta
    den = alpha - beta
    if den <= 0.0:
        raise DomainError(f"Matsumoto denominator alpha - beta = {den!r} is not positive")
    return alpha * alpha / den


def _norm_squared(kind, G, X, w):
    q = Taylor2(0.0)
    beta = Taylor2(0.0)
    for i in range(3):
        gx = sum(G[i][j] * X[j] for j in range(3))
        beta = beta + w[i] * gx
        for j in range(3):
            q = q + G[i][j] * (w[i] * w[j])
    alpha = q.sqrt()
    if kind == RANDERS:
        F = alpha + beta
    else:
        den = alpha - beta
        if den.a <= 0.0:
            raise DomainError(f"Matsumoto denominator alpha - beta = {den.a!r} is not positive")
        F = q / den
    return F * F


def fundamental_form(kind, G, X, Y, U, V):
    """g_Y(U, V) = 1/2 d2/dsdt F^2(Y + sU + tV) at s = t = 0."""
    w = [seed(Y[i], U[i], V[i]) for i in range(3)]
    return 0.5 * _norm_squared(kind, G, X, w).mixed


def fundamental_matrix(kind, G, X, Y):
    out = [[0.0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            w = [seed(Y[k], float(k == i), float(k == j)) for k in range(3)]
            out[i][j] = out[j][i] = 0.5 * _norm_squared(kind, G, X, w).mixed
    return out


def fundamental_matrices(kind, G, X, Ys):
    return [fundamental_matrix(kind, G, X, Y) for Y in Ys]
