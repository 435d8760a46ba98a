"""Closed-form order formulas used as independent cross-checks.

Every order a shipped claim relies on is compared against one of these exact
integer formulas (or against an orbit-stabilizer identity), so a defective
stabilizer chain can never silently confirm anything.
"""

from math import gcd


def gl_order(q, n):
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def sl_order(q, n):
    return gl_order(q, n) // (q - 1)


def psl_order(q, n):
    return sl_order(q, n) // gcd(n, q - 1)


def sp_order(q, dim):
    if dim % 2 != 0:
        raise ValueError("symplectic groups need even dimension")
    k = dim // 2
    out = q ** (k * k)
    for i in range(1, k + 1):
        out *= q ** (2 * i) - 1
    return out


def psp_order(q, dim):
    return sp_order(q, dim) // gcd(2, q - 1)


def gu_order(q, n):
    """Unitary group on GF(q^2)^n."""
    out = q ** (n * (n - 1) // 2)
    for i in range(1, n + 1):
        out *= q ** i - (-1) ** i
    return out


def su_order(q, n):
    return gu_order(q, n) // (q + 1)


def omega_plus_order(q, dim):
    if dim % 2 != 0:
        raise ValueError("plus type needs even dimension")
    m = dim // 2
    out = q ** (m * (m - 1)) * (q ** m - 1)
    for i in range(1, m):
        out *= q ** (2 * i) - 1
    return out // gcd(2, q - 1)


def pomega_plus_order(q, dim):
    m = dim // 2
    return omega_plus_order(q, dim) * gcd(2, q - 1) // gcd(4, q ** m - 1)


def omega_minus_order(q, dim):
    if dim % 2 != 0:
        raise ValueError("minus type needs even dimension")
    m = dim // 2
    out = q ** (m * (m - 1)) * (q ** m + 1)
    for i in range(1, m):
        out *= q ** (2 * i) - 1
    return out // gcd(2, q - 1)


def omega_odd_order(q, dim):
    if dim % 2 != 1:
        raise ValueError("odd-dimensional formula")
    k = dim // 2
    out = q ** (k * k)
    for i in range(1, k + 1):
        out *= q ** (2 * i) - 1
    return out // gcd(2, q - 1)


def g2_order(q):
    return q ** 6 * (q ** 6 - 1) * (q ** 2 - 1)


def alternating_order(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out // 2


def nonsingular_vector_count(q, dim):
    """Vectors v with Q(v) != 0 in a plus-type space (exact, all of them)."""
    m = dim // 2
    return (q - 1) * (q ** (dim - 1) - q ** (m - 1))


def q_value_class_count(q, dim):
    """Vectors with Q(v) = c for one fixed c != 0 (plus type)."""
    return nonsingular_vector_count(q, dim) // (q - 1)


def singular_vector_count(q, dim):
    """Singular vectors including 0 (plus type)."""
    m = dim // 2
    return q ** (dim - 1) + q ** m - q ** (m - 1)
