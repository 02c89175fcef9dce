"""Generators for the standard families of permutation groups."""
from sympy import isprime, primitive_root

from .errors import InputError
from .permutation import GroupSpec, Permutation, from_cycles


def _require(condition, message):
    if not condition:
        raise InputError(message)


def cyclic(n):
    """C_n generated by the n-cycle (1,2,...,n)."""
    _require(n >= 1, "Cyclic groups need degree at least 1")
    if n == 1:
        return GroupSpec.trivial(1, "C1")
    return GroupSpec(n, (from_cycles(n, [range(n)]),), f"C{n}")


def dihedral(n):
    """D_n of order 2n acting on the vertices of an n-gon."""
    _require(n >= 3, "Dihedral groups need degree at least 3")
    rotation = from_cycles(n, [range(n)])
    reflection = Permutation([(-i) % n for i in range(n)])
    return GroupSpec(n, (rotation, reflection), f"D{n}")


def symmetric(n):
    _require(n >= 1, "Symmetric groups need degree at least 1")
    if n == 1:
        return GroupSpec.trivial(1, "S1")
    if n == 2:
        return GroupSpec(2, (from_cycles(2, [(0, 1)]),), "S2")
    return GroupSpec(
        n, (from_cycles(n, [(0, 1)]), from_cycles(n, [range(n)])), f"S{n}"
    )


def alternating(n):
    """A_n, generated by (1,2,3) and an (n-1)- or n-cycle of even parity."""
    _require(n >= 3, "Alternating groups need degree at least 3")
    three_cycle = from_cycles(n, [(0, 1, 2)])
    if n == 3:
        return GroupSpec(3, (three_cycle,), "A3")
    long_cycle = range(n) if n % 2 else range(1, n)
    return GroupSpec(
        n, (three_cycle, from_cycles(n, [long_cycle])), f"A{n}"
    )


def affine_line(p):
    """AGL(1, p): the maps x -> a x + b of the integers mod a prime p."""
    _require(isprime(p), f"AGL(1, p) needs a prime degree, got {p}")
    translation = from_cycles(p, [range(p)])
    if p == 2:
        return GroupSpec(2, (translation,), "AGL(1,2)")
    a = primitive_root(p)
    scaling = Permutation([(a * x) % p for x in range(p)])
    return GroupSpec(p, (translation, scaling), f"AGL(1,{p})")


def elementary_abelian_orbits(k):
    """C_3^k on 3k points, one 3-cycle per orbit.

    Intransitive, and its abelianization has order exactly ``3**(n/3)``.
    """
    _require(k >= 1, "Need at least one orbit")
    n = 3 * k
    generators = tuple(
        from_cycles(n, [(3 * i, 3 * i + 1, 3 * i + 2)]) for i in range(k)
    )
    return GroupSpec(n, generators, f"C3^{k}")
