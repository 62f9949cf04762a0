"""Finitely generated lattices ``Z^n + sum Z g_j`` with cached rebasing.

Everything downstream works in *rebased* integer coordinates: a vector
``x`` of the lattice is stored as the integer vector ``c`` with
``x = B c`` where the columns of ``B`` form a basis of the lattice.  For
the standard lattice ``B`` is the identity and nothing changes.
"""

from fractions import Fraction
from math import lcm

from .errors import ZeroVector
from .linalg import (
    column_lattice_basis,
    det,
    identity,
    inverse,
    is_zero,
    matvec,
    primitive_int,
    rat,
)

__all__ = ["Lattice", "primitive"]


class Lattice:
    """The subgroup of ``Q^n`` generated by ``Z^n`` and ``extra_gens``."""

    def __init__(self, rank, extra_gens=()):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        self.rank = rank
        self.extra_gens = tuple(tuple(rat(x) for x in g) for g in extra_gens)
        for g in self.extra_gens:
            if len(g) != rank:
                raise ValueError("extra generator has the wrong length")
        if not self.extra_gens or all(x.denominator == 1 for g in self.extra_gens for x in g):
            self._B = [[Fraction(x) for x in row] for row in identity(rank)]
        else:
            d = lcm(*(x.denominator for g in self.extra_gens for x in g))
            gens = [tuple(d * int(i == j) for j in range(rank)) for i in range(rank)]
            gens += [tuple(int(d * x) for x in g) for g in self.extra_gens]
            basis = column_lattice_basis(gens, rank)
            self._B = [[Fraction(basis[j][i], d) for j in range(rank)] for i in range(rank)]
        self._Binv = inverse(self._B) if rank else []
        # [L : Z^n] = 1 / |det B|
        self.index = int(1 / abs(det(self._B))) if rank else 1

    @property
    def is_standard(self):
        return self.index == 1

    @property
    def basis(self):
        """Basis vectors of the lattice in ambient coordinates."""
        return [tuple(self._B[i][j] for i in range(self.rank)) for j in range(self.rank)]

    def __eq__(self, other):
        if not isinstance(other, Lattice) or other.rank != self.rank:
            return NotImplemented if not isinstance(other, Lattice) else False
        return all(other.contains(b) for b in self.basis) and all(self.contains(b) for b in other.basis)

    def __hash__(self):
        return hash((self.rank, self.index))

    def __repr__(self):
        if not self.extra_gens:
            return f"Lattice({self.rank})"
        return f"Lattice({self.rank}, extra_gens={[list(map(str, g)) for g in self.extra_gens]})"

    def rebase(self, v):
        """Rational coordinates of an ambient vector in the lattice basis."""
        return tuple(matvec(self._Binv, [rat(x) for x in v]))

    def contains(self, v):
        return all(x.denominator == 1 for x in self.rebase(v))

    def from_ambient(self, v):
        c = self.rebase(v)
        if any(x.denominator != 1 for x in c):
            raise ValueError(f"{tuple(map(str, v))} is not in the lattice")
        return tuple(int(x) for x in c)

    def to_ambient(self, c):
        out = matvec(self._B, c)
        if self.is_standard:
            return tuple(int(x) for x in out)
        return tuple(Fraction(x) for x in out)

    def covector_to_ambient(self, u):
        """Express a functional on rebased coordinates as one on ambient ones."""
        return tuple(sum((Fraction(u[k]) * self._Binv[k][j] for k in range(self.rank)), Fraction(0)) for j in range(self.rank))

    def covector_from_ambient(self, u):
        return tuple(sum((Fraction(u[k]) * self._B[k][j] for k in range(self.rank)), Fraction(0)) for j in range(self.rank))

    def primitive(self, v):
        """Primitive lattice vector on the ray through ``v`` (ambient coordinates)."""
        if is_zero([rat(x) for x in v]):
            raise ZeroVector("the zero vector has no primitive representative")
        return self.to_ambient(primitive_int(self.rebase(v)))


def primitive(v, lattice=None):
    """Primitive vector on the ray of ``v``; standard lattice unless given."""
    if lattice is None:
        return primitive_int(v)
    return lattice.primitive(v)
