"""Compatible pairs and their action on second cohomology.

A compatible pair ``(kappa, nu)`` has ``nu(m^f) = nu(m)^{kappa(f)}``; with
row vectors this reads ``rho(f) N = N rho(kappa(f))``, so ``nu`` is a module
isomorphism ``M -> M_kappa`` where ``M_kappa`` lets ``f`` act as ``kappa(f)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import budget
from .cohomology import Cocycle, reduce_with_tail, _module_matrices
from .errors import BudgetExceeded, InvariantViolation
from .ffmod import linalg as la
from .ffmod.meataxe import module_automorphisms, module_isomorphism
from .ffmod.module import ModuleMap
from .groupcore.homomorphism import GroupHomomorphism
from .groupcore.iso import automorphism_group
from .groupcore.perm import identity, inv, mul


@dataclass
class CompatiblePair:
    kappa: GroupHomomorphism
    nu: ModuleMap

    def is_compatible(self):
        """Check the defining condition on every generator of F."""
        M = self.nu.source
        p = M.p
        N = self.nu.matrix
        for f, A in zip(M.group.generators, M.matrices):
            B = M.matrix_of(self.kappa(f))
            if not np.array_equal(la.matmul(A, N, p), la.matmul(N, B, p)):
                return False
        return la.is_invertible(N, p)

    def compose(self, other):
        """Pair acting as ``self`` then ``other`` on cocycles."""
        k = GroupHomomorphism(self.kappa.source, self.kappa.target,
                              [self.kappa(other.kappa(f)) for f in self.kappa.source.generators])
        return CompatiblePair(k, ModuleMap(self.nu.source, self.nu.target,
                                           la.matmul(other.nu.matrix, self.nu.matrix,
                                                     self.nu.source.p)))


@dataclass
class CPGroup:
    group: object
    module: object
    generators: list
    projection_generators: list = field(default_factory=list)   # automorphisms as omega-perms
    aut: object = None

    def projection_order(self):
        """Order of the image of CP in Aut(F)."""
        from .groupcore.permgroup import PermGroup
        if self.aut is None:
            return 1
        gens = self.projection_generators or [identity(len(self.aut.omega))]
        return PermGroup(gens, len(self.aut.omega)).order()


def _twist(M, hom):
    return M.twist([hom(f) for f in M.group.generators])


def _module_orbit(A, M):
    """Orbit of the isomorphism type of ``M`` under ``Aut(F)`` and stabilizer generators.

    Points are ``(module, u)`` with the module isomorphic to ``M`` twisted by
    ``u^{-1}``; the right action is ``M . a = M`` twisted by ``a^{-1}``.
    """
    gens = list(A.perm_group.generators)
    e = identity(len(A.omega))
    points = [(M, e)]
    stab = []
    seen = set()
    idx = 0
    while idx < len(points):
        N, u = points[idx]
        idx += 1
        for a in gens:
            cand = _twist(N, A.to_homomorphism(inv(a)))
            ua = mul(u, a)
            for P, w in points:
                if module_isomorphism(P, cand) is not None:
                    s = mul(ua, inv(w))
                    if s != e and s not in seen:
                        seen.add(s)
                        stab.append(s)
                    break
            else:
                points.append((cand, ua))
                if len(points) > budget.get("aut_order"):
                    raise BudgetExceeded("aut_order", budget.get("aut_order"))
    return points, stab


def compatible_pairs(F, M):
    """Generators of the group of compatible pairs for ``(F, M)``.

    The image of CP in Aut(F) is the stabilizer of the isomorphism type of M
    under twisting; it is found by an orbit computation on twisted modules
    whose Schreier generators are each paired with an explicit module
    isomorphism.
    """
    A = automorphism_group(F)
    _, stab = _module_orbit(A, M)
    pairs = []
    for s in stab:
        kappa = A.to_homomorphism(s)
        nu = module_isomorphism(M, _twist(M, kappa))
        if nu is None:
            raise InvariantViolation("Schreier generator is not compatible")
        pairs.append(CompatiblePair(kappa, ModuleMap(M, M, nu.matrix)))
    one = GroupHomomorphism(F, F, list(F.generators))
    for nu in module_automorphisms(M):
        if not np.array_equal(nu.matrix, la.identity(M.dim)):
            pairs.append(CompatiblePair(one, nu))
    return CPGroup(F, M, pairs, stab, A)


def module_orbit_representatives(F, modules):
    """First module of each ``Aut(F)``-orbit of isomorphism types, in the given order.

    Extensions built from modules in one orbit are isomorphic, so only one
    representative per orbit is needed.
    """
    if not modules:
        return []
    A = automorphism_group(F)
    reps, orbits = [], []
    for M in modules:
        if any(P.dim == M.dim and module_isomorphism(P, M) is not None
               for orbit in orbits for P, _ in orbit):
            continue
        reps.append(M)
        orbits.append(_module_orbit(A, M)[0])
    return reps


def identity_pair(F, M):
    return CompatiblePair(GroupHomomorphism(F, F, list(F.generators)),
                          ModuleMap(M, M, la.identity(M.dim)))


def transport_tails(pair, tails, R, M):
    """Tail vector of the cocycle obtained by transporting ``tails`` through ``pair``."""
    mats = _module_matrices(R, M)
    a, p = M.dim, M.p
    images = [R.word_of(pair.kappa(letter.element)) for letter in R.letters]
    Ninv = la.inverse(pair.nu.matrix, p)
    out = np.zeros(len(R.rules) * a, dtype=np.int64)
    for j, (l, r) in enumerate(R.rules):
        wl = tuple(x for k in l for x in images[k])
        wr = tuple(x for k in r for x in images[k])
        nl, tl = reduce_with_tail(R, M, wl, tails, mats)
        nr, tr = reduce_with_tail(R, M, wr, tails, mats)
        if nl != nr:
            raise InvariantViolation("kappa is not an automorphism")
        out[j * a:(j + 1) * a] = la.matmul(((tl - tr) % p).reshape(1, -1), Ninv, p)[0]
    return out


def cp_action_on_h2(pair, z, H):
    """Image of the class of ``z`` under ``pair``, expressed in the complement basis."""
    R, M = H.rws, H.module
    t = transport_tails(pair, z.tails, R, M)
    return H.cocycle(H.coordinates(Cocycle(M, t, len(R.rules))))


def action_matrix(pair, H):
    """Matrix (rows = images of the complement basis) of the pair on H^2 coordinates."""
    rows = []
    for z in H.h2_complement_basis:
        t = transport_tails(pair, z.tails, H.rws, H.module)
        rows.append(H.coordinates(Cocycle(H.module, t, len(H.rws.rules))))
    return np.array(rows, dtype=np.int64).reshape(H.h, H.h)


def _encode(v, p):
    x = 0
    for c in v:
        x = x * p + int(c)
    return x


def _decode(x, p, h):
    v = [0] * h
    for i in range(h - 1, -1, -1):
        v[i] = x % p
        x //= p
    return v


def h2_permutations(CP, H):
    """Action of each CP generator as a permutation of the encoded H^2 elements."""
    p, h = H.module.p, H.h
    size = p ** h
    if size > budget.get("h2_elements"):
        raise BudgetExceeded("h2_elements", budget.get("h2_elements"), size)
    vecs = np.array([_decode(x, p, h) for x in range(size)], dtype=np.int64).reshape(size, h)
    weights = p ** np.arange(h - 1, -1, -1) if h else np.zeros(0, dtype=np.int64)
    perms = []
    for pair in CP.generators:
        A = action_matrix(pair, H)
        img = ((vecs @ A) % p) @ weights if h else np.zeros(1, dtype=np.int64)
        perms.append(tuple(int(x) for x in img))
    return perms


def orbit_representatives(CP, H, with_sizes=False):
    """One cocycle per CP-orbit on H^2 (smallest base-p encoding represents each orbit)."""
    p, h = H.module.p, H.h
    size = p ** h
    perms = h2_permutations(CP, H)
    seen = [False] * size
    reps, sizes = [], []
    for x in range(size):
        if seen[x]:
            continue
        seen[x] = True
        orbit = [x]
        for y in orbit:
            for g in perms:
                z = g[y]
                if not seen[z]:
                    seen[z] = True
                    orbit.append(z)
        reps.append(H.cocycle(_decode(x, p, h)))
        sizes.append(len(orbit))
    return (reps, sizes) if with_sizes else reps
